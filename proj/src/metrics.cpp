#include "sps/metrics.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "sps/core.hpp"

namespace sps {

void SourceMeasurement::validate() const {
    if (!(rep_rate > 0.0))
        throw ValidationError(label + ": rep_rate must be > 0");
    if (!(duty_cycle > 0.0) || duty_cycle > 1.0)
        throw ValidationError(label + ": duty_cycle must be in (0, 1]");
    if (p < 0.0 || p > 1.0)
        throw ValidationError(label + ": P must be in [0, 1]");
    if (v < 0.0 || v > 1.0)
        throw ValidationError(label + ": V must be in [0, 1]");
    if (g2 < 0.0) throw ValidationError(label + ": g2 must be >= 0");
}

double single_mode_efficiency(const SourceMeasurement& m) {
    m.validate();
    const double pg = m.p * m.g2;
    return m.p * m.v * (1.0 - 0.5 * pg * (1.0 + pg));
}

Decomposition decompose(const SourceMeasurement& m) {
    m.validate();
    // with S = eta + P1' and u = S + 2 P2: g2 u^2 - 2u + 2P = 0, small root
    double u;
    if (m.g2 < 1e-12) {
        u = m.p;
    } else {
        const double disc = 1.0 - 2.0 * m.g2 * m.p;
        if (disc < 0.0)
            throw NumericalError(m.label +
                                 ": no physical decomposition (P g2 too large)");
        u = (1.0 - std::sqrt(disc)) / m.g2;
    }
    const double singles = 2.0 * m.p - u;  // eta + P1'
    Decomposition d;
    d.eta = m.v * singles;
    d.p2 = m.p - singles;
    d.p1_prime = singles - d.eta;
    if (d.eta < -1e-12 || d.p1_prime < -1e-9 || d.p2 < -1e-9)
        throw NumericalError(m.label + ": decomposition left negative parts");
    return d;
}

double fidelity(double eta, double p) {
    if (!(p > 0.0)) throw ValidationError("fidelity: P must be > 0");
    return eta / p;
}

double brightness(double eta, double rep_rate, double duty_cycle) {
    return eta * rep_rate * duty_cycle;
}

std::vector<BenchmarkRow> benchmark_table(
    const std::vector<SourceMeasurement>& rows) {
    std::vector<BenchmarkRow> table;
    table.reserve(rows.size());
    for (const SourceMeasurement& m : rows) {
        BenchmarkRow row;
        row.metrics.label = m.label;
        try {
            row.metrics.eta = single_mode_efficiency(m);
            row.metrics.fidelity = fidelity(row.metrics.eta, m.p);
            row.metrics.brightness =
                brightness(row.metrics.eta, m.rep_rate, m.duty_cycle);
            const Decomposition d = decompose(m);
            row.metrics.p1_prime = d.p1_prime;
            row.metrics.p2 = d.p2;
            row.ok = true;
        } catch (const std::exception& err) {
            row.ok = false;
            row.error = err.what();
        }
        table.push_back(row);
    }
    return table;
}

std::vector<SourceMeasurement> read_measurements_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("label,R_Hz,duty,P,V,g2", 0) != 0)
        throw ParseError(path + ": missing label,R_Hz,duty,P,V,g2 header");
    std::vector<SourceMeasurement> rows;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        std::string field;
        SourceMeasurement m;
        try {
            std::getline(row, m.label, ',');
            std::getline(row, field, ',');
            m.rep_rate = std::stod(field);
            std::getline(row, field, ',');
            m.duty_cycle = std::stod(field);
            std::getline(row, field, ',');
            m.p = std::stod(field);
            std::getline(row, field, ',');
            m.v = std::stod(field);
            std::getline(row, field, ',');
            m.g2 = std::stod(field);
        } catch (const std::exception&) {
            throw ParseError(path + ": malformed record '" + line + "'");
        }
        rows.push_back(m);
    }
    return rows;
}

void write_metrics_csv(const std::string& path,
                       const std::vector<BenchmarkRow>& rows) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out.precision(10);
    out << "label,eta,F,brightness\n";
    for (const BenchmarkRow& row : rows) {
        if (!row.ok) {
            out << row.metrics.label << ",,,\n";
            continue;
        }
        out << row.metrics.label << ',' << row.metrics.eta << ','
            << row.metrics.fidelity << ',' << row.metrics.brightness << '\n';
    }
}

}  // namespace sps
