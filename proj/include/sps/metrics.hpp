#pragma once

#include <string>
#include <vector>

// Single-photon source figures of merit: single-mode efficiency, fidelity,
// brightness, and the decomposition of (P, V, g2) into (eta, P1', P2).

namespace sps {

struct SourceMeasurement {
    std::string label;
    double rep_rate = 0.0;  // Hz
    double duty_cycle = 1.0;
    double p = 0.0;         // overall emission probability, 1 - P0
    double v = 0.0;         // HOM visibility (multi-photon compensated)
    double g2 = 0.0;

    void validate() const;
};

struct SourceMetrics {
    std::string label;
    double eta = 0.0;
    double fidelity = 0.0;
    double brightness = 0.0;  // 1/s
    double p1_prime = 0.0;
    double p2 = 0.0;
};

/// Second-order series: eta = P V (1 - P g2 (1 + P g2) / 2).
double single_mode_efficiency(const SourceMeasurement& m);

struct Decomposition {
    double eta = 0.0;
    double p1_prime = 0.0;
    double p2 = 0.0;
};

/// Exact solution of P = eta + P1' + P2, V = eta/(eta+P1'),
/// g2 = 2 P2 / (eta + P1' + 2 P2)^2; throws if no physical root.
Decomposition decompose(const SourceMeasurement& m);

double fidelity(double eta, double p);
double brightness(double eta, double rep_rate, double duty_cycle);

struct BenchmarkRow {
    SourceMetrics metrics;
    bool ok = false;
    std::string error;
};

/// Per-row metrics; rows with invalid inputs carry the error instead of
/// aborting the table. Uses the series form of eta (matching the published
/// tables); the exact decomposition is reported alongside via p1_prime/p2.
std::vector<BenchmarkRow> benchmark_table(
    const std::vector<SourceMeasurement>& rows);

/// CSV I/O: input header label,R_Hz,duty,P,V,g2 (extra columns ignored);
/// output header label,eta,F,brightness.
std::vector<SourceMeasurement> read_measurements_csv(const std::string& path);
void write_metrics_csv(const std::string& path,
                       const std::vector<BenchmarkRow>& rows);

}  // namespace sps
