#include "sps/config.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

namespace sps {

namespace {

struct Section {
    // insertion-ordered key/value list plus lookup map
    std::vector<std::pair<std::string, std::string>> entries;

    const std::string* find(const std::string& key) const {
        for (const auto& [k, v] : entries)
            if (k == key) return &v;
        return nullptr;
    }
};

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos) return {};
    return s.substr(b, e - b + 1);
}

std::map<std::string, Section> parse_sections(const std::string& text) {
    std::map<std::string, Section> sections;
    std::istringstream in(text);
    std::string line, current;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError("config line " + std::to_string(lineno) +
                                 ": unterminated section header");
            current = trim(line.substr(1, line.size() - 2));
            sections[current];
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("config line " + std::to_string(lineno) +
                             ": expected key = value");
        if (current.empty())
            throw ParseError("config line " + std::to_string(lineno) +
                             ": key outside any section");
        sections[current].entries.emplace_back(trim(line.substr(0, eq)),
                                               trim(line.substr(eq + 1)));
    }
    return sections;
}

double to_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        double v = std::stod(value, &pos);
        if (pos != value.size()) throw ParseError("");
        return v;
    } catch (const std::exception&) {
        throw ParseError("config: key '" + key + "' has non-numeric value '" +
                         value + "'");
    }
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ParseError("config: key '" + key + "' has non-boolean value '" +
                     value + "'");
}

class SectionReader {
  public:
    SectionReader(const std::map<std::string, Section>& sections,
                  std::string name)
        : name_(std::move(name)) {
        auto it = sections.find(name_);
        section_ = (it != sections.end()) ? &it->second : nullptr;
    }

    bool has(const std::string& key) const {
        return section_ && section_->find(key);
    }

    double number(const std::string& key) const {
        const std::string* v = section_ ? section_->find(key) : nullptr;
        if (!v)
            throw ParseError("config: missing required key " + name_ + "." +
                             key);
        return to_double(name_ + "." + key, *v);
    }

    double number_or(const std::string& key, double fallback) const {
        const std::string* v = section_ ? section_->find(key) : nullptr;
        return v ? to_double(name_ + "." + key, *v) : fallback;
    }

    bool flag_or(const std::string& key, bool fallback) const {
        const std::string* v = section_ ? section_->find(key) : nullptr;
        return v ? to_bool(name_ + "." + key, *v) : fallback;
    }

    const Section* raw() const { return section_; }

  private:
    std::string name_;
    const Section* section_;
};

}  // namespace

Config parse_config(const std::string& text) {
    auto sections = parse_sections(text);
    Config cfg;

    SectionReader physics(sections, "physics");
    // With x2pi = true, frequency-valued keys are given in MHz and scaled by
    // 2*pi*1e6 to angular rad/s; otherwise they are rad/s already.
    const double scale =
        physics.flag_or("x2pi", false) ? 2.0 * std::numbers::pi * 1e6 : 1.0;
    auto freq = [&](const char* key, double fallback = 0.0) {
        return physics.number_or(key, fallback / scale) * scale;
    };
    cfg.physics.omega_p = freq("omega_p");
    cfg.physics.omega_c_write = freq("omega_c_write");
    cfg.physics.omega_c_ret = freq("omega_c_ret");
    cfg.physics.delta_p = freq("delta_p");
    cfg.physics.delta_2ph = freq("delta_2ph");
    cfg.physics.delta_ret = freq("delta_ret");
    cfg.physics.gamma_ge = freq("gamma_ge");
    cfg.physics.gamma_gr = freq("gamma_gr");
    cfg.physics.gamma_cr = freq("gamma_cr");
    cfg.physics.gamma_gc = freq("gamma_gc");
    cfg.physics.n_collective = physics.number_or("n_collective", 1.0);
    cfg.physics.od = physics.number_or("od", 0.0);

    SectionReader schedule(sections, "schedule");
    cfg.schedule.t_w = schedule.number("t_w");
    cfg.schedule.t_s = schedule.number("t_s");
    cfg.schedule.t_r = schedule.number("t_r");
    cfg.schedule.t_p = schedule.number("t_p");
    cfg.schedule.n_pulses =
        static_cast<std::uint64_t>(schedule.number_or("n_pulses", 0.0));
    cfg.schedule.duty_cycle = schedule.number_or("duty_cycle", 1.0);
    cfg.schedule.gate_window = schedule.number_or("gate_window", 1.4e-6);

    SectionReader optics(sections, "optics");
    if (const Section* raw = optics.raw()) {
        for (const auto& [label, value] : raw->entries)
            cfg.optics.stages.emplace_back(label,
                                           to_double("optics." + label, value));
    }

    SectionReader detectors(sections, "detectors");
    cfg.detectors.background_rate[0] = detectors.number_or("b1", 0.0);
    cfg.detectors.background_rate[1] = detectors.number_or("b2", 0.0);
    cfg.detectors.efficiency = detectors.number_or("efficiency", 1.0);
    cfg.detectors.jitter_sigma = detectors.number_or("jitter_sigma", 0.0);

    SectionReader bs(sections, "beamsplitter");
    const double ideal = std::sqrt(0.5);
    cfg.beamsplitter.p1H = {bs.number_or("t1_H", ideal),
                            bs.number_or("r1_H", ideal)};
    // V coefficients default to the H ones when not measured separately
    cfg.beamsplitter.p1V = {bs.number_or("t1_V", cfg.beamsplitter.p1H.t),
                            bs.number_or("r1_V", cfg.beamsplitter.p1H.r)};
    cfg.beamsplitter.p2H = {bs.number_or("t2_H", ideal),
                            bs.number_or("r2_H", ideal)};
    cfg.beamsplitter.p2V = {bs.number_or("t2_V", cfg.beamsplitter.p2H.t),
                            bs.number_or("r2_V", cfg.beamsplitter.p2H.r)};
    // defaults keep alpha = phi1 + phi2 = pi
    cfg.beamsplitter.phi1 = bs.number_or("phi1", std::numbers::pi / 2.0);
    cfg.beamsplitter.phi2 = bs.number_or("phi2", std::numbers::pi / 2.0);

    SectionReader source(sections, "source");
    cfg.source.cp.p_c = source.number_or("p_c", 0.0);
    cfg.source.cp.tau_c = source.number_or("tau_c", 1.0);
    cfg.source.cp.p_max = source.number_or("p_max", 1.0);
    cfg.source.cp.t_p = cfg.schedule.t_p;  // mirrors the schedule
    cfg.source.p2 = source.number_or("p2", 0.0);
    cfg.source.mode_overlap = source.number_or("mode_overlap", 1.0);
    cfg.source.envelope.rise_time = source.number_or("rise_time", 0.0);
    cfg.source.envelope.decay_const = source.number_or("decay_const", 200e-9);
    cfg.source.envelope.truncation =
        source.number_or("truncation", cfg.schedule.gate_window);

    for (const std::string& warning : cfg.physics.validate())
        std::cerr << "config warning: " << warning << "\n";
    cfg.schedule.validate();
    cfg.optics.validate();
    cfg.detectors.validate();
    cfg.beamsplitter.validate();
    cfg.source.validate();
    return cfg;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const Config& cfg) {
    std::ostringstream out;
    out.precision(17);
    out << "[physics]\n";
    out << "omega_p = " << cfg.physics.omega_p << "\n";
    out << "omega_c_write = " << cfg.physics.omega_c_write << "\n";
    out << "omega_c_ret = " << cfg.physics.omega_c_ret << "\n";
    out << "delta_p = " << cfg.physics.delta_p << "\n";
    out << "delta_2ph = " << cfg.physics.delta_2ph << "\n";
    out << "delta_ret = " << cfg.physics.delta_ret << "\n";
    out << "gamma_ge = " << cfg.physics.gamma_ge << "\n";
    out << "gamma_gr = " << cfg.physics.gamma_gr << "\n";
    out << "gamma_cr = " << cfg.physics.gamma_cr << "\n";
    out << "gamma_gc = " << cfg.physics.gamma_gc << "\n";
    out << "n_collective = " << cfg.physics.n_collective << "\n";
    out << "od = " << cfg.physics.od << "\n";
    out << "[schedule]\n";
    out << "t_w = " << cfg.schedule.t_w << "\n";
    out << "t_s = " << cfg.schedule.t_s << "\n";
    out << "t_r = " << cfg.schedule.t_r << "\n";
    out << "t_p = " << cfg.schedule.t_p << "\n";
    out << "n_pulses = " << cfg.schedule.n_pulses << "\n";
    out << "duty_cycle = " << cfg.schedule.duty_cycle << "\n";
    out << "gate_window = " << cfg.schedule.gate_window << "\n";
    out << "[optics]\n";
    for (const auto& [label, eff] : cfg.optics.stages)
        out << label << " = " << eff << "\n";
    out << "[detectors]\n";
    out << "b1 = " << cfg.detectors.background_rate[0] << "\n";
    out << "b2 = " << cfg.detectors.background_rate[1] << "\n";
    out << "efficiency = " << cfg.detectors.efficiency << "\n";
    out << "jitter_sigma = " << cfg.detectors.jitter_sigma << "\n";
    out << "[beamsplitter]\n";
    out << "t1_H = " << cfg.beamsplitter.p1H.t << "\n";
    out << "r1_H = " << cfg.beamsplitter.p1H.r << "\n";
    out << "t1_V = " << cfg.beamsplitter.p1V.t << "\n";
    out << "r1_V = " << cfg.beamsplitter.p1V.r << "\n";
    out << "t2_H = " << cfg.beamsplitter.p2H.t << "\n";
    out << "r2_H = " << cfg.beamsplitter.p2H.r << "\n";
    out << "t2_V = " << cfg.beamsplitter.p2V.t << "\n";
    out << "r2_V = " << cfg.beamsplitter.p2V.r << "\n";
    out << "phi1 = " << cfg.beamsplitter.phi1 << "\n";
    out << "phi2 = " << cfg.beamsplitter.phi2 << "\n";
    out << "[source]\n";
    out << "p_c = " << cfg.source.cp.p_c << "\n";
    out << "tau_c = " << cfg.source.cp.tau_c << "\n";
    out << "p_max = " << cfg.source.cp.p_max << "\n";
    out << "p2 = " << cfg.source.p2 << "\n";
    out << "mode_overlap = " << cfg.source.mode_overlap << "\n";
    out << "rise_time = " << cfg.source.envelope.rise_time << "\n";
    out << "decay_const = " << cfg.source.envelope.decay_const << "\n";
    out << "truncation = " << cfg.source.envelope.truncation << "\n";
    return out.str();
}

}  // namespace sps
