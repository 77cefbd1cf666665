#include "sps/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace sps {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw ValidationError(msg);
}

}  // namespace

std::vector<std::string> PhysicalParams::validate() const {
    std::vector<std::string> warnings;
    require(gamma_ge >= 0.0, "physics.gamma_ge must be >= 0");
    require(gamma_gr >= 0.0, "physics.gamma_gr must be >= 0");
    require(gamma_cr >= 0.0, "physics.gamma_cr must be >= 0");
    require(gamma_gc >= 0.0, "physics.gamma_gc must be >= 0");
    require(od >= 0.0, "physics.od must be >= 0");
    require(n_collective >= 1.0, "physics.n_collective must be >= 1");
    if (!(gamma_ge > gamma_gr && gamma_gr > gamma_cr)) {
        warnings.push_back(
            "decay-rate hierarchy gamma_ge > gamma_gr > gamma_cr violated");
    }
    return warnings;
}

void PulseSchedule::validate() const {
    require(t_w > 0.0, "schedule.t_w must be > 0");
    require(t_s > 0.0, "schedule.t_s must be > 0");
    require(t_r > 0.0, "schedule.t_r must be > 0");
    require(t_p > 0.0, "schedule.t_p must be > 0");
    require(gate_window > 0.0, "schedule.gate_window must be > 0");
    require(t_w + t_s + t_r <= t_p * (1.0 + 1e-12),
            "schedule: t_w + t_s + t_r exceeds t_p");
    require(gate_window <= t_p, "schedule.gate_window exceeds t_p");
    require(duty_cycle > 0.0 && duty_cycle <= 1.0,
            "schedule.duty_cycle must be in (0, 1]");
}

void OpticalPath::validate() const {
    for (const auto& [label, eff] : stages) {
        require(eff >= 0.0 && eff <= 1.0,
                "optics." + label + " efficiency must be in [0, 1]");
    }
}

double path_efficiency(const OpticalPath& path) {
    double product = 1.0;
    for (const auto& [label, eff] : path.stages) product *= eff;
    return product;
}

void DetectorModel::validate() const {
    require(background_rate[0] >= 0.0, "detectors.b1 must be >= 0");
    require(background_rate[1] >= 0.0, "detectors.b2 must be >= 0");
    require(efficiency >= 0.0 && efficiency <= 1.0,
            "detectors.efficiency must be in [0, 1]");
    require(jitter_sigma >= 0.0, "detectors.jitter_sigma must be >= 0");
}

void BeamSplitterCoeffs::validate() const {
    auto check = [](const PortPol& pp, const char* name) {
        if (pp.t < 0.0 || pp.r < 0.0)
            throw ValidationError(std::string("beamsplitter.") + name +
                                  ": amplitudes must be >= 0");
        if (pp.t * pp.t + pp.r * pp.r > 1.0 + 1e-12)
            throw ValidationError(std::string("beamsplitter.") + name +
                                  ": t^2 + r^2 exceeds 1");
    };
    check(p1H, "port1_H");
    check(p1V, "port1_V");
    check(p2H, "port2_H");
    check(p2V, "port2_V");
}

void sort_stream(TimeTagStream& stream) {
    std::stable_sort(stream.begin(), stream.end(),
                     [](const TimeTag& a, const TimeTag& b) {
                         if (a.timestamp_ns != b.timestamp_ns)
                             return a.timestamp_ns < b.timestamp_ns;
                         return a.channel < b.channel;
                     });
}

void write_tags_csv(const std::string& path, const TimeTagStream& stream) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "channel,timestamp_ns\n";
    for (const TimeTag& tag : stream)
        out << int(tag.channel) << ',' << tag.timestamp_ns << '\n';
    if (!out) throw IoError("write failed: " + path);
}

TimeTagStream read_tags_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("channel,timestamp_ns", 0) != 0)
        throw ParseError(path + ": missing channel,timestamp_ns header");
    TimeTagStream stream;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ParseError(path + ": malformed record '" + line + "'");
        try {
            int ch = std::stoi(line.substr(0, comma));
            unsigned long long ts = std::stoull(line.substr(comma + 1));
            stream.push_back({static_cast<std::uint8_t>(ch),
                              static_cast<std::uint64_t>(ts)});
        } catch (const std::exception&) {
            throw ParseError(path + ": malformed record '" + line + "'");
        }
    }
    return stream;
}

namespace {
constexpr char kMagic[5] = {'T', 'T', 'A', 'G', '1'};
}

void write_tags_binary(const std::string& path, const TimeTagStream& stream) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out.write(kMagic, 5);
    for (const TimeTag& tag : stream) {
        out.put(static_cast<char>(tag.channel));
        std::uint64_t ts = tag.timestamp_ns;
        char buf[8];
        for (int i = 0; i < 8; ++i) buf[i] = char((ts >> (8 * i)) & 0xff);
        out.write(buf, 8);
    }
    if (!out) throw IoError("write failed: " + path);
}

TimeTagStream read_tags_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    char magic[5];
    in.read(magic, 5);
    if (in.gcount() != 5 || std::memcmp(magic, kMagic, 5) != 0)
        throw ParseError(path + ": bad magic, not a TTAG1 file");
    TimeTagStream stream;
    char rec[9];
    while (in.read(rec, 9)) {
        std::uint64_t ts = 0;
        for (int i = 0; i < 8; ++i)
            ts |= std::uint64_t(static_cast<unsigned char>(rec[1 + i]))
                  << (8 * i);
        stream.push_back({static_cast<std::uint8_t>(rec[0]), ts});
    }
    if (in.gcount() != 0)
        throw ParseError(path + ": truncated record at end of file");
    return stream;
}

TimeTagStream read_tags(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    char magic[5] = {0};
    in.read(magic, 5);
    in.close();
    if (std::memcmp(magic, kMagic, 5) == 0) return read_tags_binary(path);
    return read_tags_csv(path);
}

}  // namespace sps
