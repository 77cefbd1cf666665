#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// Core domain types shared by all modules. Frequencies and decay rates are
// stored as angular frequencies (rad/s) throughout; config files may use the
// "MHz x 2pi" convention (see config.hpp). Timestamps are integer nanoseconds.

namespace sps {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Atomic and optical parameters of the super-atom model.
struct PhysicalParams {
    double omega_p = 0.0;        // probe Rabi frequency, write stage
    double omega_c_write = 0.0;  // control Rabi frequency, write stage
    double omega_c_ret = 0.0;    // control Rabi frequency, retrieval stage
    double delta_p = 0.0;        // intermediate detuning, write
    double delta_2ph = 0.0;      // two-photon detuning
    double delta_ret = 0.0;      // intermediate detuning, retrieval
    double gamma_ge = 0.0;
    double gamma_gr = 0.0;
    double gamma_cr = 0.0;
    double gamma_gc = 0.0;
    double n_collective = 1.0;   // N; the collective enhancement is sqrt(N)
    double od = 0.0;             // optical depth

    // Throws ValidationError on hard violations; returns warnings for the
    // soft decay-rate hierarchy check.
    std::vector<std::string> validate() const;
};

/// Write / store / retrieve timing of one pulse cycle.
struct PulseSchedule {
    double t_w = 0.0;
    double t_s = 0.0;
    double t_r = 0.0;
    double t_p = 0.0;
    std::uint64_t n_pulses = 0;
    double duty_cycle = 1.0;
    double gate_window = 0.0;

    double rep_rate() const { return 1.0 / t_p; }
    /// Start of the retrieval (and of the software gate) within a cycle.
    double gate_start() const { return t_w + t_s; }

    void validate() const;
};

/// Ordered chain of (label, transmission efficiency) stages.
struct OpticalPath {
    std::vector<std::pair<std::string, double>> stages;

    void validate() const;
};

/// Product of the stage efficiencies (1.0 for an empty path).
double path_efficiency(const OpticalPath& path);

struct DetectorModel {
    std::array<double, 2> background_rate{0.0, 0.0};  // events/s per channel
    double efficiency = 1.0;
    double jitter_sigma = 0.0;  // s, Gaussian timing jitter (0 = none)

    void validate() const;
};

/// Amplitude transmission/reflection per input port and polarization.
/// Lossy splitters (t^2 + r^2 < 1) are allowed. phi1 + phi2 defaults to pi.
struct BeamSplitterCoeffs {
    struct PortPol {
        double t = 0.0;
        double r = 0.0;
    };
    PortPol p1H, p1V, p2H, p2V;
    double phi1 = 1.5707963267948966;
    double phi2 = 1.5707963267948966;

    double alpha() const { return phi1 + phi2; }
    void validate() const;
};

struct TimeTag {
    std::uint8_t channel = 0;
    std::uint64_t timestamp_ns = 0;

    friend bool operator==(const TimeTag&, const TimeTag&) = default;
};

using TimeTagStream = std::vector<TimeTag>;

/// Sorts by timestamp, ties broken by channel.
void sort_stream(TimeTagStream& stream);

// Time-tag file I/O. CSV format: header "channel,timestamp_ns", one record
// per line. Binary format: magic "TTAG1" followed by packed little-endian
// records (u8 channel, u64 timestamp_ns).
void write_tags_csv(const std::string& path, const TimeTagStream& stream);
TimeTagStream read_tags_csv(const std::string& path);
void write_tags_binary(const std::string& path, const TimeTagStream& stream);
TimeTagStream read_tags_binary(const std::string& path);

/// Reads either format, sniffing the TTAG1 magic.
TimeTagStream read_tags(const std::string& path);

}  // namespace sps
