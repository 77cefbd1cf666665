#pragma once

#include <string>

#include "sps/core.hpp"
#include "sps/streamgen.hpp"

// Flat key/section config format:
//
//   [physics]
//   x2pi = true          # frequency-valued keys are MHz, scaled by 2pi*1e6
//   omega_p = 1.0
//   ...
//   [schedule]
//   t_w = 370e-9         # durations always in seconds
//   ...
//   [optics]             # each key is a stage label; order is preserved
//   optics_transmission = 0.75
//   ...
//   [detectors]
//   b1 = 80
//   b2 = 100
//   efficiency = 0.67
//   jitter_sigma = 0
//   [beamsplitter]       # amplitude coefficients; phi defaults give alpha=pi
//   t1_H = 0.7085
//   ...
//   [source]             # optional; Monte Carlo source model
//   p_c = 0.019
//   tau_c = 65e-6
//   p_max = 0.35
//   p2 = 0
//   mode_overlap = 0.982
//   decay_const = 200e-9
//
// '#' starts a comment; keys are "name = value".

namespace sps {

struct Config {
    PhysicalParams physics;
    PulseSchedule schedule;
    OpticalPath optics;
    DetectorModel detectors;
    BeamSplitterCoeffs beamsplitter;
    SourceModel source;  // defaults unless a [source] section is present
};

Config load_config(const std::string& path);
Config parse_config(const std::string& text);

/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const Config& config);

}  // namespace sps
