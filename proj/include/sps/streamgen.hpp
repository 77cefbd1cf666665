#pragma once

#include <cstdint>
#include <vector>

#include "sps/contaminant.hpp"
#include "sps/core.hpp"

// Monte Carlo generator of time-tagged detection streams: contaminant-driven
// source emission, rare two-photon events, loss thinning, HBT/HOM routing and
// dark counts. Deterministic for a fixed seed; independent RNG streams per
// subsystem (emission, loss, routing, darks).

namespace sps {

/// Photon temporal envelope: zero rise then exponential decay, truncated at
/// the gate window so it integrates to one over the gate.
struct Envelope {
    double rise_time = 0.0;
    double decay_const = 200e-9;
    double truncation = 1.4e-6;

    double sample(double u) const;  // inverse CDF, u in [0,1)
};

struct SourceModel {
    ContaminantParams cp;
    double p2 = 0.0;  // two-photon emission probability, conditional on emission
    Envelope envelope;
    double mode_overlap = 1.0;  // c

    void validate() const;
};

enum class Topology { HBT, HOM };

struct SimConfig {
    std::uint64_t seed = 0;
    std::uint64_t n_pulses = 0;
    Topology topology = Topology::HBT;
    double hom_delay = 4.92e-6;  // must be an integer multiple of t_p
    bool hom_perpendicular = false;  // HWP rotated: overlap forced to zero
    PulseSchedule schedule;
    OpticalPath path;
    DetectorModel detectors;
    BeamSplitterCoeffs beamsplitter;

    void validate() const;
};

struct EmissionRecord {
    std::uint64_t pulse_index = 0;  // 1-based
    int photon_count = 0;           // 0, 1 or 2
    std::array<double, 2> times{0.0, 0.0};  // s since run start
    bool contaminant_present = false;
};

/// Contaminant chain + photon emission per pulse. Emission times are drawn
/// from the envelope, offset by pulse start + t_w + t_s.
std::vector<EmissionRecord> simulate_emissions(const SourceModel& src,
                                               const PulseSchedule& sched,
                                               std::uint64_t n_pulses,
                                               std::uint64_t seed);

/// Independent Bernoulli thinning with probability path_efficiency * det_eff.
std::vector<EmissionRecord> apply_losses(std::vector<EmissionRecord> emissions,
                                         const OpticalPath& path,
                                         double det_eff, std::uint64_t seed);

/// Routes surviving photons through the configured interferometer and merges
/// per-channel dark counts; output sorted by timestamp.
TimeTagStream route_and_detect(const std::vector<EmissionRecord>& emissions,
                               const SimConfig& cfg, const SourceModel& src);

/// Full pipeline: emissions -> losses -> routing -> tags.
TimeTagStream simulate_stream(const SourceModel& src, const SimConfig& cfg);

/// Per-index success counts over repeated pulse trains (the chain is reset at
/// each train start); used for contaminant-parameter fitting.
struct PulseTrainStats {
    std::vector<std::uint64_t> successes;  // index n-1 -> count
    std::uint64_t n_trains = 0;

    std::vector<FitPoint> to_fit_points() const;
};

PulseTrainStats simulate_pulse_trains(const SourceModel& src,
                                      const PulseSchedule& sched,
                                      std::uint64_t n_trains,
                                      std::uint64_t train_length,
                                      std::uint64_t seed);

/// HOM pair-outcome probability table for two single photons (port 1 via the
/// delay arm, port 2 direct), normalized. Exposed for tests.
struct HomOutcomeProbs {
    double coincidence = 0.0;  // one photon at each output
    double both_ch1 = 0.0;
    double both_ch2 = 0.0;
    double only_1_ch1 = 0.0, only_1_ch2 = 0.0;  // port-1 photon alone
    double only_2_ch1 = 0.0, only_2_ch2 = 0.0;  // port-2 photon alone
    double none = 0.0;
};

HomOutcomeProbs hom_pair_probs(const BeamSplitterCoeffs& bs, double overlap,
                               bool perpendicular);

}  // namespace sps
