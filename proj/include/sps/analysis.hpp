#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sps/core.hpp"

// Time-tag analysis: software gating, coincidence histograms, background
// reconstruction and subtraction, integrated g2(0), HOM visibility and
// mode-overlap inversion.

namespace sps {

struct GateResult {
    TimeTagStream in_gate;
    TimeTagStream out_gate;
};

/// Partitions tags by (timestamp mod t_p) against the gate window anchored at
/// the retrieval start, closed-open interval [start, start + gate_window).
GateResult gate(const TimeTagStream& stream, const PulseSchedule& sched);

/// Per-channel in-gate rate profiles (folded modulo t_p, background baseline
/// removed) and constant background rates estimated from out-of-gate tags.
struct RateProfiles {
    double bin_width = 20e-9;
    std::vector<double> p1, p2;  // events/s within the gate, per bin
    double b1 = 0.0, b2 = 0.0;   // events/s
    double gate_start = 0.0;
    double gate_end = 0.0;
};

RateProfiles rate_profiles(const TimeTagStream& out_tags,
                           const TimeTagStream& in_tags,
                           const PulseSchedule& sched, double run_duration,
                           double bin_width = 20e-9);

struct CoincidenceHistogram {
    double bin_width = 0.0;  // s
    double tau_max = 0.0;    // s; bins span [-tau_max, tau_max], tau=0 centered
    std::vector<double> counts;

    std::size_t n_bins() const { return counts.size(); }
    double bin_center(std::size_t i) const;
    /// Sum of counts with |tau - center| <= half_width.
    double window_sum(double center, double half_width) const;
    void write_csv(const std::string& path) const;
};

/// All-pairs coincidences within +-tau_max via a sorted two-pointer sweep;
/// tau = t2 - t1.
CoincidenceHistogram coincidences(const TimeTagStream& tags1,
                                  const TimeTagStream& tags2,
                                  double bin_width, double tau_max);

/// Expected accidental-coincidence histogram
/// C_back(tau) = Int dt1 [P1 B2 + B1 P2 + B1 B2] with gate-window support,
/// extended periodically over the pulse train, on the same binning as data.
CoincidenceHistogram background_profile(const RateProfiles& profiles,
                                        const PulseSchedule& sched,
                                        std::uint64_t n_pulses,
                                        double bin_width, double tau_max);

struct ValueWithError {
    double value = 0.0;
    double error = 0.0;
};

struct G2Result {
    ValueWithError raw;
    ValueWithError back;
    ValueWithError subtracted;
    double zero_peak_counts = 0.0;
    double side_peak_mean = 0.0;
    std::vector<int> side_peaks;
};

/// Integrates the tau=0 peak over one gate width and normalizes by the mean
/// side-peak integral at tau = m t_p. g2_back uses the same (data) side-peak
/// normalization so that g2_raw ~ g2_back + g2_subtracted; the subtracted
/// value is normalized by the subtracted side peaks. Poisson errors.
G2Result g2_zero(const CoincidenceHistogram& data,
                 const CoincidenceHistogram& back, const PulseSchedule& sched,
                 const std::vector<int>& side_peaks);

/// Default side-peak set |m| in [10, 50], both signs.
std::vector<int> default_side_peaks();

/// HOM visibility from Eq.-level beamsplitter algebra: exact general form;
/// reduces to V = 2c / (T/R + R/T + 2 g2) for symmetric ports.
double visibility_forward(double overlap, double g2,
                          const BeamSplitterCoeffs& bs);

/// Inverts visibility_forward for the mode overlap (affine in c).
double mode_overlap(double v_measured, double g2,
                    const BeamSplitterCoeffs& bs);

/// V = 1 - (parallel peak integral) / (perpendicular peak integral) over one
/// gate width around tau = 0, with Poisson errors.
ValueWithError hom_visibility(const CoincidenceHistogram& c_par,
                              const CoincidenceHistogram& c_perp,
                              const PulseSchedule& sched);

}  // namespace sps
