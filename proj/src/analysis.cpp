#include "sps/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace sps {

namespace {

std::uint64_t to_ns(double seconds) {
    return static_cast<std::uint64_t>(std::llround(seconds * 1e9));
}

}  // namespace

GateResult gate(const TimeTagStream& stream, const PulseSchedule& sched) {
    sched.validate();
    const std::uint64_t period = to_ns(sched.t_p);
    const std::uint64_t start = to_ns(sched.gate_start());
    const std::uint64_t width = to_ns(sched.gate_window);
    if (start + width > period)
        throw ValidationError("gate: window extends past the pulse period");
    GateResult result;
    for (const TimeTag& tag : stream) {
        const std::uint64_t phase = tag.timestamp_ns % period;
        if (phase >= start && phase < start + width)
            result.in_gate.push_back(tag);
        else
            result.out_gate.push_back(tag);
    }
    return result;
}

RateProfiles rate_profiles(const TimeTagStream& out_tags,
                           const TimeTagStream& in_tags,
                           const PulseSchedule& sched, double run_duration,
                           double bin_width) {
    if (!(run_duration > 0.0))
        throw ValidationError("rate_profiles: run_duration must be > 0");
    if (!(bin_width > 0.0))
        throw ValidationError("rate_profiles: bin_width must be > 0");
    const double n_cycles = run_duration / sched.t_p;
    const double out_fraction = 1.0 - sched.gate_window / sched.t_p;
    if (out_fraction <= 0.0)
        throw ValidationError("rate_profiles: gate covers the whole period");

    RateProfiles profiles;
    profiles.bin_width = bin_width;
    profiles.gate_start = sched.gate_start();
    profiles.gate_end = sched.gate_start() + sched.gate_window;

    std::array<std::uint64_t, 2> out_counts{0, 0};
    for (const TimeTag& tag : out_tags) {
        if (tag.channel > 1)
            throw ValidationError("rate_profiles: channel out of range");
        ++out_counts[tag.channel];
    }
    profiles.b1 = double(out_counts[0]) / (run_duration * out_fraction);
    profiles.b2 = double(out_counts[1]) / (run_duration * out_fraction);

    const std::size_t n_bins = static_cast<std::size_t>(
        std::ceil(sched.gate_window / bin_width - 1e-9));
    profiles.p1.assign(n_bins, 0.0);
    profiles.p2.assign(n_bins, 0.0);
    const std::uint64_t period = to_ns(sched.t_p);
    const double start_ns = sched.gate_start() * 1e9;
    for (const TimeTag& tag : in_tags) {
        if (tag.channel > 1)
            throw ValidationError("rate_profiles: channel out of range");
        const double offset =
            (double(tag.timestamp_ns % period) - start_ns) * 1e-9;
        auto bin = static_cast<long>(std::floor(offset / bin_width));
        bin = std::clamp<long>(bin, 0, long(n_bins) - 1);
        (tag.channel == 0 ? profiles.p1 : profiles.p2)[std::size_t(bin)] += 1.0;
    }
    const double norm = 1.0 / (n_cycles * bin_width);
    for (double& v : profiles.p1) v = std::max(0.0, v * norm - profiles.b1);
    for (double& v : profiles.p2) v = std::max(0.0, v * norm - profiles.b2);
    return profiles;
}

double CoincidenceHistogram::bin_center(std::size_t i) const {
    const long mid = long(counts.size()) / 2;
    return double(long(i) - mid) * bin_width;
}

double CoincidenceHistogram::window_sum(double center, double half_width) const {
    double sum = 0.0;
    const double tol = half_width + 1e-12;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (std::abs(bin_center(i) - center) <= tol) sum += counts[i];
    }
    return sum;
}

void CoincidenceHistogram::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out.precision(12);
    out << "tau_s,counts\n";
    for (std::size_t i = 0; i < counts.size(); ++i)
        out << bin_center(i) << ',' << counts[i] << '\n';
}

CoincidenceHistogram coincidences(const TimeTagStream& tags1,
                                  const TimeTagStream& tags2, double bin_width,
                                  double tau_max) {
    if (!(bin_width > 0.0) || !(tau_max > 0.0))
        throw ValidationError("coincidences: bin_width and tau_max must be > 0");
    const long half_bins = std::lround(tau_max / bin_width);
    CoincidenceHistogram hist;
    hist.bin_width = bin_width;
    hist.tau_max = tau_max;
    hist.counts.assign(std::size_t(2 * half_bins + 1), 0.0);

    // both streams are sorted; sweep a window of tags2 around each tag1
    std::size_t lo = 0;
    const double tau_max_ns = tau_max * 1e9 + 0.5 * bin_width * 1e9;
    for (const TimeTag& t1 : tags1) {
        while (lo < tags2.size() &&
               double(tags2[lo].timestamp_ns) <
                   double(t1.timestamp_ns) - tau_max_ns)
            ++lo;
        for (std::size_t j = lo; j < tags2.size(); ++j) {
            const double tau_ns = double(tags2[j].timestamp_ns) -
                                  double(t1.timestamp_ns);
            if (tau_ns > tau_max_ns) break;
            const long bin = std::lround(tau_ns * 1e-9 / bin_width);
            if (bin < -half_bins || bin > half_bins) continue;
            hist.counts[std::size_t(bin + half_bins)] += 1.0;
        }
    }
    return hist;
}

CoincidenceHistogram background_profile(const RateProfiles& profiles,
                                        const PulseSchedule& sched,
                                        std::uint64_t n_pulses,
                                        double bin_width, double tau_max) {
    if (!(bin_width > 0.0) || !(tau_max > 0.0))
        throw ValidationError(
            "background_profile: bin_width and tau_max must be > 0");
    const double n_cycles = double(n_pulses);
    const double t_p = sched.t_p;
    const double g0 = sched.gate_start();
    const double gw = sched.gate_window;
    const double w = profiles.bin_width;

    // gated streams confine every tag to the gate, so each accidental term
    // carries the gate support on both legs and the histogram is a periodic
    // train of teeth, not flat
    auto wrap = [t_p](double x) {
        double r = std::fmod(x, t_p);
        return r < 0.0 ? r + t_p : r;
    };
    auto in_gate = [&](double x) {
        const double phase = wrap(x - g0);
        return phase >= 0.0 && phase < gw;
    };
    // length of gate intersect (gate - tau), per cycle
    auto overlap = [&](double tau) {
        const double d = wrap(tau);
        return std::max(0.0, gw - d) + std::max(0.0, gw - (t_p - d));
    };

    const long half_bins = std::lround(tau_max / bin_width);
    CoincidenceHistogram hist;
    hist.bin_width = bin_width;
    hist.tau_max = tau_max;
    hist.counts.assign(std::size_t(2 * half_bins + 1), 0.0);
    for (std::size_t i = 0; i < hist.n_bins(); ++i) {
        const double tau = hist.bin_center(i);
        double excess = 0.0;  // gated excess against in-gate darks
        for (std::size_t j = 0; j < profiles.p1.size(); ++j) {
            const double phi = g0 + (double(j) + 0.5) * w;
            if (in_gate(phi + tau)) excess += profiles.p1[j] * w * profiles.b2;
            if (in_gate(phi - tau)) excess += profiles.p2[j] * w * profiles.b1;
        }
        const double darks = profiles.b1 * profiles.b2 * overlap(tau);
        hist.counts[i] = bin_width * n_cycles * (excess + darks);
    }
    return hist;
}

std::vector<int> default_side_peaks() {
    std::vector<int> peaks;
    for (int m = 10; m <= 50; ++m) {
        peaks.push_back(-m);
        peaks.push_back(m);
    }
    return peaks;
}

G2Result g2_zero(const CoincidenceHistogram& data,
                 const CoincidenceHistogram& back, const PulseSchedule& sched,
                 const std::vector<int>& side_peaks) {
    if (side_peaks.empty())
        throw ValidationError("g2_zero: need at least one side peak");
    if (back.n_bins() != data.n_bins() ||
        std::abs(back.bin_width - data.bin_width) > 1e-15)
        throw ValidationError("g2_zero: data/background binning mismatch");
    const double half = 0.5 * sched.gate_window;
    for (int m : side_peaks) {
        if (m == 0) throw ValidationError("g2_zero: side peak m must be != 0");
        if (std::abs(m) * sched.t_p + half > data.tau_max + 1e-12)
            throw ValidationError(
                "g2_zero: histogram does not reach all side peaks");
    }

    G2Result result;
    result.side_peaks = side_peaks;
    result.zero_peak_counts = data.window_sum(0.0, half);
    const double back_zero = back.window_sum(0.0, half);

    double side_total = 0.0, side_back_total = 0.0;
    for (int m : side_peaks) {
        const double center = double(m) * sched.t_p;
        side_total += data.window_sum(center, half);
        side_back_total += back.window_sum(center, half);
    }
    const double n_side = double(side_peaks.size());
    result.side_peak_mean = side_total / n_side;
    if (result.side_peak_mean <= 0.0)
        throw NumericalError("g2_zero: empty side peaks");

    const double zero = result.zero_peak_counts;
    result.raw.value = zero / result.side_peak_mean;
    result.raw.error =
        result.raw.value *
        std::sqrt(1.0 / std::max(zero, 1.0) + 1.0 / side_total);

    // expected accidentals, normalized against the measured side peaks
    result.back.value = back_zero / result.side_peak_mean;
    result.back.error = result.back.value / std::sqrt(side_total);

    const double zero_sub = zero - back_zero;
    const double side_sub = (side_total - side_back_total) / n_side;
    if (side_sub <= 0.0)
        throw NumericalError(
            "g2_zero: side peaks vanish after background subtraction");
    result.subtracted.value = zero_sub / side_sub;
    result.subtracted.error =
        std::sqrt(std::max(zero, 1.0)) / side_sub +
        std::abs(result.subtracted.value) / std::sqrt(side_total);
    return result;
}

namespace {

// numerator/denominator of the lossy-splitter visibility, affine in the
// overlap c; "V" coefficients describe the rotated (non-interfering) input
struct VisibilityParts {
    double slope = 0.0;      // coefficient of c in the numerator
    double intercept = 0.0;  // numerator at c = 0
    double denom = 0.0;
};

VisibilityParts visibility_parts(double g2, const BeamSplitterCoeffs& bs) {
    const auto sq = [](double x) { return x * x; };
    const double t1h = bs.p1H.t, r1h = bs.p1H.r;
    const double t1v = bs.p1V.t, r1v = bs.p1V.r;
    const double t2h = bs.p2H.t, r2h = bs.p2H.r;
    const double T1H = sq(t1h), R1H = sq(r1h);
    const double T1V = sq(t1v), R1V = sq(r1v);
    const double T2H = sq(t2h), R2H = sq(r2h);
    VisibilityParts parts;
    parts.denom = T1V * T2H + R1V * R2H + (T1V * R1V + T2H * R2H) * g2;
    parts.intercept = T1V * T2H + R1V * R2H - T1H * T2H - R1H * R2H +
                      (T1V * R1V - T1H * R1H) * g2;
    parts.slope = -2.0 * std::cos(bs.alpha()) * t1h * r1h * t2h * r2h;
    return parts;
}

}  // namespace

double visibility_forward(double overlap, double g2,
                          const BeamSplitterCoeffs& bs) {
    if (overlap < 0.0 || overlap > 1.0)
        throw ValidationError("visibility_forward: overlap must be in [0, 1]");
    if (g2 < 0.0) throw ValidationError("visibility_forward: g2 must be >= 0");
    bs.validate();
    const VisibilityParts parts = visibility_parts(g2, bs);
    if (parts.denom <= 0.0)
        throw NumericalError("visibility: degenerate splitter coefficients");
    return (parts.intercept + parts.slope * overlap) / parts.denom;
}

double mode_overlap(double v_measured, double g2,
                    const BeamSplitterCoeffs& bs) {
    if (g2 < 0.0) throw ValidationError("mode_overlap: g2 must be >= 0");
    bs.validate();
    const VisibilityParts parts = visibility_parts(g2, bs);
    if (parts.denom <= 0.0 || std::abs(parts.slope) < 1e-300)
        throw NumericalError("mode_overlap: visibility independent of overlap");
    const double c = (v_measured * parts.denom - parts.intercept) / parts.slope;
    if (c < -1e-6 || c > 1.0 + 1e-6)
        throw NumericalError("mode_overlap: no physical overlap in [0, 1]");
    return std::clamp(c, 0.0, 1.0);
}

ValueWithError hom_visibility(const CoincidenceHistogram& c_par,
                              const CoincidenceHistogram& c_perp,
                              const PulseSchedule& sched) {
    const double half = 0.5 * sched.gate_window;
    const double n_par = c_par.window_sum(0.0, half);
    const double n_perp = c_perp.window_sum(0.0, half);
    if (n_perp <= 0.0)
        throw NumericalError("hom_visibility: empty perpendicular peak");
    ValueWithError v;
    v.value = 1.0 - n_par / n_perp;
    v.error = (n_par / n_perp) *
              std::sqrt(1.0 / std::max(n_par, 1.0) + 1.0 / n_perp);
    return v;
}

}  // namespace sps
