#include "sps/streamgen.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "sps/numerics.hpp"

namespace sps {

namespace {

// fixed stream ids so toggling one subsystem does not shift the others
enum StreamId : std::uint64_t {
    kEmissionStream = 1,
    kLossStream = 2,
    kRoutingStream = 3,
    kDarksStream = 4,
    kTrainStream = 5,
};

using Rng = std::mt19937_64;

Rng make_rng(std::uint64_t master_seed, std::uint64_t stream_id) {
    return Rng(derive_seed(master_seed, stream_id));
}

double uniform(Rng& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace

double Envelope::sample(double u) const {
    const double span = truncation - rise_time;
    if (span <= 0.0 || decay_const <= 0.0) return rise_time;
    // truncated exponential on [0, span]
    const double ceiling = 1.0 - std::exp(-span / decay_const);
    return rise_time - decay_const * std::log(1.0 - u * ceiling);
}

void SourceModel::validate() const {
    cp.validate();
    if (p2 < 0.0 || p2 > 1.0)
        throw ValidationError("source: p2 must be in [0, 1]");
    if (mode_overlap < 0.0 || mode_overlap > 1.0)
        throw ValidationError("source: mode_overlap must be in [0, 1]");
    if (envelope.truncation <= envelope.rise_time)
        throw ValidationError("source: envelope truncation before rise");
}

void SimConfig::validate() const {
    schedule.validate();
    path.validate();
    detectors.validate();
    beamsplitter.validate();
    if (topology == Topology::HOM) {
        const double ratio = hom_delay / schedule.t_p;
        const double nearest = std::round(ratio);
        if (nearest < 1.0 ||
            std::abs(hom_delay - nearest * schedule.t_p) > 1e-9)
            throw ValidationError(
                "sim: hom_delay must be a positive integer multiple of t_p "
                "within 1 ns");
    }
}

std::vector<EmissionRecord> simulate_emissions(const SourceModel& src,
                                               const PulseSchedule& sched,
                                               std::uint64_t n_pulses,
                                               std::uint64_t seed) {
    src.validate();
    Rng rng = make_rng(seed, kEmissionStream);
    const double survival = src.cp.survival();
    std::vector<EmissionRecord> records;
    records.reserve(n_pulses);
    bool present = false;
    for (std::uint64_t n = 1; n <= n_pulses; ++n) {
        // contaminant chain: survives if already present, else may be created
        present = present ? (uniform(rng) < survival)
                          : (uniform(rng) < src.cp.p_c);
        EmissionRecord rec;
        rec.pulse_index = n;
        rec.contaminant_present = present;
        if (!present && uniform(rng) < src.cp.p_max) {
            rec.photon_count = 1;
            const double start =
                double(n - 1) * sched.t_p + sched.gate_start();
            rec.times[0] = start + src.envelope.sample(uniform(rng));
            if (uniform(rng) < src.p2) {
                rec.photon_count = 2;
                rec.times[1] = start + src.envelope.sample(uniform(rng));
            }
        }
        if (rec.photon_count > 0) records.push_back(rec);
    }
    return records;
}

std::vector<EmissionRecord> apply_losses(std::vector<EmissionRecord> emissions,
                                         const OpticalPath& path,
                                         double det_eff, std::uint64_t seed) {
    if (det_eff < 0.0 || det_eff > 1.0)
        throw ValidationError(
            "apply_losses: detector efficiency must be in [0, 1]");
    path.validate();
    const double survival = path_efficiency(path) * det_eff;
    Rng rng = make_rng(seed, kLossStream);
    std::vector<EmissionRecord> kept;
    kept.reserve(emissions.size());
    for (EmissionRecord rec : emissions) {
        int surviving = 0;
        std::array<double, 2> times{0.0, 0.0};
        for (int ph = 0; ph < rec.photon_count; ++ph) {
            if (uniform(rng) < survival) times[surviving++] = rec.times[ph];
        }
        rec.photon_count = surviving;
        rec.times = times;
        if (surviving > 0) kept.push_back(rec);
    }
    return kept;
}

HomOutcomeProbs hom_pair_probs(const BeamSplitterCoeffs& bs, double overlap,
                               bool perpendicular) {
    const BeamSplitterCoeffs::PortPol& port1 =
        perpendicular ? bs.p1V : bs.p1H;
    const BeamSplitterCoeffs::PortPol& port2 = bs.p2H;
    const double c = perpendicular ? 0.0 : overlap;
    const double t1 = port1.t, r1 = port1.r, t2 = port2.t, r2 = port2.r;
    const double T1 = t1 * t1, R1 = r1 * r1, T2 = t2 * t2, R2 = r2 * r2;
    const double L1 = std::max(0.0, 1.0 - T1 - R1);
    const double L2 = std::max(0.0, 1.0 - T2 - R2);

    HomOutcomeProbs p;
    p.coincidence = T1 * T2 + R1 * R2 +
                    2.0 * c * t1 * r1 * t2 * r2 * std::cos(bs.alpha());
    p.coincidence = std::max(0.0, p.coincidence);
    p.both_ch1 = (1.0 + c) * T1 * R2;
    p.both_ch2 = (1.0 + c) * R1 * T2;
    p.only_1_ch1 = T1 * L2;
    p.only_1_ch2 = R1 * L2;
    p.only_2_ch1 = R2 * L1;
    p.only_2_ch2 = T2 * L1;
    p.none = L1 * L2;
    const double total = p.coincidence + p.both_ch1 + p.both_ch2 +
                         p.only_1_ch1 + p.only_1_ch2 + p.only_2_ch1 +
                         p.only_2_ch2 + p.none;
    // interference redistributes a small amount of probability for lossy
    // asymmetric ports; renormalize the table
    p.coincidence /= total;
    p.both_ch1 /= total;
    p.both_ch2 /= total;
    p.only_1_ch1 /= total;
    p.only_1_ch2 /= total;
    p.only_2_ch1 /= total;
    p.only_2_ch2 /= total;
    p.none /= total;
    return p;
}

namespace {

void emit_tag(TimeTagStream& stream, int channel, double time_s, Rng& rng,
              double jitter_sigma) {
    if (jitter_sigma > 0.0)
        time_s += std::normal_distribution<double>(0.0, jitter_sigma)(rng);
    if (time_s < 0.0) time_s = 0.0;
    stream.push_back({static_cast<std::uint8_t>(channel),
                      static_cast<std::uint64_t>(std::llround(time_s * 1e9))});
}

// single photon through one input port: channel 0 w.p. T, 1 w.p. R, else lost
void route_single(TimeTagStream& stream, double time_s,
                  const BeamSplitterCoeffs::PortPol& port, Rng& rng,
                  double jitter_sigma) {
    const double T = port.t * port.t, R = port.r * port.r;
    const double u = uniform(rng);
    if (u < T)
        emit_tag(stream, 0, time_s, rng, jitter_sigma);
    else if (u < T + R)
        emit_tag(stream, 1, time_s, rng, jitter_sigma);
}

}  // namespace

TimeTagStream route_and_detect(const std::vector<EmissionRecord>& emissions,
                               const SimConfig& cfg, const SourceModel& src) {
    cfg.validate();
    Rng rng = make_rng(cfg.seed, kRoutingStream);
    const double jitter = cfg.detectors.jitter_sigma;
    TimeTagStream stream;

    if (cfg.topology == Topology::HBT) {
        for (const EmissionRecord& rec : emissions)
            for (int ph = 0; ph < rec.photon_count; ++ph)
                route_single(stream, rec.times[ph], cfg.beamsplitter.p1H, rng,
                             jitter);
    } else {
        const std::uint64_t lag = static_cast<std::uint64_t>(
            std::llround(cfg.hom_delay / cfg.schedule.t_p));
        const HomOutcomeProbs pair_probs = hom_pair_probs(
            cfg.beamsplitter, src.mode_overlap, cfg.hom_perpendicular);
        const BeamSplitterCoeffs::PortPol& port1 =
            cfg.hom_perpendicular ? cfg.beamsplitter.p1V : cfg.beamsplitter.p1H;
        const BeamSplitterCoeffs::PortPol& port2 = cfg.beamsplitter.p2H;

        // pulse index -> position in emissions (sorted by construction)
        std::vector<const EmissionRecord*> by_pulse;
        by_pulse.reserve(emissions.size());
        for (const EmissionRecord& rec : emissions) by_pulse.push_back(&rec);
        std::vector<bool> consumed(emissions.size(), false);
        auto find_pulse = [&](std::uint64_t pulse) -> long {
            auto it = std::lower_bound(
                by_pulse.begin(), by_pulse.end(), pulse,
                [](const EmissionRecord* r, std::uint64_t p) {
                    return r->pulse_index < p;
                });
            if (it == by_pulse.end() || (*it)->pulse_index != pulse) return -1;
            return long(it - by_pulse.begin());
        };

        for (std::size_t i = 0; i < emissions.size(); ++i) {
            if (consumed[i]) continue;
            const EmissionRecord& early = emissions[i];
            consumed[i] = true;
            const long partner_pos = find_pulse(early.pulse_index + lag);
            const EmissionRecord* partner =
                (partner_pos >= 0 && !consumed[partner_pos])
                    ? by_pulse[partner_pos]
                    : nullptr;
            if (partner && early.photon_count == 1 &&
                partner->photon_count == 1) {
                consumed[partner_pos] = true;
                const double t_delayed = early.times[0] + cfg.hom_delay;
                const double t_direct = partner->times[0];
                const double u = uniform(rng);
                double acc = pair_probs.coincidence;
                if (u < acc) {
                    emit_tag(stream, 0, t_delayed, rng, jitter);
                    emit_tag(stream, 1, t_direct, rng, jitter);
                } else if (u < (acc += pair_probs.both_ch1)) {
                    emit_tag(stream, 0, t_delayed, rng, jitter);
                    emit_tag(stream, 0, t_direct, rng, jitter);
                } else if (u < (acc += pair_probs.both_ch2)) {
                    emit_tag(stream, 1, t_delayed, rng, jitter);
                    emit_tag(stream, 1, t_direct, rng, jitter);
                } else if (u < (acc += pair_probs.only_1_ch1)) {
                    emit_tag(stream, 0, t_delayed, rng, jitter);
                } else if (u < (acc += pair_probs.only_1_ch2)) {
                    emit_tag(stream, 1, t_delayed, rng, jitter);
                } else if (u < (acc += pair_probs.only_2_ch1)) {
                    emit_tag(stream, 0, t_direct, rng, jitter);
                } else if (u < (acc += pair_probs.only_2_ch2)) {
                    emit_tag(stream, 1, t_direct, rng, jitter);
                }
                // else: both lost
            } else {
                // unpaired (or multi-photon) pulse: each photon picks an arm
                // and is routed as a lone photon
                for (int ph = 0; ph < early.photon_count; ++ph) {
                    const bool delay_arm = uniform(rng) < 0.5;
                    const double t =
                        early.times[ph] + (delay_arm ? cfg.hom_delay : 0.0);
                    route_single(stream, t, delay_arm ? port1 : port2, rng,
                                 jitter);
                }
            }
        }
    }

    // homogeneous Poisson dark counts per channel over the full run
    Rng darks = make_rng(cfg.seed, kDarksStream);
    const double run_duration = double(cfg.n_pulses) * cfg.schedule.t_p;
    for (int channel = 0; channel < 2; ++channel) {
        const double rate = cfg.detectors.background_rate[channel];
        if (rate <= 0.0) continue;
        std::exponential_distribution<double> gap(rate);
        double t = gap(darks);
        while (t < run_duration) {
            emit_tag(stream, channel, t, darks, 0.0);
            t += gap(darks);
        }
    }

    sort_stream(stream);
    return stream;
}

TimeTagStream simulate_stream(const SourceModel& src, const SimConfig& cfg) {
    auto emissions = simulate_emissions(src, cfg.schedule, cfg.n_pulses,
                                        cfg.seed);
    emissions = apply_losses(std::move(emissions), cfg.path,
                             cfg.detectors.efficiency, cfg.seed);
    return route_and_detect(emissions, cfg, src);
}

std::vector<FitPoint> PulseTrainStats::to_fit_points() const {
    std::vector<FitPoint> points;
    points.reserve(successes.size());
    for (std::size_t i = 0; i < successes.size(); ++i) {
        const double p = double(successes[i]) / double(n_trains);
        FitPoint point;
        point.pulse_index = double(i + 1);
        point.success_rate = p;
        point.stderr_ =
            std::sqrt(std::max(p * (1.0 - p), 1e-12) / double(n_trains));
        points.push_back(point);
    }
    return points;
}

PulseTrainStats simulate_pulse_trains(const SourceModel& src,
                                      const PulseSchedule& sched,
                                      std::uint64_t n_trains,
                                      std::uint64_t train_length,
                                      std::uint64_t seed) {
    src.validate();
    sched.validate();
    Rng rng = make_rng(seed, kTrainStream);
    PulseTrainStats stats;
    stats.successes.assign(train_length, 0);
    stats.n_trains = n_trains;
    const double survival = src.cp.survival();
    for (std::uint64_t train = 0; train < n_trains; ++train) {
        bool present = false;
        for (std::uint64_t n = 0; n < train_length; ++n) {
            present = present ? (uniform(rng) < survival)
                              : (uniform(rng) < src.cp.p_c);
            if (!present && uniform(rng) < src.cp.p_max) ++stats.successes[n];
        }
    }
    return stats;
}

}  // namespace sps
