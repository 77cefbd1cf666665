// Command-line driver: theory predictions, Monte Carlo tag-stream
// generation, tag-stream analysis, contaminant fitting, source metrics and
// bundled figure-data reproduction. Every run writes a manifest.json.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sps/analysis.hpp"
#include "sps/config.hpp"
#include "sps/contaminant.hpp"
#include "sps/dynamics.hpp"
#include "sps/metrics.hpp"
#include "sps/retrieval.hpp"
#include "sps/streamgen.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 1;
    std::string format = "csv";
    bool json_summary = false;
};

std::string default_config_path() {
    if (const char* dir = std::getenv("SPS_CONFIG_DIR"))
        return std::string(dir) + "/paper.ini";
    return "configs/paper.ini";
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t hash = 1469598103934665603ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    return hash;
}

std::string config_hash(const sps::Config& cfg) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(
                      fnv1a(sps::serialize_config(cfg))));
    return buf;
}

struct ManifestWriter {
    json manifest;
    std::chrono::steady_clock::time_point start =
        std::chrono::steady_clock::now();
    std::vector<std::string> outputs;

    ManifestWriter(const std::string& command, const CommonOpts& opts) {
        manifest["command"] = command;
        manifest["tool_version"] = kVersion;
        manifest["seeds"] = json::array({opts.seed});
    }

    std::string add(const fs::path& path) {
        outputs.push_back(path.string());
        return path.string();
    }

    void write(const fs::path& out_dir) {
        manifest["outputs"] = outputs;
        manifest["wall_time_s"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          start)
                .count();
        std::ofstream out(out_dir / "manifest.json");
        if (!out)
            throw sps::IoError("cannot write manifest in " + out_dir.string());
        out << manifest.dump(2) << "\n";
    }
};

void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw sps::IoError("cannot create output directory " + dir);
}

void emit_summary(const CommonOpts& opts, const json& summary) {
    if (opts.json_summary)
        std::cout << summary.dump(2) << std::endl;
}

// ---------------------------------------------------------------- theory --

struct TheoryNumbers {
    double eta_w = 0.0, eta_s = 0.0, eta_r = 0.0, p_th = 0.0;
};

TheoryNumbers compute_theory(const sps::Config& cfg) {
    TheoryNumbers out;
    const auto traj =
        sps::evolve(sps::ground_state(), cfg.physics, cfg.schedule);
    out.eta_w = sps::write_efficiency(traj, cfg.schedule.t_w);
    if (out.eta_w > 1e-12)
        out.eta_s =
            sps::storage_efficiency(traj, cfg.schedule.t_w, cfg.schedule.t_s);
    if (cfg.physics.omega_c_ret > 0.0) {
        const auto rp = sps::dimensionless_params(cfg.physics);
        out.eta_r =
            sps::retrieval_efficiency(sps::SpinWaveProfile::uniform(), rp)
                .eta_r;
    }
    out.p_th = sps::generation_probability(out.eta_w, out.eta_s, out.eta_r);
    return out;
}

int cmd_theory(const CommonOpts& opts, const std::string& envelope_out) {
    const sps::Config cfg = sps::load_config(opts.config_path);
    ensure_out_dir(opts.out_dir);
    ManifestWriter manifest("theory", opts);
    manifest.manifest["config_hash"] = config_hash(cfg);

    const TheoryNumbers numbers = compute_theory(cfg);
    const fs::path csv = fs::path(opts.out_dir) / "theory.csv";
    {
        std::ofstream out(manifest.add(csv));
        if (!out) throw sps::IoError("cannot write " + csv.string());
        out.precision(10);
        out << "eta_w,eta_s,eta_r,p_th\n";
        out << numbers.eta_w << ',' << numbers.eta_s << ',' << numbers.eta_r
            << ',' << numbers.p_th << '\n';
    }

    if (!envelope_out.empty() && cfg.physics.omega_c_ret > 0.0) {
        const auto rp = sps::dimensionless_params(cfg.physics);
        const auto profile = sps::SpinWaveProfile::uniform();
        const fs::path env_csv = fs::path(opts.out_dir) / envelope_out;
        std::ofstream out(manifest.add(env_csv));
        if (!out) throw sps::IoError("cannot write " + env_csv.string());
        out.precision(10);
        out << "t_tilde,re_E,im_E,abs2_E\n";
        for (double t = 0.0; t <= 60.0; t += 0.25) {
            const auto e = sps::field_envelope(t, profile, rp);
            out << t << ',' << e.real() << ',' << e.imag() << ','
                << std::norm(e) << '\n';
        }
    }
    manifest.write(opts.out_dir);

    json summary = {{"eta_w", numbers.eta_w},
                    {"eta_s", numbers.eta_s},
                    {"eta_r", numbers.eta_r},
                    {"p_th", numbers.p_th}};
    emit_summary(opts, summary);
    if (!opts.json_summary)
        std::cout << "eta_w=" << numbers.eta_w << " eta_s=" << numbers.eta_s
                  << " eta_r=" << numbers.eta_r << " p_th=" << numbers.p_th
                  << "\n";
    return 0;
}

// -------------------------------------------------------------- simulate --

sps::SimConfig make_sim_config(const sps::Config& cfg, sps::Topology topo,
                               std::uint64_t seed, std::uint64_t pulses) {
    sps::SimConfig sim;
    sim.seed = seed;
    sim.n_pulses = pulses ? pulses : cfg.schedule.n_pulses;
    if (sim.n_pulses == 0)
        throw sps::ValidationError(
            "simulate: pulse count is zero (set schedule.n_pulses or "
            "--pulses)");
    sim.topology = topo;
    sim.hom_delay = 2.0 * cfg.schedule.t_p;
    sim.schedule = cfg.schedule;
    sim.path = cfg.optics;
    sim.detectors = cfg.detectors;
    sim.beamsplitter = cfg.beamsplitter;
    return sim;
}

void write_tags(const std::string& path, const sps::TimeTagStream& tags,
                const std::string& format) {
    if (format == "binary")
        sps::write_tags_binary(path, tags);
    else
        sps::write_tags_csv(path, tags);
}

int cmd_simulate(const CommonOpts& opts, const std::string& topology,
                 std::uint64_t pulses) {
    const sps::Config cfg = sps::load_config(opts.config_path);
    ensure_out_dir(opts.out_dir);
    ManifestWriter manifest("simulate", opts);
    manifest.manifest["config_hash"] = config_hash(cfg);
    const std::string ext = (opts.format == "binary") ? ".bin" : ".csv";

    json summary;
    if (topology == "hbt") {
        auto sim =
            make_sim_config(cfg, sps::Topology::HBT, opts.seed, pulses);
        const auto tags = sps::simulate_stream(cfg.source, sim);
        write_tags(manifest.add(fs::path(opts.out_dir) / ("tags_hbt" + ext)),
                   tags, opts.format);
        summary["n_tags"] = tags.size();
        manifest.manifest["n_pulses"] = sim.n_pulses;
    } else if (topology == "hom") {
        auto sim =
            make_sim_config(cfg, sps::Topology::HOM, opts.seed, pulses);
        const auto par = sps::simulate_stream(cfg.source, sim);
        sim.hom_perpendicular = true;
        const auto perp = sps::simulate_stream(cfg.source, sim);
        write_tags(
            manifest.add(fs::path(opts.out_dir) / ("tags_hom_par" + ext)),
            par, opts.format);
        write_tags(
            manifest.add(fs::path(opts.out_dir) / ("tags_hom_perp" + ext)),
            perp, opts.format);
        summary["n_tags_par"] = par.size();
        summary["n_tags_perp"] = perp.size();
        manifest.manifest["n_pulses"] = sim.n_pulses;
    } else {
        throw sps::ValidationError("simulate: unknown topology '" + topology +
                                   "' (expected hbt or hom)");
    }
    manifest.write(opts.out_dir);
    emit_summary(opts, summary);
    if (!opts.json_summary)
        std::cout << "wrote " << topology << " tags to " << opts.out_dir
                  << "\n";
    return 0;
}

// --------------------------------------------------------------- analyze --

struct AnalysisOutput {
    sps::G2Result g2;
    double v_raw = std::numeric_limits<double>::quiet_NaN();
    double v_sub = std::numeric_limits<double>::quiet_NaN();
    double overlap = std::numeric_limits<double>::quiet_NaN();
};

sps::CoincidenceHistogram analyze_histogram(const sps::TimeTagStream& tags,
                                            const sps::Config& cfg,
                                            double tau_max,
                                            sps::RateProfiles* profiles_out) {
    const auto gated = sps::gate(tags, cfg.schedule);
    std::uint64_t n_pulses = cfg.schedule.n_pulses;
    if (n_pulses == 0 && !tags.empty())
        n_pulses = static_cast<std::uint64_t>(
                       double(tags.back().timestamp_ns) * 1e-9 /
                       cfg.schedule.t_p) +
                   1;
    const double run_duration = double(n_pulses) * cfg.schedule.t_p;
    const auto profiles = sps::rate_profiles(gated.out_gate, gated.in_gate,
                                             cfg.schedule, run_duration);
    if (profiles_out) *profiles_out = profiles;

    sps::TimeTagStream ch1, ch2;
    for (const sps::TimeTag& tag : gated.in_gate)
        (tag.channel == 0 ? ch1 : ch2).push_back(tag);
    return sps::coincidences(ch1, ch2, 20e-9, tau_max);
}

int cmd_analyze(const CommonOpts& opts, const std::string& tags_path,
                const std::string& perp_path, double source_g2) {
    const sps::Config cfg = sps::load_config(opts.config_path);
    ensure_out_dir(opts.out_dir);
    ManifestWriter manifest("analyze", opts);
    manifest.manifest["config_hash"] = config_hash(cfg);

    const auto tags = sps::read_tags(tags_path);
    const double tau_max =
        51.0 * cfg.schedule.t_p + cfg.schedule.gate_window;

    sps::RateProfiles profiles;
    const auto data = analyze_histogram(tags, cfg, tau_max, &profiles);
    std::uint64_t n_pulses = cfg.schedule.n_pulses;
    if (n_pulses == 0 && !tags.empty())
        n_pulses = static_cast<std::uint64_t>(
                       double(tags.back().timestamp_ns) * 1e-9 /
                       cfg.schedule.t_p) +
                   1;
    const auto back = sps::background_profile(profiles, cfg.schedule, n_pulses,
                                              data.bin_width, data.tau_max);

    AnalysisOutput result;
    result.g2 =
        sps::g2_zero(data, back, cfg.schedule, sps::default_side_peaks());

    // histogram CSV: data, reconstructed background and the difference
    const fs::path hist_csv = fs::path(opts.out_dir) / "histogram.csv";
    {
        std::ofstream out(manifest.add(hist_csv));
        if (!out) throw sps::IoError("cannot write " + hist_csv.string());
        out.precision(10);
        out << "tau_ns,counts,background,subtracted\n";
        for (std::size_t i = 0; i < data.n_bins(); ++i)
            out << data.bin_center(i) * 1e9 << ',' << data.counts[i] << ','
                << back.counts[i] << ',' << data.counts[i] - back.counts[i]
                << '\n';
    }

    if (!perp_path.empty()) {
        const auto perp_tags = sps::read_tags(perp_path);
        sps::RateProfiles perp_profiles;
        const auto perp =
            analyze_histogram(perp_tags, cfg, tau_max, &perp_profiles);
        const auto perp_back = sps::background_profile(
            perp_profiles, cfg.schedule, n_pulses, perp.bin_width,
            perp.tau_max);
        result.v_raw = sps::hom_visibility(data, perp, cfg.schedule).value;
        auto subtracted = data;
        auto perp_sub = perp;
        for (std::size_t i = 0; i < subtracted.n_bins(); ++i) {
            subtracted.counts[i] -= back.counts[i];
            perp_sub.counts[i] -= perp_back.counts[i];
        }
        result.v_sub =
            sps::hom_visibility(subtracted, perp_sub, cfg.schedule).value;
        // the parallel histogram's own tau=0 peak is the interference
        // residual, not the source g2, so the multiphoton compensation takes
        // the independently measured value
        result.overlap =
            sps::mode_overlap(result.v_sub, source_g2, cfg.beamsplitter);
    }

    const fs::path summary_csv = fs::path(opts.out_dir) / "summary.csv";
    {
        std::ofstream out(manifest.add(summary_csv));
        if (!out) throw sps::IoError("cannot write " + summary_csv.string());
        out.precision(10);
        auto field = [](double v) {
            return std::isnan(v) ? std::string()
                                 : (std::ostringstream() << std::setprecision(10)
                                                         << v)
                                       .str();
        };
        out << "g2_raw,g2_back,g2_sub,V_raw,V_sub,c\n";
        out << result.g2.raw.value << ',' << result.g2.back.value << ','
            << result.g2.subtracted.value << ',' << field(result.v_raw) << ','
            << field(result.v_sub) << ',' << field(result.overlap) << '\n';
    }
    manifest.write(opts.out_dir);

    json summary = {{"g2_raw", result.g2.raw.value},
                    {"g2_raw_err", result.g2.raw.error},
                    {"g2_back", result.g2.back.value},
                    {"g2_sub", result.g2.subtracted.value},
                    {"g2_sub_err", result.g2.subtracted.error}};
    if (!perp_path.empty()) {
        summary["V_raw"] = result.v_raw;
        summary["V_sub"] = result.v_sub;
        summary["c"] = result.overlap;
    }
    emit_summary(opts, summary);
    if (!opts.json_summary)
        std::cout << "g2_raw=" << result.g2.raw.value
                  << " g2_back=" << result.g2.back.value
                  << " g2_sub=" << result.g2.subtracted.value << "\n";
    return 0;
}

// ------------------------------------------------------------------- fit --

int cmd_fit(const CommonOpts& opts, const std::string& input,
            double t_p) {
    const auto points = sps::read_fit_csv(input);
    ensure_out_dir(opts.out_dir);
    ManifestWriter manifest("fit", opts);
    const auto fit = sps::fit_pulse_train(points, t_p);

    const fs::path csv = fs::path(opts.out_dir) / "fit.csv";
    {
        std::ofstream out(manifest.add(csv));
        if (!out) throw sps::IoError("cannot write " + csv.string());
        out.precision(10);
        out << "param,value,stderr\n";
        out << "p_c," << fit.params.p_c << ',' << fit.stderrors[0] << '\n';
        out << "tau_c," << fit.params.tau_c << ',' << fit.stderrors[1] << '\n';
        out << "p_max," << fit.params.p_max << ',' << fit.stderrors[2] << '\n';
        out << "residual_norm," << fit.residual_norm << ",\n";
        out << "iterations," << fit.iterations << ",\n";
    }
    const fs::path residuals_csv = fs::path(opts.out_dir) / "fit_residuals.csv";
    {
        std::ofstream out(manifest.add(residuals_csv));
        if (!out) throw sps::IoError("cannot write " + residuals_csv.string());
        out.precision(10);
        out << "pulse_index,success_rate,model,residual\n";
        for (const auto& point : points) {
            const double model = sps::photon_prob(
                std::int64_t(point.pulse_index), fit.params);
            out << point.pulse_index << ',' << point.success_rate << ','
                << model << ',' << point.success_rate - model << '\n';
        }
    }
    manifest.write(opts.out_dir);

    json summary = {{"p_c", fit.params.p_c},
                    {"tau_c", fit.params.tau_c},
                    {"p_max", fit.params.p_max},
                    {"residual_norm", fit.residual_norm}};
    emit_summary(opts, summary);
    if (!opts.json_summary)
        std::cout << "p_c=" << fit.params.p_c << " tau_c=" << fit.params.tau_c
                  << " p_max=" << fit.params.p_max << "\n";
    return 0;
}

// --------------------------------------------------------------- metrics --

int cmd_metrics(const CommonOpts& opts, const std::string& input) {
    const auto rows = sps::read_measurements_csv(input);
    ensure_out_dir(opts.out_dir);
    ManifestWriter manifest("metrics", opts);
    const auto table = sps::benchmark_table(rows);
    const fs::path csv = fs::path(opts.out_dir) / "metrics.csv";
    sps::write_metrics_csv(manifest.add(csv), table);
    manifest.write(opts.out_dir);

    json summary = json::array();
    for (const auto& row : table) {
        json entry = {{"label", row.metrics.label}, {"ok", row.ok}};
        if (row.ok) {
            entry["eta"] = row.metrics.eta;
            entry["F"] = row.metrics.fidelity;
            entry["brightness"] = row.metrics.brightness;
        } else {
            entry["error"] = row.error;
        }
        summary.push_back(entry);
    }
    emit_summary(opts, summary);
    if (!opts.json_summary)
        std::cout << "wrote " << csv.string() << " (" << table.size()
                  << " rows)\n";
    return 0;
}

// ------------------------------------------------------------- reproduce --

int cmd_reproduce(const CommonOpts& opts, const std::string& figure,
                  const std::string& data_csv) {
    ensure_out_dir(opts.out_dir);
    ManifestWriter manifest("reproduce " + figure, opts);

    if (figure == "fig2") {
        const sps::Config cfg = sps::load_config(opts.config_path);
        manifest.manifest["config_hash"] = config_hash(cfg);
        const auto traj =
            sps::evolve(sps::ground_state(), cfg.physics, cfg.schedule);
        traj.write_csv(
            manifest.add(fs::path(opts.out_dir) / "fig2_populations.csv"));
        const auto rp = sps::dimensionless_params(cfg.physics);
        const auto profile = sps::SpinWaveProfile::uniform();
        const fs::path env = fs::path(opts.out_dir) / "fig2_envelope.csv";
        std::ofstream out(manifest.add(env));
        out.precision(10);
        out << "t_tilde,re_E,im_E,abs2_E\n";
        for (double t = 0.0; t <= 60.0; t += 0.25) {
            const auto e = sps::field_envelope(t, profile, rp);
            out << t << ',' << e.real() << ',' << e.imag() << ','
                << std::norm(e) << '\n';
        }
    } else if (figure == "fig3") {
        const sps::Config cfg = sps::load_config(opts.config_path);
        manifest.manifest["config_hash"] = config_hash(cfg);
        auto sim = make_sim_config(cfg, sps::Topology::HOM, opts.seed,
                                   cfg.schedule.n_pulses ? 0 : 1000000);
        const double tau_max = 6.0 * cfg.schedule.t_p;
        const auto par = sps::simulate_stream(cfg.source, sim);
        sim.hom_perpendicular = true;
        const auto perp = sps::simulate_stream(cfg.source, sim);
        analyze_histogram(par, cfg, tau_max, nullptr)
            .write_csv(manifest.add(fs::path(opts.out_dir) / "fig3_par.csv"));
        analyze_histogram(perp, cfg, tau_max, nullptr)
            .write_csv(manifest.add(fs::path(opts.out_dir) / "fig3_perp.csv"));
    } else if (figure == "fig4") {
        sps::ContaminantParams cp{0.019, 65e-6, 0.35, 2.5e-6};
        const fs::path curve = fs::path(opts.out_dir) / "fig4a_ps_curve.csv";
        {
            std::ofstream out(manifest.add(curve));
            out.precision(10);
            out << "t_p_s,p_s\n";
            for (double t_p = 0.5e-6; t_p <= 50e-6; t_p *= 1.1) {
                cp.t_p = t_p;
                out << t_p << ',' << sps::steady_state(cp) << '\n';
            }
        }
        cp.t_p = 2.5e-6;
        sps::SourceModel src;
        src.cp = cp;
        sps::PulseSchedule sched;
        sched.t_w = 0.37e-6;
        sched.t_s = 0.35e-6;
        sched.t_r = 1.4e-6;
        sched.t_p = cp.t_p;
        sched.gate_window = 1.4e-6;
        const auto trains =
            sps::simulate_pulse_trains(src, sched, 5000, 100, opts.seed);
        const auto points = trains.to_fit_points();
        const fs::path mc = fs::path(opts.out_dir) / "fig4b_yields.csv";
        std::ofstream out(manifest.add(mc));
        out.precision(10);
        out << "pulse_index,success_rate,stderr,model\n";
        for (const auto& point : points)
            out << point.pulse_index << ',' << point.success_rate << ','
                << point.stderr_ << ','
                << sps::photon_prob(std::int64_t(point.pulse_index), cp)
                << '\n';
    } else if (figure == "fig5") {
        const auto rows = sps::read_measurements_csv(data_csv);
        const auto table = sps::benchmark_table(rows);
        sps::write_metrics_csv(
            manifest.add(fs::path(opts.out_dir) / "fig5_metrics.csv"), table);
    } else {
        throw sps::ValidationError("unknown figure id '" + figure +
                                   "' (valid: fig2 fig3 fig4 fig5)");
    }
    manifest.write(opts.out_dir);
    if (!opts.json_summary)
        std::cout << "wrote " << figure << " data to " << opts.out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rydberg-ensemble single-photon source toolkit"};
    app.require_subcommand(1);

    CommonOpts opts;
    opts.config_path = default_config_path();
    app.add_option("--config", opts.config_path, "config file path");
    app.add_option("--seed", opts.seed, "master RNG seed");
    app.add_option("--out", opts.out_dir, "output directory");
    app.add_option("--format", opts.format, "tag file format: csv or binary")
        ->check(CLI::IsMember({"csv", "binary"}));
    app.add_flag("--json-summary", opts.json_summary,
                 "print a JSON summary to stdout");

    auto* theory = app.add_subcommand("theory", "efficiency predictions");
    std::string envelope_out;
    theory->add_option("--envelope", envelope_out,
                       "also write the retrieved-field envelope CSV");

    auto* simulate = app.add_subcommand("simulate", "generate tag streams");
    std::string topology = "hbt";
    std::uint64_t pulses = 0;
    simulate->add_option("--topology", topology, "hbt or hom")
        ->check(CLI::IsMember({"hbt", "hom"}));
    simulate->add_option("--pulses", pulses, "number of pulses (overrides config)");

    auto* analyze = app.add_subcommand("analyze", "analyze tag streams");
    std::string tags_path, perp_path;
    analyze->add_option("--tags", tags_path, "tag file")->required();
    analyze->add_option("--tags-perp", perp_path,
                        "perpendicular-polarization tag file (enables V)");
    double source_g2 = 0.0;
    analyze->add_option(
        "--g2", source_g2,
        "independently measured source g2(0) used to compensate the overlap "
        "inversion for multiphoton events (default 0)");

    auto* fit = app.add_subcommand("fit", "fit contaminant parameters");
    std::string fit_input;
    double fit_tp = 2.5e-6;
    fit->add_option("--input", fit_input, "CSV pulse_index,success_rate,stderr")
        ->required();
    fit->add_option("--t-p", fit_tp, "pulse period in seconds");

    auto* metrics = app.add_subcommand("metrics", "source benchmark metrics");
    std::string metrics_input;
    metrics->add_option("--input", metrics_input, "CSV label,R_Hz,duty,P,V,g2")
        ->required();

    auto* reproduce =
        app.add_subcommand("reproduce", "emit bundled figure data");
    std::string figure;
    std::string data_csv = "data/benchmark_sources.csv";
    reproduce->add_option("figure", figure, "fig2 | fig3 | fig4 | fig5")
        ->required();
    reproduce->add_option("--data", data_csv, "benchmark sources CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (theory->parsed()) return cmd_theory(opts, envelope_out);
        if (simulate->parsed()) return cmd_simulate(opts, topology, pulses);
        if (analyze->parsed())
            return cmd_analyze(opts, tags_path, perp_path, source_g2);
        if (fit->parsed()) return cmd_fit(opts, fit_input, fit_tp);
        if (metrics->parsed()) return cmd_metrics(opts, metrics_input);
        if (reproduce->parsed()) return cmd_reproduce(opts, figure, data_csv);
    } catch (const sps::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const sps::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const sps::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const sps::IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
