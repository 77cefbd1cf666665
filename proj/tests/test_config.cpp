#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sps/config.hpp"

using namespace sps;

namespace {

const char* kBase = R"(
[physics]
x2pi = true
omega_p = 1.0
omega_c_write = 6.8
omega_c_ret = 6.8
delta_p = 50
delta_2ph = -2
delta_ret = 7
gamma_ge = 6.9
gamma_gr = 0.088
gamma_cr = 0.005
gamma_gc = 0.0025
n_collective = 400
od = 13
[schedule]
t_w = 370e-9
t_s = 350e-9
t_r = 1.4e-6
t_p = 2.46e-6
gate_window = 1.4e-6
[optics]
optics_transmission = 0.75
aom_diffraction = 0.79
[detectors]
b1 = 80
b2 = 100
efficiency = 0.67
[beamsplitter]
t1_H = 0.7085
r1_H = 0.6488
)";

}  // namespace

TEST_CASE("x2pi scales frequency keys from MHz to rad/s") {
    const Config cfg = parse_config(kBase);
    const double u = 2.0 * std::numbers::pi * 1e6;
    CHECK(cfg.physics.omega_c_write == doctest::Approx(6.8 * u));
    CHECK(cfg.physics.delta_p == doctest::Approx(50.0 * u));
    CHECK(cfg.physics.delta_2ph == doctest::Approx(-2.0 * u));
    CHECK(cfg.physics.gamma_gr == doctest::Approx(0.088 * u));
    // non-frequency keys are untouched
    CHECK(cfg.physics.n_collective == doctest::Approx(400.0));
    CHECK(cfg.schedule.t_w == doctest::Approx(370e-9));
}

TEST_CASE("without x2pi values are taken as rad/s") {
    std::string text = kBase;
    text.replace(text.find("x2pi = true"), 11, "x2pi = false");
    const Config cfg = parse_config(text);
    CHECK(cfg.physics.omega_c_write == doctest::Approx(6.8));
}

TEST_CASE("defaults: phi gives alpha = pi, V falls back to H") {
    const Config cfg = parse_config(kBase);
    CHECK(cfg.beamsplitter.alpha() == doctest::Approx(std::numbers::pi));
    CHECK(cfg.beamsplitter.p1V.t == doctest::Approx(0.7085));
    CHECK(cfg.beamsplitter.p1V.r == doctest::Approx(0.6488));
    CHECK(cfg.schedule.gate_window == doctest::Approx(1.4e-6));
    CHECK(cfg.detectors.background_rate[0] == doctest::Approx(80.0));
    CHECK(cfg.detectors.background_rate[1] == doctest::Approx(100.0));
}

TEST_CASE("optics stages preserve file order") {
    const Config cfg = parse_config(kBase);
    REQUIRE(cfg.optics.stages.size() == 2);
    CHECK(cfg.optics.stages[0].first == "optics_transmission");
    CHECK(cfg.optics.stages[1].first == "aom_diffraction");
}

TEST_CASE("source section is optional with working defaults") {
    const Config base = parse_config(kBase);
    CHECK(base.source.cp.p_c == doctest::Approx(0.0));
    CHECK(base.source.cp.t_p == doctest::Approx(2.46e-6));
    CHECK(base.source.envelope.truncation == doctest::Approx(1.4e-6));

    std::string text = kBase;
    text += "[source]\np_c = 0.019\ntau_c = 65e-6\np_max = 0.35\n";
    const Config cfg = parse_config(text);
    CHECK(cfg.source.cp.p_c == doctest::Approx(0.019));
    CHECK(cfg.source.cp.tau_c == doctest::Approx(65e-6));
    CHECK(cfg.source.cp.p_max == doctest::Approx(0.35));
}

TEST_CASE("serialize / parse round trip") {
    const Config a = parse_config(kBase);
    const Config b = parse_config(serialize_config(a));
    CHECK(serialize_config(a) == serialize_config(b));
    CHECK(a.physics.omega_p == b.physics.omega_p);
    CHECK(a.beamsplitter.p2H.t == b.beamsplitter.p2H.t);
    CHECK(a.schedule.t_p == b.schedule.t_p);
}

TEST_CASE("schedule overrun is rejected at parse time") {
    std::string text = kBase;
    text.replace(text.find("t_p = 2.46e-6"), 13, "t_p = 2.00e-6");
    CHECK_THROWS_AS(parse_config(text), ValidationError);
}

TEST_CASE("parse errors carry context") {
    CHECK_THROWS_AS(parse_config("[schedule]\nt_w 370e-9\n"), ParseError);
    CHECK_THROWS_AS(parse_config("key = 1\n"), ParseError);  // no section
    std::string text = kBase;
    text.replace(text.find("t_w = 370e-9"), 12, "t_w = fast");
    CHECK_THROWS_AS(parse_config(text), ParseError);
    // a required schedule key is missing
    std::string missing = kBase;
    missing.replace(missing.find("t_w = 370e-9"), 12, "");
    CHECK_THROWS_AS(parse_config(missing), ParseError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.ini"), IoError);
}

TEST_CASE("comments and blank lines are ignored") {
    std::string text = kBase;
    text += "\n# trailing comment\n\n[detectors]\n# another\n";
    CHECK_NOTHROW(parse_config(text));
}
