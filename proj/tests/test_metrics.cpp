#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "sps/core.hpp"
#include "sps/metrics.hpp"

using namespace sps;

namespace {

SourceMeasurement this_work() {
    return {"this_work", 13e3, 0.6, 0.141, 0.982, 1e-4};
}

// forward map of the decomposition, used as the inversion oracle
void remeasure(const Decomposition& d, double& p, double& v, double& g2) {
    p = d.eta + d.p1_prime + d.p2;
    v = d.eta / (d.eta + d.p1_prime);
    const double u = d.eta + d.p1_prime + 2.0 * d.p2;
    g2 = 2.0 * d.p2 / (u * u);
}

}  // namespace

TEST_CASE("series efficiency matches the published headline value") {
    const auto m = this_work();
    const double eta = single_mode_efficiency(m);
    CHECK(eta == doctest::Approx(0.139).epsilon(0.005));
    CHECK(fidelity(eta, m.p) == doctest::Approx(0.982).epsilon(0.001));
    CHECK(brightness(eta, m.rep_rate, m.duty_cycle) ==
          doctest::Approx(1.11e3).epsilon(0.03));
}

TEST_CASE("series limits: V scales linearly, g2 shrinks eta") {
    SourceMeasurement m{"x", 1e6, 1.0, 0.3, 1.0, 0.0};
    CHECK(single_mode_efficiency(m) == doctest::Approx(0.3));
    m.v = 0.5;
    CHECK(single_mode_efficiency(m) == doctest::Approx(0.15));
    m.g2 = 0.2;
    CHECK(single_mode_efficiency(m) < 0.15);
}

TEST_CASE("decomposition re-substitutes to the measurement at 1e-10") {
    for (const auto& m :
         {this_work(), SourceMeasurement{"a", 1e6, 1.0, 0.667, 0.91, 0.269},
          SourceMeasurement{"b", 76e6, 1.0, 0.337, 0.93, 0.027},
          SourceMeasurement{"c", 1e6, 0.5, 0.05, 0.7, 0.2}}) {
        const auto d = decompose(m);
        double p, v, g2;
        remeasure(d, p, v, g2);
        CHECK(std::abs(p - m.p) < 1e-10);
        CHECK(std::abs(v - m.v) < 1e-10);
        CHECK(std::abs(g2 - m.g2) < 1e-10);
        CHECK(d.eta >= 0.0);
        CHECK(d.p2 >= -1e-9);
        CHECK(d.p2 <= m.p);
    }
}

TEST_CASE("decomposition edge cases") {
    SourceMeasurement pure{"pure", 1e6, 1.0, 0.4, 1.0, 0.0};
    const auto d = decompose(pure);
    CHECK(d.p2 == doctest::Approx(0.0));
    CHECK(d.p1_prime == doctest::Approx(0.0));
    CHECK(d.eta == doctest::Approx(0.4));

    // P g2 > 1/2 has no real root
    SourceMeasurement bad{"bad", 1e6, 1.0, 0.9, 0.9, 0.7};
    CHECK_THROWS_AS(decompose(bad), NumericalError);
}

TEST_CASE("measurement validation") {
    auto m = this_work();
    CHECK_NOTHROW(m.validate());
    m.duty_cycle = 0.0;
    CHECK_THROWS_AS(m.validate(), ValidationError);
    m = this_work();
    m.v = 1.2;
    CHECK_THROWS_AS(m.validate(), ValidationError);
    m = this_work();
    m.g2 = -0.1;
    CHECK_THROWS_AS(m.validate(), ValidationError);
    CHECK_THROWS_AS(fidelity(0.1, 0.0), ValidationError);
}

TEST_CASE("benchmark table keeps going past invalid rows") {
    std::vector<SourceMeasurement> rows = {
        this_work(),
        {"broken", -1.0, 1.0, 0.1, 0.9, 0.0},
        {"qd", 76e6, 1.0, 0.337, 0.93, 0.027},
    };
    const auto table = benchmark_table(rows);
    REQUIRE(table.size() == 3);
    CHECK(table[0].ok);
    CHECK_FALSE(table[1].ok);
    CHECK(!table[1].error.empty());
    CHECK(table[2].ok);
    CHECK(table[2].metrics.eta == doctest::Approx(0.312).epsilon(0.003));
    CHECK(table[2].metrics.brightness == doctest::Approx(23.71e6).epsilon(0.01));
}

TEST_CASE("measurements csv read and metrics csv write") {
    namespace fs = std::filesystem;
    const auto in_path = fs::temp_directory_path() / "sources.csv";
    {
        std::ofstream out(in_path);
        out << "label,R_Hz,duty,P,V,g2,extra\n";
        out << "alpha,1e6,0.5,0.1,0.9,0.01,ignored\n";
        out << "beta,76e6,1.0,0.337,0.93,0.027\n";
    }
    const auto rows = read_measurements_csv(in_path.string());
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].label == "alpha");
    CHECK(rows[0].duty_cycle == doctest::Approx(0.5));
    CHECK(rows[1].g2 == doctest::Approx(0.027));

    const auto out_path = fs::temp_directory_path() / "metrics_out.csv";
    write_metrics_csv(out_path.string(), benchmark_table(rows));
    std::ifstream check(out_path);
    std::string header;
    std::getline(check, header);
    CHECK(header == "label,eta,F,brightness");
    std::string line;
    int n = 0;
    while (std::getline(check, line))
        if (!line.empty()) ++n;
    CHECK(n == 2);
    fs::remove(in_path);
    fs::remove(out_path);

    {
        std::ofstream out(in_path);
        out << "bad header\n";
    }
    CHECK_THROWS_AS(read_measurements_csv(in_path.string()), ParseError);
    fs::remove(in_path);
    CHECK_THROWS_AS(read_measurements_csv(in_path.string()), IoError);
}
