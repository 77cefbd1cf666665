#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <vector>

#include "sps/contaminant.hpp"
#include "sps/core.hpp"

using namespace sps;

namespace {

// reference: the presence probability evaluated by direct recursion
std::vector<double> recursion(const ContaminantParams& cp, int n_max) {
    const double e = cp.survival();
    std::vector<double> p(n_max + 1, 0.0);
    p[1] = cp.p_c;
    for (int n = 2; n <= n_max; ++n)
        p[n] = p[n - 1] * e + (1.0 - p[n - 1]) * cp.p_c;
    return p;
}

ContaminantParams reference_cp() {
    return ContaminantParams{0.019, 65e-6, 0.35, 2.5e-6};
}

}  // namespace

TEST_CASE("closed form equals the recursion to 1e-12") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        ContaminantParams cp;
        cp.p_c = 0.5 * u(rng);
        cp.tau_c = 1e-6 * std::pow(10.0, 3.0 * u(rng));
        cp.p_max = u(rng);
        cp.t_p = 1e-6 * std::pow(10.0, 2.0 * u(rng));
        cp.validate();
        const auto ref = recursion(cp, 1000);
        double worst = 0.0;
        for (int n = 1; n <= 1000; ++n)
            worst = std::max(worst, std::abs(presence_prob(n, cp) - ref[n]));
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("photon probability and steady state are consistent") {
    const auto cp = reference_cp();
    CHECK(photon_prob(1, cp) ==
          doctest::Approx(cp.p_max * (1.0 - cp.p_c)).epsilon(1e-12));
    CHECK(photon_prob(100000, cp) ==
          doctest::Approx(steady_state(cp)).epsilon(1e-10));
    // analytic limit: P_max (1 - p_c / (1 - e + p_c))
    const double e = cp.survival();
    CHECK(steady_state(cp) ==
          doctest::Approx(cp.p_max * (1.0 - cp.p_c / (1.0 - e + cp.p_c)))
              .epsilon(1e-14));
    CHECK_THROWS_AS(presence_prob(0, cp), ValidationError);
}

TEST_CASE("steady state is monotone in the pulse period") {
    auto cp = reference_cp();
    double previous = 0.0;
    for (double t_p = 0.5e-6; t_p < 1e-3; t_p *= 1.5) {
        cp.t_p = t_p;
        const double p = steady_state(cp);
        CHECK(p > previous);
        previous = p;
    }
    CHECK(previous < cp.p_max);
}

TEST_CASE("pulse autocorrelation: pinned value and geometric decay") {
    const auto cp = reference_cp();
    // frozen from the closed form at the reference parameters
    CHECK(pulse_autocorrelation(1, cp) ==
          doctest::Approx(1.4749932389117777).epsilon(1e-12));
    CHECK(pulse_autocorrelation(-1, cp) ==
          doctest::Approx(pulse_autocorrelation(1, cp)).epsilon(1e-14));
    const double q = cp.survival() - cp.p_c;
    CHECK((pulse_autocorrelation(2, cp) - 1.0) /
              (pulse_autocorrelation(1, cp) - 1.0) ==
          doctest::Approx(q).epsilon(1e-12));
    CHECK(pulse_autocorrelation(400, cp) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_THROWS_AS(pulse_autocorrelation(0, cp), ValidationError);
}

TEST_CASE("autocorrelation matches a Monte Carlo chain at 4 sigma") {
    const auto cp = reference_cp();
    const double e = cp.survival();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int n = 2000000;
    std::vector<char> present(n);
    bool prev = false;
    for (int i = 0; i < n; ++i) {
        prev = prev ? (u(rng) < e) : (u(rng) < cp.p_c);
        present[i] = prev;
    }
    // g2 at lag 1 of the generation indicator (1 - present)
    double mean = 0.0, corr = 0.0;
    for (int i = 0; i < n; ++i) mean += 1.0 - present[i];
    mean /= n;
    for (int i = 0; i + 1 < n; ++i)
        corr += (1.0 - present[i]) * (1.0 - present[i + 1]);
    corr /= (n - 1);
    const double g2_mc = corr / (mean * mean);
    const double sigma = 4.0 / (mean * std::sqrt(double(n)));
    CHECK(std::abs(g2_mc - pulse_autocorrelation(1, cp)) < sigma);
}

TEST_CASE("creation probability linear model clamps") {
    CHECK(creation_linear_model(350e-9, 5.4e4, 1.0) ==
          doctest::Approx(350e-9 * 5.4e4));
    CHECK(creation_linear_model(1.0, 10.0, 1.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(creation_linear_model(-1.0, 1.0, 1.0), ValidationError);
}

TEST_CASE("fit recovers exact model data to high precision") {
    const auto cp = reference_cp();
    std::vector<FitPoint> data;
    for (int n = 1; n <= 60; ++n)
        data.push_back({double(n), photon_prob(n, cp), 1e-4});
    const auto fit = fit_pulse_train(data, cp.t_p);
    CHECK(fit.converged);
    CHECK(fit.params.p_c == doctest::Approx(cp.p_c).epsilon(1e-5));
    CHECK(fit.params.tau_c == doctest::Approx(cp.tau_c).epsilon(1e-4));
    CHECK(fit.params.p_max == doctest::Approx(cp.p_max).epsilon(1e-6));
    CHECK(fit.residual_norm < 1e-6);
}

TEST_CASE("fit recovers noisy data within uncertainty") {
    const auto cp = reference_cp();
    std::mt19937_64 rng(3);
    const int trains = 200000;
    std::vector<FitPoint> data;
    for (int n = 1; n <= 60; ++n) {
        const double p = photon_prob(n, cp);
        std::binomial_distribution<int> bin(trains, p);
        const double rate = double(bin(rng)) / trains;
        data.push_back(
            {double(n), rate, std::sqrt(p * (1.0 - p) / trains)});
    }
    const auto fit = fit_pulse_train(data, cp.t_p);
    CHECK(fit.converged);
    CHECK(std::abs(fit.params.p_c - cp.p_c) / cp.p_c < 0.1);
    CHECK(std::abs(fit.params.tau_c - cp.tau_c) / cp.tau_c < 0.1);
    CHECK(std::abs(fit.params.p_max - cp.p_max) / cp.p_max < 0.02);
    CHECK(fit.stderrors[0] > 0.0);
    CHECK(fit.stderrors[1] > 0.0);
    CHECK(fit.stderrors[2] > 0.0);
}

TEST_CASE("degenerate fits are rejected") {
    std::vector<FitPoint> flat;
    for (int n = 1; n <= 10; ++n) flat.push_back({double(n), 0.3, 1e-3});
    CHECK_THROWS_AS(fit_pulse_train(flat, 2.5e-6), ValidationError);

    std::vector<FitPoint> short_data = {{1, 0.3, 0}, {2, 0.2, 0}, {3, 0.1, 0}};
    CHECK_THROWS_AS(fit_pulse_train(short_data, 2.5e-6), ValidationError);
}

TEST_CASE("fit csv reader round trip and error paths") {
    namespace fs = std::filesystem;
    const auto path = fs::temp_directory_path() / "fit_points.csv";
    {
        std::ofstream out(path);
        out << "pulse_index,success_rate,stderr\n1,0.34,0.001\n2,0.335,0.001\n";
    }
    const auto points = read_fit_csv(path.string());
    REQUIRE(points.size() == 2);
    CHECK(points[1].pulse_index == doctest::Approx(2.0));
    CHECK(points[1].success_rate == doctest::Approx(0.335));
    {
        std::ofstream out(path);
        out << "wrong,header\n";
    }
    CHECK_THROWS_AS(read_fit_csv(path.string()), ParseError);
    fs::remove(path);
    CHECK_THROWS_AS(read_fit_csv(path.string()), IoError);
}

TEST_CASE("parameter validation") {
    auto cp = reference_cp();
    CHECK_NOTHROW(cp.validate());
    cp.p_c = 1.5;
    CHECK_THROWS_AS(cp.validate(), ValidationError);
    cp = reference_cp();
    cp.tau_c = 0.0;
    CHECK_THROWS_AS(cp.validate(), ValidationError);
}
