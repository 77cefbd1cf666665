#include "sps/numerics.hpp"

#include <cmath>
#include <numbers>

#include "sps/core.hpp"

namespace sps {

namespace {

// Gauss-Kronrod 7-15 nodes and weights (non-negative abscissae).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename Value>
struct GkEstimate {
    Value integral{};
    double error = 0.0;
};

template <typename Value, typename Func>
GkEstimate<Value> gk15(const Func& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    Value fc = f(center);
    Value result_kronrod = fc * kWgk[7];
    Value result_gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        Value f1 = f(center - dx);
        Value f2 = f(center + dx);
        result_kronrod = result_kronrod + (f1 + f2) * kWgk[j];
        if (j % 2 == 1)
            result_gauss = result_gauss + (f1 + f2) * kWg[j / 2];
    }
    GkEstimate<Value> est;
    est.integral = result_kronrod * half;
    est.error = std::abs(std::abs(result_kronrod - result_gauss)) *
                std::abs(half);
    return est;
}

template <typename Value, typename Func>
void adapt(const Func& f, double a, double b, double tol, int depth,
           int max_depth, Value& total, double& total_err, int& evals) {
    auto est = gk15<Value>(f, a, b);
    evals += 15;
    if (est.error <= tol || depth >= max_depth) {
        if (depth >= max_depth && est.error > tol * 16.0)
            throw NumericalError(
                "adaptive quadrature: max refinement reached without "
                "convergence");
        total = total + est.integral;
        total_err += est.error;
        return;
    }
    const double mid = 0.5 * (a + b);
    adapt<Value>(f, a, mid, 0.5 * tol, depth + 1, max_depth, total, total_err,
                 evals);
    adapt<Value>(f, mid, b, 0.5 * tol, depth + 1, max_depth, total, total_err,
                 evals);
}

}  // namespace

QuadResult adaptive_quad(const std::function<double(double)>& f, double a,
                         double b, double rel_tol, double abs_tol,
                         int max_depth) {
    auto coarse = gk15<double>(f, a, b);
    double tol = std::max(abs_tol, rel_tol * std::abs(coarse.integral));
    QuadResult result;
    result.evaluations = 15;
    adapt<double>(f, a, b, std::max(tol, 1e-300), 0, max_depth, result.value,
                  result.error, result.evaluations);
    return result;
}

ComplexQuadResult adaptive_quad_complex(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    double rel_tol, double abs_tol, int max_depth) {
    auto coarse = gk15<std::complex<double>>(f, a, b);
    double tol = std::max(abs_tol, rel_tol * std::abs(coarse.integral));
    ComplexQuadResult result;
    result.evaluations = 15;
    adapt<std::complex<double>>(f, a, b, std::max(tol, 1e-300), 0, max_depth,
                                result.value, result.error,
                                result.evaluations);
    return result;
}

double i0_scaled(double x) {
    if (x < 0.0) throw NumericalError("i0_scaled: negative argument");
    if (x <= 30.0) {
        // plain power series, all terms positive
        double term = 1.0, sum = 1.0;
        const double q = 0.25 * x * x;
        for (int k = 1; k < 200; ++k) {
            term *= q / (double(k) * double(k));
            sum += term;
            if (term < 1e-18 * sum) break;
        }
        return sum * std::exp(-x);
    }
    // asymptotic expansion of e^{-x} I0(x); terms decrease well past the
    // needed accuracy for x > 30
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 40; ++k) {
        const double num = (2.0 * k - 1.0) * (2.0 * k - 1.0);
        double next = term * num / (8.0 * k * x);
        if (next >= term) break;  // divergent tail
        term = next;
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

double i0(double x) {
    x = std::abs(x);
    return i0_scaled(x) * std::exp(x);
}

std::complex<double> i0_complex(std::complex<double> z) {
    std::complex<double> term = 1.0, sum = 1.0;
    const std::complex<double> q = 0.25 * z * z;
    for (int k = 1; k <= 200; ++k) {
        term *= q / (double(k) * double(k));
        sum += term;
        if (std::abs(term) < 1e-16 * std::abs(sum)) return sum;
    }
    throw NumericalError("i0_complex: series did not converge within 200 terms");
}

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t stream_id) {
    std::uint64_t state = master_seed ^ (0xa0761d6478bd642fULL * (stream_id + 1));
    std::uint64_t s = splitmix64(state);
    return splitmix64(state) ^ s;
}

}  // namespace sps
