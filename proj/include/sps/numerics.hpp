#pragma once

#include <complex>
#include <cstdint>
#include <functional>

namespace sps {

/// exp(-x) * I0(x) for x >= 0. Series below x=30, asymptotic expansion above;
/// no overflow for any x.
double i0_scaled(double x);

/// I0 of the first kind at real argument. Overflows past x ~ 700.
double i0(double x);

/// I0 at complex argument via power series; term cap 200, ratio stop 1e-16.
/// Throws NumericalError if the cap is hit before convergence.
std::complex<double> i0_complex(std::complex<double> z);

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
};

/// Adaptive Gauss-Kronrod (G7, K15) on [a, b].
QuadResult adaptive_quad(const std::function<double(double)>& f, double a,
                         double b, double rel_tol = 1e-10,
                         double abs_tol = 1e-14, int max_depth = 40);

struct ComplexQuadResult {
    std::complex<double> value{0.0, 0.0};
    double error = 0.0;
    int evaluations = 0;
};

ComplexQuadResult adaptive_quad_complex(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    double rel_tol = 1e-10, double abs_tol = 1e-14, int max_depth = 40);

/// SplitMix64 step; used to derive independent RNG streams from one seed.
std::uint64_t splitmix64(std::uint64_t& state);

/// Stable per-subsystem seed derivation: seed + stream id -> 64-bit seed.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t stream_id);

}  // namespace sps
