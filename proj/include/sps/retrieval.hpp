#pragma once

#include <complex>
#include <vector>

#include "sps/core.hpp"

// Retrieval efficiency of a stored spin wave. Two equivalent routes are
// provided: the kernel double integral over the spin-wave profile, and the
// time-domain integral of the emitted field envelope; they must agree.

namespace sps {

struct RetrievalParams {
    double d = 0.0;            // OD / 2
    double delta_tilde = 0.0;  // 2 Delta / gamma_ge
    double omega_tilde = 0.0;  // Omega_c / gamma_ge
    double gamma_s_tilde = 0.0;  // (gamma_gr + gamma_cr) / gamma_ge
    double x_s = 0.0;          // 2 gamma_s_tilde / |omega_tilde|^2
    double f_xs = 1.0;         // 2 / (2 + x_s (1 + delta_tilde^2))

    void validate() const;
};

/// Derives the dimensionless retrieval parameters from the retrieval-stage
/// drive (omega_c_ret) and detuning (delta_ret).
RetrievalParams dimensionless_params(const PhysicalParams& params);

/// Spin-wave amplitude S(z) tabulated on [0, 1], linear interpolation.
struct SpinWaveProfile {
    std::vector<double> values;  // uniform grid over [0, 1], >= 2 points

    static SpinWaveProfile uniform(double amplitude = 1.0);
    double operator()(double z) const;
};

/// Retrieval kernel K_r(zbar, zbar'); Hermitian under argument swap.
/// The Bessel factor is evaluated in exponentially scaled form so large d
/// cannot overflow.
std::complex<double> kernel(double zbar, double zbar_prime,
                            const RetrievalParams& rp);

struct RetrievalResult {
    double eta_r = 0.0;
    double imag_residual = 0.0;  // |Im| of the double integral
};

/// eta_r = Re Int dz Int dz' K_r S(1-z) S*(1-z') over [0,1]^2.
RetrievalResult retrieval_efficiency(const SpinWaveProfile& profile,
                                     const RetrievalParams& rp,
                                     double rel_tol = 1e-8);

/// Emitted field amplitude at the cloud exit for a constant retrieval drive,
/// as a function of dimensionless time.
std::complex<double> field_envelope(double t_tilde,
                                    const SpinWaveProfile& profile,
                                    const RetrievalParams& rp);

/// Time-domain route: Int |E(1, t)|^2 dt, truncated once the integrand falls
/// below 1e-12 of its running peak.
double field_envelope_efficiency(const SpinWaveProfile& profile,
                                 const RetrievalParams& rp);

/// P_th = eta_w * eta_s * eta_r.
double generation_probability(double eta_w, double eta_s, double eta_r);

}  // namespace sps
