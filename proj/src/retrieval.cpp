#include "sps/retrieval.hpp"

#include <cmath>

#include "sps/numerics.hpp"

namespace sps {

void RetrievalParams::validate() const {
    if (!(d > 0.0)) throw ValidationError("retrieval: d must be > 0");
    if (x_s < 0.0) throw ValidationError("retrieval: x_s must be >= 0");
    if (!(f_xs > 0.0 && f_xs <= 1.0))
        throw ValidationError("retrieval: f(x_s) must be in (0, 1]");
    const double expected = 2.0 / (2.0 + x_s * (1.0 + delta_tilde * delta_tilde));
    if (std::abs(f_xs - expected) > 1e-12)
        throw ValidationError("retrieval: f(x_s) inconsistent with x_s");
}

RetrievalParams dimensionless_params(const PhysicalParams& p) {
    if (!(p.gamma_ge > 0.0))
        throw ValidationError("dimensionless_params: gamma_ge must be > 0");
    if (!(p.omega_c_ret > 0.0))
        throw ValidationError("dimensionless_params: omega_c_ret must be > 0");
    RetrievalParams rp;
    rp.d = p.od / 2.0;
    rp.delta_tilde = 2.0 * p.delta_ret / p.gamma_ge;
    rp.omega_tilde = p.omega_c_ret / p.gamma_ge;
    rp.gamma_s_tilde = (p.gamma_gr + p.gamma_cr) / p.gamma_ge;
    rp.x_s = 2.0 * rp.gamma_s_tilde / (rp.omega_tilde * rp.omega_tilde);
    rp.f_xs = 2.0 / (2.0 + rp.x_s * (1.0 + rp.delta_tilde * rp.delta_tilde));
    rp.validate();
    return rp;
}

SpinWaveProfile SpinWaveProfile::uniform(double amplitude) {
    SpinWaveProfile profile;
    profile.values = {amplitude, amplitude};
    return profile;
}

double SpinWaveProfile::operator()(double z) const {
    if (values.size() < 2)
        throw ValidationError("spin-wave profile needs >= 2 samples");
    if (z <= 0.0) return values.front();
    if (z >= 1.0) return values.back();
    const double pos = z * double(values.size() - 1);
    const std::size_t i = static_cast<std::size_t>(pos);
    const double w = pos - double(i);
    return (1.0 - w) * values[i] + w * values[i + 1];
}

std::complex<double> kernel(double zbar, double zbar_prime,
                            const RetrievalParams& rp) {
    if (zbar < 0.0 || zbar > 1.0 || zbar_prime < 0.0 || zbar_prime > 1.0)
        throw ValidationError("kernel arguments must lie in [0, 1]");
    const double a = 0.5 * rp.d * rp.f_xs;
    const double bessel_arg = rp.d * rp.f_xs * std::sqrt(zbar * zbar_prime);
    // fold the e^{+arg} of the scaled Bessel into the kernel exponent; the
    // combined real exponent is <= 0 by AM-GM, so no overflow at large d
    const double real_exp =
        -a * (1.0 + rp.x_s) * (zbar + zbar_prime) + bessel_arg;
    const double imag_exp = -a * rp.x_s * rp.delta_tilde * (zbar_prime - zbar);
    return a * i0_scaled(bessel_arg) * std::exp(real_exp) *
           std::exp(std::complex<double>(0.0, imag_exp));
}

RetrievalResult retrieval_efficiency(const SpinWaveProfile& profile,
                                     const RetrievalParams& rp,
                                     double rel_tol) {
    rp.validate();
    auto inner = [&](double zbar) {
        return adaptive_quad_complex(
                   [&](double zbar_prime) {
                       return kernel(zbar, zbar_prime, rp) *
                              profile(1.0 - zbar_prime);
                   },
                   0.0, 1.0, rel_tol * 0.1, 1e-15)
            .value;
    };
    auto outer = adaptive_quad_complex(
        [&](double zbar) { return inner(zbar) * profile(1.0 - zbar); }, 0.0,
        1.0, rel_tol, 1e-14);

    RetrievalResult result;
    result.eta_r = outer.value.real();
    result.imag_residual = std::abs(outer.value.imag());
    if (result.eta_r > 1e-12 &&
        result.imag_residual > 1e-8 * std::abs(result.eta_r))
        throw NumericalError(
            "retrieval efficiency: imaginary residue exceeds 1e-8 of result");
    if (result.eta_r < -1e-8 || result.eta_r > 1.0 + 1e-8)
        throw NumericalError("retrieval efficiency outside [0, 1]");
    return result;
}

std::complex<double> field_envelope(double t_tilde,
                                    const SpinWaveProfile& profile,
                                    const RetrievalParams& rp) {
    if (t_tilde < 0.0)
        throw ValidationError("field_envelope: t_tilde must be >= 0");
    if (rp.omega_tilde == 0.0) return 0.0;
    const std::complex<double> den(1.0, rp.delta_tilde);
    const double h = rp.omega_tilde * rp.omega_tilde * t_tilde;
    auto integrand = [&](double z) {
        const std::complex<double> arg =
            2.0 * std::sqrt(h * rp.d * z) / den;
        return std::exp(-(h + rp.d * z) / den) * i0_complex(arg) *
               profile(1.0 - z) / den;
    };
    auto integral = adaptive_quad_complex(integrand, 0.0, 1.0, 1e-10, 1e-16);
    return -std::sqrt(rp.d) * rp.omega_tilde *
           std::exp(-rp.gamma_s_tilde * t_tilde) * integral.value;
}

double field_envelope_efficiency(const SpinWaveProfile& profile,
                                 const RetrievalParams& rp) {
    rp.validate();
    const double omega_sq =
        std::max(rp.omega_tilde * rp.omega_tilde, 1e-300);
    // characteristic (dimensionless) retrieval duration
    const double block = std::max(
        1.0, 0.25 * rp.d * (1.0 + rp.delta_tilde * rp.delta_tilde) /
                 (rp.f_xs * omega_sq));
    double total = 0.0;
    double t = 0.0;
    auto power = [&](double time) {
        const std::complex<double> e = field_envelope(time, profile, rp);
        return std::norm(e);
    };
    double peak = power(0.0);
    for (int iteration = 0; iteration < 4000; ++iteration) {
        auto piece = adaptive_quad(power, t, t + block, 1e-9, 1e-16);
        total += piece.value;
        peak = std::max(peak, power(t + 0.5 * block));
        t += block;
        const double tail = power(t);
        peak = std::max(peak, tail);
        if (tail < 1e-12 * std::max(peak, 1e-300) &&
            std::abs(piece.value) < 1e-10 * std::max(total, 1e-300))
            return total;
    }
    throw NumericalError(
        "field envelope efficiency: time integral did not truncate");
}

double generation_probability(double eta_w, double eta_s, double eta_r) {
    for (double v : {eta_w, eta_s, eta_r}) {
        if (v < 0.0 || v > 1.0)
            throw ValidationError(
                "generation_probability: efficiencies must lie in [0, 1]");
    }
    return eta_w * eta_s * eta_r;
}

}  // namespace sps
