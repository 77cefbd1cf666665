#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

// Markov model of long-lived contaminant Rydberg states. A contaminant is
// created with probability p_c per pulse (when none is present), survives to
// the next pulse with probability exp(-t_p/tau_c), and blocks photon
// generation while present.

namespace sps {

struct ContaminantParams {
    double p_c = 0.0;    // per-pulse creation probability
    double tau_c = 1.0;  // contaminant lifetime, s
    double p_max = 1.0;  // contaminant-free generation probability
    double t_p = 1.0;    // pulse period, s

    double survival() const;  // exp(-t_p / tau_c)
    void validate() const;
};

/// Closed form for the contaminant presence probability at pulse n >= 1:
/// P_n = p_c (1 - (e^{-t_p/tau_c} - p_c)^n) / (1 - e^{-t_p/tau_c} + p_c).
double presence_prob(std::int64_t n, const ContaminantParams& cp);

/// P_g(n) = p_max (1 - P_n).
double photon_prob(std::int64_t n, const ContaminantParams& cp);

/// Steady-state generation probability (n -> infinity limit).
double steady_state(const ContaminantParams& cp);

/// Pulse-lag autocorrelation g2(|m| t_p) = 1 + p_c q^{|m|} / (1 - e^{-t_p/tau_c})
/// with q = e^{-t_p/tau_c} - p_c; m != 0.
double pulse_autocorrelation(std::int64_t m, const ContaminantParams& cp);

/// p_c = rate * t_s * density_scale, clamped to [0, 1].
double creation_linear_model(double t_s, double rate, double density_scale);

struct FitPoint {
    double pulse_index = 0.0;
    double success_rate = 0.0;
    double stderr_ = 0.0;  // 0 means unweighted
};

struct FitOptions {
    int max_iterations = 200;
    double tolerance = 1e-12;  // relative step/cost convergence
    bool weighted = true;
    int n_starts = 5;  // log-spaced tau_c multi-starts
};

struct FitResult {
    ContaminantParams params;
    Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();  // (p_c, tau_c, p_max)
    std::array<double, 3> stderrors{0.0, 0.0, 0.0};
    double residual_norm = 0.0;  // sqrt(weighted SSR) at the optimum
    int iterations = 0;
    bool converged = false;
};

/// Weighted Levenberg-Marquardt fit of (p_c, tau_c, p_max) to per-index
/// success rates; tau_c is fit as log(tau_c) to stay positive. Multi-start
/// over log-spaced tau_c; winner by lowest residual, lowest start index on
/// ties. Throws ValidationError on degenerate (constant) data.
FitResult fit_pulse_train(std::span<const FitPoint> data, double t_p,
                          const FitOptions& opts = {});

std::vector<FitPoint> read_fit_csv(const std::string& path);

}  // namespace sps
