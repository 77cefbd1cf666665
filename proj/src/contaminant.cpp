#include "sps/contaminant.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sps/core.hpp"

namespace sps {

double ContaminantParams::survival() const { return std::exp(-t_p / tau_c); }

void ContaminantParams::validate() const {
    if (p_c < 0.0 || p_c > 1.0)
        throw ValidationError("contaminant: p_c must be in [0, 1]");
    if (!(tau_c > 0.0)) throw ValidationError("contaminant: tau_c must be > 0");
    if (p_max < 0.0 || p_max > 1.0)
        throw ValidationError("contaminant: p_max must be in [0, 1]");
    if (!(t_p > 0.0)) throw ValidationError("contaminant: t_p must be > 0");
    if (std::abs(survival() - p_c) >= 1.0)
        throw ValidationError(
            "contaminant: |exp(-t_p/tau_c) - p_c| must be < 1");
}

double presence_prob(std::int64_t n, const ContaminantParams& cp) {
    if (n < 1) throw ValidationError("presence_prob: pulse index must be >= 1");
    const double e = cp.survival();
    const double q = e - cp.p_c;
    return cp.p_c * (1.0 - std::pow(q, double(n))) / (1.0 - e + cp.p_c);
}

double photon_prob(std::int64_t n, const ContaminantParams& cp) {
    return cp.p_max * (1.0 - presence_prob(n, cp));
}

double steady_state(const ContaminantParams& cp) {
    const double e = cp.survival();
    return cp.p_max * (1.0 - cp.p_c / (1.0 - e + cp.p_c));
}

double pulse_autocorrelation(std::int64_t m, const ContaminantParams& cp) {
    if (m == 0)
        throw ValidationError("pulse_autocorrelation: m must be nonzero");
    const double e = cp.survival();
    const double q = e - cp.p_c;
    const double lag = double(m < 0 ? -m : m);
    return 1.0 + cp.p_c * std::pow(q, lag) / (1.0 - e);
}

double creation_linear_model(double t_s, double rate, double density_scale) {
    if (t_s < 0.0)
        throw ValidationError("creation_linear_model: t_s must be >= 0");
    return std::clamp(rate * t_s * density_scale, 0.0, 1.0);
}

namespace {

// Model in fit coordinates theta = (p_c, log tau_c, p_max).
double model(double n, const Eigen::Vector3d& theta, double t_p) {
    ContaminantParams cp;
    cp.p_c = theta[0];
    cp.tau_c = std::exp(theta[1]);
    cp.p_max = theta[2];
    cp.t_p = t_p;
    const double e = cp.survival();
    const double q = e - cp.p_c;
    const double pn = cp.p_c * (1.0 - std::pow(q, n)) / (1.0 - e + cp.p_c);
    return cp.p_max * (1.0 - pn);
}

struct LmProblem {
    std::span<const FitPoint> data;
    double t_p;
    std::vector<double> weights;

    Eigen::VectorXd residuals(const Eigen::Vector3d& theta) const {
        Eigen::VectorXd r(data.size());
        for (std::size_t i = 0; i < data.size(); ++i)
            r[i] = std::sqrt(weights[i]) *
                   (data[i].success_rate -
                    model(data[i].pulse_index, theta, t_p));
        return r;
    }

    Eigen::MatrixX3d jacobian(const Eigen::Vector3d& theta) const {
        Eigen::MatrixX3d j(data.size(), 3);
        for (int p = 0; p < 3; ++p) {
            const double step = std::max(1e-7, 1e-7 * std::abs(theta[p]));
            Eigen::Vector3d plus = theta, minus = theta;
            plus[p] += step;
            minus[p] -= step;
            for (std::size_t i = 0; i < data.size(); ++i) {
                // residual Jacobian: d(sqrt(w)(y - f))/dtheta
                j(long(i), p) = std::sqrt(weights[i]) *
                                (model(data[i].pulse_index, minus, t_p) -
                                 model(data[i].pulse_index, plus, t_p)) /
                                (2.0 * step);
            }
        }
        return j;
    }
};

struct LmOutcome {
    Eigen::Vector3d theta;
    double cost = 0.0;
    int iterations = 0;
    bool converged = false;
};

LmOutcome levenberg_marquardt(const LmProblem& problem, Eigen::Vector3d theta,
                              const FitOptions& opts) {
    double lambda = 1e-3;
    Eigen::VectorXd r = problem.residuals(theta);
    double cost = r.squaredNorm();
    LmOutcome out;
    for (int iter = 0; iter < opts.max_iterations; ++iter) {
        out.iterations = iter + 1;
        Eigen::MatrixX3d j = problem.jacobian(theta);
        Eigen::Matrix3d jtj = j.transpose() * j;
        Eigen::Vector3d g = j.transpose() * r;
        bool stepped = false;
        for (int attempt = 0; attempt < 30; ++attempt) {
            Eigen::Matrix3d damped = jtj;
            damped.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-12);
            Eigen::Vector3d delta = damped.ldlt().solve(-g);
            Eigen::Vector3d candidate = theta + delta;
            candidate[0] = std::clamp(candidate[0], 0.0, 1.0);
            candidate[2] = std::clamp(candidate[2], 0.0, 1.0);
            Eigen::VectorXd r_new = problem.residuals(candidate);
            const double cost_new = r_new.squaredNorm();
            if (cost_new < cost) {
                const double improvement = (cost - cost_new) / std::max(cost, 1e-300);
                theta = candidate;
                r = std::move(r_new);
                cost = cost_new;
                lambda = std::max(lambda * 0.1, 1e-14);
                stepped = true;
                if (improvement < opts.tolerance) {
                    out.converged = true;
                }
                break;
            }
            lambda *= 10.0;
            if (lambda > 1e14) break;
        }
        if (!stepped) {
            out.converged = true;  // no downhill step available
            break;
        }
        if (out.converged) break;
    }
    out.theta = theta;
    out.cost = cost;
    return out;
}

}  // namespace

FitResult fit_pulse_train(std::span<const FitPoint> data, double t_p,
                          const FitOptions& opts) {
    if (data.size() < 5)
        throw ValidationError(
            "fit_pulse_train: need at least 5 distinct pulse indices");
    double lo = data.front().success_rate, hi = lo;
    for (const FitPoint& point : data) {
        if (point.success_rate < 0.0 || point.success_rate > 1.0)
            throw ValidationError("fit_pulse_train: rates must be in [0, 1]");
        lo = std::min(lo, point.success_rate);
        hi = std::max(hi, point.success_rate);
    }
    if (hi - lo < 1e-12)
        throw ValidationError(
            "fit_pulse_train: constant counts, tau_c is unidentifiable");

    LmProblem problem{data, t_p, {}};
    problem.weights.resize(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double sigma = data[i].stderr_;
        problem.weights[i] =
            (opts.weighted && sigma > 0.0) ? 1.0 / (sigma * sigma) : 1.0;
    }

    // initial guesses from the data shape
    const double p_max0 = std::clamp(hi, 1e-6, 1.0);
    const double p_c0 =
        std::clamp(1.0 - lo / std::max(p_max0, 1e-12), 1e-4, 0.5);

    LmOutcome best;
    best.cost = std::numeric_limits<double>::infinity();
    for (int s = 0; s < opts.n_starts; ++s) {
        // log-spaced tau_c starts spanning ~4 decades around t_p
        const double tau0 = t_p * std::pow(10.0, 0.5 + s);
        Eigen::Vector3d theta0(p_c0, std::log(tau0), p_max0);
        LmOutcome outcome = levenberg_marquardt(problem, theta0, opts);
        if (outcome.cost < best.cost - 1e-15 * std::abs(best.cost) ||
            !std::isfinite(best.cost)) {
            best = outcome;
        }
    }
    if (!best.converged)
        throw NumericalError("fit_pulse_train: no start converged");

    FitResult result;
    result.params.p_c = best.theta[0];
    result.params.tau_c = std::exp(best.theta[1]);
    result.params.p_max = best.theta[2];
    result.params.t_p = t_p;
    result.residual_norm = std::sqrt(best.cost);
    result.iterations = best.iterations;
    result.converged = best.converged;

    // covariance from the finite-difference Jacobian at the optimum,
    // scaled by the reduced chi-square; delta method maps log tau_c -> tau_c
    Eigen::MatrixX3d j = problem.jacobian(best.theta);
    Eigen::Matrix3d jtj = j.transpose() * j;
    const double dof = std::max<double>(1.0, double(data.size()) - 3.0);
    Eigen::Matrix3d cov = jtj.inverse() * (best.cost / dof);
    Eigen::Matrix3d scale = Eigen::Matrix3d::Identity();
    scale(1, 1) = result.params.tau_c;
    result.covariance = scale * cov * scale.transpose();
    for (int p = 0; p < 3; ++p)
        result.stderrors[p] = std::sqrt(std::max(0.0, result.covariance(p, p)));
    return result;
}

std::vector<FitPoint> read_fit_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line) ||
        line.rfind("pulse_index,success_rate,stderr", 0) != 0)
        throw ParseError(path +
                         ": missing pulse_index,success_rate,stderr header");
    std::vector<FitPoint> points;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        FitPoint point;
        try {
            std::getline(row, field, ',');
            point.pulse_index = std::stod(field);
            std::getline(row, field, ',');
            point.success_rate = std::stod(field);
            std::getline(row, field, ',');
            point.stderr_ = std::stod(field);
        } catch (const std::exception&) {
            throw ParseError(path + ": malformed record '" + line + "'");
        }
        points.push_back(point);
    }
    return points;
}

}  // namespace sps
