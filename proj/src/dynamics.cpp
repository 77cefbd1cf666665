#include "sps/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <fstream>

namespace sps {

Matrix4c hamiltonian(const PhysicalParams& p, Stage stage) {
    const double drive = (stage == Stage::Write) ? 1.0 : 0.0;
    const double sqrt_n = std::sqrt(p.n_collective);
    Matrix4c h = Matrix4c::Zero();
    h(0, 1) = h(1, 0) = 0.5 * sqrt_n * p.omega_p * drive;
    h(1, 2) = h(2, 1) = 0.5 * p.omega_c_write * drive;
    h(1, 1) = -p.delta_p;
    h(2, 2) = -p.delta_2ph;
    return h;
}

Matrix4c lindblad_rhs(const Matrix4c& hamil, const Matrix4c& rho,
                      const PhysicalParams& p) {
    const std::complex<double> i_unit(0.0, 1.0);
    Matrix4c d = -i_unit * (hamil * rho - rho * hamil);

    // Jump operators are single matrix elements; write the dissipators out
    // directly instead of building the operator products.
    struct Decay {
        int from, to;
        double gamma;
    };
    const Decay decays[] = {{1, 0, p.gamma_ge},
                            {2, 0, p.gamma_gr},
                            {2, 3, p.gamma_cr},
                            {3, 0, p.gamma_gc}};
    for (const Decay& dec : decays) {
        if (dec.gamma == 0.0) continue;
        d(dec.to, dec.to) += dec.gamma * rho(dec.from, dec.from);
        for (int k = 0; k < 4; ++k) {
            d(dec.from, k) -= 0.5 * dec.gamma * rho(dec.from, k);
            d(k, dec.from) -= 0.5 * dec.gamma * rho(k, dec.from);
        }
    }
    return d;
}

void check_density_matrix(const Matrix4c& rho) {
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw ValidationError("density matrix is not Hermitian within 1e-10");
    if (std::abs(rho.trace().real() - 1.0) > 1e-8 ||
        std::abs(rho.trace().imag()) > 1e-8)
        throw ValidationError("density matrix trace differs from 1 by > 1e-8");
    Eigen::SelfAdjointEigenSolver<Matrix4c> solver(rho);
    if (solver.eigenvalues().minCoeff() < -1e-8)
        throw ValidationError("density matrix has eigenvalue < -1e-8");
}

Matrix4c ground_state() {
    Matrix4c rho = Matrix4c::Zero();
    rho(0, 0) = 1.0;
    return rho;
}

double Trajectory::rho_rr(double t) const {
    return rho_at(t)(2, 2).real();
}

Matrix4c Trajectory::rho_at(double t) const {
    if (samples.empty()) throw ValidationError("empty trajectory");
    if (t <= samples.front().t) return samples.front().rho;
    if (t >= samples.back().t) {
        if (t > samples.back().t * (1.0 + 1e-9) + 1e-15)
            throw ValidationError("trajectory too short for requested time");
        return samples.back().rho;
    }
    auto it = std::lower_bound(
        samples.begin(), samples.end(), t,
        [](const TrajectorySample& s, double time) { return s.t < time; });
    const TrajectorySample& hi = *it;
    const TrajectorySample& lo = *(it - 1);
    const double w = (t - lo.t) / (hi.t - lo.t);
    return (1.0 - w) * lo.rho + w * hi.rho;
}

void Trajectory::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out.precision(12);
    out << "time_s,rho_gg,rho_ee,rho_rr,rho_cc,trace\n";
    for (const TrajectorySample& s : samples) {
        out << s.t << ',' << s.rho(0, 0).real() << ',' << s.rho(1, 1).real()
            << ',' << s.rho(2, 2).real() << ',' << s.rho(3, 3).real() << ','
            << s.rho.trace().real() << '\n';
    }
}

namespace {

// Dormand-Prince 5(4) with FSAL.
struct Dopri5 {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113,
                            b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                            e3 = 500.0 / 1113 - 7571.0 / 16695,
                            e4 = 125.0 / 192 - 393.0 / 640,
                            e5 = -2187.0 / 6784 + 92097.0 / 339200,
                            e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
};

double error_norm(const Matrix4c& err, const Matrix4c& y0, const Matrix4c& y1,
                  double rtol, double atol) {
    double acc = 0.0;
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            const double scale =
                atol + rtol * std::max(std::abs(y0(r, c)), std::abs(y1(r, c)));
            const double ratio = std::abs(err(r, c)) / scale;
            acc += ratio * ratio;
        }
    }
    return std::sqrt(acc / 16.0);
}

// Integrates one stage with a fixed Hamiltonian, appending samples.
void integrate_stage(Trajectory& traj, Matrix4c rho, const Matrix4c& hamil,
                     const PhysicalParams& params, double t0, double t1,
                     const IntegratorOptions& opts) {
    using D = Dopri5;
    auto f = [&](const Matrix4c& y) { return lindblad_rhs(hamil, y, params); };

    const double span = t1 - t0;
    double t = t0;
    double h = span / 1000.0;
    Matrix4c k1 = f(rho);
    int rejected_in_a_row = 0;
    while (t < t1) {
        if (t + h > t1) h = t1 - t;
        if (h < span * 1e-14)
            throw NumericalError("integrator step size underflow at t = " +
                                 std::to_string(t));
        Matrix4c k2 = f(rho + h * (D::a21 * k1));
        Matrix4c k3 = f(rho + h * (D::a31 * k1 + D::a32 * k2));
        Matrix4c k4 = f(rho + h * (D::a41 * k1 + D::a42 * k2 + D::a43 * k3));
        Matrix4c k5 = f(rho + h * (D::a51 * k1 + D::a52 * k2 + D::a53 * k3 +
                                   D::a54 * k4));
        Matrix4c k6 = f(rho + h * (D::a61 * k1 + D::a62 * k2 + D::a63 * k3 +
                                   D::a64 * k4 + D::a65 * k5));
        Matrix4c y_next = rho + h * (D::b1 * k1 + D::b3 * k3 + D::b4 * k4 +
                                     D::b5 * k5 + D::b6 * k6);
        Matrix4c k7 = f(y_next);
        Matrix4c err = h * (D::e1 * k1 + D::e3 * k3 + D::e4 * k4 + D::e5 * k5 +
                            D::e6 * k6 + D::e7 * k7);
        const double norm =
            error_norm(err, rho, y_next, opts.rel_tol, opts.abs_tol);
        if (norm <= 1.0) {
            t += h;
            rho = 0.5 * (y_next + y_next.adjoint().eval());  // re-Hermitize
            k1 = k7;
            traj.samples.push_back({t, rho});
            rejected_in_a_row = 0;
        } else if (++rejected_in_a_row > 200) {
            throw NumericalError("integrator failed to converge at t = " +
                                 std::to_string(t));
        }
        const double factor =
            0.9 * std::pow(std::max(norm, 1e-10), -0.2);
        h *= std::min(5.0, std::max(0.2, factor));
    }
}

}  // namespace

Trajectory evolve(const Matrix4c& rho0, const PhysicalParams& params,
                  const PulseSchedule& schedule,
                  const IntegratorOptions& opts) {
    check_density_matrix(rho0);
    Trajectory traj;
    traj.samples.push_back({0.0, rho0});
    integrate_stage(traj, rho0, hamiltonian(params, Stage::Write), params, 0.0,
                    schedule.t_w, opts);
    const Matrix4c at_tw = traj.samples.back().rho;
    integrate_stage(traj, at_tw, hamiltonian(params, Stage::Store), params,
                    schedule.t_w, schedule.t_w + schedule.t_s, opts);
    return traj;
}

double write_efficiency(const Trajectory& traj, double t_w) {
    if (traj.t_final() < t_w * (1.0 - 1e-9))
        throw ValidationError("trajectory does not span the write time");
    return traj.rho_rr(t_w);
}

double storage_efficiency(const Trajectory& traj, double t_w, double t_s) {
    if (traj.t_final() < (t_w + t_s) * (1.0 - 1e-9))
        throw ValidationError("trajectory does not span write + store");
    const double at_write = traj.rho_rr(t_w);
    if (at_write < 1e-12)
        throw NumericalError(
            "storage efficiency undefined: rho_rr(t_w) below 1e-12");
    return traj.rho_rr(t_w + t_s) / at_write;
}

}  // namespace sps
