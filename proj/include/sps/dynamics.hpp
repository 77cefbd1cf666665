#pragma once

#include <Eigen/Dense>
#include <vector>

#include "sps/core.hpp"

// Four-level Lindblad master equation for the collective write and storage
// stages, basis (|g>, |e>, |r>, |c>). Produces the write efficiency
// eta_w = rho_rr(t_w) and the storage efficiency rho_rr(t_w+t_s)/rho_rr(t_w).

namespace sps {

using Matrix4c = Eigen::Matrix4cd;

enum class Stage { Write, Store };

/// H = (hbar/2) * [[0, sqrt(N) Op, 0, 0], [sqrt(N) Op, -2 Dp, Oc, 0],
///                 [0, Oc, -2 delta, 0], [0, 0, 0, 0]]  (hbar = 1).
/// Store stage sets both drives to zero.
Matrix4c hamiltonian(const PhysicalParams& params, Stage stage);

/// Lindblad right-hand side with the four jump operators
/// C1 = sqrt(gamma_ge)|g><e|, C2 = sqrt(gamma_gr)|g><r|,
/// C3 = sqrt(gamma_cr)|c><r|, C4 = sqrt(gamma_gc)|g><c|.
Matrix4c lindblad_rhs(const Matrix4c& hamil, const Matrix4c& rho,
                      const PhysicalParams& params);

struct TrajectorySample {
    double t = 0.0;
    Matrix4c rho;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;

    double t_final() const { return samples.back().t; }
    /// Linear interpolation of rho_rr between stored samples.
    double rho_rr(double t) const;
    Matrix4c rho_at(double t) const;

    void write_csv(const std::string& path) const;
};

struct IntegratorOptions {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
};

/// Checks Hermiticity (1e-10), unit trace (1e-8), eigenvalues >= -1e-8.
void check_density_matrix(const Matrix4c& rho);

/// Ground-state density matrix |g><g|.
Matrix4c ground_state();

/// Evolves rho0 over [0, t_w + t_s]: write Hamiltonian until t_w, then the
/// drive-free store Hamiltonian. All dissipators act throughout. Adaptive
/// Dormand-Prince 5(4); rho is re-Hermitized after every accepted step.
Trajectory evolve(const Matrix4c& rho0, const PhysicalParams& params,
                  const PulseSchedule& schedule,
                  const IntegratorOptions& opts = {});

double write_efficiency(const Trajectory& traj, double t_w);
double storage_efficiency(const Trajectory& traj, double t_w, double t_s);

}  // namespace sps
