#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "becstate/lattice.hpp"

namespace becstate {

/// Physical parameters of the Bose gas. Energies, hbar and mass share one unit system.
struct SystemParams {
  double g = 0.0;                 ///< contact interaction strength (energy * volume)
  double mass = 1.0;
  double hbar = 1.0;
  Eigen::VectorXd potential;      ///< U(x) on the lattice; empty means U = 0
  double n_target = 0.0;          ///< desired mean total particle number

  /// Throws ConfigError on g <= 0 (unless allow_free), non-positive mass/hbar,
  /// non-finite or mis-sized potential.
  void validate(const Lattice& lattice, bool allow_free = false) const;
  bool homogeneous() const;
  double potential_at(std::size_t i) const { return potential.size() ? potential[static_cast<Eigen::Index>(i)] : 0.0; }
  /// hbar^2 k^2 / 2m for every lattice mode.
  Eigen::VectorXd kinetic_energies(const Lattice& lattice) const;
};

/// Stationary condensate Psi0 with its chemical-potential bookkeeping.
///
/// mu_e = mu1 + mu2 * N0 always holds for the stored values. mu2 and alpha stay
/// zero until nonlinear_mu2() fills them in.
struct CondensateSolution {
  Field psi0;
  Eigen::VectorXd density;
  double n0_total = 0.0;
  double mu_e = 0.0;
  double mu1 = 0.0;
  double mu2 = 0.0;
  double alpha = 0.0;
  double residual = 0.0;  ///< ||(H - mu_e) Psi0|| / ||H Psi0|| at exit
  int iterations = 0;
};

/// Dense real matrix of the kinetic operator -hbar^2 nabla^2 / 2m acting on grid values,
/// using the spectral (exact in mode space) Laplacian.
Eigen::MatrixXd kinetic_matrix(const SystemParams& params, const Lattice& lattice);

/// Applies the effective single-particle operator K + U + g|psi|^2 to psi.
Field apply_single_particle(const SystemParams& params, const Lattice& lattice, const Field& psi,
                            SpectralTransform& transform);

/// Solves H Psi0 = mu_e Psi0 with sum |Psi0|^2 dV = n0_guess.
///
/// Imaginary-time relaxation with norm rescaling brings the field near the ground
/// state; a Newton polish then drives the residual below tol. For U = 0 the uniform
/// solution is returned directly. Throws ConfigError for n0_guess <= 0 or tol <= 0 and
/// SolverError on non-convergence.
CondensateSolution solve_stationary(const SystemParams& params, const Lattice& lattice,
                                    double n0_guess, double tol);

}  // namespace becstate
