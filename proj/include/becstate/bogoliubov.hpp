#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "becstate/lattice.hpp"
#include "becstate/meanfield.hpp"

namespace becstate {

/// One k != 0 quasiparticle: delta Psi contains b_k u_k(x) - b_k^dagger v_k^*(x).
struct BogoliubovMode {
  std::size_t label = 0;  ///< lattice mode index (homogeneous) or energy rank (numerical)
  double energy = 0.0;    ///< epsilon_k
  Field u;
  Field v;
};

/// Condensate-mode pair. u0 = (psi0 + Phi0)/2, v0 = (psi0 - Phi0)/2.
struct ZeroMode {
  Field psi0;
  Field phi0;
  double alpha = 0.0;

  Field u() const { return 0.5 * (psi0 + phi0); }
  Field v() const { return 0.5 * (psi0 - phi0); }
};

/// Closed-form coefficients indexed by lattice mode (entry 0 is the condensate mode:
/// E = eps = 0, u = 1, v = 0).
struct HomogeneousCoefficients {
  double n0 = 0.0;
  double g_over_volume = 0.0;
  std::vector<double> kinetic;
  std::vector<double> energy;
  std::vector<double> u;
  std::vector<double> v;
};

/// Complete set of Bogoliubov modes including the condensate mode.
struct ModeSet {
  std::vector<BogoliubovMode> modes;
  ZeroMode zero_mode;
  Field condensate_modes;  ///< free-field amplitudes alpha^(0)_k of Psi0
  std::optional<HomogeneousCoefficients> homogeneous;
  /// Projections onto the free-field modes: u_proj(k, q) = int u_k^(0)* u_q,
  /// v_proj(k, q) = int u_k^(0) v_q. Column 0 is the condensate mode, column q >= 1 is modes[q-1].
  Eigen::MatrixXcd u_proj;
  Eigen::MatrixXcd v_proj;

  std::size_t lattice_size() const { return static_cast<std::size_t>(condensate_modes.size()); }
  bool has_projections() const { return u_proj.size() != 0; }
  /// True when the k != 0 modes together with the zero mode span the whole lattice.
  bool complete() const { return modes.size() + 1 == lattice_size(); }
};

/// Closed-form modes of the uniform gas. Throws ConfigError for n0 <= 0.
ModeSet homogeneous_modes(const SystemParams& params, const Lattice& lattice, double n0_uniform);

/// Numerical solution of the Bogoliubov-de Gennes problem around a converged condensate.
///
/// Keeps the n_modes lowest positive-energy pairs, normalised to int(|u|^2 - |v|^2) = 1,
/// and replaces the zero-energy pair with solve_zero_mode(). Throws SolverError when a
/// retained energy would be complex beyond tol or the decomposition fails.
ModeSet solve_bdg(const SystemParams& params, const Lattice& lattice, const CondensateSolution& condensate,
                  std::size_t n_modes, double tol);

/// psi0 = Psi0/sqrt(N0), Phi0 from (H_e + g n0) Phi0 = 2 alpha psi0 with
/// int(psi0 Phi0* + psi0* Phi0) = 2 fixing alpha.
ZeroMode solve_zero_mode(const SystemParams& params, const Lattice& lattice, const CondensateSolution& condensate,
                         double tol);

/// mu2 = alpha / N0 (taken as g/V exactly for a homogeneous set); also stores alpha, mu2 and mu1 = mu_e - mu2 N0 in the condensate.
double nonlinear_mu2(const ModeSet& modeset, CondensateSolution& condensate);

/// Fills u_proj / v_proj from the mode functions.
void attach_projections(ModeSet& modeset, const Lattice& lattice);

/// int (u_a* u_b - v_a* v_b) dx and int (u_a v_b - v_a u_b) dx.
cplx symplectic_product(const Field& ua, const Field& va, const Field& ub, const Field& vb, double dv);
cplx symplectic_cross(const Field& ua, const Field& va, const Field& ub, const Field& vb, double dv);

}  // namespace becstate
