#include "becstate/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "becstate/errors.hpp"

namespace becstate {

void SystemParams::validate(const Lattice& lattice, bool allow_free) const {
  if (!std::isfinite(g) || g < 0.0 || (g == 0.0 && !allow_free)) {
    throw ConfigError("physics.g: interaction strength must be positive (repulsive interactions only)");
  }
  if (!(mass > 0.0) || !std::isfinite(mass)) throw ConfigError("physics.m: mass must be positive");
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw ConfigError("physics.hbar: hbar must be positive");
  if (potential.size() != 0) {
    if (static_cast<std::size_t>(potential.size()) != lattice.size()) {
      throw ConfigError("physics.potential: sampled potential size does not match the lattice");
    }
    if (!potential.allFinite()) throw ConfigError("physics.potential: potential must be finite");
  }
}

bool SystemParams::homogeneous() const {
  return potential.size() == 0 || potential.cwiseAbs().maxCoeff() == 0.0;
}

Eigen::VectorXd SystemParams::kinetic_energies(const Lattice& lattice) const {
  Eigen::VectorXd e(static_cast<Eigen::Index>(lattice.size()));
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    e[static_cast<Eigen::Index>(i)] = hbar * hbar * lattice.k_squared(i) / (2.0 * mass);
  }
  return e;
}

Eigen::MatrixXd kinetic_matrix(const SystemParams& params, const Lattice& lattice) {
  const auto n = static_cast<Eigen::Index>(lattice.size());
  const Eigen::VectorXd ek = params.kinetic_energies(lattice);
  SpectralTransform transform(lattice);
  Eigen::MatrixXd k(n, n);
  Field unit = Field::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    unit.setZero();
    unit[j] = 1.0;
    Field modes = transform.to_modes(unit);
    modes.array() *= ek.array();
    k.col(j) = transform.to_position(modes).real();
  }
  return 0.5 * (k + k.transpose());
}

Field apply_single_particle(const SystemParams& params, const Lattice& lattice, const Field& psi,
                            SpectralTransform& transform) {
  const Eigen::VectorXd ek = params.kinetic_energies(lattice);
  Field modes = transform.to_modes(psi);
  modes.array() *= ek.array();
  Field out = transform.to_position(modes);
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    out[i] += (params.potential_at(static_cast<std::size_t>(i)) + params.g * std::norm(psi[i])) * psi[i];
  }
  return out;
}

namespace {

double grid_norm(const Eigen::VectorXd& psi, double dv) { return psi.squaredNorm() * dv; }

CondensateSolution finish(const SystemParams& params, const Lattice& lattice, Eigen::VectorXd psi,
                          int iterations) {
  if (psi.sum() < 0.0) psi = -psi;
  SpectralTransform transform(lattice);
  const Field field = psi.cast<cplx>();
  const Field h_psi = apply_single_particle(params, lattice, field, transform);
  CondensateSolution sol;
  sol.psi0 = field;
  sol.density = psi.array().square();
  sol.n0_total = sol.density.sum() * lattice.cell_volume();
  sol.mu_e = (field.conjugate().dot(h_psi)).real() / field.squaredNorm();
  const double scale = std::max(h_psi.norm(), std::abs(sol.mu_e) * field.norm());
  sol.residual = scale > 0.0 ? (h_psi - sol.mu_e * field).norm() / scale : 0.0;
  sol.mu1 = sol.mu_e;
  sol.iterations = iterations;
  return sol;
}

// Newton iteration on F(psi, mu) = (K + U + g psi^2 - mu) psi with the norm constraint.
Eigen::VectorXd newton_polish(const SystemParams& params, const Lattice& lattice, Eigen::VectorXd psi,
                              double n0, double tol, int& iterations) {
  const auto n = psi.size();
  const double dv = lattice.cell_volume();
  const Eigen::MatrixXd kin = kinetic_matrix(params, lattice);
  Eigen::VectorXd u(n);
  for (Eigen::Index i = 0; i < n; ++i) u[i] = params.potential_at(static_cast<std::size_t>(i));

  auto hamiltonian_times = [&](const Eigen::VectorXd& p) -> Eigen::VectorXd {
    return kin * p + (u.array() + params.g * p.array().square()).matrix().cwiseProduct(p);
  };
  Eigen::VectorXd hp = hamiltonian_times(psi);
  double mu = psi.dot(hp) / psi.squaredNorm();

  for (int it = 0; it < 60; ++it) {
    hp = hamiltonian_times(psi);
    const Eigen::VectorXd f = hp - mu * psi;
    const double scale = std::max(hp.norm(), 1e-300);
    if (f.norm() / scale < 0.01 * tol && std::abs(grid_norm(psi, dv) - n0) < 1e-14 * n0) break;

    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n + 1, n + 1);
    jac.topLeftCorner(n, n) = kin;
    jac.topLeftCorner(n, n).diagonal() += (u.array() + 3.0 * params.g * psi.array().square() - mu).matrix();
    jac.topRightCorner(n, 1) = -psi;
    jac.bottomLeftCorner(1, n) = 2.0 * dv * psi.transpose();
    Eigen::VectorXd rhs(n + 1);
    rhs.head(n) = -f;
    rhs[n] = n0 - grid_norm(psi, dv);
    const Eigen::VectorXd delta = jac.partialPivLu().solve(rhs);
    if (!delta.allFinite()) throw SolverError("solve_stationary: Newton step produced non-finite values");
    psi += delta.head(n);
    mu += delta[n];
    ++iterations;
  }
  return psi;
}

}  // namespace

CondensateSolution solve_stationary(const SystemParams& params, const Lattice& lattice, double n0_guess,
                                    double tol) {
  if (!(n0_guess > 0.0) || !std::isfinite(n0_guess)) {
    throw ConfigError("solve_stationary: condensate number must be positive (zero-norm condensate)");
  }
  if (!(tol > 0.0)) throw ConfigError("solve_stationary: tolerance must be positive");
  params.validate(lattice, /*allow_free=*/true);

  const auto n = static_cast<Eigen::Index>(lattice.size());
  const double dv = lattice.cell_volume();

  if (params.homogeneous()) {
    Eigen::VectorXd psi = Eigen::VectorXd::Constant(n, std::sqrt(n0_guess / lattice.volume()));
    CondensateSolution sol = finish(params, lattice, psi, 0);
    // The uniform state is exact; store mu_e in closed form.
    sol.mu_e = params.g * n0_guess / lattice.volume();
    sol.mu1 = sol.mu_e;
    return sol;
  }

  const Eigen::VectorXd ek = params.kinetic_energies(lattice);
  double e_min = 0.0;
  for (Eigen::Index i = 1; i < n; ++i) e_min = (e_min == 0.0) ? ek[i] : std::min(e_min, ek[i]);
  const double u_span = params.potential.maxCoeff() - params.potential.minCoeff();
  const double e_ref = std::max({params.g * n0_guess / lattice.volume(), e_min, 1e-3 * u_span});
  const double dtau = 0.1 / e_ref;

  Eigen::VectorXd half_kin = (-0.5 * dtau * ek.array()).exp();
  SpectralTransform transform(lattice);
  Field psi = Field::Constant(n, std::sqrt(n0_guess / lattice.volume()));

  double mu_prev = 0.0;
  int it = 0;
  const int max_it = 200000;
  for (; it < max_it; ++it) {
    Field modes = transform.to_modes(psi);
    modes.array() *= half_kin.array();
    transform.to_position(modes, psi);
    for (Eigen::Index i = 0; i < n; ++i) {
      psi[i] *= std::exp(-dtau * (params.potential_at(static_cast<std::size_t>(i)) + params.g * std::norm(psi[i])));
    }
    modes = transform.to_modes(psi);
    modes.array() *= half_kin.array();
    transform.to_position(modes, psi);
    const double norm = psi.squaredNorm() * dv;
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw SolverError("solve_stationary: imaginary-time relaxation collapsed to zero norm");
    }
    psi *= std::sqrt(n0_guess / norm);

    if (it % 20 == 0) {
      const Field hp = apply_single_particle(params, lattice, psi, transform);
      const double mu = (psi.conjugate().dot(hp)).real() / psi.squaredNorm();
      if (it > 0 && std::abs(mu - mu_prev) <= 1e-9 * std::max(std::abs(mu), e_ref)) break;
      mu_prev = mu;
    }
  }
  if (it >= max_it) throw SolverError("solve_stationary: imaginary-time relaxation did not converge");

  Eigen::VectorXd real_psi = psi.real();
  int newton_it = 0;
  if (lattice.size() <= 2048) {
    real_psi = newton_polish(params, lattice, real_psi, n0_guess, tol, newton_it);
  }
  CondensateSolution sol = finish(params, lattice, real_psi, it + newton_it);
  if (!(sol.residual <= tol)) {
    throw SolverError("solve_stationary: residual " + std::to_string(sol.residual) +
                      " exceeds tolerance " + std::to_string(tol));
  }
  return sol;
}

}  // namespace becstate
