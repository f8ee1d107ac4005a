#include "becstate/bogoliubov.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "becstate/errors.hpp"

namespace becstate {

cplx symplectic_product(const Field& ua, const Field& va, const Field& ub, const Field& vb, double dv) {
  return (ua.conjugate().dot(ub) - va.conjugate().dot(vb)) * dv;
}

cplx symplectic_cross(const Field& ua, const Field& va, const Field& ub, const Field& vb, double dv) {
  return (ua.cwiseProduct(vb).sum() - va.cwiseProduct(ub).sum()) * dv;
}

ModeSet homogeneous_modes(const SystemParams& params, const Lattice& lattice, double n0_uniform) {
  if (!(n0_uniform > 0.0) || !std::isfinite(n0_uniform)) {
    throw ConfigError("homogeneous_modes: uniform density must be positive");
  }
  const std::size_t m = lattice.size();
  const double gn = params.g * n0_uniform;
  const double inv_sqrt_v = 1.0 / std::sqrt(lattice.volume());
  const Eigen::VectorXd ek = params.kinetic_energies(lattice);

  ModeSet set;
  HomogeneousCoefficients coeff;
  coeff.n0 = n0_uniform;
  coeff.g_over_volume = params.g / lattice.volume();
  coeff.kinetic.assign(m, 0.0);
  coeff.energy.assign(m, 0.0);
  coeff.u.assign(m, 1.0);
  coeff.v.assign(m, 0.0);

  for (std::size_t k = 1; k < m; ++k) {
    const double e = ek[static_cast<Eigen::Index>(k)];
    const double eps = std::sqrt(e * (e + 2.0 * gn));
    const double denom = 2.0 * std::sqrt(eps * e);
    coeff.kinetic[k] = e;
    coeff.energy[k] = eps;
    coeff.u[k] = (eps + e) / denom;
    coeff.v[k] = (eps - e) / denom;

    BogoliubovMode mode;
    mode.label = k;
    mode.energy = eps;
    Field plane(static_cast<Eigen::Index>(m));
    const auto& kv = lattice.wavevector(k);
    for (std::size_t i = 0; i < m; ++i) {
      const auto x = lattice.position(i);
      double phase = 0.0;
      for (std::size_t d = 0; d < kv.size(); ++d) phase += kv[d] * x[d];
      plane[static_cast<Eigen::Index>(i)] = std::polar(inv_sqrt_v, phase);
    }
    mode.u = coeff.u[k] * plane;
    mode.v = coeff.v[k] * plane;
    set.modes.push_back(std::move(mode));
  }

  set.zero_mode.psi0 = Field::Constant(static_cast<Eigen::Index>(m), inv_sqrt_v);
  set.zero_mode.phi0 = set.zero_mode.psi0;
  set.zero_mode.alpha = gn;
  set.condensate_modes = Field::Zero(static_cast<Eigen::Index>(m));
  set.condensate_modes[0] = std::sqrt(n0_uniform * lattice.volume());
  set.homogeneous = std::move(coeff);
  attach_projections(set, lattice);
  return set;
}

namespace {

struct EffectiveOperators {
  Eigen::MatrixXd minus;  // A - B = H - mu_e
  Eigen::MatrixXd plus;   // A + B = H - mu_e + 2 g n0
  Eigen::VectorXd psi;    // real condensate field
};

EffectiveOperators effective_operators(const SystemParams& params, const Lattice& lattice,
                                       const CondensateSolution& condensate) {
  const auto n = static_cast<Eigen::Index>(lattice.size());
  if (condensate.psi0.size() != n) throw ConfigError("bogoliubov: condensate does not match lattice");
  if (condensate.psi0.imag().cwiseAbs().maxCoeff() > 1e-12 * condensate.psi0.cwiseAbs().maxCoeff()) {
    throw ConfigError("bogoliubov: condensate must be in the real-positive gauge");
  }
  EffectiveOperators ops;
  ops.psi = condensate.psi0.real();
  const Eigen::VectorXd n0 = ops.psi.array().square();
  ops.minus = kinetic_matrix(params, lattice);
  for (Eigen::Index i = 0; i < n; ++i) {
    ops.minus(i, i) += params.potential_at(static_cast<std::size_t>(i)) + params.g * n0[i] - condensate.mu_e;
  }
  ops.plus = ops.minus;
  ops.plus.diagonal() += 2.0 * params.g * n0;
  return ops;
}

// Fix the arbitrary eigenvector sign so repeated solves give identical output.
void canonical_sign(Eigen::VectorXd& w) {
  Eigen::Index imax = 0;
  w.cwiseAbs().maxCoeff(&imax);
  if (w[imax] < 0.0) w = -w;
}

}  // namespace

ZeroMode solve_zero_mode(const SystemParams& params, const Lattice& lattice, const CondensateSolution& condensate,
                         double tol) {
  if (!(condensate.n0_total > 0.0)) throw SolverError("solve_zero_mode: condensate number is zero");
  const EffectiveOperators ops = effective_operators(params, lattice, condensate);
  const double dv = lattice.cell_volume();
  const Eigen::VectorXd psi0 = ops.psi / std::sqrt(condensate.n0_total);

  const Eigen::VectorXd null_residual = ops.minus * psi0;
  const double scale = std::max({(ops.plus * psi0).norm(), std::abs(condensate.mu_e) * psi0.norm(),
                                 (ops.minus.cwiseAbs() * psi0.cwiseAbs()).norm()});
  if (scale > 0.0 && null_residual.norm() > tol * scale) {
    throw SolverError("solve_zero_mode: psi0 is not a null vector of H_e - g n0 (residual " +
                      std::to_string(null_residual.norm() / scale) + "); condensate not converged");
  }

  ZeroMode zm;
  zm.psi0 = psi0.cast<cplx>();
  if (params.g == 0.0) {
    // H_e + g n0 is then singular along psi0; the solvable choice is alpha = 0, Phi0 = psi0.
    zm.phi0 = zm.psi0;
    zm.alpha = 0.0;
    return zm;
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(ops.plus);
  if (ldlt.info() != Eigen::Success) throw SolverError("solve_zero_mode: factorisation failed");
  const Eigen::VectorXd y = ldlt.solve(psi0);
  const double overlap = psi0.dot(y) * dv;
  if (!(overlap > 0.0) || !std::isfinite(overlap)) {
    throw SolverError("solve_zero_mode: singular system for Phi0");
  }
  zm.alpha = 1.0 / (2.0 * overlap);
  zm.phi0 = (2.0 * zm.alpha * y).cast<cplx>();
  return zm;
}

ModeSet solve_bdg(const SystemParams& params, const Lattice& lattice, const CondensateSolution& condensate,
                  std::size_t n_modes, double tol) {
  const std::size_t m = lattice.size();
  if (n_modes + 1 > m) {
    throw ConfigError("solve_bdg: n_modes must be at most lattice size - 1");
  }
  if (!(tol > 0.0)) throw ConfigError("solve_bdg: tolerance must be positive");
  const EffectiveOperators ops = effective_operators(params, lattice, condensate);
  const double dv = lattice.cell_volume();
  const auto n = static_cast<Eigen::Index>(m);

  ModeSet set;
  set.zero_mode = solve_zero_mode(params, lattice, condensate, tol);

  if (params.g == 0.0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ops.minus);
    if (es.info() != Eigen::Success) throw SolverError("solve_bdg: eigen-solver failure");
    for (std::size_t j = 1; j <= n_modes; ++j) {
      Eigen::VectorXd w = es.eigenvectors().col(static_cast<Eigen::Index>(j));
      canonical_sign(w);
      BogoliubovMode mode;
      mode.label = j;
      mode.energy = es.eigenvalues()[static_cast<Eigen::Index>(j)];
      mode.u = (w / std::sqrt(dv)).cast<cplx>();
      mode.v = Field::Zero(n);
      set.modes.push_back(std::move(mode));
    }
  } else {
    // With real fields the BdG problem reduces to (A-B)(A+B) f = eps^2 f for f = u - v.
    // Symmetrising with S = (A+B)^{1/2} gives S (A-B) S w = eps^2 w, f = S^{-1} w, u + v = S w / eps.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> plus_es(ops.plus);
    if (plus_es.info() != Eigen::Success) throw SolverError("solve_bdg: eigen-solver failure");
    const Eigen::VectorXd d = plus_es.eigenvalues();
    if (!(d.minCoeff() > 0.0)) {
      throw SolverError("solve_bdg: H_e + g n0 is not positive definite");
    }
    const Eigen::MatrixXd& q = plus_es.eigenvectors();
    const Eigen::MatrixXd s = q * d.cwiseSqrt().asDiagonal() * q.transpose();
    const Eigen::MatrixXd s_inv = q * d.cwiseSqrt().cwiseInverse().asDiagonal() * q.transpose();
    Eigen::MatrixXd w_mat = s * ops.minus * s;
    w_mat = 0.5 * (w_mat + w_mat.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(w_mat);
    if (es.info() != Eigen::Success) throw SolverError("solve_bdg: eigen-solver failure");
    const Eigen::VectorXd lambda = es.eigenvalues();
    const double energy_scale = std::max(d.maxCoeff(), 1e-300);
    // lambda = eps^2; a negative value means a complex excitation energy.
    if (lambda[0] < -tol * energy_scale * energy_scale) {
      throw SolverError("solve_bdg: complex excitation energy (eps^2 = " + std::to_string(lambda[0]) + ")");
    }
    for (std::size_t j = 1; j <= n_modes; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      if (!(lambda[jj] > 0.0)) throw SolverError("solve_bdg: non-positive excitation energy");
      const double eps = std::sqrt(lambda[jj]);
      Eigen::VectorXd w = es.eigenvectors().col(jj);
      canonical_sign(w);
      w *= std::sqrt(eps / dv);
      const Eigen::VectorXd diff = s_inv * w;
      const Eigen::VectorXd sum = s * w / eps;
      BogoliubovMode mode;
      mode.label = j;
      mode.energy = eps;
      mode.u = (0.5 * (sum + diff)).cast<cplx>();
      mode.v = (0.5 * (sum - diff)).cast<cplx>();
      set.modes.push_back(std::move(mode));
    }
  }

  SpectralTransform transform(lattice);
  set.condensate_modes = transform.to_modes(condensate.psi0);
  attach_projections(set, lattice);
  return set;
}

double nonlinear_mu2(const ModeSet& modeset, CondensateSolution& condensate) {
  if (!(condensate.n0_total > 0.0)) throw SolverError("nonlinear_mu2: condensate number is zero");
  condensate.alpha = modeset.zero_mode.alpha;
  condensate.mu2 = modeset.homogeneous ? modeset.homogeneous->g_over_volume : condensate.alpha / condensate.n0_total;
  condensate.mu1 = condensate.mu_e - condensate.mu2 * condensate.n0_total;
  return condensate.mu2;
}

void attach_projections(ModeSet& modeset, const Lattice& lattice) {
  const auto m = static_cast<Eigen::Index>(lattice.size());
  const auto cols = static_cast<Eigen::Index>(modeset.modes.size() + 1);
  SpectralTransform transform(lattice);
  modeset.u_proj.resize(m, cols);
  modeset.v_proj.resize(m, cols);
  auto fill = [&](Eigen::Index col, const Field& u, const Field& v) {
    modeset.u_proj.col(col) = transform.to_modes(u);
    const Field vm = transform.to_modes(v);
    // int e^{ikx} v(x) dx / sqrt(V) is the forward amplitude at -k.
    for (Eigen::Index k = 0; k < m; ++k) {
      modeset.v_proj(k, col) = vm[static_cast<Eigen::Index>(lattice.partner(static_cast<std::size_t>(k)))];
    }
  };
  fill(0, modeset.zero_mode.u(), modeset.zero_mode.v());
  for (Eigen::Index q = 1; q < cols; ++q) {
    const auto& mode = modeset.modes[static_cast<std::size_t>(q - 1)];
    fill(q, mode.u, mode.v);
  }
}

}  // namespace becstate
