#include "becstate/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "becstate/errors.hpp"

namespace becstate {

const char* to_string(Representation rep) {
  return rep == Representation::Wigner ? "wigner" : "positive-p";
}

QuadratureMoments ZeroModeState::quadratures() const {
  switch (kind) {
    case Kind::Vacuum:
      return {0.5, 0.5, 0.0};
    case Kind::Thermal:
      return {nbar + 0.5, nbar + 0.5, 0.0};
    case Kind::Squeezed: {
      const double lo = 0.5 * std::exp(-2.0 * r);
      const double hi = 0.5 * std::exp(2.0 * r);
      const double c = std::cos(theta);
      const double s = std::sin(theta);
      return {lo * c * c + hi * s * s, lo * s * s + hi * c * c, c * s * (lo - hi)};
    }
  }
  return {};
}

void ZeroModeState::validate() const {
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) throw ConfigError("thermal.zero_mode_nbar must be >= 0");
  if (!std::isfinite(r) || !std::isfinite(theta)) throw ConfigError("thermal.zero_mode squeezing must be finite");
}

void ThermalEnsembleSpec::validate() const {
  if (!(temperature >= 0.0) || !std::isfinite(temperature)) throw ConfigError("thermal.T must be >= 0");
  if (n_traj < 1) throw ConfigError("thermal.n_traj must be >= 1");
  zero_mode.validate();
}

double CorrelationMatrix::structure_error() const {
  const Eigen::Index m = modes();
  const Eigen::MatrixXcd n = sigma.topLeftCorner(m, m);
  const Eigen::MatrixXcd a = sigma.topRightCorner(m, m);
  double err = (n - n.adjoint()).cwiseAbs().maxCoeff();
  err = std::max(err, (a - a.transpose()).cwiseAbs().maxCoeff());
  err = std::max(err, (sigma.bottomRightCorner(m, m) - n.conjugate()).cwiseAbs().maxCoeff());
  err = std::max(err, (sigma.bottomLeftCorner(m, m) - a.conjugate()).cwiseAbs().maxCoeff());
  return err;
}

double bose_occupation(double energy, double temperature) {
  if (temperature <= 0.0) return 0.0;
  return 1.0 / std::expm1(energy / temperature);
}

std::vector<double> occupations(const ModeSet& modeset, double temperature) {
  if (temperature < 0.0) throw ConfigError("occupations: temperature must be >= 0");
  std::vector<double> n;
  n.reserve(modeset.modes.size());
  for (const auto& mode : modeset.modes) n.push_back(bose_occupation(mode.energy, temperature));
  return n;
}

Eigen::MatrixXcd quasiparticle_covariance(const std::vector<double>& occ, const ZeroModeState& zero_mode) {
  const auto n = static_cast<Eigen::Index>(occ.size() + 1);
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  const QuadratureMoments q = zero_mode.quadratures();
  const double diag0 = 0.5 * (q.pp + q.qq);
  const cplx anom0(0.5 * (q.pp - q.qq), -q.pq);
  s(0, 0) = diag0;
  s(n, n) = diag0;
  s(0, n) = anom0;
  s(n, 0) = std::conj(anom0);
  for (Eigen::Index j = 1; j < n; ++j) {
    const double d = occ[static_cast<std::size_t>(j - 1)] + 0.5;
    s(j, j) = d;
    s(n + j, n + j) = d;
  }
  return s;
}

Eigen::MatrixXcd bogoliubov_transform(const ModeSet& modeset) {
  if (!modeset.has_projections()) throw ConfigError("correlations: mode set has no projections");
  const Eigen::Index m = modeset.u_proj.rows();
  const Eigen::Index n = modeset.u_proj.cols();
  Eigen::MatrixXcd t(2 * m, 2 * n);
  t.topLeftCorner(m, n) = modeset.u_proj;
  t.topRightCorner(m, n) = -modeset.v_proj.conjugate();
  t.bottomLeftCorner(m, n) = -modeset.v_proj;
  t.bottomRightCorner(m, n) = modeset.u_proj.conjugate();
  return t;
}

CorrelationMatrix correlation_matrix(const ModeSet& modeset, const std::vector<double>& occ,
                                     const ThermalEnsembleSpec& spec) {
  if (!modeset.has_projections()) throw ConfigError("correlation_matrix: missing projections");
  if (!modeset.complete()) {
    throw ConfigError("correlation_matrix: mode set does not span the lattice (need lattice size - 1 modes)");
  }
  if (occ.size() != modeset.modes.size()) throw ConfigError("correlation_matrix: occupation count mismatch");
  const Eigen::MatrixXcd t = bogoliubov_transform(modeset);
  CorrelationMatrix c;
  c.sigma = t * quasiparticle_covariance(occ, spec.zero_mode) * t.adjoint();
  c.ordering = Ordering::Symmetric;
  return c;
}

CorrelationMatrix normal_order(const CorrelationMatrix& symmetric) {
  if (symmetric.ordering != Ordering::Symmetric) {
    throw ConfigError("normal_order: input must be symmetrically ordered");
  }
  CorrelationMatrix out = symmetric;
  out.sigma.diagonal().array() -= 0.5;
  out.ordering = Ordering::Normal;
  return out;
}

NumberStatistics number_statistics(const ModeSet& modeset, const std::vector<double>& occ,
                                   const ThermalEnsembleSpec& spec, const CondensateSolution& condensate,
                                   double dv) {
  if (occ.size() != modeset.modes.size()) throw ConfigError("number_statistics: occupation count mismatch");
  double depletion = 0.0;
  for (std::size_t j = 0; j < modeset.modes.size(); ++j) {
    const auto& mode = modeset.modes[j];
    depletion += (mode.u.squaredNorm() * occ[j] + mode.v.squaredNorm() * (occ[j] + 1.0)) * dv;
  }
  // Condensate-mode contribution: <b0+ b0> |u0|^2 + <b0 b0+> |v0|^2 - 2 Re(<b0 b0> int u0 v0).
  const QuadratureMoments q = spec.zero_mode.quadratures();
  const double occ0 = 0.5 * (q.pp + q.qq - 1.0);
  const cplx anom0(0.5 * (q.pp - q.qq), -q.pq);
  const Field u0 = modeset.zero_mode.u();
  const Field v0 = modeset.zero_mode.v();
  depletion += (u0.squaredNorm() * occ0 + v0.squaredNorm() * (occ0 + 1.0)) * dv;
  depletion -= 2.0 * (anom0 * u0.cwiseProduct(v0).sum() * dv).real();

  NumberStatistics stats;
  stats.mean = condensate.n0_total + depletion;
  stats.variance = 2.0 * q.pp * condensate.n0_total;
  return stats;
}

}  // namespace becstate
