#include "becstate/sampler.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "becstate/errors.hpp"
#include "becstate/parallel.hpp"

namespace becstate {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

double draw_phase(StreamRng& rng) { return 2.0 * std::numbers::pi * rng.uniform(); }

Eigen::Matrix2d zero_mode_cholesky(const QuadratureMoments& q) {
  Eigen::Matrix2d cov;
  cov << q.pp, q.pq, q.pq, q.qq;
  Eigen::LLT<Eigen::Matrix2d> llt(cov);
  if (llt.info() != Eigen::Success) throw ConfigError("sampler: zero-mode covariance is not positive definite");
  return llt.matrixL();
}

SamplingPath resolve_path(SamplingPath requested, const ModeSet& modeset) {
  if (requested == SamplingPath::Automatic) {
    return modeset.homogeneous ? SamplingPath::Homogeneous : SamplingPath::General;
  }
  if (requested == SamplingPath::Homogeneous && !modeset.homogeneous) {
    throw ConfigError("sampler: homogeneous path requested for a non-homogeneous mode set");
  }
  return requested;
}

std::vector<double> per_lattice_occupation(const ModeSet& modeset, const std::vector<double>& occ) {
  std::vector<double> out(modeset.lattice_size(), 0.0);
  for (std::size_t j = 0; j < modeset.modes.size(); ++j) out[modeset.modes[j].label] = occ[j];
  return out;
}

std::vector<std::size_t> partners(const Lattice& lattice) {
  std::vector<std::size_t> p(lattice.size());
  for (std::size_t i = 0; i < lattice.size(); ++i) p[i] = lattice.partner(i);
  return p;
}

void check_inputs(const ModeSet& modeset, const std::vector<double>& occ, const Lattice& lattice) {
  if (modeset.lattice_size() != lattice.size()) throw ConfigError("sampler: mode set does not match lattice");
  if (occ.size() != modeset.modes.size()) throw ConfigError("sampler: occupation count mismatch");
}

}  // namespace

Eigen::MatrixXcd symmetric_square_root(const Eigen::MatrixXcd& c, double tol) {
  const Eigen::Index n = c.rows();
  if (c.cols() != n) throw SolverError("symmetric_square_root: matrix is not square");
  const double asym = (c - c.transpose()).cwiseAbs().maxCoeff();
  const double cmax = std::max(c.cwiseAbs().maxCoeff(), 1e-300);
  if (asym > 1e-10 * cmax) throw SolverError("symmetric_square_root: matrix is not complex-symmetric");

  const Eigen::MatrixXd a = 0.5 * (c.real() + c.real().transpose());
  const Eigen::MatrixXd b = 0.5 * (c.imag() + c.imag().transpose());
  Eigen::MatrixXd h(2 * n, 2 * n);
  h << a, b, b, -a;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  if (es.info() != Eigen::Success) throw SolverError("symmetric_square_root: eigen-solver failure");
  const Eigen::VectorXd s = es.eigenvalues();
  const double smax = std::max(s.cwiseAbs().maxCoeff(), 0.0);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index j = 2 * n - 1; j >= 0; --j) {
    if (s[j] > tol * smax && s[j] > 0.0) keep.push_back(j);
  }
  Eigen::MatrixXcd sigma(n, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t col = 0; col < keep.size(); ++col) {
    const Eigen::Index j = keep[col];
    const Eigen::VectorXd x = es.eigenvectors().col(j).head(n);
    const Eigen::VectorXd y = es.eigenvectors().col(j).tail(n);
    Eigen::VectorXcd u(n);
    for (Eigen::Index i = 0; i < n; ++i) u[i] = cplx(x[i], y[i]);
    sigma.col(static_cast<Eigen::Index>(col)) = std::sqrt(s[j]) * u;
  }
  return sigma;
}

Eigen::MatrixXcd phase_space_covariance(const CorrelationMatrix& normal) {
  if (normal.ordering != Ordering::Normal) throw ConfigError("phase_space_covariance: needs normal ordering");
  const Eigen::Index m = normal.modes();
  Eigen::MatrixXcd out(2 * m, 2 * m);
  out.leftCols(m) = normal.sigma.rightCols(m);
  out.rightCols(m) = normal.sigma.leftCols(m);
  return out;
}

cplx squeezed_normal_variance(double occupation, double r, int sign) {
  return cplx((occupation + 0.5) * std::exp(-2.0 * sign * r) - 0.5, 0.0);
}

// ---------------------------------------------------------------------------
// Wigner

WignerSampler::WignerSampler(const ModeSet& modeset, std::vector<double> occ, const ThermalEnsembleSpec& spec,
                             const Lattice& lattice, SamplingPath path)
    : path_(resolve_path(path, modeset)),
      seed_(spec.seed),
      alpha0_(modeset.condensate_modes),
      occ_(std::move(occ)),
      zero_(spec.zero_mode.quadratures()),
      zero_chol_(zero_mode_cholesky(zero_)),
      partner_(partners(lattice)) {
  check_inputs(modeset, occ_, lattice);
  if (path_ == SamplingPath::Homogeneous) {
    hom_u_ = modeset.homogeneous->u;
    hom_v_ = modeset.homogeneous->v;
    hom_occ_ = per_lattice_occupation(modeset, occ_);
  } else {
    if (!modeset.has_projections()) throw ConfigError("sampler: mode set has no projections");
    u_proj_ = modeset.u_proj;
    v_proj_ = modeset.v_proj;
  }
}

void WignerSampler::draw_zero_mode(StreamRng& rng, cplx& beta0) const {
  const Eigen::Vector2d z(rng.normal(), rng.normal());
  const Eigen::Vector2d pq = zero_chol_ * z;
  beta0 = kInvSqrt2 * cplx(pq[0], -pq[1]);
}

ModeAmplitudes WignerSampler::draw_modes(std::size_t traj_id) const {
  StreamRng rng(seed_, traj_id, Stream::InitialState);
  ModeAmplitudes out;
  out.seed_path = rng.id();
  out.global_phase = draw_phase(rng);
  const Eigen::Index m = alpha0_.size();

  if (path_ == SamplingPath::Homogeneous) {
    Field beta(m);
    draw_zero_mode(rng, beta[0]);
    for (Eigen::Index k = 1; k < m; ++k) {
      const double s = std::sqrt(0.5 * (hom_occ_[static_cast<std::size_t>(k)] + 0.5));
      const double re = rng.normal();
      const double im = rng.normal();
      beta[k] = s * cplx(re, im);
    }
    out.alpha = alpha0_;
    out.alpha[0] += beta[0];
    for (Eigen::Index k = 1; k < m; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      out.alpha[k] += hom_u_[kk] * beta[k] - hom_v_[kk] * std::conj(beta[static_cast<Eigen::Index>(partner_[kk])]);
    }
  } else {
    const Eigen::Index n = u_proj_.cols();
    Field beta(n);
    draw_zero_mode(rng, beta[0]);
    for (Eigen::Index q = 1; q < n; ++q) {
      const double s = std::sqrt(0.5 * (occ_[static_cast<std::size_t>(q - 1)] + 0.5));
      const double re = rng.normal();
      const double im = rng.normal();
      beta[q] = s * cplx(re, im);
    }
    out.alpha = alpha0_ + u_proj_ * beta - v_proj_.conjugate() * beta.conjugate();
  }
  out.alpha *= std::polar(1.0, out.global_phase);
  return out;
}

FieldSample WignerSampler::draw(std::size_t traj_id, SpectralTransform& transform) const {
  ModeAmplitudes modes = draw_modes(traj_id);
  FieldSample sample;
  sample.psi = transform.to_position(modes.alpha);
  sample.global_phase = modes.global_phase;
  sample.traj_id = traj_id;
  sample.seed_path = modes.seed_path;
  return sample;
}

// ---------------------------------------------------------------------------
// Positive-P

PositivePSampler::PositivePSampler(const ModeSet& modeset, std::vector<double> occ, const ThermalEnsembleSpec& spec,
                                   const Lattice& lattice, SamplingPath path)
    : path_(resolve_path(path, modeset)),
      seed_(spec.seed),
      alpha0_(modeset.condensate_modes),
      partner_(partners(lattice)) {
  check_inputs(modeset, occ, lattice);
  if (path_ == SamplingPath::Homogeneous) {
    const QuadratureMoments q = spec.zero_mode.quadratures();
    Eigen::Matrix2d c0;
    c0 << q.pp - 0.5, q.pq, q.pq, q.qq - 0.5;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(c0);
    for (int j = 0; j < 2; ++j) {
      const cplx root = std::sqrt(cplx(es.eigenvalues()[j], 0.0));
      zero_factor_.col(j) = es.eigenvectors().col(j).cast<cplx>() * root;
    }
    const auto hom_occ = per_lattice_occupation(modeset, occ);
    const auto& coeff = *modeset.homogeneous;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t k = 1; k < lattice.size(); ++k) {
      const std::size_t p = partner_[k];
      if (p < k) continue;
      const double r = std::asinh(coeff.v[k]);
      PairVariances pv;
      pv.index = k;
      pv.plus_p = squeezed_normal_variance(hom_occ[k], r, +1);
      pv.plus_q = squeezed_normal_variance(hom_occ[k], r, -1);
      if (p != k) {
        pv.minus_p = squeezed_normal_variance(hom_occ[k], r, -1);
        pv.minus_q = squeezed_normal_variance(hom_occ[k], r, +1);
      } else {
        pv.minus_p = pv.minus_q = cplx(nan, nan);
      }
      pairs_.push_back(pv);
    }
  } else {
    ThermalEnsembleSpec s = spec;
    const CorrelationMatrix normal = normal_order(correlation_matrix(modeset, occ, s));
    const Eigen::MatrixXcd c = phase_space_covariance(normal);
    sigma_ = symmetric_square_root(c);
    const double err = (sigma_ * sigma_.transpose() - c).cwiseAbs().maxCoeff();
    if (!(err <= 1e-8 * std::max(1.0, c.cwiseAbs().maxCoeff()))) {
      throw SolverError("sample_positive_p: square-root factorisation failed (error " + std::to_string(err) + ")");
    }
  }
}

ModeAmplitudes PositivePSampler::draw_modes(std::size_t traj_id) const {
  StreamRng rng(seed_, traj_id, Stream::InitialState);
  ModeAmplitudes out;
  out.seed_path = rng.id();
  out.global_phase = draw_phase(rng);
  const Eigen::Index m = alpha0_.size();
  Field alpha = alpha0_;
  Field alpha_plus = alpha0_.conjugate();

  if (path_ == SamplingPath::Homogeneous) {
    auto quad = [&](cplx sp, cplx sq) {
      const double zp = rng.normal();
      const double zq = rng.normal();
      const cplx a = kInvSqrt2 * (zp * sp - cplx(0.0, 1.0) * zq * sq);
      const cplx ap = kInvSqrt2 * (zp * sp + cplx(0.0, 1.0) * zq * sq);
      return std::pair{a, ap};
    };
    {
      const Eigen::Vector2d z(rng.normal(), rng.normal());
      const Eigen::Vector2cd pq = zero_factor_ * z.cast<cplx>();
      alpha[0] += kInvSqrt2 * (pq[0] - cplx(0.0, 1.0) * pq[1]);
      alpha_plus[0] += kInvSqrt2 * (pq[0] + cplx(0.0, 1.0) * pq[1]);
    }
    for (const auto& pv : pairs_) {
      const auto k = static_cast<Eigen::Index>(pv.index);
      const auto p = static_cast<Eigen::Index>(partner_[pv.index]);
      const auto [ap, app] = quad(std::sqrt(pv.plus_p), std::sqrt(pv.plus_q));
      if (p == k) {
        alpha[k] += ap;
        alpha_plus[k] += app;
        continue;
      }
      const auto [am, amp] = quad(std::sqrt(pv.minus_p), std::sqrt(pv.minus_q));
      alpha[k] += kInvSqrt2 * (ap + am);
      alpha[p] += kInvSqrt2 * (ap - am);
      alpha_plus[k] += kInvSqrt2 * (app + amp);
      alpha_plus[p] += kInvSqrt2 * (app - amp);
    }
  } else {
    Eigen::VectorXd zeta(sigma_.cols());
    for (Eigen::Index j = 0; j < zeta.size(); ++j) zeta[j] = rng.normal();
    const Eigen::VectorXcd x = sigma_ * zeta.cast<cplx>();
    alpha += x.head(m);
    alpha_plus += x.tail(m);
  }
  const cplx rot = std::polar(1.0, out.global_phase);
  out.alpha = alpha * rot;
  out.alpha_plus = alpha_plus * std::conj(rot);
  return out;
}

FieldSample PositivePSampler::draw(std::size_t traj_id, SpectralTransform& transform) const {
  ModeAmplitudes modes = draw_modes(traj_id);
  FieldSample sample;
  sample.psi = transform.to_position(modes.alpha);
  // Psi^+ = sum_k alpha^+_k u_k^(0)*(x), i.e. the conjugate of the transform of conj(alpha^+).
  sample.psi_plus = transform.to_position(modes.alpha_plus->conjugate()).conjugate();
  sample.global_phase = modes.global_phase;
  sample.traj_id = traj_id;
  sample.seed_path = modes.seed_path;
  return sample;
}

FieldSample sample_wigner(const ModeSet& modeset, const std::vector<double>& occ, const ThermalEnsembleSpec& spec,
                          const Lattice& lattice, std::size_t traj_id) {
  if (spec.representation != Representation::Wigner) throw ConfigError("sample_wigner: ensemble representation is positive-P");
  SpectralTransform transform(lattice);
  return WignerSampler(modeset, occ, spec, lattice).draw(traj_id, transform);
}

FieldSample sample_positive_p(const ModeSet& modeset, const std::vector<double>& occ,
                              const ThermalEnsembleSpec& spec, const Lattice& lattice, std::size_t traj_id) {
  if (spec.representation != Representation::PositiveP) {
    throw ConfigError("sample_positive_p: ensemble representation is Wigner");
  }
  SpectralTransform transform(lattice);
  return PositivePSampler(modeset, occ, spec, lattice).draw(traj_id, transform);
}

std::vector<FieldSample> sample_ensemble(const ModeSet& modeset, const std::vector<double>& occ,
                                         const ThermalEnsembleSpec& spec, const Lattice& lattice,
                                         std::size_t workers) {
  spec.validate();
  std::vector<FieldSample> out(spec.n_traj);
  auto make_state = [&](std::size_t) { return SpectralTransform(lattice); };
  if (spec.representation == Representation::Wigner) {
    const WignerSampler sampler(modeset, occ, spec, lattice);
    parallel_for(spec.n_traj, workers, make_state,
                 [&](SpectralTransform& t, std::size_t i) { out[i] = sampler.draw(i, t); });
  } else {
    const PositivePSampler sampler(modeset, occ, spec, lattice);
    parallel_for(spec.n_traj, workers, make_state,
                 [&](SpectralTransform& t, std::size_t i) { out[i] = sampler.draw(i, t); });
  }
  return out;
}

}  // namespace becstate
