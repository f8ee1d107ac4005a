#include "becstate/observables.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "becstate/errors.hpp"
#include "becstate/parallel.hpp"

namespace becstate {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

const char* occupation_ordering(Representation rep) {
  return rep == Representation::Wigner ? "symmetric: n_k = <|alpha_k|^2> - 1/2" : "normal: n_k = Re <alpha_k^+ alpha_k>";
}

using Estimator = std::function<Eigen::VectorXd(const MomentSums&)>;

ObservableSeries reduce(const MomentHistory& h, const Estimator& est, std::vector<std::string> columns,
                        std::string ordering) {
  ObservableSeries out;
  out.times = h.times;
  out.columns = std::move(columns);
  out.ordering_applied = std::move(ordering);
  const auto rows = static_cast<Eigen::Index>(h.times.size());
  const auto cols = static_cast<Eigen::Index>(out.columns.size());
  out.values = Eigen::MatrixXd::Zero(rows, cols);
  out.errors = Eigen::MatrixXd::Zero(rows, cols);
  out.n_traj_effective = h.times.empty() ? 0 : static_cast<std::size_t>(h.count(0));
  for (Eigen::Index t = 0; t < rows; ++t) {
    Eigen::VectorXd v, e;
    jackknife(h.blocks[static_cast<std::size_t>(t)], est, v, e);
    out.values.row(t) = v.transpose();
    out.errors.row(t) = e.transpose();
  }
  return out;
}

}  // namespace

TrajectoryEnsemble TrajectoryEnsemble::from_samples(std::vector<FieldSample> samples) {
  if (samples.empty()) throw ConfigError("ensemble: no samples");
  TrajectoryEnsemble e;
  e.representation = samples.front().representation();
  for (const auto& s : samples) {
    if (s.representation() != e.representation) throw ConfigError("ensemble: mixed Wigner and positive-P samples");
  }
  e.samples = std::move(samples);
  return e;
}

MomentHistory moment_history(const TrajectoryEnsemble& ensemble, const Lattice& lattice, std::size_t workers) {
  for (const auto& s : ensemble.samples) {
    if (s.representation() != ensemble.representation) {
      throw ConfigError("ensemble: mixed Wigner and positive-P samples");
    }
  }
  MomentHistory h;
  h.representation = ensemble.representation;
  h.times = {0.0};
  h.lattice_size = lattice.size();
  h.cell_volume = lattice.cell_volume();
  h.blocks.assign(1, std::vector<MomentSums>(ensemble.size()));
  auto& blocks = h.blocks[0];
  const double dv = lattice.cell_volume();
  parallel_for(
      ensemble.size(), workers, [&](std::size_t) { return SpectralTransform(lattice); },
      [&](SpectralTransform& t, std::size_t i) { blocks[i] = measure(ensemble.samples[i], t, dv); });
  return h;
}

void jackknife(const std::vector<MomentSums>& blocks, const Estimator& estimator, Eigen::VectorXd& value,
               Eigen::VectorXd& error) {
  if (blocks.empty()) throw ConfigError("jackknife: no trajectories");
  MomentSums total;
  for (const auto& b : blocks) total += b;
  value = estimator(total);
  const std::size_t g = blocks.size();
  if (g < 2) {
    error = Eigen::VectorXd::Constant(value.size(), std::numeric_limits<double>::quiet_NaN());
    return;
  }
  Eigen::MatrixXd loo(value.size(), static_cast<Eigen::Index>(g));
  for (std::size_t j = 0; j < g; ++j) loo.col(static_cast<Eigen::Index>(j)) = estimator(total - blocks[j]);
  const Eigen::VectorXd mean = loo.rowwise().mean();
  const double gd = static_cast<double>(g);
  error = (((loo.colwise() - mean).array().square().rowwise().sum()) * (gd - 1.0) / gd).sqrt().matrix();
}

OccupationSeries mode_occupations(const MomentHistory& h) {
  const double shift = h.representation == Representation::Wigner ? 0.5 : 0.0;
  const Estimator est = [shift](const MomentSums& s) -> Eigen::VectorXd {
    return (s.modes.real() / s.count).array() - shift;
  };
  std::vector<std::string> cols;
  for (std::size_t k = 0; k < h.lattice_size; ++k) cols.push_back(std::to_string(k));
  const ObservableSeries all = reduce(h, est, cols, occupation_ordering(h.representation));

  OccupationSeries out;
  out.condensate = all;
  out.condensate.columns = {"0"};
  out.condensate.values = all.values.leftCols(1);
  out.condensate.errors = all.errors.leftCols(1);
  out.spectrum = all;
  const Eigen::Index rest = all.values.cols() - 1;
  out.spectrum.columns.erase(out.spectrum.columns.begin());
  out.spectrum.values = all.values.rightCols(rest);
  out.spectrum.errors = all.errors.rightCols(rest);
  return out;
}

OccupationSeries mode_occupations(const TrajectoryEnsemble& ensemble, const Lattice& lattice) {
  return mode_occupations(moment_history(ensemble, lattice));
}

ObservableSeries number_statistics(const MomentHistory& h) {
  const double m = static_cast<double>(h.lattice_size);
  Estimator est;
  std::string ordering;
  if (h.representation == Representation::Wigner) {
    est = [m](const MomentSums& s) -> Eigen::VectorXd {
      const double mean = s.number.real() / s.count;
      const double second = s.number_sq.real() / s.count;
      return Eigen::Vector2d(mean - 0.5 * m, second - mean * mean - 0.25 * m);
    };
    ordering = "symmetric: N = <N_W> - M/2, dN2 = Var(N_W) - M/4";
  } else {
    est = [](const MomentSums& s) -> Eigen::VectorXd {
      const double mean = s.number.real() / s.count;
      const double second = s.number_sq.real() / s.count;
      return Eigen::Vector2d(mean, second + mean - mean * mean);
    };
    ordering = "normal: N = Re<N_P>, dN2 = Re<N_P^2> + N - N^2";
  }
  return reduce(h, est, {"N", "dN2"}, ordering);
}

ObservableSeries number_statistics(const TrajectoryEnsemble& ensemble, const Lattice& lattice) {
  return number_statistics(moment_history(ensemble, lattice));
}

ObservableSeries g2_zero(const MomentHistory& h) {
  const ObservableSeries n = number_statistics(h);
  for (Eigen::Index t = 0; t < n.values.rows(); ++t) {
    const double v = n.values(t, 0);
    const double e = n.errors(t, 0);
    if (!(v > 0.0) || (std::isfinite(e) && v <= 5.0 * e)) {
      throw SolverError("g2_zero: mean density is zero within sampling error");
    }
  }
  const double inv_dv = 1.0 / h.cell_volume;
  const double m = static_cast<double>(h.lattice_size);
  Estimator est;
  std::string ordering;
  if (h.representation == Representation::Wigner) {
    est = [inv_dv, m](const MomentSums& s) -> Eigen::VectorXd {
      const Eigen::ArrayXd n = s.density.real().array() / s.count - 0.5 * inv_dv;
      const double sum_n = s.density.real().sum() / s.count;
      const double num = s.density_sq.real() / s.count - 2.0 * inv_dv * sum_n + 0.5 * m * inv_dv * inv_dv;
      return Eigen::VectorXd::Constant(1, num / n.square().sum());
    };
    ordering = "symmetric: <:n^2:> = <|Psi|^4> - 2<|Psi|^2>/dV + 1/(2 dV^2), <n> = <|Psi|^2> - 1/(2 dV)";
  } else {
    est = [](const MomentSums& s) -> Eigen::VectorXd {
      const Eigen::ArrayXd n = s.density.real().array() / s.count;
      return Eigen::VectorXd::Constant(1, (s.density_sq.real() / s.count) / n.square().sum());
    };
    ordering = "normal: <:n^2:> = Re<(Psi^+ Psi)^2>, <n> = Re<Psi^+ Psi>";
  }
  return reduce(h, est, {"g2"}, ordering);
}

ObservableSeries g2_zero(const TrajectoryEnsemble& ensemble, const Lattice& lattice) {
  return g2_zero(moment_history(ensemble, lattice));
}

void fluctuation_modes(const FieldSample& sample, const Field& condensate_modes, SpectralTransform& transform,
                       Field& delta, Field& delta_plus) {
  const cplx back = std::polar(1.0, -sample.global_phase);
  delta = transform.to_modes(sample.psi) * back - condensate_modes;
  if (sample.psi_plus) {
    delta_plus = conjugate_modes(*sample.psi_plus, transform) * std::conj(back) - condensate_modes.conjugate();
  } else {
    delta_plus = delta.conjugate();
  }
}

std::vector<QuadratureVariance> quadrature_variances(const TrajectoryEnsemble& ensemble, const ModeSet& modeset,
                                                     const Lattice& lattice) {
  if (!modeset.homogeneous) throw ConfigError("quadrature_variances: needs a homogeneous mode set");
  if (modeset.lattice_size() != lattice.size()) throw ConfigError("quadrature_variances: lattice mismatch");
  const double shift = ensemble.representation == Representation::PositiveP ? 0.5 : 0.0;

  struct Slot {
    std::size_t index, partner;
    int sign;
  };
  std::vector<Slot> slots{{0, 0, 0}};
  for (std::size_t k = 1; k < lattice.size(); ++k) {
    const std::size_t p = lattice.partner(k);
    if (p < k) continue;
    if (p == k) {
      slots.push_back({k, k, 0});
    } else {
      slots.push_back({k, p, +1});
      slots.push_back({k, p, -1});
    }
  }
  const auto ns = static_cast<Eigen::Index>(slots.size());
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(ns, 2), sum_sq = Eigen::MatrixXd::Zero(ns, 2);
  SpectralTransform transform(lattice);
  Field d, dp;
  for (const auto& s : ensemble.samples) {
    fluctuation_modes(s, modeset.condensate_modes, transform, d, dp);
    for (Eigen::Index j = 0; j < ns; ++j) {
      const Slot& sl = slots[static_cast<std::size_t>(j)];
      const auto k = static_cast<Eigen::Index>(sl.index);
      const auto p = static_cast<Eigen::Index>(sl.partner);
      cplx a = d[k], ap = dp[k];
      if (sl.sign != 0) {
        a = kInvSqrt2 * (d[k] + static_cast<double>(sl.sign) * d[p]);
        ap = kInvSqrt2 * (dp[k] + static_cast<double>(sl.sign) * dp[p]);
      }
      const cplx pq = kInvSqrt2 * (a + ap);
      const cplx qq = cplx(0.0, kInvSqrt2) * (a - ap);
      const double p2 = (pq * pq).real();
      const double q2 = (qq * qq).real();
      sum(j, 0) += p2;
      sum(j, 1) += q2;
      sum_sq(j, 0) += p2 * p2;
      sum_sq(j, 1) += q2 * q2;
    }
  }
  const double n = static_cast<double>(ensemble.size());
  std::vector<QuadratureVariance> out;
  for (Eigen::Index j = 0; j < ns; ++j) {
    QuadratureVariance q;
    q.index = slots[static_cast<std::size_t>(j)].index;
    q.sign = slots[static_cast<std::size_t>(j)].sign;
    const double mp = sum(j, 0) / n, mq = sum(j, 1) / n;
    q.var_p = mp + shift;
    q.var_q = mq + shift;
    const double corr = n > 1.0 ? n / (n - 1.0) : std::numeric_limits<double>::quiet_NaN();
    q.se_p = std::sqrt(std::max(sum_sq(j, 0) / n - mp * mp, 0.0) * corr / n);
    q.se_q = std::sqrt(std::max(sum_sq(j, 1) / n - mq * mq, 0.0) * corr / n);
    out.push_back(q);
  }
  return out;
}

CorrelationEstimate sampled_correlations(const TrajectoryEnsemble& ensemble, const ModeSet& modeset,
                                         const Lattice& lattice) {
  if (modeset.lattice_size() != lattice.size()) throw ConfigError("sampled_correlations: lattice mismatch");
  const auto m = static_cast<Eigen::Index>(lattice.size());
  const auto n = static_cast<Eigen::Index>(ensemble.size());
  Eigen::MatrixXcd x(2 * m, n), y(2 * m, n);
  SpectralTransform transform(lattice);
  Field d, dp;
  for (Eigen::Index t = 0; t < n; ++t) {
    fluctuation_modes(ensemble.samples[static_cast<std::size_t>(t)], modeset.condensate_modes, transform, d, dp);
    x.col(t) << d, dp;
    // y holds the variables paired with a^dagger: conj(x) for Wigner, [delta^+; delta] for positive-P.
    y.col(t) << dp, d;
  }
  const double nd = static_cast<double>(n);
  CorrelationEstimate out;
  out.ordering = ensemble.representation == Representation::Wigner ? Ordering::Symmetric : Ordering::Normal;
  out.mean = x * y.transpose() / nd;

  const Eigen::MatrixXd xr = x.real(), xi = x.imag(), yr = y.real(), yi = y.imag();
  const Eigen::MatrixXd xr2 = xr.array().square(), xi2 = xi.array().square();
  const Eigen::MatrixXd yr2 = yr.array().square(), yi2 = yi.array().square();
  const Eigen::MatrixXd xri = xr.cwiseProduct(xi), yri = yr.cwiseProduct(yi);
  const Eigen::MatrixXd re2 = (xr2 * yr2.transpose() - 2.0 * xri * yri.transpose() + xi2 * yi2.transpose()) / nd;
  const Eigen::MatrixXd im2 = (xr2 * yi2.transpose() + 2.0 * xri * yri.transpose() + xi2 * yr2.transpose()) / nd;
  const double corr = nd > 1.0 ? nd / (nd - 1.0) : std::numeric_limits<double>::quiet_NaN();
  out.se_real = ((re2.array() - out.mean.real().array().square()).max(0.0) * corr / nd).sqrt();
  out.se_imag = ((im2.array() - out.mean.imag().array().square()).max(0.0) * corr / nd).sqrt();
  return out;
}

}  // namespace becstate
