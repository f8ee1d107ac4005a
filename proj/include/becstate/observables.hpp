#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "becstate/bogoliubov.hpp"
#include "becstate/dynamics.hpp"
#include "becstate/lattice.hpp"
#include "becstate/moments.hpp"
#include "becstate/sampler.hpp"
#include "becstate/thermal.hpp"

namespace becstate {

/// Samples of a single representation.
struct TrajectoryEnsemble {
  Representation representation = Representation::Wigner;
  std::vector<FieldSample> samples;

  /// Throws ConfigError for an empty or mixed-representation sample set.
  static TrajectoryEnsemble from_samples(std::vector<FieldSample> samples);
  std::size_t size() const { return samples.size(); }
};

/// Estimates per snapshot (rows) and component (columns).
struct ObservableSeries {
  std::vector<double> times;
  std::vector<std::string> columns;
  Eigen::MatrixXd values;
  Eigen::MatrixXd errors;  ///< standard errors
  std::size_t n_traj_effective = 0;
  std::string ordering_applied;
};

/// Condensate-mode occupation and the k != 0 spectrum (columns labelled by lattice index).
struct OccupationSeries {
  ObservableSeries condensate;
  ObservableSeries spectrum;
};

/// Per-trajectory moments of a static ensemble, one block per trajectory.
MomentHistory moment_history(const TrajectoryEnsemble& ensemble, const Lattice& lattice, std::size_t workers = 1);

/// Delete-a-group jackknife: value is estimator(total), error from the leave-one-block-out
/// estimates. Fewer than two blocks give NaN errors.
void jackknife(const std::vector<MomentSums>& blocks, const std::function<Eigen::VectorXd(const MomentSums&)>& estimator,
               Eigen::VectorXd& value, Eigen::VectorXd& error);

OccupationSeries mode_occupations(const MomentHistory& history);
OccupationSeries mode_occupations(const TrajectoryEnsemble& ensemble, const Lattice& lattice);

/// Columns "N" and "dN2".
ObservableSeries number_statistics(const MomentHistory& history);
ObservableSeries number_statistics(const TrajectoryEnsemble& ensemble, const Lattice& lattice);

/// Spatially averaged g2(0) = sum_x <:n^2:> / sum_x <n>^2. Throws SolverError when the
/// mean density is not resolved from zero.
ObservableSeries g2_zero(const MomentHistory& history);
ObservableSeries g2_zero(const TrajectoryEnsemble& ensemble, const Lattice& lattice);

/// Symmetrically ordered quadrature variances of one +/- mode. sign = 0 marks the
/// condensate mode and self-paired modes, which carry a single quadrature pair.
struct QuadratureVariance {
  std::size_t index = 0;
  int sign = 1;
  double var_p = 0.0;
  double var_q = 0.0;
  double se_p = 0.0;
  double se_q = 0.0;
};

/// Requires a homogeneous mode set. Samples are rotated back by their global phase
/// and the condensate amplitudes subtracted before projection.
std::vector<QuadratureVariance> quadrature_variances(const TrajectoryEnsemble& ensemble, const ModeSet& modeset,
                                                     const Lattice& lattice);

/// Sampled 2M x 2M correlations of [delta a; delta a^dagger] in the extended basis used by
/// CorrelationMatrix: symmetric-ordered for Wigner samples, normal-ordered for positive-P.
struct CorrelationEstimate {
  Eigen::MatrixXcd mean;
  Eigen::MatrixXd se_real;
  Eigen::MatrixXd se_imag;
  Ordering ordering = Ordering::Symmetric;
};

CorrelationEstimate sampled_correlations(const TrajectoryEnsemble& ensemble, const ModeSet& modeset,
                                         const Lattice& lattice);

/// Phase-zero fluctuation amplitudes delta alpha (and delta alpha^+ for positive-P).
void fluctuation_modes(const FieldSample& sample, const Field& condensate_modes, SpectralTransform& transform,
                       Field& delta, Field& delta_plus);

}  // namespace becstate
