#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "becstate/bogoliubov.hpp"
#include "becstate/meanfield.hpp"

namespace becstate {

enum class Representation { Wigner, PositiveP };

const char* to_string(Representation rep);

/// Symmetrically ordered second moments of the condensate quadratures P, Q
/// (b0 = (P - iQ)/sqrt(2)).
struct QuadratureMoments {
  double pp = 0.5;
  double qq = 0.5;
  double pq = 0.0;  ///< <{P Q}> = <PQ + QP>/2
};

/// State of the condensate (k = 0) quasiparticle mode.
struct ZeroModeState {
  enum class Kind { Vacuum, Thermal, Squeezed };
  Kind kind = Kind::Vacuum;
  double nbar = 0.0;   ///< thermal occupation
  double r = 0.0;      ///< squeezing parameter
  double theta = 0.0;  ///< squeezing angle; 0 squeezes P (number-squeezed)

  static ZeroModeState vacuum() { return {}; }
  static ZeroModeState thermal(double nbar) { return {Kind::Thermal, nbar, 0.0, 0.0}; }
  static ZeroModeState squeezed(double r, double theta = 0.0) { return {Kind::Squeezed, 0.0, r, theta}; }

  QuadratureMoments quadratures() const;
  void validate() const;
};

struct ThermalEnsembleSpec {
  double temperature = 0.0;  ///< k_B T in energy units
  ZeroModeState zero_mode;
  Representation representation = Representation::Wigner;
  std::size_t n_traj = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

enum class Ordering { Symmetric, Normal };

/// 2M x 2M correlation matrix in the extended basis [a, a^dagger]:
/// sigma(i, j) = < a_i a_j^dagger > under the chosen ordering. The top-left block holds
/// <a_k a_k'^dagger>, the top-right the anomalous <a_k a_k'>.
struct CorrelationMatrix {
  Eigen::MatrixXcd sigma;
  Ordering ordering = Ordering::Symmetric;

  Eigen::Index modes() const { return sigma.rows() / 2; }
  Eigen::MatrixXcd normal_block() const { return sigma.topLeftCorner(modes(), modes()); }
  Eigen::MatrixXcd anomalous_block() const { return sigma.topRightCorner(modes(), modes()); }
  /// Largest violation of: normal block Hermitian, anomalous block symmetric, lower
  /// blocks the conjugates of the upper ones.
  double structure_error() const;
};

/// Bose factor 1/(e^{eps/T} - 1); zero at T = 0.
double bose_occupation(double energy, double temperature);

/// Thermal occupation of every k != 0 mode, in ModeSet::modes order.
std::vector<double> occupations(const ModeSet& modeset, double temperature);

/// Symmetrically ordered covariance of the quasiparticle amplitudes in the basis
/// [b_0..b_n, b_0^dagger..b_n^dagger] (index 0 = condensate mode).
Eigen::MatrixXcd quasiparticle_covariance(const std::vector<double>& occupations, const ZeroModeState& zero_mode);

/// Linear map from [b; b^dagger] to [delta a; delta a^dagger].
Eigen::MatrixXcd bogoliubov_transform(const ModeSet& modeset);

/// Symmetrically ordered correlations of the phase-zero state. Requires projections and
/// a complete mode set (throws ConfigError otherwise).
CorrelationMatrix correlation_matrix(const ModeSet& modeset, const std::vector<double>& occupations,
                                     const ThermalEnsembleSpec& spec);

/// Sigma_N = Sigma_phi - I/2. Throws ConfigError unless the input is symmetric-ordered.
CorrelationMatrix normal_order(const CorrelationMatrix& symmetric);

struct NumberStatistics {
  double mean = 0.0;
  double variance = 0.0;
};

/// Analytic N = N0 + sum_k int |u_k|^2 n_k + |v_k|^2 (n_k + 1) (condensate mode included
/// through its own state) and dN^2 = 2 <P^2> N0.
NumberStatistics number_statistics(const ModeSet& modeset, const std::vector<double>& occupations,
                                   const ThermalEnsembleSpec& spec, const CondensateSolution& condensate,
                                   double cell_volume);

}  // namespace becstate
