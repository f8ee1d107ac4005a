#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "becstate/bogoliubov.hpp"
#include "becstate/lattice.hpp"
#include "becstate/rng.hpp"
#include "becstate/thermal.hpp"

namespace becstate {

/// One phase-space trajectory. psi_plus is present only for positive-P samples.
struct FieldSample {
  Field psi;
  std::optional<Field> psi_plus;
  double global_phase = 0.0;
  std::size_t traj_id = 0;
  std::uint64_t seed_path = 0;  ///< id of the RNG stream that produced the sample

  Representation representation() const {
    return psi_plus ? Representation::PositiveP : Representation::Wigner;
  }
};

/// Free-field mode amplitudes before the transform to position space.
struct ModeAmplitudes {
  Field alpha;
  std::optional<Field> alpha_plus;
  double global_phase = 0.0;
  std::uint64_t seed_path = 0;
};

enum class SamplingPath { Automatic, Homogeneous, General };

/// Complex sigma with sigma * sigma^T = c for complex-symmetric c (Takagi factorisation).
///
/// Uses the real symmetric embedding [[Re c, Im c], [Im c, -Re c]], whose eigenpairs
/// (s, [x; y]) with s > 0 give Takagi vectors x + iy. Columns with s below
/// tol * max(s) are dropped, so the result is n x rank.
Eigen::MatrixXcd symmetric_square_root(const Eigen::MatrixXcd& c, double tol = 1e-14);

/// Phase-space correlation E[x x^T] for x = [delta alpha; delta alpha^+], which is
/// Sigma_N with its column blocks swapped.
Eigen::MatrixXcd phase_space_covariance(const CorrelationMatrix& normal);

/// Draws truncated-Wigner initial fields with <|beta_k|^2> = n_k + 1/2.
class WignerSampler {
 public:
  WignerSampler(const ModeSet& modeset, std::vector<double> occupations, const ThermalEnsembleSpec& spec,
                const Lattice& lattice, SamplingPath path = SamplingPath::Automatic);

  ModeAmplitudes draw_modes(std::size_t traj_id) const;
  FieldSample draw(std::size_t traj_id, SpectralTransform& transform) const;
  SamplingPath path() const { return path_; }

 private:
  void draw_zero_mode(StreamRng& rng, cplx& beta0) const;

  SamplingPath path_;
  std::uint64_t seed_;
  Field alpha0_;
  std::vector<double> occ_;
  QuadratureMoments zero_;
  Eigen::Matrix2d zero_chol_;
  Eigen::MatrixXcd u_proj_;
  Eigen::MatrixXcd v_proj_;
  std::vector<double> hom_u_;
  std::vector<double> hom_v_;
  std::vector<double> hom_occ_;
  std::vector<std::size_t> partner_;
};

/// Draws positive-P initial fields from [alpha; alpha^+] = [alpha0; alpha0*] + sigma_P zeta.
class PositivePSampler {
 public:
  PositivePSampler(const ModeSet& modeset, std::vector<double> occupations, const ThermalEnsembleSpec& spec,
                   const Lattice& lattice, SamplingPath path = SamplingPath::Automatic);

  ModeAmplitudes draw_modes(std::size_t traj_id) const;
  FieldSample draw(std::size_t traj_id, SpectralTransform& transform) const;
  SamplingPath path() const { return path_; }
  /// Cached factor (general path only).
  const Eigen::MatrixXcd& sigma() const { return sigma_; }
  /// Normally ordered quadrature variances (<:P^2:>, <:Q^2:>) of the homogeneous
  /// +/- modes keyed by lattice index of the pair representative. "-" entries are
  /// NaN for self-paired modes.
  struct PairVariances {
    std::size_t index = 0;
    cplx plus_p, plus_q, minus_p, minus_q;
  };
  const std::vector<PairVariances>& pair_variances() const { return pairs_; }

 private:
  SamplingPath path_;
  std::uint64_t seed_;
  Field alpha0_;
  Eigen::MatrixXcd sigma_;
  std::vector<PairVariances> pairs_;
  Eigen::Matrix2cd zero_factor_;
  std::vector<std::size_t> partner_;
};

FieldSample sample_wigner(const ModeSet& modeset, const std::vector<double>& occupations,
                          const ThermalEnsembleSpec& spec, const Lattice& lattice, std::size_t traj_id);
FieldSample sample_positive_p(const ModeSet& modeset, const std::vector<double>& occupations,
                              const ThermalEnsembleSpec& spec, const Lattice& lattice, std::size_t traj_id);

/// Phase-zero normally ordered quadrature variances of a homogeneous squeezed thermal pair.
cplx squeezed_normal_variance(double occupation, double r, int sign);

/// Draws spec.n_traj samples of spec.representation, trajectory ids 0..n_traj-1.
std::vector<FieldSample> sample_ensemble(const ModeSet& modeset, const std::vector<double>& occupations,
                                         const ThermalEnsembleSpec& spec, const Lattice& lattice,
                                         std::size_t workers = 1);

}  // namespace becstate
