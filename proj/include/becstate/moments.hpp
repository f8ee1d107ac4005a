#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "becstate/lattice.hpp"
#include "becstate/sampler.hpp"

namespace becstate {

/// Raw per-trajectory moments, summed over a group of trajectories.
///
/// For Wigner samples the products are |alpha_k|^2, |Psi|^2 and so on; for positive-P
/// they are alpha^+_k alpha_k and Psi^+ Psi. No ordering correction is applied here.
struct MomentSums {
  double count = 0.0;
  Eigen::VectorXcd modes;    ///< sum of alpha^+_k alpha_k per mode
  Eigen::VectorXcd density;  ///< sum of Psi^+ Psi per lattice point
  cplx density_sq{};         ///< sum over trajectories and points of (Psi^+ Psi)^2
  cplx number{};             ///< sum of N = int Psi^+ Psi dx
  cplx number_sq{};          ///< sum of N^2

  MomentSums() = default;
  explicit MomentSums(std::size_t m)
      : modes(Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(m))),
        density(Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(m))) {}

  MomentSums& operator+=(const MomentSums& o);
  MomentSums& operator-=(const MomentSums& o);
};

inline MomentSums operator-(MomentSums a, const MomentSums& b) { return a -= b; }

/// Moments of one Wigner field.
MomentSums measure_wigner(const Field& psi, SpectralTransform& transform, double cell_volume);
/// Moments of one positive-P field pair.
MomentSums measure_positive_p(const Field& psi, const Field& psi_plus, SpectralTransform& transform,
                              double cell_volume);
MomentSums measure(const FieldSample& sample, SpectralTransform& transform, double cell_volume);

/// Mode amplitudes alpha^+ of a positive-P conjugate field.
Field conjugate_modes(const Field& psi_plus, SpectralTransform& transform);

}  // namespace becstate
