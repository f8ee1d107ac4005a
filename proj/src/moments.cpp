#include "becstate/moments.hpp"

namespace becstate {

MomentSums& MomentSums::operator+=(const MomentSums& o) {
  if (modes.size() == 0) {
    modes = Eigen::VectorXcd::Zero(o.modes.size());
    density = Eigen::VectorXcd::Zero(o.density.size());
  }
  count += o.count;
  modes += o.modes;
  density += o.density;
  density_sq += o.density_sq;
  number += o.number;
  number_sq += o.number_sq;
  return *this;
}

MomentSums& MomentSums::operator-=(const MomentSums& o) {
  count -= o.count;
  modes -= o.modes;
  density -= o.density;
  density_sq -= o.density_sq;
  number -= o.number;
  number_sq -= o.number_sq;
  return *this;
}

Field conjugate_modes(const Field& psi_plus, SpectralTransform& transform) {
  return transform.to_modes(psi_plus.conjugate()).conjugate();
}

MomentSums measure_wigner(const Field& psi, SpectralTransform& transform, double cell_volume) {
  MomentSums m;
  m.count = 1.0;
  m.modes = transform.to_modes(psi).cwiseAbs2().cast<cplx>();
  const Eigen::VectorXd n = psi.cwiseAbs2();
  m.density = n.cast<cplx>();
  m.density_sq = n.squaredNorm();
  m.number = n.sum() * cell_volume;
  m.number_sq = m.number * m.number;
  return m;
}

MomentSums measure_positive_p(const Field& psi, const Field& psi_plus, SpectralTransform& transform,
                              double cell_volume) {
  MomentSums m;
  m.count = 1.0;
  m.modes = conjugate_modes(psi_plus, transform).cwiseProduct(transform.to_modes(psi));
  m.density = psi_plus.cwiseProduct(psi);
  m.density_sq = m.density.cwiseProduct(m.density).sum();
  m.number = m.density.sum() * cell_volume;
  m.number_sq = m.number * m.number;
  return m;
}

MomentSums measure(const FieldSample& sample, SpectralTransform& transform, double cell_volume) {
  if (sample.psi_plus) return measure_positive_p(sample.psi, *sample.psi_plus, transform, cell_volume);
  return measure_wigner(sample.psi, transform, cell_volume);
}

}  // namespace becstate
