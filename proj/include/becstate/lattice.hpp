#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include <Eigen/Dense>

namespace becstate {

using cplx = std::complex<double>;
/// Complex values on every lattice point (position space) or every mode (mode space).
using Field = Eigen::VectorXcd;

/// Periodic rectangular grid in one to three dimensions.
///
/// Points and modes share the same flat row-major index. Mode `i` carries the
/// wavevector 2*pi*m/L per axis with m in [-n/2, n/2 - 1]; mode 0 is k = 0 and
/// the Nyquist mode (m = -n/2) is its own partner under k -> -k.
class Lattice {
 public:
  /// Throws ConfigError unless every dim is >= 2 and every length > 0.
  static Lattice build(std::vector<std::size_t> dims, std::vector<double> lengths);

  /// One-point "lattice" holding a single k = 0 mode of the given volume.
  /// Used for single-mode limits; not reachable through build().
  static Lattice single_site(double volume);

  const std::vector<std::size_t>& dims() const { return dims_; }
  const std::vector<double>& lengths() const { return lengths_; }
  std::size_t rank() const { return dims_.size(); }
  std::size_t size() const { return size_; }
  double cell_volume() const { return cell_volume_; }
  double volume() const { return volume_; }
  double spacing(std::size_t axis) const { return lengths_[axis] / static_cast<double>(dims_[axis]); }

  /// Wavevector components of mode i.
  const std::vector<double>& wavevector(std::size_t i) const { return kvecs_[i]; }
  double k_squared(std::size_t i) const { return k2_[i]; }
  /// Index of the mode with wavevector -k.
  std::size_t partner(std::size_t i) const { return partner_[i]; }
  bool self_paired(std::size_t i) const { return partner_[i] == i; }
  /// Integer wavenumbers m per axis for mode i.
  std::vector<long> mode_numbers(std::size_t i) const;
  /// Coordinates of grid point i, measured from the box corner.
  std::vector<double> position(std::size_t i) const;

  bool operator==(const Lattice& other) const {
    return dims_ == other.dims_ && lengths_ == other.lengths_;
  }

 private:
  Lattice(std::vector<std::size_t> dims, std::vector<double> lengths);

  std::vector<std::size_t> dims_;
  std::vector<double> lengths_;
  std::size_t size_ = 0;
  double cell_volume_ = 0.0;
  double volume_ = 0.0;
  std::vector<std::vector<double>> kvecs_;
  std::vector<double> k2_;
  std::vector<std::size_t> partner_;
};

inline Lattice build_lattice(std::vector<std::size_t> dims, std::vector<double> lengths) {
  return Lattice::build(std::move(dims), std::move(lengths));
}

/// Forward/inverse transforms with plane-wave modes e^{ik.x}/sqrt(V).
///
/// Holds its own FFT plans and buffers, so each worker thread should own one.
/// A constant field c maps to mode amplitude c*sqrt(V) at k = 0.
class SpectralTransform {
 public:
  explicit SpectralTransform(const Lattice& lattice);
  ~SpectralTransform();
  SpectralTransform(const SpectralTransform&) = delete;
  SpectralTransform& operator=(const SpectralTransform&) = delete;
  SpectralTransform(SpectralTransform&&) noexcept;
  SpectralTransform& operator=(SpectralTransform&&) noexcept;

  Field to_modes(const Field& field);
  Field to_position(const Field& modes);
  void to_modes(const Field& field, Field& modes);
  void to_position(const Field& modes, Field& field);

 private:
  struct Plans;
  std::unique_ptr<Plans> plans_;
  double forward_scale_;
  double inverse_scale_;
};

/// Convenience wrappers that build a temporary transform.
Field to_modes(const Field& field, const Lattice& lattice);
Field to_position(const Field& modes, const Lattice& lattice);

}  // namespace becstate
