#include "becstate/lattice.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include <fftw3.h>

#include "becstate/errors.hpp"

namespace becstate {

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

long symmetric_wavenumber(std::size_t j, std::size_t n) {
  const auto half = static_cast<long>(n / 2);
  const auto jj = static_cast<long>(j);
  return (n > 1 && jj >= half) ? jj - static_cast<long>(n) : jj;
}

}  // namespace

Lattice::Lattice(std::vector<std::size_t> dims, std::vector<double> lengths)
    : dims_(std::move(dims)), lengths_(std::move(lengths)) {
  size_ = 1;
  volume_ = 1.0;
  for (std::size_t d = 0; d < dims_.size(); ++d) {
    size_ *= dims_[d];
    volume_ *= lengths_[d];
  }
  cell_volume_ = volume_ / static_cast<double>(size_);

  kvecs_.resize(size_);
  k2_.resize(size_);
  partner_.resize(size_);
  const std::size_t rank = dims_.size();
  std::vector<std::size_t> idx(rank, 0);
  for (std::size_t i = 0; i < size_; ++i) {
    std::size_t rem = i;
    for (std::size_t d = rank; d-- > 0;) {
      idx[d] = rem % dims_[d];
      rem /= dims_[d];
    }
    std::vector<double> k(rank);
    double k2 = 0.0;
    std::size_t p = 0;
    for (std::size_t d = 0; d < rank; ++d) {
      const long m = symmetric_wavenumber(idx[d], dims_[d]);
      k[d] = 2.0 * std::numbers::pi * static_cast<double>(m) / lengths_[d];
      k2 += k[d] * k[d];
      p = p * dims_[d] + (dims_[d] - idx[d]) % dims_[d];
    }
    kvecs_[i] = std::move(k);
    k2_[i] = k2;
    partner_[i] = p;
  }
}

Lattice Lattice::build(std::vector<std::size_t> dims, std::vector<double> lengths) {
  if (dims.empty() || dims.size() > 3) {
    throw ConfigError("lattice: between 1 and 3 dimensions are supported");
  }
  if (dims.size() != lengths.size()) {
    throw ConfigError("lattice: dims and lengths must have the same number of entries");
  }
  for (std::size_t d = 0; d < dims.size(); ++d) {
    if (dims[d] < 2) {
      throw ConfigError("lattice: dims[" + std::to_string(d) + "] must be >= 2");
    }
    if (!(lengths[d] > 0.0) || !std::isfinite(lengths[d])) {
      throw ConfigError("lattice: lengths[" + std::to_string(d) + "] must be positive");
    }
  }
  return Lattice(std::move(dims), std::move(lengths));
}

Lattice Lattice::single_site(double volume) {
  if (!(volume > 0.0)) {
    throw ConfigError("lattice: single-site volume must be positive");
  }
  return Lattice({1}, {volume});
}

std::vector<long> Lattice::mode_numbers(std::size_t i) const {
  std::vector<long> m(rank());
  std::size_t rem = i;
  for (std::size_t d = rank(); d-- > 0;) {
    m[d] = symmetric_wavenumber(rem % dims_[d], dims_[d]);
    rem /= dims_[d];
  }
  return m;
}

std::vector<double> Lattice::position(std::size_t i) const {
  std::vector<double> x(rank());
  std::size_t rem = i;
  for (std::size_t d = rank(); d-- > 0;) {
    x[d] = static_cast<double>(rem % dims_[d]) * spacing(d);
    rem /= dims_[d];
  }
  return x;
}

struct SpectralTransform::Plans {
  std::size_t n = 0;
  fftw_complex* in = nullptr;
  fftw_complex* out = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
    if (in) fftw_free(in);
    if (out) fftw_free(out);
  }
};

SpectralTransform::SpectralTransform(const Lattice& lattice) : plans_(std::make_unique<Plans>()) {
  const std::size_t n = lattice.size();
  plans_->n = n;
  std::vector<int> shape(lattice.dims().begin(), lattice.dims().end());
  {
    std::lock_guard lock(planner_mutex());
    plans_->in = fftw_alloc_complex(n);
    plans_->out = fftw_alloc_complex(n);
    // FFTW_ESTIMATE keeps the chosen algorithm, and hence the rounding, identical run to run.
    plans_->forward = fftw_plan_dft(static_cast<int>(shape.size()), shape.data(), plans_->in,
                                    plans_->out, FFTW_FORWARD, FFTW_ESTIMATE);
    plans_->backward = fftw_plan_dft(static_cast<int>(shape.size()), shape.data(), plans_->in,
                                     plans_->out, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  if (!plans_->forward || !plans_->backward) {
    throw SolverError("lattice: FFT planning failed");
  }
  forward_scale_ = lattice.cell_volume() / std::sqrt(lattice.volume());
  inverse_scale_ = 1.0 / std::sqrt(lattice.volume());
}

SpectralTransform::~SpectralTransform() = default;
SpectralTransform::SpectralTransform(SpectralTransform&&) noexcept = default;
SpectralTransform& SpectralTransform::operator=(SpectralTransform&&) noexcept = default;

namespace {

void run_plan(fftw_plan plan, std::size_t n, fftw_complex* in, fftw_complex* out,
              const Field& src, Field& dst, double scale) {
  if (static_cast<std::size_t>(src.size()) != n) {
    throw ConfigError("transform: array size " + std::to_string(src.size()) +
                      " does not match lattice size " + std::to_string(n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    in[i][0] = src[static_cast<Eigen::Index>(i)].real();
    in[i][1] = src[static_cast<Eigen::Index>(i)].imag();
  }
  fftw_execute(plan);
  dst.resize(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    dst[static_cast<Eigen::Index>(i)] = cplx(out[i][0] * scale, out[i][1] * scale);
  }
}

}  // namespace

void SpectralTransform::to_modes(const Field& field, Field& modes) {
  run_plan(plans_->forward, plans_->n, plans_->in, plans_->out, field, modes, forward_scale_);
}

void SpectralTransform::to_position(const Field& modes, Field& field) {
  run_plan(plans_->backward, plans_->n, plans_->in, plans_->out, modes, field, inverse_scale_);
}

Field SpectralTransform::to_modes(const Field& field) {
  Field out;
  to_modes(field, out);
  return out;
}

Field SpectralTransform::to_position(const Field& modes) {
  Field out;
  to_position(modes, out);
  return out;
}

Field to_modes(const Field& field, const Lattice& lattice) {
  SpectralTransform t(lattice);
  return t.to_modes(field);
}

Field to_position(const Field& modes, const Lattice& lattice) {
  SpectralTransform t(lattice);
  return t.to_position(modes);
}

}  // namespace becstate
