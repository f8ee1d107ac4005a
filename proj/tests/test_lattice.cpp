#include <doctest.h>

#include <random>

#include "becstate/errors.hpp"
#include "becstate/lattice.hpp"
#include "oracles.hpp"

using namespace becstate;

TEST_SUITE("lattice") {
  TEST_CASE("uniform 1D grid") {
    const Lattice lat = Lattice::build({8}, {8.0});
    CHECK(lat.size() == 8);
    CHECK(lat.cell_volume() == doctest::Approx(1.0));
    CHECK(lat.volume() == doctest::Approx(8.0));
    CHECK(lat.k_squared(0) == 0.0);
    CHECK(lat.wavevector(1)[0] == doctest::Approx(0.785398163397448).epsilon(1e-14));
    CHECK(lat.mode_numbers(4)[0] == -4);
    CHECK(lat.self_paired(4));
    for (std::size_t i = 0; i < lat.size(); ++i) {
      CHECK(lat.partner(lat.partner(i)) == i);
      CHECK(lat.wavevector(lat.partner(i))[0] == doctest::Approx(lat.self_paired(i) ? lat.wavevector(i)[0]
                                                                                     : -lat.wavevector(i)[0]));
    }
  }

  TEST_CASE("2D volume product") {
    const Lattice lat = Lattice::build({4, 4}, {2.0, 2.0});
    CHECK(lat.volume() == doctest::Approx(4.0));
    CHECK(lat.cell_volume() == doctest::Approx(0.25));
    CHECK(lat.volume() == doctest::Approx(lat.cell_volume() * static_cast<double>(lat.size())));
  }

  TEST_CASE("rejects degenerate grids") {
    CHECK_THROWS_AS(Lattice::build({1}, {1.0}), ConfigError);
    CHECK_THROWS_AS(Lattice::build({8}, {0.0}), ConfigError);
    CHECK_THROWS_AS(Lattice::build({8}, {-2.0}), ConfigError);
    CHECK_THROWS_AS(Lattice::build({8, 8}, {1.0}), ConfigError);
  }

  TEST_CASE("constant field maps to the k = 0 amplitude") {
    const Lattice lat = Lattice::build({8}, {8.0});
    const Field a = to_modes(Field::Ones(8), lat);
    CHECK(a[0].real() == doctest::Approx(std::sqrt(8.0)).epsilon(1e-14));
    for (int k = 1; k < 8; ++k) CHECK(std::abs(a[k]) < 1e-14);
  }

  TEST_CASE("plane wave is a unit mode amplitude") {
    const Lattice lat = Lattice::build({16}, {5.0});
    for (std::size_t k = 0; k < lat.size(); ++k) {
      Field f(16);
      for (std::size_t x = 0; x < 16; ++x) {
        f[static_cast<Eigen::Index>(x)] = std::polar(1.0 / std::sqrt(lat.volume()), lat.wavevector(k)[0] * lat.position(x)[0]);
      }
      const Field a = to_modes(f, lat);
      for (std::size_t q = 0; q < lat.size(); ++q) {
        CHECK(std::abs(a[static_cast<Eigen::Index>(q)] - (q == k ? 1.0 : 0.0)) < 1e-13);
      }
    }
  }

  TEST_CASE("random field against the naive transform") {
    const std::vector<std::size_t> dims{4, 8};
    const std::vector<double> lengths{1.5, 3.0};
    const Lattice lat = Lattice::build(dims, lengths);
    std::mt19937_64 gen(3);
    std::normal_distribution<double> nd;
    Field f(lat.size()), g(lat.size());
    std::vector<oracle::cplx> fv(lat.size());
    for (std::size_t i = 0; i < lat.size(); ++i) {
      f[static_cast<Eigen::Index>(i)] = {nd(gen), nd(gen)};
      g[static_cast<Eigen::Index>(i)] = {nd(gen), nd(gen)};
      fv[i] = f[static_cast<Eigen::Index>(i)];
    }
    SpectralTransform t(lat);
    const Field a = t.to_modes(f);
    const auto ref = oracle::naive_modes(fv, dims, lengths);
    for (std::size_t k = 0; k < lat.size(); ++k) CHECK(std::abs(a[static_cast<Eigen::Index>(k)] - ref[k]) < 1e-12);

    CHECK((t.to_position(a) - f).norm() / f.norm() < 1e-12);
    CHECK(f.squaredNorm() * lat.cell_volume() == doctest::Approx(a.squaredNorm()).epsilon(1e-10));
    const cplx ca(0.3, -1.2), cb(2.0, 0.5);
    CHECK((t.to_modes(ca * f + cb * g) - (ca * a + cb * t.to_modes(g))).norm() < 1e-12 * a.norm());
  }

  TEST_CASE("shape mismatch is rejected") {
    const Lattice lat = Lattice::build({8}, {8.0});
    SpectralTransform t(lat);
    CHECK_THROWS_AS(t.to_modes(Field::Zero(7)), ConfigError);
    CHECK_THROWS_AS(t.to_position(Field::Zero(9)), ConfigError);
  }

  TEST_CASE("single site") {
    const Lattice lat = Lattice::single_site(2.0);
    CHECK(lat.size() == 1);
    CHECK(lat.volume() == 2.0);
    const Field a = to_modes(Field::Constant(1, cplx(1.0, 1.0)), lat);
    CHECK(std::abs(a[0] - cplx(1.0, 1.0) * std::sqrt(2.0)) < 1e-14);
  }
}
