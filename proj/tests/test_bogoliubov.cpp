#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "becstate/bogoliubov.hpp"
#include "becstate/errors.hpp"
#include "becstate/meanfield.hpp"
#include "becstate/number_balance.hpp"
#include "oracles.hpp"

using namespace becstate;

namespace {

SystemParams make_params(double g) {
  SystemParams p;
  p.g = g;
  return p;
}

// Lowest-k coefficients of a uniform gas whose density is chosen so that E_k = ratio * g n0.
std::pair<double, double> lowest_uv(double ratio) {
  const double length = 8.0, g = 0.1;
  const Lattice lat = Lattice::build({16}, {length});
  const double ek = 0.5 * std::pow(oracle::wavenumber(1, length), 2);
  const ModeSet set = homogeneous_modes(make_params(g), lat, ek / (ratio * g));
  return {set.homogeneous->u[1], set.homogeneous->v[1]};
}

}  // namespace

TEST_SUITE("bogoliubov") {
  TEST_CASE("spectrum at E_k = g n0") {
    const double length = 8.0, g = 0.1;
    const Lattice lat = Lattice::build({16}, {length});
    const double ek = 0.5 * std::pow(oracle::wavenumber(1, length), 2);
    const ModeSet set = homogeneous_modes(make_params(g), lat, ek / g);
    CHECK(set.homogeneous->energy[1] == doctest::Approx(std::sqrt(3.0) * ek).epsilon(1e-14));
  }

  TEST_CASE("coefficients at E_k = 2 g n0") {
    const auto [u, v] = lowest_uv(2.0);
    CHECK(u == doctest::Approx(1.01504).epsilon(1e-5));
    CHECK(v == doctest::Approx(0.17415).epsilon(1e-4));
    CHECK(u * u - v * v == doctest::Approx(1.0).epsilon(1e-14));
  }

  TEST_CASE("free-particle limit at high k") {
    const auto [u, v] = lowest_uv(1e4);
    CHECK(u == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(std::abs(v) < 1e-4);
  }

  TEST_CASE("condensate entry and mu2") {
    const Lattice lat = Lattice::build({16}, {8.0});
    const SystemParams p = make_params(0.1);
    const ModeSet set = homogeneous_modes(p, lat, 12.5);
    const auto& h = *set.homogeneous;
    CHECK(h.energy[0] == 0.0);
    CHECK(h.u[0] == 1.0);
    CHECK(h.v[0] == 0.0);
    CHECK(set.zero_mode.alpha == doctest::Approx(1.25).epsilon(1e-14));
    CHECK(set.complete());
    CondensateSolution c = solve_stationary(p, lat, 100.0, 1e-12);
    CHECK(nonlinear_mu2(set, c) == doctest::Approx(0.0125).epsilon(1e-15));
    CHECK(std::abs(c.mu1) < 1e-15);
    CHECK_THROWS_AS(homogeneous_modes(p, lat, 0.0), ConfigError);
  }

  TEST_CASE("phonon regime is gapless") {
    const double length = 400.0, g = 0.01, n0 = 10.0;
    const Lattice lat = Lattice::build({512}, {length});
    const ModeSet set = homogeneous_modes(make_params(g), lat, n0);
    const double k = oracle::wavenumber(1, length);
    CHECK(set.homogeneous->energy[1] / (std::sqrt(g * n0) * k) == doctest::Approx(1.0).epsilon(0.05));
  }

  TEST_CASE("trapped modes: normalisation, orthogonality and the dipole mode") {
    const double length = 16.0, omega = 0.5;
    const Lattice lat = Lattice::build({48}, {length});
    SystemParams p = make_params(0.05);
    p.potential.resize(48);
    for (std::size_t i = 0; i < 48; ++i) {
      const double x = lat.position(i)[0] - 0.5 * length;
      p.potential[static_cast<Eigen::Index>(i)] = 0.5 * omega * omega * x * x;
    }
    const CondensateSolution c = solve_stationary(p, lat, 200.0, 1e-12);
    const ModeSet set = solve_bdg(p, lat, c, 12, 1e-10);
    REQUIRE(set.modes.size() == 12);
    const double dv = lat.cell_volume();
    double worst = 0.0;
    for (std::size_t a = 0; a < set.modes.size(); ++a) {
      const auto& ma = set.modes[a];
      CHECK(std::abs(symplectic_product(ma.u, ma.v, ma.u, ma.v, dv) - 1.0) < 1e-8);
      for (std::size_t b = 0; b < set.modes.size(); ++b) {
        const auto& mb = set.modes[b];
        if (a != b) worst = std::max(worst, std::abs(symplectic_product(ma.u, ma.v, mb.u, mb.v, dv)));
        worst = std::max(worst, std::abs(symplectic_cross(ma.u, ma.v, mb.u, mb.v, dv)));
      }
      const ZeroMode& z = set.zero_mode;
      worst = std::max(worst, std::abs(symplectic_product(ma.u, ma.v, z.u(), z.v(), dv)));
    }
    CHECK(worst < 1e-8);
    const ZeroMode& z = set.zero_mode;
    const cplx norm = (z.psi0.cwiseProduct(z.phi0.conjugate()) + z.psi0.conjugate().cwiseProduct(z.phi0)).sum() * dv;
    CHECK(std::abs(norm - 2.0) < 1e-10);
    CHECK(z.psi0.squaredNorm() * dv == doctest::Approx(1.0).epsilon(1e-12));
    std::vector<double> e;
    for (const auto& m : set.modes) e.push_back(m.energy);
    CHECK(*std::min_element(e.begin(), e.end()) == doctest::Approx(omega).epsilon(0.02));
  }

  TEST_CASE("weak interaction leaves v negligible") {
    const Lattice lat = Lattice::build({16}, {8.0});
    const SystemParams p = make_params(1e-10);
    const CondensateSolution c = solve_stationary(p, lat, 10.0, 1e-12);
    const ModeSet set = solve_bdg(p, lat, c, 15, 1e-10);
    for (const auto& m : set.modes) CHECK(m.v.norm() * std::sqrt(lat.cell_volume()) < 1e-6);
  }
}
