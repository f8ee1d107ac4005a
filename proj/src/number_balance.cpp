#include "becstate/number_balance.hpp"

#include <cmath>
#include <string>

#include "becstate/errors.hpp"

namespace becstate {

namespace {
constexpr double kStationaryTol = 1e-10;
}

BalancedState prepare_modes(const SystemParams& params, const Lattice& lattice, double n0, double temperature) {
  BalancedState state;
  state.condensate = solve_stationary(params, lattice, n0, kStationaryTol);
  if (params.homogeneous()) {
    state.modes = homogeneous_modes(params, lattice, n0 / lattice.volume());
  } else {
    state.modes = solve_bdg(params, lattice, state.condensate, lattice.size() - 1, kStationaryTol);
  }
  nonlinear_mu2(state.modes, state.condensate);
  state.occupations = occupations(state.modes, temperature);
  return state;
}

BalancedState balance_number(const SystemParams& params, const Lattice& lattice, double temperature, double tol,
                             const ZeroModeState& zero_mode) {
  if (!(params.n_target > 0.0)) throw ConfigError("physics.N_target must be positive");
  if (!(tol > 0.0)) throw ConfigError("solve_number_balance: tolerance must be positive");
  if (temperature < 0.0) throw ConfigError("thermal.T must be >= 0");

  const double target = params.n_target;
  ThermalEnsembleSpec spec;
  spec.temperature = temperature;
  spec.zero_mode = zero_mode;

  double n0 = target;
  for (int it = 1; it <= 500; ++it) {
    BalancedState state = prepare_modes(params, lattice, n0, temperature);
    const NumberStatistics stats =
        number_statistics(state.modes, state.occupations, spec, state.condensate, lattice.cell_volume());
    const double depletion = stats.mean - n0;
    const double proposed = target - depletion;
    if (std::abs(proposed - n0) <= tol * target) {
      state.iterations = it;
      return state;
    }
    if (proposed <= 0.0) {
      n0 *= 0.5;
      if (n0 < 1e-12 * target) {
        throw SolverError("solve_number_balance: N_target is below the total depletion; no condensate solution");
      }
      continue;
    }
    n0 = 0.5 * (n0 + proposed);
  }
  throw SolverError("solve_number_balance: fixed-point iteration did not converge");
}

CondensateSolution solve_number_balance(const SystemParams& params, const Lattice& lattice, double temperature,
                                        double tol, const ZeroModeState& zero_mode) {
  return balance_number(params, lattice, temperature, tol, zero_mode).condensate;
}

}  // namespace becstate
