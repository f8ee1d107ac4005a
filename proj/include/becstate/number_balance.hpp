#pragma once

#include <vector>

#include "becstate/bogoliubov.hpp"
#include "becstate/meanfield.hpp"
#include "becstate/thermal.hpp"

namespace becstate {

/// Self-consistent condensate, modes and occupations for a target total number.
struct BalancedState {
  CondensateSolution condensate;
  ModeSet modes;
  std::vector<double> occupations;
  int iterations = 0;
};

/// Finds N0 with N_target = N0 + depletion(N0) by damped fixed-point iteration
/// (new N0 mixed 50/50 with the old). Each step re-solves the condensate, the full
/// mode set (closed forms when U = 0, numerical BdG otherwise) and the occupations.
/// mu2 and mu1 are filled in on exit. Throws SolverError when no N0 > 0 exists or the
/// iteration does not converge.
BalancedState balance_number(const SystemParams& params, const Lattice& lattice, double temperature, double tol,
                             const ZeroModeState& zero_mode = ZeroModeState::vacuum());

CondensateSolution solve_number_balance(const SystemParams& params, const Lattice& lattice, double temperature,
                                        double tol, const ZeroModeState& zero_mode = ZeroModeState::vacuum());

/// Condensate + complete mode set for a fixed condensate number.
BalancedState prepare_modes(const SystemParams& params, const Lattice& lattice, double n0, double temperature);

}  // namespace becstate
