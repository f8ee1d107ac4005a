#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "becstate/config.hpp"
#include "becstate/number_balance.hpp"

namespace becstate {

inline constexpr const char* kVersion = "0.1.0";

/// Command-line overrides.
struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::size_t workers = 0;  ///< 0 = all cores
  std::optional<std::string> out_dir;
  std::optional<std::string> cache_dir;
};

/// Lattice, parameters and the number-balanced mode set of a config.
struct PreparedRun {
  RunConfig config;
  Lattice lattice;
  SystemParams params;
  BalancedState state;
  std::string cache_key;
  bool cache_hit = false;
};

/// Canonical text of everything the mode set depends on.
std::string cache_key(const RunConfig& cfg, const Lattice& lattice, const SystemParams& params);

/// Builds the lattice and solves (or loads from the cache) the balanced mode set.
PreparedRun prepare_run(const RunConfig& cfg, const RunOptions& options);

struct ValidationReport {
  std::vector<std::string> warnings;
  double eps_max = 0.0;
  double thermal_ratio = 0.0;  ///< k_B T / eps_max
  double step_ratio = 0.0;     ///< dt eps_max / hbar
  bool ok() const { return warnings.empty(); }
};

/// Stability audit of a prepared run.
ValidationReport audit(const PreparedRun& run);

/// Verbs. Return the process exit code: 0 ok, 2 config error, 3 solver failure,
/// 4 escape threshold breached.
int run_command(const std::string& config_path, const RunOptions& options, std::ostream& out, std::ostream& err);
int validate_command(const std::string& config_path, const RunOptions& options, std::ostream& out, std::ostream& err);
int modes_command(const std::string& config_path, const RunOptions& options, std::ostream& out, std::ostream& err);

}  // namespace becstate
