#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "becstate/lattice.hpp"
#include "becstate/meanfield.hpp"
#include "becstate/thermal.hpp"

namespace becstate {

struct PotentialSpec {
  enum class Kind { None, Harmonic, File };
  Kind kind = Kind::None;
  std::vector<double> omega;  ///< trap frequency per axis (harmonic)
  std::string file;           ///< tabulated U(x), one value per point in index order

  /// U(x) on the lattice; empty for Kind::None. Harmonic traps are centred in the box.
  Eigen::VectorXd build(const Lattice& lattice, double mass) const;
};

const char* to_string(PotentialSpec::Kind kind);

/// Everything a run needs, parsed from an INI file with sections
/// [lattice] [physics] [thermal] [quench] [evolution] [output] [numerics].
struct RunConfig {
  std::vector<std::size_t> dims;
  std::vector<double> lengths;

  double g = 0.0;
  double mass = 1.0;
  double hbar = 1.0;
  double n_target = 0.0;
  PotentialSpec potential;

  double temperature = 0.0;
  ZeroModeState zero_mode;
  Representation representation = Representation::Wigner;
  std::size_t n_traj = 1;
  std::uint64_t seed = 0;

  std::optional<double> quench_g;
  std::optional<PotentialSpec> quench_potential;

  double dt = 0.01;
  std::size_t n_steps = 0;
  std::size_t save_every = 1;

  std::string output_dir = "output";
  std::vector<std::string> observables{"occupations", "number", "g2"};
  std::vector<std::string> formats{"csv", "json"};

  double tol = 1e-10;
  double escape_fraction = 0.01;
  double blowup_factor = 1e6;

  bool wants(const std::string& observable) const;
  bool writes(const std::string& format) const;
};

/// Parses INI text. Relative file paths resolve against base_dir. Throws ConfigError
/// naming the offending section.key for unknown keys, bad values or missing entries.
RunConfig parse_config(const std::string& text, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);

Lattice config_lattice(const RunConfig& cfg);
SystemParams config_params(const RunConfig& cfg, const Lattice& lattice);

}  // namespace becstate
