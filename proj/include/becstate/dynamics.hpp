#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "becstate/lattice.hpp"
#include "becstate/meanfield.hpp"
#include "becstate/moments.hpp"
#include "becstate/rng.hpp"
#include "becstate/sampler.hpp"
#include "becstate/thermal.hpp"

namespace becstate {

/// Parameter change applied at t = 0.
struct Quench {
  std::optional<double> g;
  std::optional<Eigen::VectorXd> potential;

  SystemParams apply(SystemParams params) const;
};

struct EvolutionPlan {
  double dt = 0.0;
  std::size_t n_steps = 0;
  std::size_t save_every = 1;
  Representation scheme = Representation::Wigner;
  std::optional<Quench> quench;
  std::uint64_t seed = 0;           ///< seeds the positive-P noise streams
  double escape_fraction = 0.01;    ///< largest tolerated fraction of escaped trajectories
  double blowup_factor = 1e6;       ///< |Psi|^2 above this times the initial peak density escapes
  std::size_t workers = 1;          ///< 0 = all cores
  std::size_t max_blocks = 256;     ///< trajectory groups kept per snapshot
  bool keep_final = true;

  void validate() const;
  /// Step indices at which moments are recorded: 0, save_every, ..., and n_steps.
  std::vector<std::size_t> snapshot_steps() const;
};

/// Strang split-step propagator for one trajectory. Owns its FFT plans.
class SplitStepIntegrator {
 public:
  SplitStepIntegrator(const SystemParams& params, const Lattice& lattice, double dt);

  /// Half kinetic step, local nonlinear + potential phase, half kinetic step.
  void step_wigner(Field& psi);
  /// Same splitting with an Ito Euler-Maruyama update of the drift and
  /// multiplicative noise in log form; xi and xi^+ are drawn from rng.
  void step_positive_p(Field& psi, Field& psi_plus, StreamRng& rng);

  SpectralTransform& transform() { return transform_; }
  const SystemParams& params() const { return params_; }
  double dt() const { return dt_; }

 private:
  void kinetic_half(Field& psi, bool conjugate_field);

  SystemParams params_;
  double dt_;
  double cell_volume_;
  SpectralTransform transform_;
  Field half_phase_;
  Field modes_;
  Eigen::VectorXd potential_;
};

/// One step on a sample (builds a temporary integrator).
FieldSample step_wigner(const FieldSample& sample, const SystemParams& params, const Lattice& lattice, double dt);
FieldSample step_positive_p(const FieldSample& sample, const SystemParams& params, const Lattice& lattice, double dt,
                            StreamRng& rng);

/// Discrete energy sum_k E_k |alpha_k|^2 + sum_x (U |Psi|^2 + g/2 |Psi|^4) dV.
double gpe_energy(const Field& psi, const SystemParams& params, const Lattice& lattice, SpectralTransform& transform);

/// Summed moments at every snapshot, grouped into contiguous trajectory blocks.
struct MomentHistory {
  Representation representation = Representation::Wigner;
  std::vector<double> times;
  std::vector<std::vector<MomentSums>> blocks;  ///< [snapshot][block]
  std::size_t lattice_size = 0;
  double cell_volume = 0.0;

  double count(std::size_t snapshot = 0) const;
};

struct EnsembleRun {
  MomentHistory history;
  std::vector<FieldSample> final_samples;  ///< surviving trajectories in id order
  std::size_t escaped = 0;
  std::size_t total = 0;
  std::vector<std::size_t> escaped_ids;
};

/// True when a field is non-finite or its density exceeds limit.
bool escaped(const Field& psi, const Field* psi_plus, double limit);

/// Evolves every sample and records moments at plan.snapshot_steps(). Escaped
/// trajectories are dropped from every snapshot. Throws EscapeThresholdError if more
/// than plan.escape_fraction of them escape; the run is still available through
/// the `partial` out-parameter when given.
EnsembleRun run_ensemble(const std::vector<FieldSample>& samples, const EvolutionPlan& plan,
                         const SystemParams& params, const Lattice& lattice, EnsembleRun* partial = nullptr);

}  // namespace becstate
