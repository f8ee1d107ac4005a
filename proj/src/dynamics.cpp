#include "becstate/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "becstate/errors.hpp"
#include "becstate/parallel.hpp"

namespace becstate {

SystemParams Quench::apply(SystemParams params) const {
  if (g) params.g = *g;
  if (potential) params.potential = *potential;
  return params;
}

void EvolutionPlan::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("evolution.dt must be positive");
  if (save_every < 1) throw ConfigError("evolution.save_every must be >= 1");
  if (!(escape_fraction >= 0.0 && escape_fraction <= 1.0)) {
    throw ConfigError("numerics.escape_fraction must lie in [0, 1]");
  }
  if (!(blowup_factor > 1.0)) throw ConfigError("numerics.blowup_factor must exceed 1");
  if (max_blocks < 1) throw ConfigError("max_blocks must be >= 1");
}

std::vector<std::size_t> EvolutionPlan::snapshot_steps() const {
  std::vector<std::size_t> steps;
  for (std::size_t s = 0; s <= n_steps; s += save_every) steps.push_back(s);
  if (steps.back() != n_steps) steps.push_back(n_steps);
  return steps;
}

SplitStepIntegrator::SplitStepIntegrator(const SystemParams& params, const Lattice& lattice, double dt)
    : params_(params), dt_(dt), cell_volume_(lattice.cell_volume()), transform_(lattice) {
  params_.validate(lattice, true);
  const Eigen::VectorXd ek = params_.kinetic_energies(lattice);
  half_phase_.resize(ek.size());
  for (Eigen::Index k = 0; k < ek.size(); ++k) half_phase_[k] = std::polar(1.0, -0.5 * ek[k] * dt / params_.hbar);
  potential_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(lattice.size()));
  for (std::size_t i = 0; i < lattice.size(); ++i) potential_[static_cast<Eigen::Index>(i)] = params_.potential_at(i);
}

void SplitStepIntegrator::kinetic_half(Field& psi, bool conjugate_field) {
  transform_.to_modes(psi, modes_);
  if (conjugate_field) {
    modes_.array() *= half_phase_.conjugate().array();
  } else {
    modes_.array() *= half_phase_.array();
  }
  transform_.to_position(modes_, psi);
}

void SplitStepIntegrator::step_wigner(Field& psi) {
  kinetic_half(psi, false);
  const double rate = dt_ / params_.hbar;
  for (Eigen::Index x = 0; x < psi.size(); ++x) {
    psi[x] *= std::polar(1.0, -(params_.g * std::norm(psi[x]) + potential_[x]) * rate);
  }
  kinetic_half(psi, false);
}

void SplitStepIntegrator::step_positive_p(Field& psi, Field& psi_plus, StreamRng& rng) {
  kinetic_half(psi, false);
  kinetic_half(psi_plus, true);

  const Eigen::Index m = psi.size();
  const double gt = params_.g / params_.hbar;
  const cplx i(0.0, 1.0);
  const cplx noise = i * std::sqrt(cplx(0.0, gt)) * std::sqrt(dt_ / cell_volume_);
  const cplx noise_plus = -i * std::sqrt(cplx(0.0, -gt)) * std::sqrt(dt_ / cell_volume_);
  // Ito correction -b^2/2 of the log-form update.
  const double ito = 0.5 * gt * dt_ / cell_volume_;

  Eigen::VectorXd z(m), zp(m);
  for (Eigen::Index x = 0; x < m; ++x) z[x] = rng.normal();
  for (Eigen::Index x = 0; x < m; ++x) zp[x] = rng.normal();

  for (Eigen::Index x = 0; x < m; ++x) {
    const cplx n = psi_plus[x] * psi[x];
    const cplx drift = (gt * n + potential_[x] / params_.hbar) * dt_;
    psi[x] *= std::exp(-i * drift + i * ito + noise * z[x]);
    psi_plus[x] *= std::exp(i * drift - i * ito + noise_plus * zp[x]);
  }

  kinetic_half(psi, false);
  kinetic_half(psi_plus, true);
}

FieldSample step_wigner(const FieldSample& sample, const SystemParams& params, const Lattice& lattice, double dt) {
  if (sample.psi_plus) throw ConfigError("step_wigner: positive-P sample");
  SplitStepIntegrator integrator(params, lattice, dt);
  FieldSample out = sample;
  integrator.step_wigner(out.psi);
  return out;
}

FieldSample step_positive_p(const FieldSample& sample, const SystemParams& params, const Lattice& lattice, double dt,
                            StreamRng& rng) {
  if (!sample.psi_plus) throw ConfigError("step_positive_p: Wigner sample");
  SplitStepIntegrator integrator(params, lattice, dt);
  FieldSample out = sample;
  integrator.step_positive_p(out.psi, *out.psi_plus, rng);
  return out;
}

double gpe_energy(const Field& psi, const SystemParams& params, const Lattice& lattice,
                  SpectralTransform& transform) {
  const Eigen::VectorXd ek = params.kinetic_energies(lattice);
  const Field alpha = transform.to_modes(psi);
  double e = 0.0;
  for (Eigen::Index k = 0; k < alpha.size(); ++k) e += ek[k] * std::norm(alpha[k]);
  double local = 0.0;
  for (Eigen::Index x = 0; x < psi.size(); ++x) {
    const double n = std::norm(psi[x]);
    local += params.potential_at(static_cast<std::size_t>(x)) * n + 0.5 * params.g * n * n;
  }
  return e + local * lattice.cell_volume();
}

double MomentHistory::count(std::size_t snapshot) const {
  double c = 0.0;
  for (const auto& b : blocks.at(snapshot)) c += b.count;
  return c;
}

bool escaped(const Field& psi, const Field* psi_plus, double limit) {
  for (Eigen::Index x = 0; x < psi.size(); ++x) {
    const double n = std::norm(psi[x]);
    if (!std::isfinite(n) || n > limit) return true;
  }
  if (psi_plus) {
    for (Eigen::Index x = 0; x < psi_plus->size(); ++x) {
      const double n = std::norm((*psi_plus)[x]);
      if (!std::isfinite(n) || n > limit) return true;
    }
  }
  return false;
}

namespace {

double peak_density(const FieldSample& s) {
  double peak = s.psi.cwiseAbs2().maxCoeff();
  if (s.psi_plus) peak = std::max(peak, s.psi_plus->cwiseAbs2().maxCoeff());
  return peak;
}

}  // namespace

EnsembleRun run_ensemble(const std::vector<FieldSample>& samples, const EvolutionPlan& plan,
                         const SystemParams& params, const Lattice& lattice, EnsembleRun* partial) {
  plan.validate();
  if (samples.empty()) throw ConfigError("run_ensemble: empty ensemble");
  for (const auto& s : samples) {
    if (s.representation() != plan.scheme) throw ConfigError("run_ensemble: sample representation differs from plan");
    if (static_cast<std::size_t>(s.psi.size()) != lattice.size()) throw ConfigError("run_ensemble: field size mismatch");
  }
  const SystemParams effective = plan.quench ? plan.quench->apply(params) : params;
  effective.validate(lattice, true);

  const std::size_t n = samples.size();
  const std::size_t n_blocks = std::min(n, plan.max_blocks);
  const std::vector<std::size_t> snaps = plan.snapshot_steps();
  const std::size_t m = lattice.size();
  const double dv = lattice.cell_volume();
  const bool pp = plan.scheme == Representation::PositiveP;

  std::vector<std::vector<MomentSums>> block_sums(n_blocks, std::vector<MomentSums>(snaps.size(), MomentSums(m)));
  std::vector<char> lost(n, 0);
  std::vector<FieldSample> finals(plan.keep_final ? n : 0);

  auto make_state = [&](std::size_t) { return SplitStepIntegrator(effective, lattice, plan.dt); };
  parallel_for(n_blocks, plan.workers, make_state, [&](SplitStepIntegrator& integ, std::size_t b) {
    const std::size_t first = b * n / n_blocks;
    const std::size_t last = (b + 1) * n / n_blocks;
    std::vector<MomentSums> traj(snaps.size());
    for (std::size_t t = first; t < last; ++t) {
      FieldSample s = samples[t];
      const double limit = plan.blowup_factor * std::max(peak_density(s), 1.0 / dv);
      StreamRng rng(plan.seed, s.traj_id, Stream::Dynamics);
      bool gone = escaped(s.psi, s.psi_plus ? &*s.psi_plus : nullptr, limit);
      std::size_t step = 0;
      for (std::size_t j = 0; j < snaps.size() && !gone; ++j) {
        for (; step < snaps[j]; ++step) {
          if (pp) {
            integ.step_positive_p(s.psi, *s.psi_plus, rng);
          } else {
            integ.step_wigner(s.psi);
          }
          if (escaped(s.psi, s.psi_plus ? &*s.psi_plus : nullptr, limit)) {
            gone = true;
            break;
          }
        }
        if (!gone) traj[j] = measure(s, integ.transform(), dv);
      }
      if (gone) {
        lost[t] = 1;
        continue;
      }
      for (std::size_t j = 0; j < snaps.size(); ++j) block_sums[b][j] += traj[j];
      if (plan.keep_final) finals[t] = std::move(s);
    }
  });

  EnsembleRun run;
  run.total = n;
  run.history.representation = plan.scheme;
  run.history.lattice_size = m;
  run.history.cell_volume = dv;
  for (std::size_t s : snaps) run.history.times.push_back(static_cast<double>(s) * plan.dt);
  run.history.blocks.assign(snaps.size(), std::vector<MomentSums>());
  for (std::size_t j = 0; j < snaps.size(); ++j) {
    for (std::size_t b = 0; b < n_blocks; ++b) {
      if (block_sums[b][j].count > 0.0) run.history.blocks[j].push_back(block_sums[b][j]);
    }
  }
  for (std::size_t t = 0; t < n; ++t) {
    if (lost[t]) {
      ++run.escaped;
      run.escaped_ids.push_back(samples[t].traj_id);
    } else if (plan.keep_final) {
      run.final_samples.push_back(std::move(finals[t]));
    }
  }
  if (static_cast<double>(run.escaped) > plan.escape_fraction * static_cast<double>(n)) {
    const std::string msg = std::to_string(run.escaped) + " of " + std::to_string(n) +
                            " trajectories escaped, above the allowed fraction " + std::to_string(plan.escape_fraction);
    if (partial) *partial = run;
    throw EscapeThresholdError(msg, run.escaped, n);
  }
  return run;
}

}  // namespace becstate
