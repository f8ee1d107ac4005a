#include "becstate/pipeline.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "becstate/dynamics.hpp"
#include "becstate/errors.hpp"
#include "becstate/modeset_io.hpp"
#include "becstate/observables.hpp"
#include "becstate/sampler.hpp"

namespace becstate {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string hex(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

const char* zero_mode_name(ZeroModeState::Kind k) {
  switch (k) {
    case ZeroModeState::Kind::Vacuum:
      return "vacuum";
    case ZeroModeState::Kind::Thermal:
      return "thermal";
    case ZeroModeState::Kind::Squeezed:
      return "squeezed";
  }
  return "vacuum";
}

json potential_json(const PotentialSpec& p) {
  json j{{"kind", to_string(p.kind)}};
  if (p.kind == PotentialSpec::Kind::Harmonic) j["omega"] = p.omega;
  if (p.kind == PotentialSpec::Kind::File) j["file"] = fs::path(p.file).filename().string();
  return j;
}

json config_json(const RunConfig& c, std::uint64_t seed) {
  json zm{{"kind", zero_mode_name(c.zero_mode.kind)}};
  if (c.zero_mode.kind == ZeroModeState::Kind::Thermal) zm["nbar"] = c.zero_mode.nbar;
  if (c.zero_mode.kind == ZeroModeState::Kind::Squeezed) {
    zm["r"] = c.zero_mode.r;
    zm["theta"] = c.zero_mode.theta;
  }
  json quench = json::object();
  if (c.quench_g) quench["g"] = *c.quench_g;
  if (c.quench_potential) quench["potential"] = potential_json(*c.quench_potential);
  return json{
      {"lattice", {{"dims", c.dims}, {"lengths", c.lengths}}},
      {"physics",
       {{"g", c.g}, {"m", c.mass}, {"hbar", c.hbar}, {"N_target", c.n_target}, {"potential", potential_json(c.potential)}}},
      {"thermal",
       {{"T", c.temperature},
        {"zero_mode", zm},
        {"representation", to_string(c.representation)},
        {"n_traj", c.n_traj},
        {"seed", seed}}},
      {"quench", quench},
      {"evolution", {{"dt", c.dt}, {"n_steps", c.n_steps}, {"save_every", c.save_every}}},
      {"output", {{"observables", c.observables}, {"formats", c.formats}}},
      {"numerics", {{"tol", c.tol}, {"escape_fraction", c.escape_fraction}, {"blowup_factor", c.blowup_factor}}},
  };
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

double field_norm(const Field& f, double dv) { return std::sqrt(f.squaredNorm() * dv); }

json modes_json(const PreparedRun& p) {
  const auto& c = p.state.condensate;
  const auto& m = p.state.modes;
  const double dv = p.lattice.cell_volume();
  json modes = json::array();
  for (std::size_t j = 0; j < m.modes.size(); ++j) {
    const auto& mode = m.modes[j];
    json e{{"label", mode.label},
           {"energy", mode.energy},
           {"occupation", p.state.occupations[j]},
           {"u_norm", field_norm(mode.u, dv)},
           {"v_norm", field_norm(mode.v, dv)}};
    if (m.homogeneous) {
      e["kinetic"] = m.homogeneous->kinetic[mode.label];
      e["u"] = m.homogeneous->u[mode.label];
      e["v"] = m.homogeneous->v[mode.label];
    }
    modes.push_back(e);
  }
  json j{{"N0", c.n0_total},
         {"mu_e", c.mu_e},
         {"mu1", c.mu1},
         {"mu2", c.mu2},
         {"alpha", c.alpha},
         {"residual", c.residual},
         {"balance_iterations", p.state.iterations},
         {"homogeneous", m.homogeneous.has_value()},
         {"zero_mode",
          {{"alpha", m.zero_mode.alpha},
           {"u_norm", field_norm(m.zero_mode.u(), dv)},
           {"v_norm", field_norm(m.zero_mode.v(), dv)}}},
         {"modes", modes}};
  if (m.homogeneous) j["g_over_V"] = p.params.g / p.lattice.volume();
  return j;
}

std::string modes_csv(const PreparedRun& p) {
  const auto& m = p.state.modes;
  const double dv = p.lattice.cell_volume();
  std::ostringstream s;
  s << "label,energy,occupation,u_norm,v_norm\n";
  for (std::size_t j = 0; j < m.modes.size(); ++j) {
    const auto& mode = m.modes[j];
    s << mode.label << ',' << num(mode.energy) << ',' << num(p.state.occupations[j]) << ','
      << num(field_norm(mode.u, dv)) << ',' << num(field_norm(mode.v, dv)) << '\n';
  }
  return s.str();
}

std::string series_csv(const ObservableSeries& s, bool long_form) {
  std::ostringstream out;
  if (long_form) {
    out << "time,mode,value,stderr\n";
    for (Eigen::Index t = 0; t < s.values.rows(); ++t) {
      for (Eigen::Index c = 0; c < s.values.cols(); ++c) {
        out << num(s.times[static_cast<std::size_t>(t)]) << ',' << s.columns[static_cast<std::size_t>(c)] << ','
            << num(s.values(t, c)) << ',' << num(s.errors(t, c)) << '\n';
      }
    }
    return out.str();
  }
  out << "time";
  for (const auto& c : s.columns) out << ',' << c << ',' << c << "_stderr";
  out << '\n';
  for (Eigen::Index t = 0; t < s.values.rows(); ++t) {
    out << num(s.times[static_cast<std::size_t>(t)]);
    for (Eigen::Index c = 0; c < s.values.cols(); ++c) out << ',' << num(s.values(t, c)) << ',' << num(s.errors(t, c));
    out << '\n';
  }
  return out.str();
}

json series_json(const ObservableSeries& s) {
  json values = json::array(), errors = json::array();
  for (Eigen::Index t = 0; t < s.values.rows(); ++t) {
    values.push_back(std::vector<double>(s.values.row(t).begin(), s.values.row(t).end()));
    errors.push_back(std::vector<double>(s.errors.row(t).begin(), s.errors.row(t).end()));
  }
  return json{{"times", s.times},
              {"columns", s.columns},
              {"values", values},
              {"stderr", errors},
              {"n_traj_effective", s.n_traj_effective},
              {"ordering_applied", s.ordering_applied}};
}

json escape_json(const EnsembleRun& run, const RunConfig& cfg) {
  return json{{"representation", to_string(cfg.representation)},
              {"total", run.total},
              {"escaped", run.escaped},
              {"fraction", run.total ? static_cast<double>(run.escaped) / static_cast<double>(run.total) : 0.0},
              {"threshold", cfg.escape_fraction},
              {"escaped_ids", run.escaped_ids}};
}

void print_modes_summary(const PreparedRun& p, std::ostream& out) {
  const auto& c = p.state.condensate;
  out << "N0      " << num(c.n0_total) << '\n'
      << "mu_e    " << num(c.mu_e) << '\n'
      << "mu1     " << num(c.mu1) << '\n'
      << "mu2     " << num(c.mu2) << '\n'
      << "alpha   " << num(c.alpha) << '\n'
      << "modes   " << p.state.modes.modes.size() << '\n';
}

template <typename Fn>
int guarded(std::ostream& err, Fn fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const EscapeThresholdError& e) {
    err << "escape threshold breached: " << e.what() << '\n';
    return 4;
  } catch (const SolverError& e) {
    err << "solver failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "solver failure: " << e.what() << '\n';
    return 3;
  }
}

RunConfig with_overrides(RunConfig cfg, const RunOptions& o) {
  if (o.seed) cfg.seed = *o.seed;
  if (o.out_dir) cfg.output_dir = *o.out_dir;
  return cfg;
}

}  // namespace

std::string cache_key(const RunConfig& cfg, const Lattice& lattice, const SystemParams& params) {
  std::ostringstream s;
  s << "becstate-modes-v1|dims";
  for (auto d : lattice.dims()) s << ' ' << d;
  s << "|lengths";
  for (double l : lattice.lengths()) s << ' ' << num(l);
  s << "|g " << num(params.g) << "|m " << num(params.mass) << "|hbar " << num(params.hbar) << "|N " << num(params.n_target);
  const auto* bytes = reinterpret_cast<const char*>(params.potential.data());
  s << "|U " << params.potential.size() << ' '
    << hex(fnv1a(std::string_view(bytes, static_cast<std::size_t>(params.potential.size()) * sizeof(double))));
  s << "|T " << num(cfg.temperature) << "|zero " << zero_mode_name(cfg.zero_mode.kind) << ' ' << num(cfg.zero_mode.nbar)
    << ' ' << num(cfg.zero_mode.r) << ' ' << num(cfg.zero_mode.theta) << "|tol " << num(cfg.tol);
  return s.str();
}

PreparedRun prepare_run(const RunConfig& cfg, const RunOptions& options) {
  PreparedRun p{cfg, config_lattice(cfg), {}, {}, {}, false};
  p.params = config_params(cfg, p.lattice);
  p.cache_key = cache_key(cfg, p.lattice, p.params);
  fs::path cache_file;
  if (options.cache_dir) {
    fs::create_directories(*options.cache_dir);
    cache_file = fs::path(*options.cache_dir) / ("modes-" + hex(fnv1a(p.cache_key)) + ".bin");
    if (auto cached = read_balanced_state(cache_file.string(), p.cache_key)) {
      p.state = std::move(*cached);
      p.cache_hit = true;
      return p;
    }
  }
  p.state = balance_number(p.params, p.lattice, cfg.temperature, cfg.tol, cfg.zero_mode);
  if (options.cache_dir) write_balanced_state(cache_file.string(), p.state, p.cache_key);
  return p;
}

ValidationReport audit(const PreparedRun& p) {
  ValidationReport r;
  for (const auto& m : p.state.modes.modes) r.eps_max = std::max(r.eps_max, m.energy);
  const auto& c = p.config;
  if (r.eps_max > 0.0) {
    r.thermal_ratio = c.temperature / r.eps_max;
    r.step_ratio = c.dt * r.eps_max / c.hbar;
  }
  if (c.temperature > r.eps_max) {
    r.warnings.push_back("k_B T = " + num(c.temperature) + " exceeds the largest mode energy " + num(r.eps_max) +
                         "; the momentum cutoff is too low for this temperature");
  }
  if (r.step_ratio > 0.1) {
    r.warnings.push_back("dt * eps_max / hbar = " + num(r.step_ratio) + " exceeds 0.1; the time step is too coarse");
  }
  return r;
}

int modes_command(const std::string& path, const RunOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = with_overrides(load_config(path), options);
    const PreparedRun p = prepare_run(cfg, options);
    const fs::path dir = cfg.output_dir;
    fs::create_directories(dir);
    write_text(dir / "modes.json", modes_json(p).dump(2) + "\n");
    write_text(dir / "modes.csv", modes_csv(p));
    print_modes_summary(p, out);
    return 0;
  });
}

int validate_command(const std::string& path, const RunOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = with_overrides(load_config(path), options);
    const PreparedRun p = prepare_run(cfg, options);
    const ValidationReport r = audit(p);
    out << "eps_max " << num(r.eps_max) << '\n'
        << "kT/eps_max " << num(r.thermal_ratio) << '\n'
        << "dt*eps_max/hbar " << num(r.step_ratio) << '\n';
    for (const auto& w : r.warnings) out << "warning: " << w << '\n';
    if (r.ok()) out << "ok\n";
    return 0;
  });
}

int run_command(const std::string& path, const RunOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = with_overrides(load_config(path), options);
    const PreparedRun p = prepare_run(cfg, options);
    const fs::path dir = cfg.output_dir;
    fs::create_directories(dir);
    if (p.cache_hit) out << "mode set loaded from cache\n";

    ThermalEnsembleSpec spec;
    spec.temperature = cfg.temperature;
    spec.zero_mode = cfg.zero_mode;
    spec.representation = cfg.representation;
    spec.n_traj = cfg.n_traj;
    spec.seed = cfg.seed;
    const auto samples = sample_ensemble(p.state.modes, p.state.occupations, spec, p.lattice, options.workers);

    EvolutionPlan plan;
    plan.dt = cfg.dt;
    plan.n_steps = cfg.n_steps;
    plan.save_every = cfg.save_every;
    plan.scheme = cfg.representation;
    plan.seed = cfg.seed;
    plan.escape_fraction = cfg.escape_fraction;
    plan.blowup_factor = cfg.blowup_factor;
    plan.workers = options.workers;
    plan.keep_final = false;
    if (cfg.quench_g || cfg.quench_potential) {
      Quench q;
      q.g = cfg.quench_g;
      if (cfg.quench_potential) q.potential = cfg.quench_potential->build(p.lattice, cfg.mass);
      plan.quench = q;
    }

    std::vector<std::string> files{"manifest.json", "modes.json", "modes.csv", "escapes.json"};
    json manifest{{"program", "becstate"}, {"version", kVersion}, {"seed", cfg.seed},
                  {"mode_cache_key", hex(fnv1a(p.cache_key))}, {"config", config_json(cfg, cfg.seed)}};
    write_text(dir / "modes.json", modes_json(p).dump(2) + "\n");
    write_text(dir / "modes.csv", modes_csv(p));

    EnsembleRun run;
    try {
      run = run_ensemble(samples, plan, p.params, p.lattice, &run);
    } catch (const EscapeThresholdError&) {
      write_text(dir / "escapes.json", escape_json(run, cfg).dump(2) + "\n");
      manifest["files"] = files;
      write_text(dir / "manifest.json", manifest.dump(2) + "\n");
      throw;
    }
    write_text(dir / "escapes.json", escape_json(run, cfg).dump(2) + "\n");

    json observables = json::object();
    if (cfg.wants("occupations")) {
      const OccupationSeries occ = mode_occupations(run.history);
      if (cfg.writes("csv")) {
        write_text(dir / "condensate_occupation.csv", series_csv(occ.condensate, false));
        write_text(dir / "occupations.csv", series_csv(occ.spectrum, true));
        files.insert(files.end(), {"condensate_occupation.csv", "occupations.csv"});
      }
      observables["condensate_occupation"] = series_json(occ.condensate);
      observables["occupations"] = series_json(occ.spectrum);
    }
    if (cfg.wants("number")) {
      const ObservableSeries ns = number_statistics(run.history);
      if (cfg.writes("csv")) {
        write_text(dir / "number.csv", series_csv(ns, false));
        files.push_back("number.csv");
      }
      observables["number"] = series_json(ns);
    }
    if (cfg.wants("g2")) {
      const ObservableSeries g2 = g2_zero(run.history);
      if (cfg.writes("csv")) {
        write_text(dir / "g2.csv", series_csv(g2, false));
        files.push_back("g2.csv");
      }
      observables["g2"] = series_json(g2);
    }
    if (cfg.writes("json")) {
      write_text(dir / "observables.json", observables.dump(2) + "\n");
      files.push_back("observables.json");
    }
    manifest["files"] = files;
    write_text(dir / "manifest.json", manifest.dump(2) + "\n");

    print_modes_summary(p, out);
    out << "trajectories " << run.total << " (escaped " << run.escaped << ")\n"
        << "snapshots    " << run.history.times.size() << '\n'
        << "output       " << dir.string() << '\n';
    return 0;
  });
}

}  // namespace becstate
