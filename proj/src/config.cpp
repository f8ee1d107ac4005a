#include "becstate/config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "becstate/errors.hpp"

namespace becstate {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>> kSchema = {
    {"lattice", {"dims", "lengths"}},
    {"physics", {"g", "m", "hbar", "N_target", "potential", "omega", "potential_file"}},
    {"thermal", {"T", "zero_mode", "zero_mode_nbar", "zero_mode_r", "zero_mode_theta", "representation", "n_traj", "seed"}},
    {"quench", {"g", "potential", "omega", "potential_file"}},
    {"evolution", {"dt", "n_steps", "save_every"}},
    {"output", {"directory", "observables", "formats"}},
    {"numerics", {"tol", "escape_fraction", "blowup_factor"}},
};

std::string trim(std::string s) {
  for (const char* mark : {" ;", " #", "\t;", "\t#"}) {
    const auto pos = s.find(mark);
    if (pos != std::string::npos) s.erase(pos);
  }
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) {
    for (const auto& [section, body] : tree) {
      if (!body.data().empty() && body.empty()) throw ConfigError("config: key '" + section + "' outside a section");
      const auto it = kSchema.find(section);
      if (it == kSchema.end()) throw ConfigError("config: unknown section [" + section + "]");
      for (const auto& [key, value] : body) {
        if (!it->second.count(key)) throw ConfigError("config: unknown key " + section + "." + key);
        values_[section + "." + key] = trim(value.data());
      }
    }
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  bool has_section(const std::string& section) const {
    return std::any_of(values_.begin(), values_.end(),
                       [&](const auto& kv) { return kv.first.rfind(section + ".", 0) == 0; });
  }

  std::string text(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("config: missing required key " + key);
    return it->second;
  }

  double number(const std::string& key) const {
    const std::string s = text(key);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw ConfigError("config: " + key + " is not a number: '" + s + "'");
    }
    if (used != s.size() || !std::isfinite(v)) throw ConfigError("config: " + key + " is not a finite number: '" + s + "'");
    return v;
  }

  std::uint64_t integer(const std::string& key) const {
    const std::string s = text(key);
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
      throw ConfigError("config: " + key + " must be a non-negative integer, got '" + s + "'");
    }
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      throw ConfigError("config: " + key + " is out of range");
    }
  }

  std::vector<std::string> list(const std::string& key) const {
    std::string s = text(key);
    std::replace(s.begin(), s.end(), ',', ' ');
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string item; in >> item;) out.push_back(item);
    if (out.empty()) throw ConfigError("config: " + key + " is empty");
    return out;
  }

  std::vector<double> numbers(const std::string& key) const {
    std::vector<double> out;
    for (const auto& item : list(key)) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(item, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != item.size() || !std::isfinite(v)) throw ConfigError("config: " + key + " has a bad entry '" + item + "'");
      out.push_back(v);
    }
    return out;
  }

 private:
  std::map<std::string, std::string> values_;
};

PotentialSpec read_potential(const Reader& r, const std::string& section, const std::string& base_dir,
                             std::size_t rank) {
  PotentialSpec p;
  const std::string kind = r.has(section + ".potential") ? r.text(section + ".potential") : "none";
  if (kind == "none") {
    p.kind = PotentialSpec::Kind::None;
  } else if (kind == "harmonic") {
    p.kind = PotentialSpec::Kind::Harmonic;
    p.omega = r.numbers(section + ".omega");
    if (p.omega.size() == 1 && rank > 1) p.omega.assign(rank, p.omega[0]);
    if (p.omega.size() != rank) throw ConfigError("config: " + section + ".omega needs one value per axis");
    for (double w : p.omega) {
      if (!(w >= 0.0)) throw ConfigError("config: " + section + ".omega must be >= 0");
    }
  } else if (kind == "file") {
    p.kind = PotentialSpec::Kind::File;
    std::filesystem::path f = r.text(section + ".potential_file");
    if (f.is_relative()) f = std::filesystem::path(base_dir) / f;
    if (!std::filesystem::is_regular_file(f)) {
      throw ConfigError("config: " + section + ".potential_file does not exist: " + f.string());
    }
    p.file = f.string();
  } else {
    throw ConfigError("config: " + section + ".potential must be none, harmonic or file, got '" + kind + "'");
  }
  if (p.kind != PotentialSpec::Kind::Harmonic && r.has(section + ".omega")) {
    throw ConfigError("config: " + section + ".omega is only valid with potential = harmonic");
  }
  if (p.kind != PotentialSpec::Kind::File && r.has(section + ".potential_file")) {
    throw ConfigError("config: " + section + ".potential_file is only valid with potential = file");
  }
  return p;
}

}  // namespace

const char* to_string(PotentialSpec::Kind kind) {
  switch (kind) {
    case PotentialSpec::Kind::None:
      return "none";
    case PotentialSpec::Kind::Harmonic:
      return "harmonic";
    case PotentialSpec::Kind::File:
      return "file";
  }
  return "none";
}

Eigen::VectorXd PotentialSpec::build(const Lattice& lattice, double mass) const {
  const auto m = static_cast<Eigen::Index>(lattice.size());
  switch (kind) {
    case Kind::None:
      return {};
    case Kind::Harmonic: {
      Eigen::VectorXd u(m);
      for (Eigen::Index i = 0; i < m; ++i) {
        const auto x = lattice.position(static_cast<std::size_t>(i));
        double s = 0.0;
        for (std::size_t a = 0; a < x.size(); ++a) {
          const double d = x[a] - 0.5 * lattice.lengths()[a];
          s += omega[a] * omega[a] * d * d;
        }
        u[i] = 0.5 * mass * s;
      }
      return u;
    }
    case Kind::File: {
      std::ifstream in(file);
      if (!in) throw ConfigError("potential file cannot be opened: " + file);
      std::vector<double> vals;
      for (std::string tok; in >> tok;) {
        std::size_t used = 0;
        double v = 0.0;
        try {
          v = std::stod(tok, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != tok.size() || !std::isfinite(v)) throw ConfigError("potential file has a bad value '" + tok + "'");
        vals.push_back(v);
      }
      if (vals.size() != lattice.size()) {
        throw ConfigError("potential file holds " + std::to_string(vals.size()) + " values, lattice has " +
                          std::to_string(lattice.size()) + " points");
      }
      return Eigen::Map<Eigen::VectorXd>(vals.data(), m);
    }
  }
  return {};
}

bool RunConfig::wants(const std::string& observable) const {
  return std::find(observables.begin(), observables.end(), observable) != observables.end();
}

bool RunConfig::writes(const std::string& format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

RunConfig parse_config(const std::string& text, const std::string& base_dir) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  const Reader r(tree);
  RunConfig c;

  for (const auto& d : r.list("lattice.dims")) {
    if (d.find_first_not_of("0123456789") != std::string::npos) {
      throw ConfigError("config: lattice.dims must hold positive integers, got '" + d + "'");
    }
    c.dims.push_back(std::stoul(d));
  }
  c.lengths = r.numbers("lattice.lengths");
  if (c.lengths.size() == 1 && c.dims.size() > 1) c.lengths.assign(c.dims.size(), c.lengths[0]);
  if (c.dims.size() > 3) throw ConfigError("config: lattice.dims supports one to three axes");
  if (c.lengths.size() != c.dims.size()) throw ConfigError("config: lattice.lengths needs one value per axis");
  for (auto d : c.dims) {
    if (d < 2) throw ConfigError("config: lattice.dims entries must be >= 2");
  }
  for (double l : c.lengths) {
    if (!(l > 0.0)) throw ConfigError("config: lattice.lengths entries must be > 0");
  }

  c.g = r.number("physics.g");
  if (!(c.g > 0.0)) {
    throw ConfigError("config: physics.g must be > 0; only repulsive interactions are supported");
  }
  if (r.has("physics.m")) c.mass = r.number("physics.m");
  if (!(c.mass > 0.0)) throw ConfigError("config: physics.m must be > 0");
  if (r.has("physics.hbar")) c.hbar = r.number("physics.hbar");
  if (!(c.hbar > 0.0)) throw ConfigError("config: physics.hbar must be > 0");
  c.n_target = r.number("physics.N_target");
  if (!(c.n_target > 0.0)) throw ConfigError("config: physics.N_target must be > 0");
  c.potential = read_potential(r, "physics", base_dir, c.dims.size());

  if (r.has("thermal.T")) c.temperature = r.number("thermal.T");
  if (!(c.temperature >= 0.0)) throw ConfigError("config: thermal.T must be >= 0");
  const std::string zm = r.has("thermal.zero_mode") ? r.text("thermal.zero_mode") : "vacuum";
  auto opt = [&](const std::string& key, double def) { return r.has(key) ? r.number(key) : def; };
  if (zm == "vacuum") {
    c.zero_mode = ZeroModeState::vacuum();
  } else if (zm == "thermal") {
    c.zero_mode = ZeroModeState::thermal(r.number("thermal.zero_mode_nbar"));
    if (!(c.zero_mode.nbar >= 0.0)) throw ConfigError("config: thermal.zero_mode_nbar must be >= 0");
  } else if (zm == "squeezed") {
    c.zero_mode = ZeroModeState::squeezed(r.number("thermal.zero_mode_r"), opt("thermal.zero_mode_theta", 0.0));
  } else {
    throw ConfigError("config: thermal.zero_mode must be vacuum, thermal or squeezed, got '" + zm + "'");
  }
  if (zm != "thermal" && r.has("thermal.zero_mode_nbar")) {
    throw ConfigError("config: thermal.zero_mode_nbar is only valid with zero_mode = thermal");
  }
  if (zm != "squeezed" && (r.has("thermal.zero_mode_r") || r.has("thermal.zero_mode_theta"))) {
    throw ConfigError("config: thermal.zero_mode_r/theta are only valid with zero_mode = squeezed");
  }
  const std::string rep = r.has("thermal.representation") ? r.text("thermal.representation") : "wigner";
  if (rep == "wigner") {
    c.representation = Representation::Wigner;
  } else if (rep == "positive-p") {
    c.representation = Representation::PositiveP;
  } else {
    throw ConfigError("config: thermal.representation must be wigner or positive-p, got '" + rep + "'");
  }
  if (r.has("thermal.n_traj")) c.n_traj = r.integer("thermal.n_traj");
  if (c.n_traj < 1) throw ConfigError("config: thermal.n_traj must be >= 1");
  if (r.has("thermal.seed")) c.seed = r.integer("thermal.seed");

  if (r.has("quench.g")) {
    c.quench_g = r.number("quench.g");
    if (!(*c.quench_g > 0.0)) throw ConfigError("config: quench.g must be > 0; only repulsive interactions are supported");
  }
  if (r.has("quench.potential")) c.quench_potential = read_potential(r, "quench", base_dir, c.dims.size());
  if (!r.has("quench.potential") && (r.has("quench.omega") || r.has("quench.potential_file"))) {
    throw ConfigError("config: quench.omega/potential_file need quench.potential");
  }

  if (r.has("evolution.dt")) c.dt = r.number("evolution.dt");
  if (!(c.dt > 0.0)) throw ConfigError("config: evolution.dt must be > 0");
  if (r.has("evolution.n_steps")) c.n_steps = r.integer("evolution.n_steps");
  if (r.has("evolution.save_every")) c.save_every = r.integer("evolution.save_every");
  if (c.save_every < 1) throw ConfigError("config: evolution.save_every must be >= 1");

  if (r.has("output.directory")) {
    std::filesystem::path p = r.text("output.directory");
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    c.output_dir = p.lexically_normal().string();
  } else {
    c.output_dir = (std::filesystem::path(base_dir) / c.output_dir).lexically_normal().string();
  }
  if (r.has("output.observables")) {
    c.observables = r.list("output.observables");
    for (const auto& o : c.observables) {
      if (o != "occupations" && o != "number" && o != "g2") {
        throw ConfigError("config: output.observables accepts occupations, number, g2; got '" + o + "'");
      }
    }
  }
  if (r.has("output.formats")) {
    c.formats = r.list("output.formats");
    for (const auto& f : c.formats) {
      if (f != "csv" && f != "json") throw ConfigError("config: output.formats accepts csv, json; got '" + f + "'");
    }
  }

  if (r.has("numerics.tol")) c.tol = r.number("numerics.tol");
  if (!(c.tol > 0.0)) throw ConfigError("config: numerics.tol must be > 0");
  if (r.has("numerics.escape_fraction")) c.escape_fraction = r.number("numerics.escape_fraction");
  if (!(c.escape_fraction >= 0.0 && c.escape_fraction <= 1.0)) {
    throw ConfigError("config: numerics.escape_fraction must lie in [0, 1]");
  }
  if (r.has("numerics.blowup_factor")) c.blowup_factor = r.number("numerics.blowup_factor");
  if (!(c.blowup_factor > 1.0)) throw ConfigError("config: numerics.blowup_factor must be > 1");
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  const auto dir = std::filesystem::path(path).parent_path();
  return parse_config(text.str(), dir.empty() ? "." : dir.string());
}

Lattice config_lattice(const RunConfig& cfg) { return Lattice::build(cfg.dims, cfg.lengths); }

SystemParams config_params(const RunConfig& cfg, const Lattice& lattice) {
  SystemParams p;
  p.g = cfg.g;
  p.mass = cfg.mass;
  p.hbar = cfg.hbar;
  p.n_target = cfg.n_target;
  p.potential = cfg.potential.build(lattice, cfg.mass);
  p.validate(lattice);
  return p;
}

}  // namespace becstate
