#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "becstate/config.hpp"
#include "becstate/errors.hpp"
#include "becstate/pipeline.hpp"

using namespace becstate;
namespace fs = std::filesystem;

namespace {

const char* kBase = R"([lattice]
dims = 16
lengths = 8.0

[physics]
g = 0.05
N_target = 80

[thermal]
T = 0.2
n_traj = 50
seed = 3

[evolution]
dt = 0.002
n_steps = 10
save_every = 5
)";

struct Workspace {
  fs::path dir;
  explicit Workspace(const std::string& name) : dir(fs::temp_directory_path() / ("becstate_unit_" + name)) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Workspace() { fs::remove_all(dir); }
  std::string write(const std::string& text) const {
    const fs::path p = dir / "run.ini";
    std::ofstream(p) << text;
    return p.string();
  }
  RunOptions options() const {
    RunOptions o;
    o.out_dir = (dir / "out").string();
    o.cache_dir = (dir / "cache").string();
    o.workers = 1;
    return o;
  }
};

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("config defaults and overrides") {
    const RunConfig cfg = parse_config(kBase, "/tmp/x");
    CHECK(cfg.dims == std::vector<std::size_t>{16});
    CHECK(cfg.g == 0.05);
    CHECK(cfg.representation == Representation::Wigner);
    CHECK(cfg.zero_mode.kind == ZeroModeState::Kind::Vacuum);
    CHECK(cfg.wants("g2"));
    CHECK(cfg.writes("json"));
    CHECK(cfg.tol == 1e-10);
    CHECK(fs::path(cfg.output_dir) == fs::path("/tmp/x/output"));
  }

  TEST_CASE("unknown keys are named") {
    CHECK(error_of(std::string(kBase) + "[numerics]\nfrobnicate = 1\n").find("numerics.frobnicate") !=
          std::string::npos);
    CHECK(error_of(std::string(kBase) + "[bogus]\nx = 1\n").find("bogus") != std::string::npos);
  }

  TEST_CASE("attractive interactions are refused") {
    std::string text = kBase;
    text.replace(text.find("g = 0.05"), 8, "g = -0.05");
    CHECK(error_of(text).find("repulsive") != std::string::npos);
  }

  TEST_CASE("bad values") {
    std::string text = kBase;
    text.replace(text.find("dt = 0.002"), 10, "dt = fast");
    CHECK(error_of(text).find("evolution.dt") != std::string::npos);
    CHECK(error_of("[lattice]\ndims = 16\n").find("lattice.lengths") != std::string::npos);
  }

  TEST_CASE("modes reports the homogeneous mu2") {
    Workspace ws("modes");
    const std::string path = ws.write(kBase);
    std::ostringstream out, err;
    REQUIRE(modes_command(path, ws.options(), out, err) == 0);
    std::ifstream in(ws.dir / "out" / "modes.json");
    const auto j = nlohmann::json::parse(in);
    CHECK(j["mu2"].get<double>() == doctest::Approx(0.05 / 8.0).epsilon(1e-15));
    CHECK(j["modes"].size() == 15);
  }

  TEST_CASE("validate warns about coarse steps") {
    Workspace ws("validate");
    std::string text = kBase;
    text.replace(text.find("dt = 0.002"), 10, "dt = 2.0");
    std::ostringstream out, err;
    CHECK(validate_command(ws.write(text), ws.options(), out, err) == 0);
    CHECK(out.str().find("warning") != std::string::npos);

    std::ostringstream out2, err2;
    CHECK(validate_command(ws.write(kBase), ws.options(), out2, err2) == 0);
    CHECK(out2.str().find("ok") != std::string::npos);
  }

  TEST_CASE("exit codes") {
    Workspace ws("codes");
    std::ostringstream out, err;
    CHECK(run_command((ws.dir / "missing.ini").string(), ws.options(), out, err) == 2);
    CHECK(run_command(ws.write("[lattice]\ndims = 16\nlengths = 8.0\nzzz = 1\n"), ws.options(), out, err) == 2);

    std::string starved = kBase;
    starved.replace(starved.find("N_target = 80"), 13, "N_target = 0.01");
    starved.replace(starved.find("T = 0.2"), 7, "T = 50");
    CHECK(run_command(ws.write(starved), ws.options(), out, err) == 3);

    std::string fragile = kBase;
    fragile += "[numerics]\nescape_fraction = 0\nblowup_factor = 1.000001\n";
    fragile.replace(fragile.find("T = 0.2"), 7, "T = 5.0");
    CHECK(run_command(ws.write(fragile), ws.options(), out, err) == 4);
    CHECK(fs::exists(ws.dir / "out" / "escapes.json"));

    CHECK(run_command(ws.write(kBase), ws.options(), out, err) == 0);
    CHECK(fs::exists(ws.dir / "out" / "manifest.json"));
    CHECK(fs::exists(ws.dir / "out" / "occupations.csv"));
  }
}
