#include "becstate/modeset_io.hpp"

#include <filesystem>
#include <fstream>

#include "becstate/errors.hpp"

namespace becstate {

namespace {

constexpr char kMagic[8] = {'B', 'E', 'C', 'M', 'O', 'D', 'E', '1'};

class Writer {
 public:
  explicit Writer(std::ofstream& out) : out_(out) {}
  void u64(std::uint64_t v) { out_.write(reinterpret_cast<const char*>(&v), sizeof v); }
  void f64(double v) { out_.write(reinterpret_cast<const char*>(&v), sizeof v); }
  void str(const std::string& s) {
    u64(s.size());
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }
  void real(const Eigen::VectorXd& v) {
    u64(static_cast<std::uint64_t>(v.size()));
    out_.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
  }
  void reals(const std::vector<double>& v) { real(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()))); }
  void cvec(const Eigen::VectorXcd& v) {
    u64(static_cast<std::uint64_t>(v.size()));
    out_.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(cplx)));
  }
  void cmat(const Eigen::MatrixXcd& m) {
    u64(static_cast<std::uint64_t>(m.rows()));
    u64(static_cast<std::uint64_t>(m.cols()));
    out_.write(reinterpret_cast<const char*>(m.data()), static_cast<std::streamsize>(m.size() * sizeof(cplx)));
  }

 private:
  std::ofstream& out_;
};

class Reader {
 public:
  explicit Reader(std::ifstream& in) : in_(in) {}
  std::uint64_t u64() {
    std::uint64_t v = 0;
    get(&v, sizeof v);
    return v;
  }
  double f64() {
    double v = 0;
    get(&v, sizeof v);
    return v;
  }
  std::string str() {
    std::string s(checked(u64()), '\0');
    get(s.data(), s.size());
    return s;
  }
  Eigen::VectorXd real() {
    Eigen::VectorXd v(static_cast<Eigen::Index>(checked(u64())));
    get(v.data(), static_cast<std::size_t>(v.size()) * sizeof(double));
    return v;
  }
  std::vector<double> reals() {
    const Eigen::VectorXd v = real();
    return {v.data(), v.data() + v.size()};
  }
  Eigen::VectorXcd cvec() {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(checked(u64())));
    get(v.data(), static_cast<std::size_t>(v.size()) * sizeof(cplx));
    return v;
  }
  Eigen::MatrixXcd cmat() {
    const auto r = static_cast<Eigen::Index>(checked(u64()));
    const auto c = static_cast<Eigen::Index>(checked(u64()));
    Eigen::MatrixXcd m(r, c);
    get(m.data(), static_cast<std::size_t>(m.size()) * sizeof(cplx));
    return m;
  }

 private:
  static std::uint64_t checked(std::uint64_t n) {
    if (n > (std::uint64_t{1} << 32)) throw SolverError("mode cache: corrupt length");
    return n;
  }
  void get(void* p, std::size_t n) {
    in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (!in_) throw SolverError("mode cache: truncated file");
  }
  std::ifstream& in_;
};

}  // namespace

std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void write_balanced_state(const std::string& path, const BalancedState& s, const std::string& key) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("mode cache: cannot write " + tmp);
    out.write(kMagic, sizeof kMagic);
    Writer w(out);
    w.str(key);

    const auto& c = s.condensate;
    w.cvec(c.psi0);
    w.real(c.density);
    for (double v : {c.n0_total, c.mu_e, c.mu1, c.mu2, c.alpha, c.residual}) w.f64(v);
    w.u64(static_cast<std::uint64_t>(c.iterations));

    const auto& m = s.modes;
    w.u64(m.modes.size());
    for (const auto& mode : m.modes) {
      w.u64(mode.label);
      w.f64(mode.energy);
      w.cvec(mode.u);
      w.cvec(mode.v);
    }
    w.cvec(m.zero_mode.psi0);
    w.cvec(m.zero_mode.phi0);
    w.f64(m.zero_mode.alpha);
    w.cvec(m.condensate_modes);
    w.u64(m.homogeneous ? 1 : 0);
    if (m.homogeneous) {
      w.f64(m.homogeneous->n0);
      w.f64(m.homogeneous->g_over_volume);
      w.reals(m.homogeneous->kinetic);
      w.reals(m.homogeneous->energy);
      w.reals(m.homogeneous->u);
      w.reals(m.homogeneous->v);
    }
    w.cmat(m.u_proj);
    w.cmat(m.v_proj);
    w.reals(s.occupations);
    w.u64(static_cast<std::uint64_t>(s.iterations));
    if (!out) throw ConfigError("mode cache: write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::optional<BalancedState> read_balanced_state(const std::string& path, const std::string& key) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[sizeof kMagic];
  in.read(magic, sizeof magic);
  if (!in || !std::equal(magic, magic + sizeof magic, kMagic)) return std::nullopt;
  Reader r(in);
  try {
    if (r.str() != key) return std::nullopt;
    BalancedState s;
    auto& c = s.condensate;
    c.psi0 = r.cvec();
    c.density = r.real();
    c.n0_total = r.f64();
    c.mu_e = r.f64();
    c.mu1 = r.f64();
    c.mu2 = r.f64();
    c.alpha = r.f64();
    c.residual = r.f64();
    c.iterations = static_cast<int>(r.u64());

    auto& m = s.modes;
    m.modes.resize(r.u64());
    for (auto& mode : m.modes) {
      mode.label = r.u64();
      mode.energy = r.f64();
      mode.u = r.cvec();
      mode.v = r.cvec();
    }
    m.zero_mode.psi0 = r.cvec();
    m.zero_mode.phi0 = r.cvec();
    m.zero_mode.alpha = r.f64();
    m.condensate_modes = r.cvec();
    if (r.u64()) {
      HomogeneousCoefficients h;
      h.n0 = r.f64();
      h.g_over_volume = r.f64();
      h.kinetic = r.reals();
      h.energy = r.reals();
      h.u = r.reals();
      h.v = r.reals();
      m.homogeneous = std::move(h);
    }
    m.u_proj = r.cmat();
    m.v_proj = r.cmat();
    s.occupations = r.reals();
    s.iterations = static_cast<int>(r.u64());
    return s;
  } catch (const SolverError&) {
    return std::nullopt;
  }
}

}  // namespace becstate
