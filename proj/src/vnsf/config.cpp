#include "vnsf/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "vnsf/energetics.hpp"
#include "vnsf/snapshot.hpp"

namespace vnsf {

std::string to_string(InitialCondition::Kind kind) {
  switch (kind) {
    case InitialCondition::Kind::Constant:
      return "constant";
    case InitialCondition::Kind::GaussianBlob:
      return "gaussian_blob";
    case InitialCondition::Kind::RandomSmooth:
      return "random_smooth";
    case InitialCondition::Kind::FromSnapshot:
      return "from_snapshot";
  }
  return "?";
}

Grid RunConfig::grid() const { return make_grid(dim, nx, dim == 2 ? ny : 1, lx, ly, bc); }

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Thrown by the value parsers; turned into a line-numbered error.
struct BadValue {
  std::string expected;
};

long long parse_integer(const std::string& v) {
  long long out = 0;
  const char* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) throw BadValue{"an integer"};
  return out;
}

int parse_int(const std::string& v) {
  const long long x = parse_integer(v);
  if (x < -2147483647LL || x > 2147483647LL) throw BadValue{"an integer in range"};
  return static_cast<int>(x);
}

double parse_double(const std::string& v) {
  if (v.empty()) throw BadValue{"a number"};
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end != v.c_str() + v.size() || !std::isfinite(x)) throw BadValue{"a finite number"};
  return x;
}

bool parse_bool(const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw BadValue{"true or false"};
}

std::vector<int> parse_int_list(const std::string& v) {
  std::vector<int> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_int(trim(item)));
  if (out.empty()) throw BadValue{"a comma-separated list of integers"};
  return out;
}

std::string join(const std::vector<int>& xs) {
  std::string s;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(xs[k]);
  }
  return s;
}

struct Key {
  const char* name;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define VNSF_INT(name, member)                                                     \
  Key {                                                                            \
    name, [](RunConfig& c, const std::string& v) { c.member = parse_int(v); },     \
        [](const RunConfig& c) { return std::to_string(c.member); }                \
  }
#define VNSF_DOUBLE(name, member)                                                  \
  Key {                                                                            \
    name, [](RunConfig& c, const std::string& v) { c.member = parse_double(v); },  \
        [](const RunConfig& c) { return fmt_double(c.member); }                    \
  }
#define VNSF_BOOL(name, member)                                                    \
  Key {                                                                            \
    name, [](RunConfig& c, const std::string& v) { c.member = parse_bool(v); },    \
        [](const RunConfig& c) { return std::string(c.member ? "true" : "false"); } \
  }
#define VNSF_LIST(name, member)                                                    \
  Key {                                                                            \
    name, [](RunConfig& c, const std::string& v) { c.member = parse_int_list(v); }, \
        [](const RunConfig& c) { return join(c.member); }                          \
  }

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      VNSF_INT("dim", dim),
      VNSF_INT("nx", nx),
      VNSF_INT("ny", ny),
      VNSF_DOUBLE("lx", lx),
      VNSF_DOUBLE("ly", ly),
      Key{"bc",
          [](RunConfig& c, const std::string& v) {
            if (v == "periodic") c.bc = BcKind::PeriodicAll;
            else if (v == "paper") c.bc = BcKind::PaperBC;
            else throw BadValue{"periodic or paper"};
          },
          [](const RunConfig& c) { return to_string(c.bc); }},
      VNSF_DOUBLE("gamma", phys.gamma),
      VNSF_DOUBLE("mu", phys.mu),
      VNSF_DOUBLE("lambda", phys.lam),
      VNSF_DOUBLE("zeta", phys.zeta),
      VNSF_DOUBLE("eps", phys.eps),
      VNSF_DOUBLE("delta", phys.delta),
      VNSF_DOUBLE("beta", phys.beta),
      Key{"integrator",
          [](RunConfig&, const std::string& v) {
            if (v != "heun2") throw BadValue{"heun2"};
          },
          [](const RunConfig&) { return std::string("heun2"); }},
      VNSF_DOUBLE("cfl_adv", scheme.cfl_adv),
      VNSF_DOUBLE("cfl_diff", scheme.cfl_diff),
      VNSF_DOUBLE("rho_floor", scheme.rho_floor),
      VNSF_DOUBLE("t_end", scheme.t_end),
      VNSF_INT("snapshot_stride", scheme.snapshot_stride),
      VNSF_DOUBLE("snapshot_dt", scheme.snapshot_dt),
      VNSF_BOOL("convection", scheme.switches.convection),
      Key{"seed",
          [](RunConfig& c, const std::string& v) {
            const long long x = parse_integer(v);
            if (x < 0) throw BadValue{"a nonnegative integer"};
            c.seed = static_cast<std::uint64_t>(x);
          },
          [](const RunConfig& c) { return std::to_string(c.seed); }},
      Key{"ic",
          [](RunConfig& c, const std::string& v) {
            using K = InitialCondition::Kind;
            if (v == "constant") c.ic.kind = K::Constant;
            else if (v == "gaussian_blob") c.ic.kind = K::GaussianBlob;
            else if (v == "random_smooth") c.ic.kind = K::RandomSmooth;
            else if (v == "from_snapshot") c.ic.kind = K::FromSnapshot;
            else throw BadValue{"constant, gaussian_blob, random_smooth or from_snapshot"};
          },
          [](const RunConfig& c) { return to_string(c.ic.kind); }},
      VNSF_DOUBLE("ic_rho", ic.rho),
      VNSF_DOUBLE("ic_c", ic.c),
      VNSF_DOUBLE("ic_center_x", ic.center_x),
      VNSF_DOUBLE("ic_center_y", ic.center_y),
      VNSF_DOUBLE("ic_width", ic.width),
      VNSF_DOUBLE("ic_amplitude", ic.amplitude),
      VNSF_DOUBLE("ic_background", ic.background),
      VNSF_INT("ic_modes", ic.modes),
      VNSF_DOUBLE("ic_smooth_amplitude", ic.smooth_amplitude),
      Key{"ic_path", [](RunConfig& c, const std::string& v) { c.ic.path = v; },
          [](const RunConfig& c) { return c.ic.path; }},
      VNSF_INT("analysis_dim", analysis_dim),
      VNSF_BOOL("audit_energy", audit_energy),
      VNSF_BOOL("audit_c_l1", audit_c_l1),
      Key{"out_dir", [](RunConfig& c, const std::string& v) { c.out_dir = v; },
          [](const RunConfig& c) { return c.out_dir; }},
      VNSF_INT("energy_levels", energy_levels),
      VNSF_DOUBLE("energy_variation", energy_variation),
      VNSF_INT("sugiyama_samples", sugiyama_samples),
      VNSF_INT("sugiyama_modes", sugiyama_modes),
      VNSF_DOUBLE("sugiyama_m", sugiyama_m),
      VNSF_INT("sugiyama_d", sugiyama_d),
      VNSF_DOUBLE("sugiyama_kappa", sugiyama_kappa),
      VNSF_DOUBLE("sugiyama_xi", sugiyama_xi),
      VNSF_DOUBLE("sugiyama_drift", sugiyama_drift),
      VNSF_LIST("mms_levels", mms_levels),
      VNSF_BOOL("mms_convection", mms_convection),
      VNSF_INT("re_weak", re_weak),
      VNSF_INT("re_snapshots", re_snapshots),
      VNSF_LIST("ws_coarse", ws_coarse),
      VNSF_DOUBLE("ws_ratio", ws_ratio),
  };
  return table;
}

#undef VNSF_INT
#undef VNSF_DOUBLE
#undef VNSF_BOOL
#undef VNSF_LIST

const Key* find_key(const std::string& name) {
  for (const auto& k : keys()) {
    if (name == k.name) return &k;
  }
  return nullptr;
}

// One invariant over the parsed values; the error cites the first of `keys`
// that appeared in the text.
struct Rule {
  std::vector<const char*> keys;
  std::function<bool(const RunConfig&)> ok;
  std::string message;
};

bool ascending_at_least(const std::vector<int>& xs, int lo) {
  if (xs.empty() || xs.front() < lo) return false;
  for (std::size_t k = 1; k < xs.size(); ++k) {
    if (xs[k] <= xs[k - 1]) return false;
  }
  return true;
}

std::vector<Rule> rules() {
  return {
      {{"dim"}, [](const RunConfig& c) { return c.dim == 1 || c.dim == 2; }, "dim must be 1 or 2"},
      {{"nx"}, [](const RunConfig& c) { return c.nx >= 4; }, "nx must be >= 4"},
      {{"ny", "dim"}, [](const RunConfig& c) { return c.dim == 1 || c.ny >= 4; }, "ny must be >= 4 in two dimensions"},
      {{"lx"}, [](const RunConfig& c) { return c.lx > 0.0; }, "lx must be positive"},
      {{"ly"}, [](const RunConfig& c) { return c.ly > 0.0; }, "ly must be positive"},
      {{"gamma"}, [](const RunConfig& c) { return c.phys.gamma > 1.0; }, "gamma must satisfy γ>1"},
      {{"mu"}, [](const RunConfig& c) { return c.phys.mu > 0.0; }, "mu must satisfy μ>0"},
      {{"lambda", "mu"}, [](const RunConfig& c) { return 3.0 * c.phys.lam + 2.0 * c.phys.mu > 0.0; },
       "lambda must satisfy 3λ+2μ>0"},
      {{"zeta"}, [](const RunConfig& c) { return c.phys.zeta > 0.0; }, "zeta must satisfy ζ>0"},
      {{"eps"}, [](const RunConfig& c) { return c.phys.eps >= 0.0; }, "eps must satisfy ε>=0"},
      {{"delta"}, [](const RunConfig& c) { return c.phys.delta >= 0.0; }, "delta must satisfy δ>=0"},
      {{"beta", "delta"}, [](const RunConfig& c) { return c.phys.delta == 0.0 || c.phys.beta > 4.0; },
       "beta must satisfy β>4 when delta > 0"},
      {{"cfl_adv"}, [](const RunConfig& c) { return c.scheme.cfl_adv > 0.0 && c.scheme.cfl_adv < 1.0; },
       "cfl_adv must lie in (0,1)"},
      {{"cfl_diff"}, [](const RunConfig& c) { return c.scheme.cfl_diff > 0.0 && c.scheme.cfl_diff < 1.0; },
       "cfl_diff must lie in (0,1)"},
      {{"rho_floor"}, [](const RunConfig& c) { return c.scheme.rho_floor > 0.0; }, "rho_floor must be positive"},
      {{"t_end"}, [](const RunConfig& c) { return c.scheme.t_end >= 0.0; }, "t_end must be >= 0"},
      {{"snapshot_stride"}, [](const RunConfig& c) { return c.scheme.snapshot_stride >= 1; },
       "snapshot_stride must be >= 1"},
      {{"snapshot_dt"}, [](const RunConfig& c) { return c.scheme.snapshot_dt >= 0.0; }, "snapshot_dt must be >= 0"},
      {{"ic_rho", "ic"}, [](const RunConfig& c) { return c.ic.rho >= 0.0; }, "ic_rho must be >= 0"},
      {{"ic_c", "ic"}, [](const RunConfig& c) { return c.ic.c >= 0.0; }, "ic_c must be >= 0"},
      {{"ic_width"}, [](const RunConfig& c) { return c.ic.width > 0.0; }, "ic_width must be positive"},
      {{"ic_background", "ic_amplitude"},
       [](const RunConfig& c) { return c.ic.background >= 0.0 && c.ic.background + c.ic.amplitude >= 0.0; },
       "gaussian blob density must be nonnegative (ic_background >= 0, ic_background + ic_amplitude >= 0)"},
      {{"ic_modes"}, [](const RunConfig& c) { return c.ic.modes >= 1; }, "ic_modes must be >= 1"},
      {{"ic_smooth_amplitude"}, [](const RunConfig& c) { return c.ic.smooth_amplitude >= 0.0; },
       "ic_smooth_amplitude must be >= 0"},
      {{"ic_path", "ic"},
       [](const RunConfig& c) { return c.ic.kind != InitialCondition::Kind::FromSnapshot || !c.ic.path.empty(); },
       "ic = from_snapshot needs ic_path"},
      {{"analysis_dim"}, [](const RunConfig& c) { return c.analysis_dim == 2 || c.analysis_dim == 3; },
       "analysis_dim must be 2 or 3"},
      {{"energy_levels"}, [](const RunConfig& c) { return c.energy_levels >= 2; }, "energy_levels must be >= 2"},
      {{"energy_variation"}, [](const RunConfig& c) { return c.energy_variation > 0.0; },
       "energy_variation must be positive"},
      {{"sugiyama_samples"}, [](const RunConfig& c) { return c.sugiyama_samples >= 1; },
       "sugiyama_samples must be >= 1"},
      {{"sugiyama_modes"}, [](const RunConfig& c) { return c.sugiyama_modes >= 1; }, "sugiyama_modes must be >= 1"},
      {{"sugiyama_d"}, [](const RunConfig& c) { return c.sugiyama_d == 2 || c.sugiyama_d == 3; },
       "sugiyama_d must be 2 or 3"},
      {{"sugiyama_kappa"}, [](const RunConfig& c) { return c.sugiyama_kappa > 0.0; }, "sugiyama_kappa must be positive"},
      {{"sugiyama_xi"}, [](const RunConfig& c) { return c.sugiyama_xi > 0.0; }, "sugiyama_xi must be positive"},
      {{"sugiyama_drift"}, [](const RunConfig& c) { return c.sugiyama_drift > 0.0; }, "sugiyama_drift must be positive"},
      {{"mms_levels"}, [](const RunConfig& c) { return c.mms_levels.size() >= 2 && ascending_at_least(c.mms_levels, 4); },
       "mms_levels must list at least two increasing resolutions >= 4"},
      {{"re_weak"}, [](const RunConfig& c) { return c.re_weak >= 4; }, "re_weak must be >= 4"},
      {{"re_snapshots"}, [](const RunConfig& c) { return c.re_snapshots >= 8 && c.re_snapshots % 4 == 0; },
       "re_snapshots must be a multiple of 4 and >= 8"},
      {{"ws_coarse"}, [](const RunConfig& c) { return ascending_at_least(c.ws_coarse, 4); },
       "ws_coarse must list increasing resolutions >= 4"},
      {{"ws_ratio"}, [](const RunConfig& c) { return c.ws_ratio > 1.0; }, "ws_ratio must exceed 1"},
  };
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::map<std::string, int> seen;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (eq == std::string::npos) fail(ErrorCode::Parse, where + "expected `key = value`, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const Key* k = find_key(key);
    if (!k) fail(ErrorCode::Parse, where + "unknown key '" + key + "'");
    if (auto it = seen.find(key); it != seen.end()) {
      fail(ErrorCode::Parse, where + "duplicate key '" + key + "' (first set on line " + std::to_string(it->second) + ")");
    }
    seen[key] = line_no;
    try {
      k->set(cfg, value);
    } catch (const BadValue& b) {
      fail(ErrorCode::Parse, where + "key '" + key + "' expects " + b.expected + ", got '" + value + "'");
    }
  }

  if (!seen.count("ny")) cfg.ny = cfg.nx;
  if (cfg.dim == 1) {
    cfg.ny = 1;
    cfg.ly = 1.0;
  }

  for (const auto& r : rules()) {
    if (r.ok(cfg)) continue;
    std::string where;
    for (const char* k : r.keys) {
      if (auto it = seen.find(k); it != seen.end()) {
        where = "line " + std::to_string(it->second) + ": ";
        break;
      }
    }
    if (where.empty()) where = "default value: ";
    fail(ErrorCode::Parse, where + r.message);
  }

  const double g = cfg.phys.gamma;
  auto gamma_line = [&]() {
    auto it = seen.find("gamma");
    return it == seen.end() ? std::string("default gamma") : "line " + std::to_string(it->second);
  };
  if (cfg.analysis_dim == 3 && !(g > 8.0 / 5.0)) {
    cfg.warnings.push_back(gamma_line() + ": gamma = " + fmt_double(g) +
                           " is below the 8/5 existence threshold for the three-dimensional analysis; the run proceeds");
  }
  if (!(g > 1.5)) {
    cfg.warnings.push_back(gamma_line() + ": gamma = " + fmt_double(g) +
                           " does not exceed 3/2, so the coupling bound behind the modified energy is not available");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::Io, "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
  std::string out;
  for (const auto& k : keys()) {
    out += k.name;
    out += " = ";
    out += k.get(cfg);
    out += '\n';
  }
  return out;
}

State initial_state(const RunConfig& cfg) {
  const Grid g = cfg.grid();
  const InitialCondition& ic = cfg.ic;
  switch (ic.kind) {
    case InitialCondition::Kind::Constant:
      return constant_state(g, ic.rho, ic.c);
    case InitialCondition::Kind::GaussianBlob: {
      State s = constant_state(g, ic.background, ic.c);
      for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
          const double dx = g.x_center(i) - ic.center_x;
          const double dy = g.dim == 2 ? g.y_center(j) - ic.center_y : 0.0;
          s.rho.at(i, j) = ic.background + ic.amplitude * std::exp(-(dx * dx + dy * dy) / (ic.width * ic.width));
        }
      }
      return s;
    }
    case InitialCondition::Kind::RandomSmooth: {
      auto [rho, c] = random_smooth_pair(g, cfg.seed, ic.modes, ic.smooth_amplitude);
      return State{0.0, std::move(rho), VectorField(g), std::move(c)};
    }
    case InitialCondition::Kind::FromSnapshot: {
      State s = read_snapshot(ic.path);
      require(s.grid() == g, ErrorCode::GridMismatch,
              "snapshot '" + ic.path + "' does not match the configured grid");
      s.t = 0.0;
      return s;
    }
  }
  fail(ErrorCode::InvalidArgument, "unknown initial condition");
}

}  // namespace vnsf
