#include "spinflow/config.hpp"

#include <charconv>
#include <cstdint>
#include <set>

#include "spinflow/io.hpp"

namespace spinflow {

namespace {

struct Assignment {
  std::string key;
  std::string value;
  std::string where;  // "line N" or "override 'k=v'"
};

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

const std::set<std::string> kKnownKeys = {
    "mode", "nx", "ny", "nz", "lx", "ly", "lz", "n", "L", "t_end", "dt", "cfl_safety",
    "epsilon", "rho_floor", "gauge", "alpha", "init", "init_r0", "init_amp", "seed",
    "snapshot_every", "outdir"};

std::vector<Assignment> scan(const std::string& text) {
  std::vector<Assignment> out;
  std::size_t pos = 0;
  int lineno = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string line = nl == std::string::npos ? text.substr(pos) : text.substr(pos, nl - pos);
    ++lineno;
    pos = nl == std::string::npos ? text.size() + 1 : nl + 1;

    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: expected 'key = value' at line " + std::to_string(lineno));
    Assignment a;
    a.key = trim(line.substr(0, eq));
    a.value = trim(line.substr(eq + 1));
    a.where = "line " + std::to_string(lineno);
    if (a.key.empty() || a.value.empty())
      throw ConfigError("config: expected 'key = value' at line " + std::to_string(lineno));
    if (kKnownKeys.find(a.key) == kKnownKeys.end())
      throw ConfigError("config: unknown key '" + a.key + "' at " + a.where);
    out.push_back(std::move(a));
  }
  return out;
}

double parse_double(const Assignment& a) {
  const char* b = a.value.data();
  const char* e = b + a.value.size();
  double v = 0.0;
  const auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc{} || res.ptr != e)
    throw ConfigError("config: key '" + a.key + "' expects a number, got '" + a.value + "' at " +
                      a.where);
  return v;
}

long long parse_int(const Assignment& a) {
  const char* b = a.value.data();
  const char* e = b + a.value.size();
  long long v = 0;
  const auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc{} || res.ptr != e)
    throw ConfigError("config: key '" + a.key + "' expects an integer, got '" + a.value + "' at " +
                      a.where);
  return v;
}

std::uint64_t parse_u64(const Assignment& a) {
  const char* b = a.value.data();
  const char* e = b + a.value.size();
  std::uint64_t v = 0;
  const auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc{} || res.ptr != e)
    throw ConfigError("config: key '" + a.key + "' expects an unsigned integer, got '" + a.value +
                      "' at " + a.where);
  return v;
}

[[noreturn]] void constraint_error(const Assignment& a, const std::string& what) {
  throw ConfigError("config: key '" + a.key + "' " + what + " at " + a.where);
}

}  // namespace

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::Flow: return "flow";
    case Mode::Toy2d: return "toy2d";
    default: return "symbol";
  }
}

ParsedConfig parse_config(const std::string& text, const std::vector<std::string>& overrides,
                          const Mode* force_mode) {
  std::vector<Assignment> assigns = scan(text);
  for (const std::string& ov : overrides) {
    const std::size_t eq = ov.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: override must be key=value, got '" + ov + "'");
    Assignment a;
    a.key = trim(ov.substr(0, eq));
    a.value = trim(ov.substr(eq + 1));
    a.where = "override '" + ov + "'";
    if (kKnownKeys.find(a.key) == kKnownKeys.end())
      throw ConfigError("config: unknown key '" + a.key + "' in " + a.where);
    assigns.push_back(std::move(a));
  }

  ParsedConfig cfg;
  bool saw_dt = false, saw_safety = false, saw_nz = false, saw_lz = false;
  bool saw_n = false, saw_bigl = false;

  // mode first (order independent)
  for (const Assignment& a : assigns) {
    if (a.key != "mode") continue;
    cfg.mode_explicit = true;
    if (a.value == "flow") cfg.mode = Mode::Flow;
    else if (a.value == "toy2d") cfg.mode = Mode::Toy2d;
    else if (a.value == "symbol") cfg.mode = Mode::Symbol;
    else constraint_error(a, "must be one of flow|toy2d|symbol, got '" + a.value + "'");
  }
  if (force_mode != nullptr) {
    if (cfg.mode_explicit && cfg.mode != *force_mode)
      throw ConfigError("config: mode '" + mode_name(cfg.mode) + "' conflicts with subcommand '" +
                        mode_name(*force_mode) + "'");
    cfg.mode = *force_mode;
    cfg.mode_explicit = true;
  }

  for (const Assignment& a : assigns) {
    const std::string& k = a.key;
    if (k == "mode") continue;

    if (k == "nx" || k == "ny" || k == "nz" || k == "n") {
      const long long v = parse_int(a);
      if (v < 8) constraint_error(a, "must be >= 8");
      if (k == "n") {
        saw_n = true;
        cfg.flow.n[0] = cfg.flow.n[1] = cfg.flow.n[2] = static_cast<int>(v);
        cfg.toy.n = static_cast<int>(v);
        cfg.symbol.n = static_cast<int>(v);
      } else if (cfg.mode != Mode::Flow) {
        constraint_error(a, "is only valid in flow mode");
      } else if (k == "nx") cfg.flow.n[0] = static_cast<int>(v);
      else if (k == "ny") cfg.flow.n[1] = static_cast<int>(v);
      else { cfg.flow.n[2] = static_cast<int>(v); saw_nz = true; }
    } else if (k == "lx" || k == "ly" || k == "lz") {
      if (cfg.mode != Mode::Flow) constraint_error(a, "is only valid in flow mode");
      const double v = parse_double(a);
      if (!(v > 0.0)) constraint_error(a, "must be positive");
      if (k == "lx") cfg.flow.length[0] = v;
      else if (k == "ly") cfg.flow.length[1] = v;
      else { cfg.flow.length[2] = v; saw_lz = true; }
    } else if (k == "L") {
      const double v = parse_double(a);
      if (!(v > 0.0)) constraint_error(a, "must be positive");
      saw_bigl = true;
      if (cfg.mode == Mode::Toy2d) {
        if (v < 6.0) constraint_error(a, "must be >= 6 (half-width of the toy domain)");
        cfg.toy.half_width = v;
      } else if (cfg.mode == Mode::Symbol) {
        cfg.symbol.length = v;
      } else {
        cfg.flow.length[0] = cfg.flow.length[1] = cfg.flow.length[2] = v;
      }
    } else if (k == "t_end") {
      const double v = parse_double(a);
      if (!(v > 0.0)) constraint_error(a, "must be positive");
      cfg.flow.t_end = v;
      cfg.toy.t_end = v;
    } else if (k == "dt") {
      const double v = parse_double(a);
      if (!(v > 0.0)) constraint_error(a, "must be positive");
      saw_dt = true;
      cfg.flow.dt_policy = DtPolicy::Fixed;
      cfg.flow.dt_fixed = v;
      cfg.toy.dt_fixed_policy = true;
      cfg.toy.dt_fixed = v;
    } else if (k == "cfl_safety") {
      const double v = parse_double(a);
      if (!(v > 0.0 && v <= 1.0)) constraint_error(a, "must be in (0, 1]");
      saw_safety = true;
      cfg.flow.cfl_safety = v;
      cfg.toy.cfl_safety = v;
    } else if (k == "epsilon") {
      if (cfg.mode != Mode::Flow) constraint_error(a, "is only valid in flow mode");
      const double v = parse_double(a);
      if (v < 0.0) constraint_error(a, "must be >= 0");
      cfg.flow.epsilon = v;
    } else if (k == "rho_floor") {
      if (cfg.mode != Mode::Flow) constraint_error(a, "is only valid in flow mode");
      const double v = parse_double(a);
      if (!(v > 0.0 && v < 1.0)) constraint_error(a, "must be in (0, 1)");
      cfg.flow.rho_floor = v;
    } else if (k == "gauge") {
      if (cfg.mode != Mode::Flow) constraint_error(a, "is only valid in flow mode");
      if (a.value == "on") cfg.flow.gauge = true;
      else if (a.value == "off") cfg.flow.gauge = false;
      else constraint_error(a, "must be on|off, got '" + a.value + "'");
    } else if (k == "alpha") {
      if (cfg.mode != Mode::Flow) constraint_error(a, "is only valid in flow mode");
      const double v = parse_double(a);
      if (v < 0.0) constraint_error(a, "must be >= 0");
      cfg.flow.alpha = v;
    } else if (k == "init") {
      if (cfg.mode != Mode::Flow) constraint_error(a, "is only valid in flow mode");
      try {
        cfg.flow.init = preset_from_name(a.value);
      } catch (const std::invalid_argument&) {
        constraint_error(a, "must be one of constant|gaussian_bump|nodal_ring|random_smooth");
      }
    } else if (k == "init_r0") {
      if (cfg.mode != Mode::Flow) constraint_error(a, "is only valid in flow mode");
      const double v = parse_double(a);
      if (!(v > 0.0)) constraint_error(a, "must be positive");
      cfg.flow.init_r0 = v;
    } else if (k == "init_amp") {
      if (cfg.mode != Mode::Flow) constraint_error(a, "is only valid in flow mode");
      cfg.flow.init_amp = parse_double(a);
    } else if (k == "seed") {
      cfg.flow.seed = parse_u64(a);
    } else if (k == "snapshot_every") {
      const long long v = parse_int(a);
      if (v < 0) constraint_error(a, "must be >= 0");
      cfg.flow.snapshot_every = v;
      cfg.toy.snapshot_every = v;
    } else if (k == "outdir") {
      cfg.flow.outdir = a.value;
      cfg.toy.outdir = a.value;
      cfg.symbol.outdir = a.value;
    }
  }

  if (saw_dt && saw_safety)
    throw ConfigError("config: both dt and cfl_safety given; pick one time-step policy");
  if (cfg.mode == Mode::Flow) {
    cfg.flow.dim = (saw_nz || saw_lz) ? 3 : 2;
    if (cfg.flow.dim == 2) {
      cfg.flow.n[2] = 1;
      cfg.flow.length[2] = 1.0;
    }
  }
  (void)saw_n;
  (void)saw_bigl;
  return cfg;
}

ParsedConfig parse_config(const std::string& text) { return parse_config(text, {}); }

std::vector<std::pair<std::string, std::string>> config_echo(const ParsedConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> e;
  e.emplace_back("mode", mode_name(cfg.mode));
  if (cfg.mode == Mode::Flow) {
    const FlowConfig& f = cfg.flow;
    e.emplace_back("nx", std::to_string(f.n[0]));
    e.emplace_back("ny", std::to_string(f.n[1]));
    if (f.dim == 3) e.emplace_back("nz", std::to_string(f.n[2]));
    e.emplace_back("lx", format_double(f.length[0]));
    e.emplace_back("ly", format_double(f.length[1]));
    if (f.dim == 3) e.emplace_back("lz", format_double(f.length[2]));
    e.emplace_back("t_end", format_double(f.t_end));
    if (f.dt_policy == DtPolicy::Fixed) e.emplace_back("dt", format_double(f.dt_fixed));
    else e.emplace_back("cfl_safety", format_double(f.cfl_safety));
    e.emplace_back("epsilon", format_double(f.epsilon));
    e.emplace_back("rho_floor", format_double(f.rho_floor));
    e.emplace_back("gauge", f.gauge ? "on" : "off");
    e.emplace_back("alpha", format_double(f.alpha));
    e.emplace_back("init", preset_name(f.init));
    e.emplace_back("init_r0", format_double(f.init_r0));
    e.emplace_back("init_amp", format_double(f.init_amp));
    e.emplace_back("seed", std::to_string(f.seed));
    e.emplace_back("snapshot_every", std::to_string(f.snapshot_every));
    e.emplace_back("outdir", f.outdir);
  } else if (cfg.mode == Mode::Toy2d) {
    const ToyConfig& t = cfg.toy;
    e.emplace_back("n", std::to_string(t.n));
    e.emplace_back("L", format_double(t.half_width));
    e.emplace_back("t_end", format_double(t.t_end));
    if (t.dt_fixed_policy) e.emplace_back("dt", format_double(t.dt_fixed));
    else e.emplace_back("cfl_safety", format_double(t.cfl_safety));
    e.emplace_back("snapshot_every", std::to_string(t.snapshot_every));
    e.emplace_back("outdir", t.outdir);
  } else {
    const SymbolConfig& s = cfg.symbol;
    e.emplace_back("n", std::to_string(s.n));
    e.emplace_back("L", format_double(s.length));
    e.emplace_back("outdir", s.outdir);
  }
  return e;
}

}  // namespace spinflow
