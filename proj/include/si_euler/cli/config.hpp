#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <initializer_list>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "si_euler/core/error.hpp"
#include "si_euler/core/fold.hpp"
#include "si_euler/initial_data.hpp"
#include "si_euler/jump_profile.hpp"

namespace si_euler::cli {

/**
 * @brief Everything one invocation needs. Field names are the config keys.
 *
 * Grammar: one `key = value` per line, `#` starts a comment, lists are
 * comma-separated, Fourier modes are `j:cos:sin` triples. See docs/config.md.
 */
struct RunConfig {
  std::string command = "simulate";
  std::string preset = "none";
  int m = 4;
  std::size_t markers = 1024;
  std::size_t grid = 1024;
  double dt = 1e-3;
  double T = 1.0;
  double cadence = 1.0;

  std::string data = "fourier";
  double mean = 0.0;
  std::vector<FourierMode> modes{{1, 0.0, 1.0}};
  std::vector<double> breakpoints;
  std::vector<double> widths;
  std::optional<double> a0;
  std::vector<double> levels;
  double mollify = 2.0;

  double cfl = 0.5;
  double gap_threshold = 0.25;
  std::size_t oversample = 4;
  std::string refresh = "every_stage";
  double profile_tol = 0.05;

  std::string kernel = "green";

  double rotation = 0.0;
  double steady_tol = 1e-8;

  std::string forcing = "constant";
  std::vector<double> forcing_params;  ///< empty: the family defaults
  double y0 = 1.0;
  std::string dy0 = "shoot";
  double ode_dt = 1e-3;
  double ode_tol = 1e-6;

  std::uint64_t seed = 1;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

inline double to_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size() || v.empty()) {
    throw ConfigError("config key '" + key + "': expected a number, got '" + v + "'");
  }
  return x;
}

inline long long to_int(const std::string& key, const std::string& v) {
  long long x = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size() || v.empty()) {
    throw ConfigError("config key '" + key + "': expected an integer, got '" + v + "'");
  }
  return x;
}

inline std::size_t to_count(const std::string& key, const std::string& v) {
  const long long x = to_int(key, v);
  if (x <= 0) throw ConfigError("config key '" + key + "': expected a positive integer");
  return static_cast<std::size_t>(x);
}

inline std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  if (trim(v).empty()) return out;
  for (const auto& item : split(v, ',')) out.push_back(to_double(key, item));
  return out;
}

inline std::vector<FourierMode> to_modes(const std::string& key, const std::string& v) {
  std::vector<FourierMode> out;
  if (trim(v).empty()) return out;
  for (const auto& item : split(v, ',')) {
    const auto f = split(item, ':');
    if (f.size() != 3) {
      throw ConfigError("config key '" + key + "': expected j:cos:sin triples, got '" + item + "'");
    }
    const long long j = to_int(key, f[0]);
    if (j < 1) throw ConfigError("config key '" + key + "': mode index must be >= 1");
    out.push_back({static_cast<int>(j), to_double(key, f[1]), to_double(key, f[2])});
  }
  return out;
}

inline std::string one_of(const std::string& key, const std::string& v,
                          std::initializer_list<const char*> allowed) {
  std::string names;
  for (const char* a : allowed) {
    if (v == a) return v;
    names += names.empty() ? a : std::string("|") + a;
  }
  throw ConfigError("config key '" + key + "': expected one of " + names + ", got '" + v + "'");
}

inline std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v[i]);
  return s;
}

inline void apply_preset(RunConfig& c, const std::string& name) {
  c.preset = one_of("preset", name, {"none", "homoclinic", "heteroclinic16", "steady2"});
  if (name == "homoclinic") {
    c.m = 4;
    c.data = "fourier";
    c.mean = 0.0;
    c.modes = {{1, 0.0, 1.0}};
  } else if (name == "heteroclinic16") {
    // Four unequal alternating intervals per domain, sixteen jumps on the circle.
    c.m = 4;
    c.data = "piecewise";
    c.breakpoints.clear();
    c.widths = {0.4, 0.1, 0.3, 0.2};
    c.a0.reset();
    c.levels = {1.0, -1.0, 1.0, -1.0};
  } else if (name == "steady2") {
    c.m = 4;
    c.data = "piecewise";
    c.breakpoints.clear();
    c.widths = {0.5, 0.5};
    c.a0.reset();
    c.levels = {1.0, -1.0};
  }
}

inline void apply_key(RunConfig& c, const std::string& key, const std::string& v) {
  if (key == "command") {
    c.command = one_of(key, v, {"simulate", "contour", "steady", "ode", "selfcheck"});
  } else if (key == "m") {
    c.m = static_cast<int>(to_int(key, v));
  } else if (key == "markers") {
    c.markers = to_count(key, v);
  } else if (key == "grid") {
    c.grid = to_count(key, v);
  } else if (key == "dt") {
    c.dt = to_double(key, v);
  } else if (key == "T") {
    c.T = to_double(key, v);
  } else if (key == "cadence") {
    c.cadence = to_double(key, v);
  } else if (key == "data") {
    c.data = one_of(key, v, {"fourier", "piecewise"});
  } else if (key == "mean") {
    c.mean = to_double(key, v);
  } else if (key == "modes") {
    c.modes = to_modes(key, v);
  } else if (key == "breakpoints") {
    c.breakpoints = to_list(key, v);
  } else if (key == "widths") {
    c.widths = to_list(key, v);
  } else if (key == "a0") {
    c.a0 = to_double(key, v);
  } else if (key == "levels") {
    c.levels = to_list(key, v);
  } else if (key == "mollify") {
    c.mollify = to_double(key, v);
  } else if (key == "cfl") {
    c.cfl = to_double(key, v);
  } else if (key == "gap_threshold") {
    c.gap_threshold = to_double(key, v);
  } else if (key == "oversample") {
    c.oversample = to_count(key, v);
  } else if (key == "refresh") {
    c.refresh = one_of(key, v, {"every_stage", "stages_1_3"});
  } else if (key == "profile_tol") {
    c.profile_tol = to_double(key, v);
  } else if (key == "kernel") {
    c.kernel = one_of(key, v, {"green", "literal"});
  } else if (key == "rotation") {
    c.rotation = to_double(key, v);
  } else if (key == "steady_tol") {
    c.steady_tol = to_double(key, v);
  } else if (key == "forcing") {
    c.forcing = one_of(key, v, {"constant", "power", "exponential", "linear"});
  } else if (key == "forcing_params") {
    c.forcing_params = to_list(key, v);
  } else if (key == "y0") {
    c.y0 = to_double(key, v);
  } else if (key == "dy0") {
    if (v != "shoot") to_double(key, v);
    c.dy0 = v;
  } else if (key == "ode_dt") {
    c.ode_dt = to_double(key, v);
  } else if (key == "ode_tol") {
    c.ode_tol = to_double(key, v);
  } else if (key == "seed") {
    c.seed = static_cast<std::uint64_t>(to_int(key, v));
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

inline std::pair<std::string, std::string> split_assignment(const std::string& line,
                                                            const std::string& where) {
  const auto eq = line.find('=');
  if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
  std::string key = trim(std::string_view(line).substr(0, eq));
  std::string value = trim(std::string_view(line).substr(eq + 1));
  if (key.empty()) throw ConfigError(where + ": empty key");
  return {std::move(key), std::move(value)};
}

}  // namespace detail

/// Parses `key = value` text into ordered assignments (later lines win).
inline std::map<std::string, std::string> parse_assignments(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    if (detail::trim(line).empty()) continue;
    auto [k, v] = detail::split_assignment(line, "line " + std::to_string(lineno));
    kv[k] = v;
  }
  return kv;
}

/// A `key=value` override from the command line.
inline std::pair<std::string, std::string> parse_override(const std::string& s) {
  return detail::split_assignment(s, "override '" + s + "'");
}

/// Jump profile named by the config (piecewise data only).
inline JumpProfile config_profile(const RunConfig& c) {
  const SymmetryFold fold(c.m);
  if (c.levels.empty()) throw ConfigError("piecewise data needs 'levels'");
  if (!c.breakpoints.empty()) {
    if (!c.widths.empty()) throw ConfigError("give either 'breakpoints' or 'widths', not both");
    return JumpProfile(fold, c.breakpoints, c.levels);
  }
  if (c.widths.size() != c.levels.size()) {
    throw ConfigError("'widths' needs one entry per level");
  }
  double sum = 0.0;
  for (double w : c.widths) {
    if (!(w > 0.0)) throw ConfigError("'widths' must be positive");
    sum += w;
  }
  std::vector<double> w(c.widths);
  for (double& x : w) x *= fold.period() / sum;
  return JumpProfile::from_widths(fold, c.a0.value_or(fold.domain_start()), w, c.levels);
}

inline InitialData config_data(const RunConfig& c) {
  if (c.data == "piecewise") return InitialData::piecewise(config_profile(c), c.mollify);
  return InitialData::fourier(SymmetryFold(c.m), c.mean, c.modes);
}

/// Checks ranges and cross-field consistency; throws ConfigError.
inline void validate(const RunConfig& c) {
  const SymmetryFold fold(c.m);
  if (!(c.dt > 0.0)) throw ConfigError("config key 'dt': must be positive");
  if (!std::isfinite(c.T)) throw ConfigError("config key 'T': must be finite");
  if (c.grid % 2 != 0) throw ConfigError("config key 'grid': must be even");
  if (!(c.cfl > 0.0)) throw ConfigError("config key 'cfl': must be positive");
  if (!(c.gap_threshold > 0.0)) throw ConfigError("config key 'gap_threshold': must be positive");
  if (!(c.mollify >= 0.0)) throw ConfigError("config key 'mollify': must be >= 0");
  if (!(c.profile_tol > 0.0)) throw ConfigError("config key 'profile_tol': must be positive");
  if (!(c.steady_tol > 0.0)) throw ConfigError("config key 'steady_tol': must be positive");
  if (!(c.ode_dt > 0.0)) throw ConfigError("config key 'ode_dt': must be positive");
  if (!(c.y0 > 0.0)) throw ConfigError("config key 'y0': must be positive");
  if (c.data == "piecewise") (void)config_profile(c);
  static const std::map<std::string, std::size_t> arity{
      {"constant", 1}, {"power", 0}, {"exponential", 3}, {"linear", 3}};
  if (!c.forcing_params.empty() && c.forcing_params.size() != arity.at(c.forcing)) {
    throw ConfigError("config key 'forcing_params': '" + c.forcing + "' takes " +
                      std::to_string(arity.at(c.forcing)) + " parameters");
  }
  (void)fold;
}

/**
 * @brief Builds a validated RunConfig from config text plus overrides.
 *
 * A preset is applied first, then every other key in sorted order, so
 * explicit keys always win over the preset regardless of their position.
 */
inline RunConfig parse_config(const std::string& text,
                              const std::vector<std::string>& overrides = {},
                              const std::string& command = "") {
  auto kv = parse_assignments(text);
  for (const auto& o : overrides) {
    auto [k, v] = parse_override(o);
    kv[k] = v;
  }
  RunConfig c;
  if (auto it = kv.find("preset"); it != kv.end()) {
    detail::apply_preset(c, it->second);
    kv.erase(it);
  }
  for (const auto& [k, v] : kv) detail::apply_key(c, k, v);
  if (!command.empty()) detail::apply_key(c, "command", command);
  validate(c);
  return c;
}

/// Canonical `key = value` text for a config; parses back to the same config.
inline std::string echo(const RunConfig& c) {
  using detail::list;
  using detail::num;
  std::ostringstream o;
  o << "command = " << c.command << '\n';
  o << "preset = none\n";  // the preset is already expanded below
  o << "m = " << c.m << '\n';
  o << "markers = " << c.markers << '\n';
  o << "grid = " << c.grid << '\n';
  o << "dt = " << num(c.dt) << '\n';
  o << "T = " << num(c.T) << '\n';
  o << "cadence = " << num(c.cadence) << '\n';
  o << "data = " << c.data << '\n';
  o << "mean = " << num(c.mean) << '\n';
  o << "modes = ";
  for (std::size_t i = 0; i < c.modes.size(); ++i) {
    o << (i ? ", " : "") << c.modes[i].j << ':' << num(c.modes[i].cos_amp) << ':'
      << num(c.modes[i].sin_amp);
  }
  o << '\n';
  o << "breakpoints = " << list(c.breakpoints) << '\n';
  o << "widths = " << list(c.widths) << '\n';
  if (c.a0) o << "a0 = " << num(*c.a0) << '\n';
  o << "levels = " << list(c.levels) << '\n';
  o << "mollify = " << num(c.mollify) << '\n';
  o << "cfl = " << num(c.cfl) << '\n';
  o << "gap_threshold = " << num(c.gap_threshold) << '\n';
  o << "oversample = " << c.oversample << '\n';
  o << "refresh = " << c.refresh << '\n';
  o << "profile_tol = " << num(c.profile_tol) << '\n';
  o << "kernel = " << c.kernel << '\n';
  o << "rotation = " << num(c.rotation) << '\n';
  o << "steady_tol = " << num(c.steady_tol) << '\n';
  o << "forcing = " << c.forcing << '\n';
  o << "forcing_params = " << list(c.forcing_params) << '\n';
  o << "y0 = " << num(c.y0) << '\n';
  o << "dy0 = " << c.dy0 << '\n';
  o << "ode_dt = " << num(c.ode_dt) << '\n';
  o << "ode_tol = " << num(c.ode_tol) << '\n';
  o << "seed = " << c.seed << '\n';
  return o.str();
}

}  // namespace si_euler::cli
