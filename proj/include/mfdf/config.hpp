#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "mfdf/errors.hpp"
#include "mfdf/sim_config.hpp"

namespace mfdf {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto pos = s.find(sep);
    out.push_back(trim(s.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return out;
}

/// A real number, optionally written as a multiple of pi: "64pi", "64*pi", "pi".
inline bool parse_real(std::string_view text, double& out) {
  text = trim(text);
  double factor = 1.0;
  if (text.size() >= 2 && text.substr(text.size() - 2) == "pi") {
    factor = std::numbers::pi;
    text = trim(text.substr(0, text.size() - 2));
    if (!text.empty() && text.back() == '*') text = trim(text.substr(0, text.size() - 1));
    if (text.empty()) {
      out = factor;
      return true;
    }
  }
  if (text.empty()) return false;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) return false;
  out = v * factor;
  return true;
}

template <class Int>
bool parse_integer(std::string_view text, Int& out) {
  text = trim(text);
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace detail

/// Parses a flat `key = value` document ('#' starts a comment). Unknown or
/// repeated keys, malformed values and constraint violations raise
/// ConfigError naming the key and its line.
inline SimConfig parse_config(std::string_view text) {
  struct Entry {
    std::string value;
    int line;
  };
  std::map<std::string, Entry, std::less<>> entries;

  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    std::string_view line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    start = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string value(detail::trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (entries.contains(key)) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + key + ": repeated key (first on line " +
                        std::to_string(entries[key].line) + ")");
    }
    entries.emplace(key, Entry{value, line_no});
  }

  static const std::set<std::string, std::less<>> known = {
      "equation", "delta",          "k",           "sign",         "grid_n",      "grid_length", "dt",
      "t_end",    "output_every",   "snapshot_times", "init",      "init.amplitude", "init.sigma", "init.width",
      "init.jmax", "init.N",        "init.gamma",  "init.s",       "seed",        "blowup_cap"};
  for (const auto& [key, e] : entries) {
    if (!known.contains(key)) throw ConfigError("line " + std::to_string(e.line) + ": " + key + ": unknown key");
  }

  auto fail = [&](const std::string& key, const std::string& msg) -> ConfigError {
    const auto it = entries.find(key);
    const std::string where = it == entries.end() ? "" : "line " + std::to_string(it->second.line) + ": ";
    return ConfigError(where + key + ": " + msg);
  };
  auto get = [&](const std::string& key) -> const std::string* {
    const auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second.value;
  };
  auto real = [&](const std::string& key, double& out) {
    if (const auto* v = get(key)) {
      if (!detail::parse_real(*v, out)) throw fail(key, "expected a real number, got '" + *v + "'");
    }
  };
  auto size = [&](const std::string& key, std::size_t& out) {
    if (const auto* v = get(key)) {
      if (!detail::parse_integer(*v, out)) throw fail(key, "expected a non-negative integer, got '" + *v + "'");
    }
  };
  auto require = [&](const std::string& key) {
    if (!get(key)) throw ConfigError(key + ": missing required key");
  };

  SimConfig cfg;
  require("equation");
  require("t_end");
  require("init");

  const std::string& eqn = *get("equation");
  if (eqn == "mfdf") cfg.equation = EquationName::mfdf;
  else if (eqn == "mfdf2") cfg.equation = EquationName::mfdf2;
  else if (eqn == "mbo") cfg.equation = EquationName::mbo;
  else if (eqn == "mkdv") cfg.equation = EquationName::mkdv;
  else if (eqn == "gfdf") cfg.equation = EquationName::gfdf;
  else throw fail("equation", "expected one of mfdf, mfdf2, mbo, mkdv, gfdf, got '" + eqn + "'");

  if (get("delta")) {
    double d = 0.0;
    real("delta", d);
    cfg.delta = d;
  }
  if (const auto* v = get("k")) {
    if (!detail::parse_integer(*v, cfg.k)) throw fail("k", "expected an integer, got '" + *v + "'");
  }
  if (const auto* v = get("sign")) {
    if (*v == "defocusing") cfg.sign = Sign::defocusing;
    else if (*v == "focusing") cfg.sign = Sign::focusing;
    else throw fail("sign", "expected defocusing or focusing, got '" + *v + "'");
  }
  size("grid_n", cfg.grid_n);
  real("grid_length", cfg.grid_length);
  if (const auto* v = get("dt"); v && *v != "auto") {
    double d = 0.0;
    real("dt", d);
    cfg.dt = d;
  }
  real("t_end", cfg.t_end);
  size("output_every", cfg.output_every);
  if (const auto* v = get("snapshot_times"); v && !v->empty()) {
    for (auto part : detail::split(*v, ',')) {
      double t = 0.0;
      if (!detail::parse_real(part, t)) throw fail("snapshot_times", "bad entry '" + std::string(part) + "'");
      cfg.snapshot_times.push_back(t);
    }
  }
  if (const auto* v = get("seed")) {
    if (!detail::parse_integer(*v, cfg.seed)) throw fail("seed", "expected an unsigned 64-bit integer");
  }
  real("blowup_cap", cfg.blowup_cap);

  const std::string& init = *get("init");
  std::set<std::string, std::less<>> used = {"init.amplitude"};
  if (init == "gaussian") {
    cfg.init.kind = InitSpec::Kind::gaussian;
    used.insert("init.sigma");
  } else if (init == "sech") {
    cfg.init.kind = InitSpec::Kind::sech;
    used.insert("init.width");
  } else if (init == "bandlimited") {
    cfg.init.kind = InitSpec::Kind::bandlimited;
    used.insert("init.jmax");
  } else if (init == "phin") {
    cfg.init.kind = InitSpec::Kind::phin;
    used.insert({"init.N", "init.gamma", "init.s"});
  } else {
    throw fail("init", "expected one of gaussian, sech, bandlimited, phin, got '" + init + "'");
  }
  for (const auto& [key, e] : entries) {
    if (key.starts_with("init.") && !used.contains(key)) throw fail(key, "not used by init = " + init);
  }
  real("init.amplitude", cfg.init.amplitude);
  real("init.sigma", cfg.init.sigma);
  real("init.width", cfg.init.width);
  if (const auto* v = get("init.jmax")) {
    if (!detail::parse_integer(*v, cfg.init.jmax)) throw fail("init.jmax", "expected an integer");
  }
  real("init.N", cfg.init.carrier);
  real("init.gamma", cfg.init.gamma);
  real("init.s", cfg.init.s);

  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    // Messages start with "key:"; attach the line if the key was given.
    const std::string msg = e.what();
    const auto colon = msg.find(':');
    const std::string key = msg.substr(0, colon);
    const auto it = entries.find(key);
    if (it != entries.end()) throw ConfigError("line " + std::to_string(it->second.line) + ": " + msg);
    throw;
  }
  return cfg;
}

inline SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace mfdf
