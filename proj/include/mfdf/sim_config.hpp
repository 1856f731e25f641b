#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mfdf/dispersion.hpp"
#include "mfdf/equation.hpp"
#include "mfdf/errors.hpp"
#include "mfdf/grid.hpp"

namespace mfdf {

enum class EquationName { mfdf, mfdf2, mbo, mkdv, gfdf };

inline std::string_view to_string(EquationName e) {
  switch (e) {
    case EquationName::mfdf:
      return "mfdf";
    case EquationName::mfdf2:
      return "mfdf2";
    case EquationName::mbo:
      return "mbo";
    case EquationName::mkdv:
      return "mkdv";
    case EquationName::gfdf:
      return "gfdf";
  }
  return "";
}

/// Initial-data descriptor.
///   gaussian     amplitude * exp(-x^2/sigma^2)
///   sech         amplitude * sech(x/width)
///   bandlimited  random Hermitian coefficients on 0 <= |j| <= jmax, |c_j| <= amplitude
///   phin         amplitude * indicator spectrum N^{-s} gamma^{-1/2} on +-[N, N+gamma]
struct InitSpec {
  enum class Kind { gaussian, sech, bandlimited, phin };
  Kind kind = Kind::gaussian;
  double amplitude = 0.1;
  double sigma = 1.0;
  double width = 1.0;
  int jmax = 8;
  double carrier = 64.0;
  double gamma = 0.1;
  double s = 0.25;
};

struct SimConfig {
  EquationName equation = EquationName::mfdf;
  std::optional<double> delta;
  int k = 2;
  Sign sign = Sign::defocusing;
  std::size_t grid_n = 1024;
  double grid_length = 64.0 * std::numbers::pi;
  std::optional<double> dt;  // empty: default rule, see resolved_dt
  double t_end = 0.0;
  std::size_t output_every = 100;
  std::vector<double> snapshot_times;
  InitSpec init;
  std::uint64_t seed = 0;
  double blowup_cap = 1e6;

  DispersionKind kind() const {
    switch (equation) {
      case EquationName::mfdf:
        return DispersionKind::fdf(delta.value_or(1.0), 2, sign);
      case EquationName::mfdf2:
        return DispersionKind::fdf2(delta.value_or(1.0), 2, sign);
      case EquationName::mbo:
        return DispersionKind::bo(2, sign);
      case EquationName::mkdv:
        return DispersionKind::airy(2, sign);
      case EquationName::gfdf:
        return DispersionKind::fdf(delta.value_or(1.0), k, sign);
    }
    return {};
  }

  EquationSpec equation_spec() const { return {kind(), 1.0}; }
  SpectralGrid grid() const { return SpectralGrid(grid_n, grid_length); }

  void validate() const {
    const bool needs_delta =
        equation == EquationName::mfdf || equation == EquationName::mfdf2 || equation == EquationName::gfdf;
    if (needs_delta && !delta) throw ConfigError("delta: required for " + std::string(to_string(equation)));
    if (!needs_delta && delta) throw ConfigError("delta: not allowed for " + std::string(to_string(equation)));
    if (delta && !(*delta > 0.0 && std::isfinite(*delta))) throw ConfigError("delta: must be positive");
    if (equation != EquationName::gfdf && k != 2) throw ConfigError("k: only allowed for gfdf");
    if (k < 1 || k > 4) throw ConfigError("k: must be in {1,2,3,4}");
    if (grid_n < 8 || grid_n % 2 != 0) throw ConfigError("grid_n: must be even and >= 8");
    if (!(grid_length > 0.0 && std::isfinite(grid_length))) throw ConfigError("grid_length: must be positive");
    if (dt && !(*dt > 0.0 && std::isfinite(*dt))) throw ConfigError("dt: must be positive");
    if (!(t_end >= 0.0 && std::isfinite(t_end))) throw ConfigError("t_end: must be non-negative");
    if (output_every == 0) throw ConfigError("output_every: must be positive");
    if (!(blowup_cap > 1.0)) throw ConfigError("blowup_cap: must exceed 1");
    for (double t : snapshot_times) {
      if (!(t >= 0.0 && t <= t_end)) throw ConfigError("snapshot_times: entries must lie in [0, t_end]");
    }
    switch (init.kind) {
      case InitSpec::Kind::gaussian:
        if (!(init.sigma > 0.0)) throw ConfigError("init.sigma: must be positive");
        break;
      case InitSpec::Kind::sech:
        if (!(init.width > 0.0)) throw ConfigError("init.width: must be positive");
        break;
      case InitSpec::Kind::bandlimited:
        if (init.jmax < 0 || static_cast<std::size_t>(init.jmax) >= grid_n / 2) {
          throw ConfigError("init.jmax: must be in [0, grid_n/2)");
        }
        break;
      case InitSpec::Kind::phin:
        if (!(init.carrier > 0.0) || !(init.gamma > 0.0)) throw ConfigError("init.N/init.gamma: must be positive");
        break;
    }
    if (!std::isfinite(init.amplitude)) throw ConfigError("init.amplitude: must be finite");
  }
};

/// Largest step allowed by the default rule: min(0.1 dx^2 L/(2 pi),
/// pi/(4 max|omega|)), i.e. no mode rotates by more than pi/4 per step.
inline double default_dt_limit(const SpectralGrid& grid, const DispersionKind& kind) {
  double wmax = 0.0;
  for (double xi : grid.wavenumbers()) wmax = std::max(wmax, std::abs(omega(xi, kind)));
  const double dx = grid.spacing();
  double dt = 0.1 * dx * dx * grid.length() / (2.0 * std::numbers::pi);
  if (wmax > 0.0) dt = std::min(dt, 0.25 * std::numbers::pi / wmax);
  return dt;
}

/// Shrinks `limit` so that t_end is a whole number of steps.
inline double fit_dt(double limit, double t_end) {
  if (t_end <= 0.0) return limit;
  const double steps = std::ceil(t_end / limit - 1e-9);
  return t_end / steps;
}

inline double resolved_dt(const SimConfig& cfg) {
  if (cfg.dt) return *cfg.dt;
  return fit_dt(default_dt_limit(cfg.grid(), cfg.kind()), cfg.t_end);
}

/// Number of steps of size dt that make up `t`; rejects non-integral ratios.
inline std::int64_t steps_for(double t, double dt, std::string_view what) {
  const double ratio = t / dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-6 * std::max(1.0, rounded)) {
    throw ConfigError(std::string(what) + ": " + std::to_string(t) + " is not a multiple of dt = " +
                      std::to_string(dt));
  }
  return static_cast<std::int64_t>(rounded);
}

}  // namespace mfdf
