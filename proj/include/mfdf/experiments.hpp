#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <thread>
#include <vector>

#include "mfdf/dispersion.hpp"
#include "mfdf/dynamics.hpp"
#include "mfdf/errors.hpp"
#include "mfdf/initial_data.hpp"
#include "mfdf/observables.hpp"
#include "mfdf/sim_config.hpp"

namespace mfdf {

// ---------------------------------------------------------------------------
// delta -> infinity limit

struct LimitStudyResult {
  std::vector<double> deltas;
  std::vector<double> errors;          // sup over output times of ||u_delta - v||_{H^s}
  std::optional<double> fitted_rate;   // errors ~ delta^{-rate}; empty if any error is 0
  double s = 0.5;
  double t_end = 1.0;
};

struct LimitStudyOptions {
  bool linear_only = false;
  unsigned threads = 1;
};

namespace detail {

/// Least-squares slope of log(err) against log(delta) over the larger half of
/// the deltas, negated.
inline std::optional<double> fit_rate(const std::vector<double>& deltas, const std::vector<double>& errors) {
  const std::size_t m = deltas.size();
  const std::size_t first = m / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto count = static_cast<double>(m - first);
  for (std::size_t i = first; i < m; ++i) {
    if (!(errors[i] > 0.0)) return std::nullopt;
    const double x = std::log(deltas[i]), y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = count * sxx - sx * sx;
  if (denom == 0.0) return std::nullopt;
  return -(count * sxy - sx * sy) / denom;
}

/// ||a - b||_{H^s} on a shared grid.
inline double hs_distance(const SpectralGrid& grid, std::span<const complex> a, std::span<const complex> b, double s) {
  std::vector<complex> d(a.size());
  for (std::size_t j = 0; j < d.size(); ++j) d[j] = a[j] - b[j];
  return hs_norm(Spectrum(grid, std::move(d)), s);
}

template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += threads) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace detail

/// Runs mFDF for every delta and mBO once on the same grid, step and data,
/// and measures sup_t ||u_delta(t) - v(t)||_{H^s} at the output times of
/// `base` (every output_every steps and the final step).
inline LimitStudyResult limit_study(const SimConfig& base, std::vector<double> deltas, double s, double t_end,
                                    const LimitStudyOptions& opts = {}) {
  if (deltas.size() < 3) throw ConfigError("limit study needs at least 3 deltas");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] > 0.0) || (i > 0 && !(deltas[i] > deltas[i - 1]))) {
      throw ConfigError("deltas must be positive and strictly increasing");
    }
  }
  if (!(s >= 0.0)) throw ConfigError("Sobolev order must be non-negative");
  if (!(t_end > 0.0)) throw ConfigError("limit study needs t_end > 0");

  SimConfig cfg = base;
  cfg.equation = EquationName::mfdf;
  cfg.delta = deltas.front();
  cfg.k = 2;
  cfg.t_end = t_end;
  cfg.snapshot_times.clear();
  cfg.validate();

  const SpectralGrid grid = cfg.grid();
  const double scale = opts.linear_only ? 0.0 : 1.0;
  const EquationSpec reference{DispersionKind::bo(2, cfg.sign), scale};

  double dt = 0.0;
  if (cfg.dt) {
    dt = *cfg.dt;
  } else {
    double limit = default_dt_limit(grid, reference.kind);
    for (double d : deltas) limit = std::min(limit, default_dt_limit(grid, DispersionKind::fdf(d, 2, cfg.sign)));
    dt = fit_dt(limit, t_end);
  }
  const std::int64_t steps = steps_for(t_end, dt, "t_end");
  const auto every = static_cast<std::int64_t>(cfg.output_every);
  auto is_output = [&](std::int64_t k) { return k % every == 0 || k == steps; };

  const auto initial = detail::projected_coeffs(initial_field(cfg.init, grid, cfg.seed));

  std::vector<std::vector<complex>> ref_states{initial};
  {
    auto v = initial;
    const StepperCoeffs coeffs(grid, reference, dt);
    detail::evolve(v, coeffs, reference, steps, cfg.blowup_cap, [&](std::int64_t k, const std::vector<complex>& c) {
      if (is_output(k)) ref_states.push_back(c);
    });
  }

  LimitStudyResult out;
  out.deltas = deltas;
  out.errors.assign(deltas.size(), 0.0);
  out.s = s;
  out.t_end = t_end;

  detail::parallel_for(deltas.size(), opts.threads, [&](std::size_t i) {
    const EquationSpec eq{DispersionKind::fdf(deltas[i], 2, cfg.sign), scale};
    auto v = initial;
    double worst = detail::hs_distance(grid, v, ref_states[0], s);
    std::size_t slot = 1;
    const StepperCoeffs coeffs(grid, eq, dt);
    detail::evolve(v, coeffs, eq, steps, cfg.blowup_cap, [&](std::int64_t k, const std::vector<complex>& c) {
      if (!is_output(k)) return;
      worst = std::max(worst, detail::hs_distance(grid, c, ref_states[slot++], s));
    });
    out.errors[i] = worst;
  });

  out.fitted_rate = detail::fit_rate(out.deltas, out.errors);
  return out;
}

// ---------------------------------------------------------------------------
// Symmetry checks

namespace detail {

inline double relative_discrepancy(const Spectrum& a, const Spectrum& b, double s) {
  const double num = hs_distance(a.grid(), a.coeffs(), b.coeffs(), s);
  const double den = hs_norm(b, s);
  if (num == 0.0) return 0.0;
  return num / den;
}

inline Spectrum scaled_spectrum(std::vector<complex> c, const SpectralGrid& grid, double factor) {
  for (auto& x : c) x *= factor;
  return Spectrum(grid, std::move(c));
}

inline std::vector<complex> evolve_to(std::vector<complex> v, const SpectralGrid& grid, const EquationSpec& eq,
                                      double dt, std::int64_t steps, double cap) {
  if (steps == 0) return v;
  const StepperCoeffs coeffs(grid, eq, dt);
  evolve(v, coeffs, eq, steps, cap, [](std::int64_t, const std::vector<complex>&) {});
  return v;
}

}  // namespace detail

struct ScalingResult {
  double discrepancy = 0.0;   // relative H^s distance of the two final states
  double l2_initial = 0.0;    // ||u_0||_{L^2}
  double l2_scaled = 0.0;     // ||u_{0,lambda}||_{L^2}
};

/// Compares u(T) under depth delta on (N, L) with u_lambda(lambda^2 T) under
/// depth lambda*delta on (N, lambda L), where
/// u_lambda(x, t) = lambda^{-1/2} u(x/lambda, t/lambda^2). Both runs use the
/// same dt, so the scaled run takes lambda^2 times as many steps and the
/// discrepancy measures time-discretization error.
inline ScalingResult scaling_check(const SimConfig& cfg, double lambda, double s = 0.5) {
  cfg.validate();
  if (!(lambda > 0.0 && std::isfinite(lambda))) throw ConfigError("lambda must be positive");
  if (cfg.equation != EquationName::mfdf && cfg.equation != EquationName::mbo) {
    throw ConfigError("equation: scaling symmetry holds for mfdf and mbo only");
  }
  const SpectralGrid grid = cfg.grid();
  const SpectralGrid scaled_grid(cfg.grid_n, lambda * cfg.grid_length);
  const EquationSpec eq = cfg.equation_spec();
  EquationSpec eq_scaled = eq;
  if (eq.kind.has_depth()) eq_scaled.kind.delta = lambda * eq.kind.delta;

  const double dt = resolved_dt(cfg);
  const std::int64_t steps = steps_for(cfg.t_end, dt, "t_end");
  std::int64_t scaled_steps = 0;
  try {
    scaled_steps = steps_for(lambda * lambda * cfg.t_end, dt, "scaled t_end");
  } catch (const ConfigError&) {
    throw ConfigError("resolution mismatch: lambda^2 t_end is not a whole number of steps");
  }

  // y_j = lambda x_j, so u_{0,lambda}(y_j) = lambda^{-1/2} u_0(x_j).
  const double amp = 1.0 / std::sqrt(lambda);
  const auto u0 = detail::projected_coeffs(initial_field(cfg.init, grid, cfg.seed));
  const auto u0_scaled = detail::scaled_spectrum(u0, scaled_grid, amp);

  ScalingResult r;
  r.l2_initial = hs_norm(Spectrum(grid, u0), 0.0);
  r.l2_scaled = hs_norm(u0_scaled, 0.0);

  const auto a = detail::evolve_to(u0, grid, eq, dt, steps, cfg.blowup_cap);
  const auto b = detail::evolve_to({u0_scaled.coeffs().begin(), u0_scaled.coeffs().end()}, scaled_grid, eq_scaled,
                                   dt, scaled_steps, cfg.blowup_cap);
  r.discrepancy = detail::relative_discrepancy(detail::scaled_spectrum(a, scaled_grid, amp),
                                               Spectrum(scaled_grid, b), s);
  return r;
}

/// Compares a^{1/2} u(aT) for mFDF(delta) with the mFDF2(delta) solution
/// from a^{1/2} u_0 at time T, a = 3/(2 pi delta). Both runs take the same
/// number of steps (dt for mFDF2, a dt for mFDF).
inline double transform_check(const SimConfig& cfg, double delta, double s = 0.5) {
  if (!(delta > 0.0 && std::isfinite(delta))) throw ConfigError("delta must be positive");
  SimConfig c = cfg;
  c.equation = EquationName::mfdf;
  c.delta = delta;
  c.k = 2;
  c.validate();

  const SpectralGrid grid = c.grid();
  const double a = 3.0 / (2.0 * std::numbers::pi * delta);
  const EquationSpec first{DispersionKind::fdf(delta, 2, c.sign), 1.0};
  const EquationSpec second{DispersionKind::fdf2(delta, 2, c.sign), 1.0};

  double dt = 0.0;
  if (c.dt) {
    dt = *c.dt;
  } else {
    const double limit = std::min(default_dt_limit(grid, second.kind), default_dt_limit(grid, first.kind) / a);
    dt = fit_dt(limit, c.t_end);
  }
  const std::int64_t steps = steps_for(c.t_end, dt, "t_end");

  const double amp = std::sqrt(a);
  const auto u0 = detail::projected_coeffs(initial_field(c.init, grid, c.seed));
  const auto lhs = detail::evolve_to(u0, grid, first, a * dt, steps, c.blowup_cap);
  const auto v0 = detail::scaled_spectrum(u0, grid, amp);
  const auto rhs =
      detail::evolve_to({v0.coeffs().begin(), v0.coeffs().end()}, grid, second, dt, steps, c.blowup_cap);
  return detail::relative_discrepancy(detail::scaled_spectrum(lhs, grid, amp), Spectrum(grid, rhs), s);
}

// ---------------------------------------------------------------------------
// Third Picard iterate of the phi_N data

struct ProbeParams {
  double carrier = 64.0;  // N
  double gamma = 0.1;
  double s = 0.25;
  double t = 0.5;
  double delta = 4.0;
  int nodes = 128;         // midpoint nodes per axis per window pair
  int output_nodes = 0;    // trapezoid nodes per output interval; 0 means 2*nodes + 1
};

struct ProbeResult {
  double carrier = 0.0;
  double gamma = 0.0;
  double s = 0.0;
  double t = 0.0;
  double hs_value = 0.0;
};

/// P = omega(x1) + omega(x2) + omega(xi - x1 - x2) - omega(xi).
inline double probe_phase(double xi, double xi1, double xi2, const DispersionKind& kind) {
  return omega(xi1, kind) + omega(xi2, kind) + omega(xi - xi1 - xi2, kind) - omega(xi, kind);
}

/// max |P| / gamma^2 over a samples^3 lattice of x1, x2 in [N, N+gamma],
/// x3 in [-N-gamma, -N] (corners included). This is the sign pattern feeding
/// output frequencies near N, where the quadratic parts cancel.
inline double resonant_phase_ratio(double carrier, double gamma, double delta, int samples = 9) {
  const auto kind = DispersionKind::fdf(delta);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    for (int j = 0; j < samples; ++j) {
      for (int l = 0; l < samples; ++l) {
        const double step = gamma / (samples - 1);
        const double x1 = carrier + i * step, x2 = carrier + j * step, x3 = -carrier - l * step;
        worst = std::max(worst, std::abs(probe_phase(x1 + x2 + x3, x1, x2, kind)));
      }
    }
  }
  return worst / (gamma * gamma);
}

namespace detail {

/// (e^{itP} - 1)/(iP), equal to t at P = 0.
inline complex duhamel_kernel(double t, double phase) {
  const double theta = t * phase;
  if (std::abs(theta) < 1e-4) return t * complex(1.0 - theta * theta / 6.0, theta / 2.0);
  const double h = 0.5 * theta;
  return 2.0 * std::sin(h) / phase * complex(std::cos(h), std::sin(h));
}

struct Window {
  double lo, hi;
};

}  // namespace detail

/// ||u(t)||_{H^s} of the third Picard iterate
///   F u(xi, t) = i xi e^{it omega(xi)} int int (e^{itP}-1)/(iP)
///                phi(x1) phi(x2) phi(xi - x1 - x2) dx1 dx2
/// computed on the line: for every sign choice of the three windows the
/// inner x2 interval is clipped so that xi - x1 - x2 stays in its window,
/// and both axes use the midpoint rule. The norm integrates |F u|^2 (1+xi^2)^s
/// with the trapezoid rule over the four output bands near +-N and +-3N.
inline ProbeResult illposed_probe(const ProbeParams& p) {
  if (!(p.carrier >= 64.0)) throw ConfigError("N must be >= 64");
  if (!(p.gamma > 0.0)) throw ConfigError("gamma must be positive");
  if (!(p.t >= 0.0) || !(p.gamma * p.t <= 0.1)) throw ConfigError("need t >= 0 and gamma*t <= 0.1");
  if (!(p.delta >= 1.0)) throw ConfigError("delta must be >= 1");
  if (!(p.s > 0.0 && p.s < 1.0)) throw ConfigError("s must lie in (0, 1)");
  if (p.nodes < 128) throw ConfigError("need at least 128 quadrature nodes per axis");

  ProbeResult r{p.carrier, p.gamma, p.s, p.t, 0.0};
  if (p.t == 0.0) return r;

  const auto kind = DispersionKind::fdf(p.delta);
  const double n = p.carrier, g = p.gamma;
  const double amp = std::pow(n, -p.s) / std::sqrt(g);
  const double amp3 = amp * amp * amp;
  const std::array<detail::Window, 2> windows = {{{n, n + g}, {-n - g, -n}}};
  const std::array<detail::Window, 4> bands = {{{n - g, n + 2 * g}, {3 * n, 3 * n + 3 * g}, {-n - 2 * g, -n + g},
                                               {-3 * n - 3 * g, -3 * n}}};
  const int m = p.nodes;
  const int k = p.output_nodes > 0 ? p.output_nodes : 2 * m + 1;

  // Outer nodes and their omega values are shared by every output point.
  std::array<std::vector<double>, 2> outer, outer_w;
  for (int w = 0; w < 2; ++w) {
    const double h = (windows[w].hi - windows[w].lo) / m;
    for (int i = 0; i < m; ++i) {
      outer[w].push_back(windows[w].lo + (i + 0.5) * h);
      outer_w[w].push_back(omega(outer[w].back(), kind));
    }
  }

  auto amplitude = [&](double xi) {
    const double w_xi = omega(xi, kind);
    complex total = 0.0;
    for (int w1 = 0; w1 < 2; ++w1) {
      for (int w2 = 0; w2 < 2; ++w2) {
        for (int w3 = 0; w3 < 2; ++w3) {
          const auto& a = windows[w1];
          const auto& b = windows[w2];
          const auto& c = windows[w3];
          if (xi < a.lo + b.lo + c.lo || xi > a.hi + b.hi + c.hi) continue;
          const double h1 = (a.hi - a.lo) / m;
          complex outer_sum = 0.0;
          for (int i = 0; i < m; ++i) {
            const double x1 = outer[w1][i];
            const double lo = std::max(b.lo, xi - x1 - c.hi);
            const double hi = std::min(b.hi, xi - x1 - c.lo);
            if (!(hi > lo)) continue;
            const double h2 = (hi - lo) / m;
            complex inner = 0.0;
            for (int j = 0; j < m; ++j) {
              const double x2 = lo + (j + 0.5) * h2;
              const double phase = outer_w[w1][i] + omega(x2, kind) + omega(xi - x1 - x2, kind) - w_xi;
              inner += detail::duhamel_kernel(p.t, phase);
            }
            outer_sum += inner * h2;
          }
          total += outer_sum * h1;
        }
      }
    }
    // The unimodular factor e^{it omega(xi)} does not affect the norm.
    return std::abs(xi) * amp3 * std::abs(total);
  };

  double sum = 0.0;
  for (const auto& band : bands) {
    const double h = (band.hi - band.lo) / (k - 1);
    double acc = 0.0;
    for (int q = 0; q < k; ++q) {
      const double xi = band.lo + q * h;
      const double a = amplitude(xi);
      const double wgt = (q == 0 || q == k - 1) ? 0.5 : 1.0;
      acc += wgt * std::pow(1.0 + xi * xi, p.s) * a * a;
    }
    sum += acc * h;
  }
  r.hs_value = std::sqrt(sum);
  return r;
}

}  // namespace mfdf
