#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <sstream>
#include <vector>

#include "mfdf/equation.hpp"
#include "mfdf/errors.hpp"
#include "mfdf/grid.hpp"
#include "mfdf/initial_data.hpp"
#include "mfdf/observables.hpp"
#include "mfdf/sim_config.hpp"
#include "mfdf/spectral.hpp"

namespace mfdf {

struct SimState {
  double time = 0.0;
  Field field;
  std::int64_t step_count = 0;
};

namespace detail {

inline complex unit_phase(double theta) { return {std::cos(theta), std::sin(theta)}; }

/// phi_1, phi_2, phi_3 at z; Taylor series for |z| < 0.5.
struct PhiValues {
  complex phi1, phi2, phi3;
};

inline PhiValues phi_functions(complex z) {
  if (std::abs(z) < 0.5) {
    // phi_k(z) = sum_m z^m / (m + k)!
    complex p1 = 0.0, p2 = 0.0, p3 = 0.0;
    double f1 = 1.0, f2 = 0.5, f3 = 1.0 / 6.0;  // 1/(m+k)! at m = 0
    complex zm = 1.0;
    for (int m = 0; m < 20; ++m) {
      p1 += zm * f1;
      p2 += zm * f2;
      p3 += zm * f3;
      zm *= z;
      f1 /= m + 2;
      f2 /= m + 3;
      f3 /= m + 4;
    }
    return {p1, p2, p3};
  }
  const complex ez = std::exp(z);
  const complex p1 = (ez - 1.0) / z;
  const complex p2 = (ez - 1.0 - z) / (z * z);
  const complex p3 = (ez - 1.0 - z - 0.5 * z * z) / (z * z * z);
  return {p1, p2, p3};
}

}  // namespace detail

/// Per-mode ETDRK4 weights for d_t v = i omega v + N(v) with step dt:
/// e^{z}, e^{z/2}, (dt/2) phi_1(z/2) and dt times the three combinations
/// of phi_1..phi_3 at z = i omega dt. The Nyquist mode is held at zero.
class StepperCoeffs {
 public:
  StepperCoeffs(const SpectralGrid& grid, const EquationSpec& eq, double dt) : grid_(grid), dt_(dt) {
    eq.kind.validate();
    if (!(std::isfinite(dt) && dt != 0.0)) throw ConfigError("dt must be finite and non-zero");
    const std::size_t n = grid.size();
    full_.resize(n);
    half_.resize(n);
    q_.resize(n);
    f1_.resize(n);
    f2_.resize(n);
    f3_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == grid.nyquist_index()) continue;
      const double w = omega(grid.wavenumber(j), eq.kind);
      const complex z(0.0, w * dt);
      full_[j] = detail::unit_phase(w * dt);
      half_[j] = detail::unit_phase(0.5 * w * dt);
      q_[j] = 0.5 * dt * detail::phi_functions(0.5 * z).phi1;
      const auto p = detail::phi_functions(z);
      f1_[j] = dt * (p.phi1 - 3.0 * p.phi2 + 4.0 * p.phi3);
      f2_[j] = dt * (p.phi2 - 2.0 * p.phi3);
      f3_[j] = dt * (4.0 * p.phi3 - p.phi2);
    }
  }

  const SpectralGrid& grid() const noexcept { return grid_; }
  double dt() const noexcept { return dt_; }
  std::span<const complex> full_step() const noexcept { return full_; }
  std::span<const complex> half_step() const noexcept { return half_; }
  std::span<const complex> half_weight() const noexcept { return q_; }
  std::span<const complex> weight1() const noexcept { return f1_; }
  std::span<const complex> weight2() const noexcept { return f2_; }
  std::span<const complex> weight3() const noexcept { return f3_; }

 private:
  SpectralGrid grid_;
  double dt_;
  std::vector<complex> full_, half_, q_, f1_, f2_, f3_;
};

/// U(t): multiplies each coefficient by exp(i t omega(xi)).
inline Spectrum linear_propagate(const Spectrum& s, double t, const EquationSpec& eq) {
  return apply_multiplier(s, [&](double xi) { return detail::unit_phase(t * omega(xi, eq.kind)); });
}

/// The nonlinear part of the right-hand side, c d_x(u^{k+1})/(k+1).
inline Field nonlinear_rhs(const Field& f, const EquationSpec& eq) {
  const auto d = detail::power_derivative_coeffs(transform(f).coeffs(), f.grid(), eq.power());
  const double c = eq.nonlinear_coefficient();
  std::vector<complex> scaled(d.size());
  for (std::size_t j = 0; j < d.size(); ++j) scaled[j] = c * d[j];
  return inverse(Spectrum(f.grid(), std::move(scaled)));
}

namespace detail {

/// ETDRK4 on raw coefficient vectors. Tracks max|u| on the padded grid of
/// the first stage so callers can detect blow-up without an extra transform.
class Etdrk4 {
 public:
  Etdrk4(const StepperCoeffs& coeffs, const EquationSpec& eq)
      : coeffs_(coeffs), eq_(eq), n_(coeffs.grid().size()), padded_(dealias_size(n_, eq.power())) {
    check_power(eq.power());
    const double c = eq.nonlinear_coefficient() / static_cast<double>(eq.power() + 1);
    const auto xi = coeffs.grid().wavenumbers();
    deriv_.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) deriv_[j] = complex(0.0, c * xi[j]);
    nv_.resize(n_);
    na_.resize(n_);
    nb_.resize(n_);
    nc_.resize(n_);
    a_.resize(n_);
    b_.resize(n_);
    c_.resize(n_);
  }

  bool linear() const noexcept { return eq_.nonlinear_scale == 0.0; }

  /// max|u| of the state passed to the last advance(), on the padded grid.
  double last_max_abs() const noexcept { return last_max_; }

  void advance(std::vector<complex>& v) {
    const auto e = coeffs_.full_step();
    if (linear()) {
      for (std::size_t j = 0; j < n_; ++j) v[j] *= e[j];
      return;
    }
    const auto e2 = coeffs_.half_step();
    const auto q = coeffs_.half_weight();
    const auto f1 = coeffs_.weight1();
    const auto f2 = coeffs_.weight2();
    const auto f3 = coeffs_.weight3();

    last_max_ = nonlinear(v, nv_);
    for (std::size_t j = 0; j < n_; ++j) a_[j] = e2[j] * v[j] + q[j] * nv_[j];
    nonlinear(a_, na_);
    for (std::size_t j = 0; j < n_; ++j) b_[j] = e2[j] * v[j] + q[j] * na_[j];
    nonlinear(b_, nb_);
    for (std::size_t j = 0; j < n_; ++j) c_[j] = e2[j] * a_[j] + q[j] * (2.0 * nb_[j] - nv_[j]);
    nonlinear(c_, nc_);
    for (std::size_t j = 0; j < n_; ++j) {
      v[j] = e[j] * v[j] + f1[j] * nv_[j] + 2.0 * f2[j] * (na_[j] + nb_[j]) + f3[j] * nc_[j];
    }
  }

  /// max|u| on the padded grid for coefficients v.
  double max_abs(const std::vector<complex>& v) const {
    double m = 0.0;
    for (double x : padded_values(v, padded_)) m = std::max(m, std::isfinite(x) ? std::abs(x) : x);
    return m;
  }

 private:
  double nonlinear(const std::vector<complex>& v, std::vector<complex>& out) {
    auto values = padded_values(v, padded_);
    double m = 0.0;
    for (double& x : values) {
      m = std::isfinite(x) ? std::max(m, std::abs(x)) : std::numeric_limits<double>::quiet_NaN();
      x = std::pow(x, eq_.power() + 1);
    }
    out = truncated_forward(values, n_);
    for (std::size_t j = 0; j < n_; ++j) out[j] *= deriv_[j];
    return m;
  }

  const StepperCoeffs& coeffs_;
  EquationSpec eq_;
  std::size_t n_;
  std::size_t padded_;
  std::vector<complex> deriv_;
  std::vector<complex> nv_, na_, nb_, nc_, a_, b_, c_;
  double last_max_ = 0.0;
};

inline bool all_finite(const std::vector<complex>& v) {
  for (const complex& c : v) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  }
  return true;
}

[[noreturn]] inline void report_blow_up(double time, std::int64_t step, double max_abs, double cap) {
  std::ostringstream msg;
  msg << "blow-up at t = " << time << " (step " << step << "): max|u| = " << max_abs << " exceeds cap " << cap;
  throw BlowUpError(time, step, max_abs, msg.str());
}

/// Advances coefficients `v` by `steps` steps. `observe(step, v)` is called
/// after every step. Throws BlowUpError when the solution becomes non-finite
/// or max|u| exceeds `cap_factor` times its initial value.
template <class Observer>
void evolve(std::vector<complex>& v, const StepperCoeffs& coeffs, const EquationSpec& eq, std::int64_t steps,
            double cap_factor, Observer&& observe) {
  Etdrk4 stepper(coeffs, eq);
  const double initial_max = stepper.max_abs(v);
  const double cap = cap_factor * (initial_max > 0.0 ? initial_max : 1.0);
  for (std::int64_t s = 0; s < steps; ++s) {
    stepper.advance(v);
    const double t = static_cast<double>(s + 1) * coeffs.dt();
    if (!stepper.linear()) {
      const double m = stepper.last_max_abs();
      if (!(m <= cap)) report_blow_up(t - coeffs.dt(), s, m, cap);
    }
    if (!all_finite(v)) report_blow_up(t, s + 1, std::numeric_limits<double>::infinity(), cap);
    observe(s + 1, v);
  }
  if (steps > 0 && !stepper.linear()) {
    const double m = stepper.max_abs(v);
    if (!(m <= cap)) report_blow_up(static_cast<double>(steps) * coeffs.dt(), steps, m, cap);
  }
}

inline std::vector<complex> projected_coeffs(const Field& f) {
  auto c = forward_coeffs(f.values());
  c[f.grid().nyquist_index()] = 0.0;
  return c;
}

}  // namespace detail

/// One ETDRK4 step. The Nyquist mode of the input is discarded.
inline SimState step(const SimState& state, const StepperCoeffs& coeffs, const EquationSpec& eq) {
  if (!(state.field.grid() == coeffs.grid())) throw ConfigError("stepper coefficients built for another grid");
  auto v = detail::projected_coeffs(state.field);
  detail::Etdrk4 stepper(coeffs, eq);
  stepper.advance(v);
  if (!detail::all_finite(v)) {
    detail::report_blow_up(state.time + coeffs.dt(), state.step_count + 1, std::numeric_limits<double>::infinity(),
                           std::numeric_limits<double>::infinity());
  }
  return {state.time + coeffs.dt(), inverse(Spectrum(coeffs.grid(), std::move(v))), state.step_count + 1};
}

struct RunResult {
  SimState final_state;
  std::vector<InvariantRecord> records;
  std::vector<SimState> snapshots;
};

/// Integrates `cfg` from t = 0 to t_end. Records invariants at step 0, every
/// `output_every` steps and at the final step; snapshots at `snapshot_times`.
inline RunResult run(const SimConfig& cfg) {
  cfg.validate();
  const SpectralGrid grid = cfg.grid();
  const EquationSpec eq = cfg.equation_spec();
  const double dt = resolved_dt(cfg);
  const std::int64_t steps = steps_for(cfg.t_end, dt, "t_end");

  std::vector<std::int64_t> snapshot_steps;
  for (double t : cfg.snapshot_times) snapshot_steps.push_back(steps_for(t, dt, "snapshot_times"));

  auto v = detail::projected_coeffs(initial_field(cfg.init, grid, cfg.seed));
  RunResult out{{0.0, Field(grid), 0}, {}, {}};

  auto time_of = [&](std::int64_t s) { return s == steps ? cfg.t_end : static_cast<double>(s) * dt; };
  auto visit = [&](std::int64_t s, const std::vector<complex>& c) {
    const bool record = s % static_cast<std::int64_t>(cfg.output_every) == 0 || s == steps;
    bool snap = false;
    for (std::int64_t ss : snapshot_steps) snap = snap || ss == s;
    if (!record && !snap) return;
    const Spectrum spec(grid, c);
    if (record) out.records.push_back(invariants(spec, eq, time_of(s)));
    if (snap) out.snapshots.push_back({time_of(s), inverse(spec), s});
  };

  visit(0, v);
  if (steps > 0) {
    const StepperCoeffs coeffs(grid, eq, dt);
    detail::evolve(v, coeffs, eq, steps, cfg.blowup_cap, visit);
  }
  out.final_state = {time_of(steps), inverse(Spectrum(grid, v)), steps};
  return out;
}

}  // namespace mfdf
