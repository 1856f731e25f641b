#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "mfdf/errors.hpp"

namespace mfdf {

/// Linear part of the equation.
///   fdf   omega = [coth(2 pi delta xi) - 1/(2 pi delta xi)] xi^2
///   fdf2  (3/(2 pi delta)) * omega_fdf
///   bo    xi |xi|        (Hilbert limit, delta -> infinity)
///   airy  xi^3           (mKdV)
enum class Branch { fdf, fdf2, bo, airy };

/// Defocusing: d_t u = L u + d_x(u^{k+1})/(k+1). Focusing flips the sign.
enum class Sign { defocusing, focusing };

struct DispersionKind {
  Branch branch = Branch::fdf;
  double delta = 1.0;
  int power = 2;
  Sign sign = Sign::defocusing;

  static DispersionKind fdf(double delta, int power = 2, Sign sign = Sign::defocusing) {
    return {Branch::fdf, delta, power, sign};
  }
  static DispersionKind fdf2(double delta, int power = 2, Sign sign = Sign::defocusing) {
    return {Branch::fdf2, delta, power, sign};
  }
  static DispersionKind bo(int power = 2, Sign sign = Sign::defocusing) { return {Branch::bo, 0.0, power, sign}; }
  static DispersionKind airy(int power = 2, Sign sign = Sign::defocusing) { return {Branch::airy, 0.0, power, sign}; }

  bool has_depth() const noexcept { return branch == Branch::fdf || branch == Branch::fdf2; }
  double sign_factor() const noexcept { return sign == Sign::defocusing ? 1.0 : -1.0; }

  void validate() const {
    if (has_depth() && !(delta > 0.0 && std::isfinite(delta))) {
      throw ConfigError("depth delta must be positive and finite");
    }
    if (power < 1 || power > 4) throw ConfigError("nonlinearity power k must be in {1,2,3,4}");
  }
};

/// omega and its first two derivatives at one point.
struct OmegaJet {
  double value = 0.0;
  double first = 0.0;
  double second = 0.0;
};

namespace detail {

// coth x - 1/x = sum_n kCothSeries[n] x^{2n+1}, coefficients 2^{2n} B_{2n} / (2n)!.
inline constexpr std::array<double, 14> kCothSeries = {
    0.33333333333333333333,     -0.022222222222222222222,   0.0021164021164021164021,
    -0.00021164021164021164021, 0.000021377799155576933355, -2.1644042808063972085e-6,
    2.19259478518737778e-7,     -2.2214608789979679076e-8,  2.2507846516808992854e-9,
    -2.2805151204592182866e-10, 2.3106432599002624097e-11,  -2.3411706819824883959e-12,
    2.3721017400233654295e-13,  -2.4034415333307706179e-14,
};

inline constexpr double kSeriesSwitch = 1e-2;
inline constexpr double kJetSeriesSwitch = 0.5;
// Beyond this |x|, coth x equals sign(x) in double precision.
inline constexpr double kSaturation = 19.0;

/// g(x) = coth x - 1/x, odd, with g(0) = 0.
inline double depth_factor(double x) {
  const double ax = std::abs(x);
  if (ax < kSeriesSwitch) {
    const double x2 = x * x;
    return x * (1.0 / 3.0 + x2 * (-1.0 / 45.0 + x2 * (2.0 / 945.0)));
  }
  if (ax > kSaturation) return std::copysign(1.0, x) - 1.0 / x;
  // Long double keeps the coth - 1/x cancellation below 1e-15 relative.
  const long double lx = x;
  return static_cast<double>(1.0L / std::tanh(lx) - 1.0L / lx);
}

/// g, g', g''.
inline OmegaJet depth_factor_jet(double x) {
  const double ax = std::abs(x);
  OmegaJet j;
  j.value = depth_factor(x);
  if (ax < kJetSeriesSwitch) {
    const double x2 = x * x;
    double d1 = 0.0, d2 = 0.0;
    for (std::size_t n = kCothSeries.size(); n-- > 0;) {
      const double p = static_cast<double>(2 * n + 1);
      d1 = d1 * x2 + kCothSeries[n] * p;
      d2 = d2 * x2 + kCothSeries[n] * p * (p - 1.0);
    }
    j.first = d1;
    j.second = d2 / x2 * x;  // sum c_n p (p-1) x^{p-2}; p-2 is odd
    if (x == 0.0) j.second = 0.0;
    return j;
  }
  if (ax > kSaturation) {
    j.first = 1.0 / (x * x);
    j.second = -2.0 / (x * x * x);
    return j;
  }
  const long double lx = x;
  const long double csch = 1.0L / std::sinh(lx);
  const long double coth = 1.0L / std::tanh(lx);
  j.first = static_cast<double>(1.0L / (lx * lx) - csch * csch);
  j.second = static_cast<double>(2.0L * coth * csch * csch - 2.0L / (lx * lx * lx));
  return j;
}

}  // namespace detail

inline OmegaJet omega_jet(double xi, const DispersionKind& kind) {
  switch (kind.branch) {
    case Branch::bo:
      return {xi * std::abs(xi), 2.0 * std::abs(xi), xi > 0.0 ? 2.0 : (xi < 0.0 ? -2.0 : 0.0)};
    case Branch::airy:
      return {xi * xi * xi, 3.0 * xi * xi, 6.0 * xi};
    case Branch::fdf:
    case Branch::fdf2: {
      const double a = 2.0 * std::numbers::pi * kind.delta;
      const OmegaJet g = detail::depth_factor_jet(a * xi);
      OmegaJet w{xi * xi * g.value, 2.0 * xi * g.value + a * xi * xi * g.first,
                 2.0 * g.value + 4.0 * a * xi * g.first + a * a * xi * xi * g.second};
      if (kind.branch == Branch::fdf2) {
        const double s = 3.0 / a;
        w = {s * w.value, s * w.first, s * w.second};
      }
      return w;
    }
  }
  return {};
}

/// Dispersion relation omega(xi); odd in xi, omega(0) = 0.
inline double omega(double xi, const DispersionKind& kind) {
  switch (kind.branch) {
    case Branch::bo:
      return xi * std::abs(xi);
    case Branch::airy:
      return xi * xi * xi;
    case Branch::fdf:
      return xi * xi * detail::depth_factor(2.0 * std::numbers::pi * kind.delta * xi);
    case Branch::fdf2: {
      const double a = 2.0 * std::numbers::pi * kind.delta;
      return (3.0 / a) * xi * xi * detail::depth_factor(a * xi);
    }
  }
  return 0.0;
}

/// Symbol of the linear operator: d_t u_hat = i omega(xi) u_hat.
inline auto linear_symbol(const DispersionKind& kind) {
  return [kind](double xi) { return std::complex<double>(0.0, omega(xi, kind)); };
}

/// Four-wave phase mismatch omega(x1)+omega(x2)+omega(x3)-omega(x1+x2+x3).
inline double resonance(double xi1, double xi2, double xi3, const DispersionKind& kind) {
  return omega(xi1, kind) + omega(xi2, kind) + omega(xi3, kind) - omega(xi1 + xi2 + xi3, kind);
}

enum class Regime { high, low };
enum class Quantity { omega, omega_prime, omega_second };

inline std::string_view to_string(Regime r) { return r == Regime::high ? "high" : "low"; }
inline std::string_view to_string(Quantity q) {
  switch (q) {
    case Quantity::omega:
      return "omega";
    case Quantity::omega_prime:
      return "omega_prime";
    case Quantity::omega_second:
      return "omega_second";
  }
  return "";
}

/// min/max of |quantity| / comparison over the sampled points of one regime.
struct RatioReport {
  Regime regime = Regime::high;
  Quantity quantity = Quantity::omega;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  std::size_t sample_count = 0;

  double spread() const noexcept { return max_ratio / min_ratio; }
};

/// Compares |omega|, |omega'|, |omega''| against xi^2, xi, 1 for xi >= 2/delta
/// and against delta xi^3, delta xi^2, delta xi for xi <= 1/(2 delta), on a
/// geometric grid with `samples_per_octave` points per doubling. The band
/// (1/(2 delta), 2/delta) is excluded from both regimes.
inline std::vector<RatioReport> verify_dispersion_bounds(double delta, double xi_min, double xi_max,
                                                         int samples_per_octave) {
  if (!(delta > 0.0)) throw ConfigError("delta must be positive");
  if (!(xi_min > 0.0) || !(xi_max > xi_min) || !std::isfinite(xi_max)) {
    throw ConfigError("dispersion sweep needs 0 < xi_min < xi_max");
  }
  if (samples_per_octave < 4) throw ConfigError("need at least 4 samples per octave");

  const auto kind = DispersionKind::fdf(delta);
  const double octaves = std::log2(xi_max / xi_min);
  const auto count = static_cast<std::size_t>(std::ceil(octaves * samples_per_octave)) + 1;

  struct Acc {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    std::size_t n = 0;
    void add(double r) {
      lo = std::min(lo, r);
      hi = std::max(hi, r);
      ++n;
    }
  };
  std::array<std::array<Acc, 3>, 2> acc{};

  for (std::size_t i = 0; i < count; ++i) {
    double xi = xi_min * std::exp2(static_cast<double>(i) / samples_per_octave);
    if (i + 1 == count) xi = xi_max;
    const OmegaJet w = omega_jet(xi, kind);
    const std::array<double, 3> q = {std::abs(w.value), std::abs(w.first), std::abs(w.second)};
    if (xi >= 2.0 / delta) {
      const std::array<double, 3> cmp = {xi * xi, xi, 1.0};
      for (int j = 0; j < 3; ++j) acc[0][j].add(q[j] / cmp[j]);
    } else if (xi <= 0.5 / delta) {
      const std::array<double, 3> cmp = {delta * xi * xi * xi, delta * xi * xi, delta * xi};
      for (int j = 0; j < 3; ++j) acc[1][j].add(q[j] / cmp[j]);
    }
  }

  std::vector<RatioReport> out;
  for (int r = 0; r < 2; ++r) {
    for (int j = 0; j < 3; ++j) {
      const Acc& a = acc[r][j];
      if (a.n == 0) continue;
      out.push_back({r == 0 ? Regime::high : Regime::low, static_cast<Quantity>(j), a.lo, a.hi, a.n});
    }
  }
  return out;
}

/// Random triples for the high-low resonance estimate. A triple is admissible
/// when |x1| <= |x2| <= |x3|, |x1| <= |x3|/separation,
/// |x1+x2+x3| in [|x3|/2, 2|x3|] and |x3| >= xi_min.
struct ResonanceSampler {
  std::uint64_t seed = 0x5eed'f00dULL;
  std::size_t count = 10000;
  double xi_min = 64.0;
  double xi_max = 4096.0;
  double separation = 64.0;
  std::size_t max_attempts = 10'000'000;
};

inline bool admissible(double xi1, double xi2, double xi3, const ResonanceSampler& cfg) {
  const double a1 = std::abs(xi1), a2 = std::abs(xi2), a3 = std::abs(xi3);
  const double sum = std::abs(xi1 + xi2 + xi3);
  return a1 <= a2 && a2 <= a3 && a1 <= a3 / cfg.separation && a3 >= cfg.xi_min && sum >= 0.5 * a3 &&
         sum <= 2.0 * a3 && xi1 + xi2 != 0.0;
}

/// |Omega| / (|x1+x2| |x3|).
inline double resonance_ratio(double xi1, double xi2, double xi3, const DispersionKind& kind) {
  return std::abs(resonance(xi1, xi2, xi3, kind)) / (std::abs(xi1 + xi2) * std::abs(xi3));
}

namespace detail {
// Portable uniform in [0, 1): the top 53 bits of a standard engine.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
}  // namespace detail

inline RatioReport verify_resonance_bounds(double delta, const ResonanceSampler& cfg = {}) {
  if (!(delta > 0.0)) throw ConfigError("delta must be positive");
  if (!(cfg.xi_max > cfg.xi_min) || !(cfg.xi_min > 0.0) || !(cfg.separation > 1.0)) {
    throw ConfigError("invalid resonance sampler range");
  }
  const auto kind = DispersionKind::fdf(delta);
  std::mt19937_64 rng(cfg.seed);
  auto uniform = [&] { return detail::unit_uniform(rng); };
  auto log_uniform = [&](double lo, double hi) { return lo * std::pow(hi / lo, uniform()); };
  auto random_sign = [&] { return (rng() & 1U) ? 1.0 : -1.0; };

  RatioReport rep{Regime::high, Quantity::omega, std::numeric_limits<double>::infinity(), 0.0, 0};
  for (std::size_t attempt = 0; attempt < cfg.max_attempts && rep.sample_count < cfg.count; ++attempt) {
    const double a3 = log_uniform(cfg.xi_min, cfg.xi_max);
    // Half the draws put |x2| comparable to |x3|, half spread it over scales.
    const double a2 = (rng() & 1U) ? a3 * uniform() : log_uniform(1e-3, a3);
    const double a1 = log_uniform(1e-4, a3 / cfg.separation);
    const double xi1 = random_sign() * a1, xi2 = random_sign() * a2, xi3 = random_sign() * a3;
    if (!admissible(xi1, xi2, xi3, cfg)) continue;
    const double r = resonance_ratio(xi1, xi2, xi3, kind);
    rep.min_ratio = std::min(rep.min_ratio, r);
    rep.max_ratio = std::max(rep.max_ratio, r);
    ++rep.sample_count;
  }
  if (rep.sample_count == 0) throw ConfigError("resonance sampler produced no admissible triple");
  return rep;
}

}  // namespace mfdf
