#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "mfdf/dispersion.hpp"

using namespace mfdf;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Independent evaluation of [coth(2 pi d xi) - 1/(2 pi d xi)] xi^2 in long
// double, written from the closed form only.
long double omega_reference(long double xi, long double delta) {
  if (xi == 0.0L) return 0.0L;
  const long double x = 2.0L * std::numbers::pi_v<long double> * delta * xi;
  if (std::fabs(x) < 0.1L) {
    const long double x2 = x * x;
    return xi * xi * x * (1.0L / 3 + x2 * (-1.0L / 45 + x2 * (2.0L / 945 + x2 * (-1.0L / 4725 + x2 * 2.0L / 93555))));
  }
  return xi * xi * (1.0L + 2.0L / std::expm1(2.0L * x) - 1.0L / x);
}

// Resonance rebuilt from omega alone, with the sum taken in a different order.
double resonance_oracle(double a, double b, double c, const DispersionKind& k) {
  const double s = a + b + c;
  return (omega(c, k) - omega(s, k)) + (omega(b, k) + omega(a, k));
}

}  // namespace

TEST_CASE("omega reference values", "[dispersion]") {
  const auto fdf1 = DispersionKind::fdf(1.0);
  CHECK(omega(0.0, fdf1) == 0.0);
  // 50-digit values: 9984.08450569081046642..., 2.09439504727092791e-12.
  CHECK_THAT(omega(100.0, fdf1), WithinRel(9984.0845056908104664, 1e-14));
  CHECK_THAT(omega(1e-4, fdf1), WithinRel(2.0943950472709279e-12, 1e-13));
  CHECK_THAT(omega(2.0, DispersionKind::bo()), WithinAbs(4.0, 0.0));
  CHECK_THAT(omega(-3.0, DispersionKind::airy()), WithinAbs(-27.0, 0.0));
}

TEST_CASE("omega matches a long double closed form", "[dispersion][oracle]") {
  for (double delta : {0.1, 1.0, 3.0 / (2 * kPi), 16.0}) {
    const auto k = DispersionKind::fdf(delta);
    for (double xi = 1e-6; xi < 1e4; xi *= 1.37) {
      const double ref = static_cast<double>(omega_reference(xi, delta));
      CHECK_THAT(omega(xi, k), WithinRel(ref, 5e-14));
    }
  }
}

TEST_CASE("omega is odd", "[dispersion][property]") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> logu(-8.0, 4.0);
  for (auto kind : {DispersionKind::fdf(1.0), DispersionKind::fdf(0.05), DispersionKind::fdf2(2.0),
                    DispersionKind::bo(), DispersionKind::airy()}) {
    for (int i = 0; i < 500; ++i) {
      const double xi = std::pow(10.0, logu(rng));
      const double a = omega(xi, kind), b = omega(-xi, kind);
      CHECK(std::abs(a + b) <= 1e-14 * std::abs(a));
      const auto ja = omega_jet(xi, kind), jb = omega_jet(-xi, kind);
      CHECK(std::abs(ja.first - jb.first) <= 1e-13 * std::abs(ja.first));
      CHECK(std::abs(ja.second + jb.second) <= 1e-13 * std::abs(ja.second));
    }
  }
}

TEST_CASE("series and closed form agree at the switch point", "[dispersion]") {
  const double x = detail::kSeriesSwitch;
  const double series = x / 3 - x * x * x / 45 + 2 * std::pow(x, 5) / 945;
  const long double lx = x;
  const double closed = static_cast<double>(1.0L / std::tanh(lx) - 1.0L / lx);
  CHECK(std::abs(series - closed) <= 1e-12 * closed);
  CHECK_THAT(detail::depth_factor(std::nextafter(x, 0.0)), WithinRel(detail::depth_factor(x), 1e-12));
}

TEST_CASE("omega derivatives match finite differences", "[dispersion][oracle]") {
  for (auto kind : {DispersionKind::fdf(1.0), DispersionKind::fdf2(0.3), DispersionKind::fdf(16.0)}) {
    for (double xi : {1e-3, 0.01, 0.05, 0.2, 1.0, 3.0, 20.0, 300.0}) {
      const double h = 1e-4 * xi;
      const auto j = omega_jet(xi, kind);
      const double d1 = (omega(xi + h, kind) - omega(xi - h, kind)) / (2 * h);
      const auto jp = omega_jet(xi + h, kind), jm = omega_jet(xi - h, kind);
      const double d2 = (jp.first - jm.first) / (2 * h);
      CHECK_THAT(j.first, WithinRel(d1, 1e-6));
      CHECK_THAT(j.second, WithinRel(d2, 1e-6));
      CHECK_THAT(j.value, WithinRel(omega(xi, kind), 1e-15));
    }
  }
}

TEST_CASE("linear symbol limits", "[dispersion]") {
  CHECK(linear_symbol(DispersionKind::bo())(2.0) == std::complex<double>(0.0, 4.0));
  // delta -> infinity at fixed xi approaches xi|xi|.
  double prev = 1.0;
  for (double delta : {10.0, 100.0, 1000.0, 1e5}) {
    const double gap = std::abs(linear_symbol(DispersionKind::fdf(delta))(1.0).imag() - 1.0);
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(prev < 1e-5);
  // fdf2 as delta -> 0 approaches xi^3.
  CHECK_THAT(linear_symbol(DispersionKind::fdf2(1e-6))(1.0).imag(), WithinRel(1.0, 1e-9));
  CHECK_THAT(linear_symbol(DispersionKind::fdf2(1e-6))(0.5).imag(), WithinRel(0.125, 1e-9));
}

TEST_CASE("Hilbert-limit bound holds pointwise", "[dispersion][property]") {
  for (double delta : {0.5, 1.0, 4.0, 32.0}) {
    const auto k = DispersionKind::fdf(delta);
    for (double xi = 1e-3; xi < 1e3; xi *= 1.21) {
      for (double sgn : {1.0, -1.0}) {
        const double x = sgn * xi;
        const double bound = xi / (2 * kPi * delta) + 2 * std::exp(-4 * kPi * delta * xi) * xi * xi;
        CHECK(std::abs(omega(x, k) - x * std::abs(x)) <= bound + 4 * kEps * xi * xi);
      }
    }
  }
}

TEST_CASE("resonance examples", "[dispersion]") {
  const auto k = DispersionKind::fdf(1.0);
  for (double a : {0.3, 7.0, 250.0}) {
    for (double b : {-4.0, 0.01, 99.0}) CHECK(std::abs(resonance(a, -a, b, k)) <= 1e-12 * std::abs(omega(b, k)) + 1e-15);
  }
  // 50-digit value -300.99905755699163406...
  CHECK_THAT(resonance(0.5, 1.0, 100.0, k), WithinRel(-300.99905755699163, 1e-12));
  CHECK_THAT(resonance_ratio(0.5, 1.0, 100.0, k), WithinRel(2.0066603837132776, 1e-12));

  const double r = resonance(0.5, 1.0, 100.0, k);
  CHECK_THAT(resonance(100.0, 0.5, 1.0, k), WithinRel(r, 1e-12));
  CHECK_THAT(resonance(1.0, 100.0, 0.5, k), WithinRel(r, 1e-12));
}

TEST_CASE("resonance equals a re-implementation from omega", "[dispersion][oracle]") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-500.0, 500.0);
  for (auto kind : {DispersionKind::fdf(1.0), DispersionKind::fdf2(0.2), DispersionKind::bo()}) {
    for (int i = 0; i < 1000; ++i) {
      const double a = u(rng), b = u(rng), c = u(rng);
      const double got = resonance(a, b, c, kind);
      const double want = resonance_oracle(a, b, c, kind);
      const double scale = std::abs(omega(a, kind)) + std::abs(omega(b, kind)) + std::abs(omega(c, kind)) +
                           std::abs(omega(a + b + c, kind));
      CHECK(std::abs(got - want) <= 1e-14 * scale);
    }
  }
}

TEST_CASE("dispersion bound sweeps", "[dispersion]") {
  const auto reps = verify_dispersion_bounds(1.0, 4.0, 4096.0, 16);
  REQUIRE(reps.size() == 3);
  for (const auto& r : reps) {
    CHECK(r.regime == Regime::high);
    CHECK(r.min_ratio > 0.0);
  }
  CHECK(reps[0].spread() <= 1.2);

  const auto low = verify_dispersion_bounds(1.0, std::exp2(-20), std::exp2(-6), 8);
  REQUIRE(low.size() == 3);
  CHECK(low[0].regime == Regime::low);
  CHECK(low[0].min_ratio >= 2 * kPi / 3 * 0.9);
  CHECK(low[0].max_ratio <= 2 * kPi / 3 * 1.1);

  // Both regimes, guard band excluded, positive everywhere.
  for (double delta : {0.25, 1.0, 8.0}) {
    const auto both = verify_dispersion_bounds(delta, 1e-3 / delta, 1e3 / delta, 8);
    REQUIRE(both.size() == 6);
    for (const auto& r : both) {
      CHECK(r.min_ratio > 0.0);
      CHECK(r.min_ratio <= r.max_ratio);
      CHECK(r.sample_count >= 1);
    }
  }

  CHECK_THROWS_AS(verify_dispersion_bounds(1.0, 2.0, 2.0, 8), ConfigError);
  CHECK_THROWS_AS(verify_dispersion_bounds(1.0, 1.0, 2.0, 3), ConfigError);
}

TEST_CASE("resonance sampler", "[dispersion]") {
  ResonanceSampler cfg;
  CHECK_FALSE(admissible(10.0, 20.0, 100.0, cfg));  // |x1| not << |x3|
  CHECK_FALSE(admissible(0.5, 1.0, 50.0, cfg));     // |x3| < 64
  CHECK_FALSE(admissible(0.5, -100.0, 100.0, cfg)); // |sum| too small
  CHECK(admissible(0.5, 1.0, 100.0, cfg));

  cfg.count = 2000;
  const auto rep = verify_resonance_bounds(1.0, cfg);
  CHECK(rep.sample_count == 2000);
  CHECK(rep.min_ratio >= 1.0 / 8);
  CHECK(rep.max_ratio <= 8.0);
  const auto again = verify_resonance_bounds(1.0, cfg);
  CHECK(again.min_ratio == rep.min_ratio);
  CHECK(again.max_ratio == rep.max_ratio);

  ResonanceSampler impossible;
  impossible.max_attempts = 0;
  CHECK_THROWS_AS(verify_resonance_bounds(1.0, impossible), ConfigError);
}
