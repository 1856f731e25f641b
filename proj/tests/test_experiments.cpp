#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "mfdf/experiments.hpp"

using namespace mfdf;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kPi = std::numbers::pi;

SimConfig small_config() {
  SimConfig c;
  c.delta = 1.0;
  c.grid_n = 256;
  c.grid_length = 32 * kPi;
  c.dt = 0.01;
  c.t_end = 1.0;
  c.output_every = 10;
  c.init.amplitude = 0.5;
  c.init.sigma = 2.0;
  return c;
}

// sup over output times of ||(e^{it w_delta} - e^{it xi|xi|}) u0_hat||_{H^s}.
double linear_oracle(const SimConfig& c, double delta, double s) {
  const auto g = c.grid();
  const auto u0 = detail::projected_coeffs(initial_field(c.init, g, c.seed));
  const auto steps = steps_for(c.t_end, *c.dt, "t_end");
  double worst = 0.0;
  for (std::int64_t k = 0; k <= steps; k += static_cast<std::int64_t>(c.output_every)) {
    const double t = static_cast<double>(k) * *c.dt;
    double sum = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double xi = g.wavenumber(j);
      const double gap = t * (omega(xi, DispersionKind::fdf(delta)) - xi * std::abs(xi));
      // |e^{ia} - e^{ib}| = 2 |sin((a - b)/2)|
      const double d = 2.0 * std::abs(std::sin(0.5 * gap)) * std::abs(u0[j]);
      sum += std::pow(1.0 + xi * xi, s) * d * d;
    }
    worst = std::max(worst, std::sqrt(g.length() * sum));
  }
  return worst;
}

}  // namespace

TEST_CASE("limit study with zero data", "[experiments]") {
  auto c = small_config();
  c.init.amplitude = 0.0;
  const auto r = limit_study(c, {1, 2, 4}, 0.5, 1.0);
  for (double e : r.errors) CHECK(e == 0.0);
  CHECK_FALSE(r.fitted_rate.has_value());
}

TEST_CASE("linear-only limit study matches the per-mode closed form", "[experiments][oracle]") {
  const auto c = small_config();
  const std::vector<double> deltas = {1, 2, 4, 8, 16};
  const auto r = limit_study(c, deltas, 0.5, 1.0, {true, 1});
  REQUIRE(r.errors.size() == deltas.size());
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    CHECK_THAT(r.errors[i], WithinRel(linear_oracle(c, deltas[i], 0.5), 1e-10));
    if (i > 0) CHECK(r.errors[i] <= r.errors[i - 1]);
  }
  REQUIRE(r.fitted_rate.has_value());
  CHECK(*r.fitted_rate > 0.9);
}

TEST_CASE("limit study is independent of the thread count", "[experiments]") {
  const auto c = small_config();
  const auto one = limit_study(c, {1, 2, 4, 8}, 0.5, 1.0, {false, 1});
  const auto four = limit_study(c, {1, 2, 4, 8}, 0.5, 1.0, {false, 4});
  CHECK(one.errors == four.errors);
  CHECK(one.fitted_rate == four.fitted_rate);
}

TEST_CASE("limit study preconditions", "[experiments]") {
  const auto c = small_config();
  CHECK_THROWS_AS(limit_study(c, {1, 2}, 0.5, 1.0), ConfigError);
  CHECK_THROWS_AS(limit_study(c, {1, 4, 2}, 0.5, 1.0), ConfigError);
  CHECK_THROWS_AS(limit_study(c, {1, 2, 4}, -1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(limit_study(c, {1, 2, 4}, 0.5, 0.0), ConfigError);
}

TEST_CASE("rate fit uses the larger half", "[experiments]") {
  const std::vector<double> d = {1, 2, 4, 8, 16};
  // Pre-asymptotic junk in the first two entries is ignored.
  const std::vector<double> e = {5.0, 0.1, 1.0 / 16, 1.0 / 64, 1.0 / 256};
  CHECK_THAT(*detail::fit_rate(d, e), WithinAbs(2.0, 1e-12));
}

TEST_CASE("scaling check", "[experiments]") {
  auto c = small_config();
  const auto same = scaling_check(c, 1.0);
  CHECK(same.discrepancy == 0.0);

  const auto r = scaling_check(c, 2.0);
  CHECK_THAT(r.l2_scaled, WithinRel(r.l2_initial, 1e-14));
  CHECK(r.discrepancy <= 1e-6);

  c.dt = 0.3;
  c.t_end = 0.9;
  CHECK_THROWS_WITH(scaling_check(c, 1.5), Catch::Matchers::ContainsSubstring("resolution mismatch"));
  c.equation = EquationName::mkdv;
  c.delta.reset();
  CHECK_THROWS_AS(scaling_check(c, 2.0), ConfigError);
}

TEST_CASE("transform check", "[experiments]") {
  auto c = small_config();
  CHECK(transform_check(c, 3.0 / (2.0 * kPi)) <= 1e-12);
  CHECK(transform_check(c, 1.0) <= 1e-6);
  CHECK(transform_check(c, 0.2) <= 1e-6);
  c.init.amplitude = 0.0;
  CHECK(transform_check(c, 1.0) == 0.0);
}

TEST_CASE("probe phase cancels on the resonant window", "[experiments]") {
  for (double n : {64.0, 128.0, 256.0}) {
    const double ratio = resonant_phase_ratio(n, 0.1, 4.0);
    CHECK(ratio >= 1.0 / 16);
    CHECK(ratio <= 16.0);
  }
  // With all three frequencies near +N the quadratic parts do not cancel.
  const auto kind = DispersionKind::fdf(4.0);
  CHECK(std::abs(probe_phase(3 * 64.0, 64.0, 64.0, kind)) > 1000.0);
}

TEST_CASE("Duhamel kernel", "[experiments]") {
  CHECK(detail::duhamel_kernel(0.5, 0.0) == complex(0.5, 0.0));
  for (double p : {1e-5, 1.99e-4, 2.01e-4, 0.3, 40.0}) {
    const complex direct = (std::exp(complex(0.0, 0.5 * p)) - 1.0) / complex(0.0, p);
    CHECK(std::abs(detail::duhamel_kernel(0.5, p) - direct) <= 1e-12);
  }
}

TEST_CASE("ill-posedness probe", "[experiments]") {
  ProbeParams p;
  p.t = 0.0;
  CHECK(illposed_probe(p).hs_value == 0.0);

  p = ProbeParams{};
  const double a = illposed_probe(p).hs_value;
  p.carrier = 128.0;
  const double b = illposed_probe(p).hs_value;
  CHECK(std::abs(b / a - std::numbers::sqrt2) <= 0.25 * std::numbers::sqrt2);

  p = ProbeParams{};
  p.s = 0.75;
  const double c = illposed_probe(p).hs_value;
  p.carrier = 128.0;
  CHECK(illposed_probe(p).hs_value < c);

  auto bad = [](auto edit) {
    ProbeParams q;
    edit(q);
    return q;
  };
  CHECK_THROWS_AS(illposed_probe(bad([](ProbeParams& q) { q.carrier = 32; })), ConfigError);
  CHECK_THROWS_AS(illposed_probe(bad([](ProbeParams& q) { q.t = 2.0; })), ConfigError);
  CHECK_THROWS_AS(illposed_probe(bad([](ProbeParams& q) { q.delta = 0.5; })), ConfigError);
  CHECK_THROWS_AS(illposed_probe(bad([](ProbeParams& q) { q.s = 1.0; })), ConfigError);
  CHECK_THROWS_AS(illposed_probe(bad([](ProbeParams& q) { q.nodes = 64; })), ConfigError);
  CHECK_THROWS_AS(illposed_probe(bad([](ProbeParams& q) { q.t = -0.1; })), ConfigError);
}
