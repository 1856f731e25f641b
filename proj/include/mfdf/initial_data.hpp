#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "mfdf/dispersion.hpp"
#include "mfdf/grid.hpp"
#include "mfdf/sim_config.hpp"
#include "mfdf/spectral.hpp"

namespace mfdf {

/// Continuum profile N^{-s} gamma^{-1/2} (chi_[-N-gamma,-N] + chi_[N,N+gamma]).
inline double phi_n_hat(double xi, double carrier, double gamma, double s) {
  const double a = std::abs(xi);
  if (a < carrier || a > carrier + gamma) return 0.0;
  return std::pow(carrier, -s) / std::sqrt(gamma);
}

inline Field gaussian(const SpectralGrid& grid, double amplitude, double sigma) {
  std::vector<double> v(grid.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double x = grid.point(j) / sigma;
    v[j] = amplitude * std::exp(-x * x);
  }
  return Field(grid, std::move(v));
}

inline Field sech(const SpectralGrid& grid, double amplitude, double width) {
  std::vector<double> v(grid.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = amplitude / std::cosh(grid.point(j) / width);
  return Field(grid, std::move(v));
}

/// Real field with uniformly random coefficients on |j| <= jmax.
inline Field bandlimited(const SpectralGrid& grid, std::uint64_t seed, int jmax, double amplitude) {
  const std::size_t n = grid.size();
  if (jmax < 0 || static_cast<std::size_t>(jmax) >= n / 2) throw ConfigError("jmax must be in [0, n/2)");
  std::mt19937_64 rng(seed);
  auto centered = [&] { return 2.0 * detail::unit_uniform(rng) - 1.0; };
  std::vector<complex> c(n);
  c[0] = amplitude * centered();
  for (int j = 1; j <= jmax; ++j) {
    const double re = centered(), im = centered();
    const complex v = amplitude * std::numbers::sqrt2 * 0.5 * complex(re, im);
    c[SpectralGrid::slot_of(j, n)] = v;
    c[SpectralGrid::slot_of(-j, n)] = std::conj(v);
  }
  return inverse(Spectrum(grid, std::move(c)));
}

/// phi_N periodized onto the grid: c_j = (2 pi/L) phi_n_hat(xi_j).
inline Field phi_n(const SpectralGrid& grid, double carrier, double gamma, double s) {
  const std::size_t n = grid.size();
  std::vector<complex> c(n);
  const double w = 2.0 * std::numbers::pi / grid.length();
  bool any = false;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == grid.nyquist_index()) continue;
    c[j] = w * phi_n_hat(grid.wavenumber(j), carrier, gamma, s);
    any = any || c[j] != 0.0;
  }
  if (!any) throw ConfigError("phi_N window contains no grid wavenumber; refine the grid or widen gamma");
  return inverse(Spectrum(grid, std::move(c)));
}

inline Field initial_field(const InitSpec& init, const SpectralGrid& grid, std::uint64_t seed) {
  switch (init.kind) {
    case InitSpec::Kind::gaussian:
      return gaussian(grid, init.amplitude, init.sigma);
    case InitSpec::Kind::sech:
      return sech(grid, init.amplitude, init.width);
    case InitSpec::Kind::bandlimited:
      return bandlimited(grid, seed, init.jmax, init.amplitude);
    case InitSpec::Kind::phin: {
      Field f = phi_n(grid, init.carrier, init.gamma, init.s);
      std::vector<double> v(f.values().begin(), f.values().end());
      for (double& x : v) x *= init.amplitude;
      return Field(grid, std::move(v));
    }
  }
  return Field(grid);
}

}  // namespace mfdf
