#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mfdf/errors.hpp"
#include "mfdf/fft.hpp"
#include "mfdf/grid.hpp"

namespace mfdf {

namespace detail {

// Grid points start at -L/2, so exp(i xi_m x_j) = (-1)^m exp(2 pi i mj/n).
inline double origin_phase(std::size_t m) noexcept { return (m % 2 == 0) ? 1.0 : -1.0; }

inline std::vector<complex> forward_coeffs(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<complex> buf(values.begin(), values.end());
  plan_for(n).forward(buf, buf);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t m = 0; m < n; ++m) buf[m] *= origin_phase(m) * scale;
  return buf;
}

inline std::vector<complex> inverse_coeffs(std::span<const complex> coeffs) {
  const std::size_t n = coeffs.size();
  std::vector<complex> buf(coeffs.begin(), coeffs.end());
  for (std::size_t m = 0; m < n; ++m) buf[m] *= origin_phase(m);
  plan_for(n).backward(buf, buf);
  return buf;
}

inline std::vector<double> inverse_real(std::span<const complex> coeffs) {
  const auto c = inverse_coeffs(coeffs);
  std::vector<double> out(c.size());
  for (std::size_t j = 0; j < c.size(); ++j) out[j] = c[j].real();
  return out;
}

/// Smallest even M >= (k+2)n/2: the product of k+1 band-limited factors is
/// then alias-free on the retained |j| < n/2 modes, and so is the mean of a
/// product of k+2 factors.
inline std::size_t dealias_size(std::size_t n, int k) noexcept {
  std::size_t m = (static_cast<std::size_t>(k + 2) * n + 1) / 2;
  return m % 2 == 0 ? m : m + 1;
}

/// Zero-pads modes |j| < n/2 into an M-point spectrum (Nyquist dropped) and
/// returns the physical values on the M-point grid over the same box.
inline std::vector<double> padded_values(std::span<const complex> coeffs, std::size_t padded) {
  const std::size_t n = coeffs.size();
  std::vector<complex> big(padded);
  const auto half = static_cast<std::ptrdiff_t>(n / 2);
  for (std::ptrdiff_t j = -half + 1; j < half; ++j) {
    big[SpectralGrid::slot_of(j, padded)] = coeffs[SpectralGrid::slot_of(j, n)];
  }
  return inverse_real(big);
}

/// Transforms M-point physical values and keeps modes |j| < n/2.
inline std::vector<complex> truncated_forward(std::span<const double> values, std::size_t n) {
  const std::size_t padded = values.size();
  const auto big = forward_coeffs(values);
  std::vector<complex> out(n);
  const auto half = static_cast<std::ptrdiff_t>(n / 2);
  for (std::ptrdiff_t j = -half + 1; j < half; ++j) {
    out[SpectralGrid::slot_of(j, n)] = big[SpectralGrid::slot_of(j, padded)];
  }
  return out;
}

inline void check_power(int k) {
  if (k < 1 || k > 4) throw ConfigError("nonlinearity power k must be in {1,2,3,4}, got " + std::to_string(k));
}

/// Coefficients of d/dx(u^{k+1})/(k+1), computed with exact dealiasing.
inline std::vector<complex> power_derivative_coeffs(std::span<const complex> coeffs, const SpectralGrid& grid, int k) {
  check_power(k);
  const std::size_t n = coeffs.size();
  auto values = padded_values(coeffs, dealias_size(n, k));
  for (double& v : values) v = std::pow(v, k + 1);
  auto out = truncated_forward(values, n);
  const double inv = 1.0 / static_cast<double>(k + 1);
  const auto xi = grid.wavenumbers();
  for (std::size_t m = 0; m < n; ++m) out[m] *= complex(0.0, xi[m] * inv);
  return out;
}

}  // namespace detail

inline Spectrum transform(const Field& f) { return Spectrum(f.grid(), detail::forward_coeffs(f.values())); }

/// Real part of the synthesized field; see inverse_complex for the residue.
inline Field inverse(const Spectrum& s) { return Field(s.grid(), detail::inverse_real(s.coeffs())); }

inline std::vector<complex> inverse_complex(const Spectrum& s) { return detail::inverse_coeffs(s.coeffs()); }

/// Multiplies every coefficient by m(xi). The Nyquist coefficient is zeroed
/// when m(xi_N) != m(-xi_N), since that mode has no sign on a real grid.
template <class Symbol>
Spectrum apply_multiplier(const Spectrum& s, Symbol&& m) {
  const auto& grid = s.grid();
  const auto xi = grid.wavenumbers();
  std::vector<complex> out(s.coeffs().begin(), s.coeffs().end());
  for (std::size_t j = 0; j < out.size(); ++j) {
    const complex v = m(xi[j]);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw ConfigError("multiplier is not finite at xi = " + std::to_string(xi[j]));
    }
    out[j] *= v;
  }
  const std::size_t ny = grid.nyquist_index();
  if (complex(m(xi[ny])) != complex(m(-xi[ny]))) out[ny] = 0.0;
  return Spectrum(grid, std::move(out));
}

inline Spectrum dealiased_power_derivative(const Spectrum& s, int k) {
  return Spectrum(s.grid(), detail::power_derivative_coeffs(s.coeffs(), s.grid(), k));
}

/// d/dx(f^{k+1})/(k+1) with the product formed on a zero-padded grid.
inline Field dealiased_power_derivative(const Field& f, int k) {
  return inverse(dealiased_power_derivative(transform(f), k));
}

}  // namespace mfdf
