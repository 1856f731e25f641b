#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "mfdf/errors.hpp"

namespace mfdf {

using complex = std::complex<double>;

/// Periodic grid of n points on [-L/2, L/2) and its wavenumbers in transform
/// order: xi_m = 2*pi*j/L with j = m for m <= n/2 and j = m - n otherwise, so
/// the Nyquist mode j = n/2 carries a positive wavenumber.
class SpectralGrid {
 public:
  SpectralGrid(std::size_t n, double length) {
    if (n < 8 || n % 2 != 0) {
      throw ConfigError("grid size must be even and >= 8, got " + std::to_string(n));
    }
    if (!(length > 0.0) || !std::isfinite(length)) {
      throw ConfigError("grid length must be positive and finite");
    }
    auto data = std::make_shared<Data>();
    data->n = n;
    data->length = length;
    data->points.resize(n);
    data->wavenumbers.resize(n);
    const double dx = length / static_cast<double>(n);
    const double dk = 2.0 * std::numbers::pi / length;
    for (std::size_t m = 0; m < n; ++m) {
      data->points[m] = static_cast<double>(m) * dx - 0.5 * length;
      data->wavenumbers[m] = dk * static_cast<double>(signed_index(m, n));
    }
    data_ = std::move(data);
  }

  std::size_t size() const noexcept { return data_->n; }
  double length() const noexcept { return data_->length; }
  double spacing() const noexcept { return data_->length / static_cast<double>(data_->n); }
  std::size_t nyquist_index() const noexcept { return data_->n / 2; }

  std::span<const double> points() const noexcept { return data_->points; }
  std::span<const double> wavenumbers() const noexcept { return data_->wavenumbers; }
  double point(std::size_t m) const { return data_->points[m]; }
  double wavenumber(std::size_t m) const { return data_->wavenumbers[m]; }

  /// Signed mode number j of storage slot m.
  static std::ptrdiff_t signed_index(std::size_t m, std::size_t n) noexcept {
    return m <= n / 2 ? static_cast<std::ptrdiff_t>(m)
                      : static_cast<std::ptrdiff_t>(m) - static_cast<std::ptrdiff_t>(n);
  }
  /// Storage slot of signed mode j (|j| < n/2, or j = n/2).
  static std::size_t slot_of(std::ptrdiff_t j, std::size_t n) noexcept {
    return j >= 0 ? static_cast<std::size_t>(j)
                  : static_cast<std::size_t>(j + static_cast<std::ptrdiff_t>(n));
  }

  friend bool operator==(const SpectralGrid& a, const SpectralGrid& b) noexcept {
    return a.data_ == b.data_ || (a.size() == b.size() && a.length() == b.length());
  }

 private:
  struct Data {
    std::size_t n = 0;
    double length = 0.0;
    std::vector<double> points;
    std::vector<double> wavenumbers;
  };
  std::shared_ptr<const Data> data_;
};

inline SpectralGrid make_grid(std::size_t n, double length) { return SpectralGrid(n, length); }

/// Real-valued state sampled on a grid.
class Field {
 public:
  Field(SpectralGrid grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
      throw ConfigError("field has " + std::to_string(values_.size()) + " values for a grid of " +
                        std::to_string(grid_.size()));
    }
    for (double v : values_) {
      if (!std::isfinite(v)) throw ConfigError("field contains non-finite values");
    }
  }
  explicit Field(SpectralGrid grid) : grid_(std::move(grid)), values_(grid_.size(), 0.0) {}

  const SpectralGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t m) const { return values_[m]; }

  double max_abs() const noexcept {
    double r = 0.0;
    for (double v : values_) r = std::max(r, std::abs(v));
    return r;
  }

 private:
  SpectralGrid grid_;
  std::vector<double> values_;
};

/// Fourier-series coefficients, u(x) = sum_m c_m exp(i xi_m x).
class Spectrum {
 public:
  Spectrum(SpectralGrid grid, std::vector<complex> coeffs) : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != grid_.size()) {
      throw ConfigError("spectrum has " + std::to_string(coeffs_.size()) + " coefficients for a grid of " +
                        std::to_string(grid_.size()));
    }
    for (const complex& c : coeffs_) {
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
        throw ConfigError("spectrum contains non-finite coefficients");
      }
    }
  }
  explicit Spectrum(SpectralGrid grid) : grid_(std::move(grid)), coeffs_(grid_.size()) {}

  const SpectralGrid& grid() const noexcept { return grid_; }
  std::span<const complex> coeffs() const noexcept { return coeffs_; }
  const complex& operator[](std::size_t m) const { return coeffs_[m]; }

  /// Sum of |c_m|^2.
  double power() const noexcept {
    double r = 0.0;
    for (const complex& c : coeffs_) r += std::norm(c);
    return r;
  }

 private:
  SpectralGrid grid_;
  std::vector<complex> coeffs_;
};

}  // namespace mfdf
