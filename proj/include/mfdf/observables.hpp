#pragma once

#include <cmath>
#include <string>

#include "mfdf/equation.hpp"
#include "mfdf/grid.hpp"
#include "mfdf/spectral.hpp"

namespace mfdf {

/// Conserved quantities and norms of one state.
struct InvariantRecord {
  double time = 0.0;
  double mass = 0.0;         // int u dx
  double l2 = 0.0;           // int u^2 dx
  double hamiltonian = 0.0;  // see hamiltonian()
  double hs_half = 0.0;      // ||u||_{H^{1/2}}
  double max_abs = 0.0;
};

/// (L sum_j (1 + xi_j^2)^s |c_j|^2)^{1/2}; s = 0 gives the L^2 norm.
inline double hs_norm(const Spectrum& s, double order) {
  if (!(order >= 0.0)) throw ConfigError("Sobolev order must be non-negative");
  const auto xi = s.grid().wavenumbers();
  const auto c = s.coeffs();
  double sum = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) sum += std::pow(1.0 + xi[j] * xi[j], order) * std::norm(c[j]);
  return std::sqrt(s.grid().length() * sum);
}

inline double hs_norm(const Field& f, double order) { return hs_norm(transform(f), order); }

/// 1/2 int u A u dx, where A has symbol omega(xi)/xi, so the linear flow is
/// d_t u = d_x (A u).
inline double quadratic_energy(const Spectrum& s, const DispersionKind& kind) {
  const auto xi = s.grid().wavenumbers();
  const auto c = s.coeffs();
  double sum = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (xi[j] == 0.0) continue;
    sum += omega(xi[j], kind) / xi[j] * std::norm(c[j]);
  }
  return 0.5 * s.grid().length() * sum;
}

/// int u^p dx on the grid padded for products of p factors.
inline double power_integral(const Spectrum& s, int p) {
  const std::size_t n = s.grid().size();
  const auto values = detail::padded_values(s.coeffs(), detail::dealias_size(n, p - 2));
  double sum = 0.0;
  for (double v : values) sum += std::pow(v, p);
  return sum * s.grid().length() / static_cast<double>(values.size());
}

/// H = 1/2 int u A u dx + sigma/((k+1)(k+2)) int u^{k+2} dx, sigma = +1 for
/// the defocusing flow and -1 for the focusing one. For mFDF (k = 2) that is
/// int 1/2 u G_delta u_x + sigma/12 u^4 dx.
///
/// sigma was fixed by running defocusing mFDF (delta = 1, Gaussian data,
/// N = 1024, L = 64 pi, T = 1) and tracking both candidate signs: with +1 the
/// relative drift stays near 3e-15, with -1 it grows to 8e-4. The experiment
/// is kept as the "Hamiltonian sign desk experiment" test.
inline double hamiltonian(const Spectrum& s, const EquationSpec& eq) {
  const int k = eq.power();
  const double coeff = eq.nonlinear_coefficient() / static_cast<double>((k + 1) * (k + 2));
  double h = quadratic_energy(s, eq.kind);
  if (coeff != 0.0) h += coeff * power_integral(s, k + 2);
  return h;
}

inline InvariantRecord invariants(const Spectrum& s, const EquationSpec& eq, double time = 0.0) {
  InvariantRecord r;
  r.time = time;
  r.mass = s.grid().length() * s[0].real();
  r.l2 = s.grid().length() * s.power();
  r.hamiltonian = hamiltonian(s, eq);
  r.hs_half = hs_norm(s, 0.5);
  r.max_abs = inverse(s).max_abs();
  return r;
}

inline InvariantRecord invariants(const Field& f, const EquationSpec& eq, double time = 0.0) {
  InvariantRecord r = invariants(transform(f), eq, time);
  r.max_abs = f.max_abs();
  return r;
}

}  // namespace mfdf
