#pragma once

#include "mfdf/dispersion.hpp"

namespace mfdf {

/// Which equation to integrate. `nonlinear_scale` = 0 gives the linear flow.
struct EquationSpec {
  DispersionKind kind;
  double nonlinear_scale = 1.0;

  /// Coefficient c in d_t u = L u + c d_x(u^{k+1})/(k+1).
  double nonlinear_coefficient() const noexcept { return kind.sign_factor() * nonlinear_scale; }
  int power() const noexcept { return kind.power; }
};

}  // namespace mfdf
