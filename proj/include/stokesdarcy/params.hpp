#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace stokesdarcy {

/// Material parameters of the coupled problem.
struct PhysicalParams {
  double mu = 1.0;    ///< viscosity
  double K = 1.0;     ///< hydraulic conductivity (scalar, homogeneous)
  double alpha = 0.0; ///< Beavers-Joseph-Saffman proportionality constant

  double kappa() const { return mu * K; } ///< permeability
  double beta() const { return alpha == 0.0 ? 0.0 : alpha * mu / std::sqrt(kappa()); }

  /// Throws std::invalid_argument on invalid values; returns warnings when
  /// the parameters leave the assumed regime (mu*K <= 1, beta <= mu).
  std::vector<std::string> validate() const;
};

using ScalarFn = std::function<double(double, double)>;
using VectorFn = std::function<std::array<double, 2>(double, double)>;

/// Problem data as coordinate functions; empty std::function means zero.
struct ProblemData {
  VectorFn f_stokes;      ///< body force on Ω_S
  ScalarFn f_darcy;       ///< mass source on Ω_D
  ScalarFn f_stokes_mass; ///< mass source on Ω_S (coupled-Neumann mode only)
  ScalarFn g_pressure;    ///< pressure datum on ∂_p Ω_D
  VectorFn g_velocity;    ///< velocity datum on ∂_u Ω_S
  VectorFn g_traction;    ///< normal stress datum on ∂_σ Ω_S

  static double eval(const ScalarFn& f, double x, double y) {
    return f ? f(x, y) : 0.0;
  }
  static std::array<double, 2> eval(const VectorFn& f, double x, double y) {
    return f ? f(x, y) : std::array<double, 2>{0.0, 0.0};
  }
};

} // namespace stokesdarcy
