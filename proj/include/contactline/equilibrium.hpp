#pragma once

#include <array>

#include "contactline/config.hpp"
#include "contactline/spline.hpp"

namespace contactline {

/// Equilibrium free surface zeta0 on [-ell, ell] with its pressure constant.
struct EquilibriumState {
  PhysicalConfig cfg;
  CubicSpline zeta;
  double P0 = 0.0;
  double omega = 0.0;       ///< interior contact angle
  double delta_omega = 0.0; ///< critical weight max{0, 2 - pi/omega}
  std::array<std::array<double, 2>, 2> corners{}; ///< (-ell, zeta0(-ell)), (ell, zeta0(ell))
  double max_residual = 0.0;
  double contact_residual = 0.0;
  int newton_iterations = 0;

  double zeta0(double x) const { return zeta(x); }
  double dzeta0(double x) const { return zeta.derivative(x, 1); }
  /// zeta0 and its derivatives 0..3.
  std::array<double, 4> zeta_derivs(double x) const { return zeta.eval(x); }
  double min_zeta() const;
  double max_abs_slope() const;
  double diameter() const;
  /// (1 + zeta0'^2)^{3/2}
  double curvature_factor(double x) const;
};

/// Young-Laplace collocation solve; P0 fixed by the configured mean height.
EquilibriumState solve_equilibrium(const PhysicalConfig& cfg, int n_nodes);

double contact_angle(const EquilibriumState& eq);

/// omega from the slope at x = +ell.
double contact_angle_from_slope(double slope);

double critical_weight(double omega);

/// Distance to the nearer contact point.
double corner_distance(double x1, double x2, const EquilibriumState& eq);

/// Largest eps allowed by eps * sigma / (1 + min zeta0'^2)^{3/2} <= 1/4.
double max_admissible_eps(const EquilibriumState& eq);

/// Throws InvalidConfig when eps violates the admissibility bound.
void check_epsilon(const EquilibriumState& eq, double eps);

} // namespace contactline
