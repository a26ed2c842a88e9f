#pragma once

namespace contactline {

/// Second-order Taylor remainder of the slope-to-sine map and its partials.
///
/// R(y,z) = int_0^z 3(s-z)(s+y)/(1+(y+s)^2)^{5/2} ds, so that
/// (y+z)/sqrt(1+(y+z)^2) = y/sqrt(1+y^2) + z/(1+y^2)^{3/2} + R(y,z).
struct Remainder {
  double value = 0.0;
  double dy = 0.0;
  double dz = 0.0;
  double dzz = 0.0;
};

/// Adaptive Gauss-Kronrod quadrature of the integral and of its differentiated integrands.
Remainder curvature_remainder(double y, double z);

/// Closed form of the same remainder (cancellation-prone for small z; test oracle).
double curvature_remainder_closed(double y, double z);

/// Contact-point response law W(z) = kappa z + c3 z^3.
struct ResponseFunction {
  double kappa = 1.0;
  double c3 = 0.0;

  double W(double z) const { return kappa * z + c3 * z * z * z; }
  double dW(double z) const { return kappa + 3.0 * c3 * z * z; }
  /// Normalised nonlinear part W(z)/kappa - z.
  double What(double z) const { return c3 * z * z * z / kappa; }
  double dWhat(double z) const { return 3.0 * c3 * z * z / kappa; }
};

/// Unique z with W(z) = c (bracketed Newton).
double response_solve(double c, const ResponseFunction& rf);

} // namespace contactline
