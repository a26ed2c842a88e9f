#include "contactline/remainder.hpp"

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace contactline {

namespace {

template <class F>
double integrate(F&& f, double z)
{
  if (z == 0.0) return 0.0;
  using boost::math::quadrature::gauss_kronrod;
  if (z < 0.0) return -gauss_kronrod<double, 31>::integrate(f, z, 0.0, 8, 1e-13);
  return gauss_kronrod<double, 31>::integrate(f, 0.0, z, 8, 1e-13);
}

} // namespace

Remainder curvature_remainder(double y, double z)
{
  Remainder r;
  r.value = integrate(
      [&](double s) {
        const double t = y + s;
        return 3.0 * (s - z) * t / std::pow(1.0 + t * t, 2.5);
      },
      z);
  // d/dy of t/(1+t^2)^{5/2} is (1 - 4 t^2)/(1+t^2)^{7/2}
  r.dy = integrate(
      [&](double s) {
        const double t = y + s;
        return 3.0 * (s - z) * (1.0 - 4.0 * t * t) / std::pow(1.0 + t * t, 3.5);
      },
      z);
  // the boundary term vanishes because (s - z) = 0 at s = z
  r.dz = integrate(
      [&](double s) {
        const double t = y + s;
        return -3.0 * t / std::pow(1.0 + t * t, 2.5);
      },
      z);
  const double t = y + z;
  r.dzz = -3.0 * t / std::pow(1.0 + t * t, 2.5);
  return r;
}

double curvature_remainder_closed(double y, double z)
{
  const double t = y + z;
  return t / std::sqrt(1.0 + t * t) - y / std::sqrt(1.0 + y * y) - z / std::pow(1.0 + y * y, 1.5);
}

double response_solve(double c, const ResponseFunction& rf)
{
  if (c == 0.0) return 0.0;
  // W is odd and increasing; bracket [lo, hi] around the root
  double lo = 0.0, hi = 0.0;
  if (c > 0.0) {
    hi = c / rf.kappa;
  } else {
    lo = c / rf.kappa;
  }
  // |z| <= |c|/kappa because W(z) has the sign of z and |W(z)| >= kappa |z|
  double z = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double f = rf.W(z) - c;
    if (f == 0.0) return z;
    if (f > 0.0) hi = z;
    else lo = z;
    double zn = z - f / rf.dW(z);
    if (!(zn > lo && zn < hi)) zn = 0.5 * (lo + hi);
    if (std::abs(zn - z) <= 1e-16 * std::max(1.0, std::abs(z))) return zn;
    z = zn;
  }
  return z;
}

} // namespace contactline
