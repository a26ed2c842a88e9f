#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "contactline/jet.hpp"

namespace contactline {

/// Smooth field on (-ell, ell) with a harmonic extension below the surface.
///
/// Representation: f(x) = q(x) + sum_j a_j cos(j pi (x+ell)/(2 ell)), where the
/// quartic q carries the endpoint first and third derivatives so that the
/// cosine part is the even reflection of a C^3 remainder. The extension
/// replaces x^k by Re((x + i z)^k) and damps mode j by exp(j pi z/(2 ell)).
class SurfaceField {
public:
  using Sampler = std::function<std::array<double, 4>(double)>;

  SurfaceField() = default;
  SurfaceField(double ell, int n_modes);

  /// Fit from a function returning value and derivatives 0..3; interpolates
  /// the remainder at the n_modes Chebyshev-Lobatto-type DCT points, exact at x = +-ell.
  static SurfaceField fit(double ell, int n_modes, const Sampler& f);

  /// Value and derivatives 0..3 on the surface line.
  std::array<double, 4> eval(double x) const;
  double operator()(double x) const { return eval(x)[0]; }

  /// Taylor jet (variables x and z) of the extension at (x, z), z <= 0.
  Jet3 extension(double x, double z) const;

  double ell() const { return ell_; }
  int n_modes() const { return static_cast<int>(a_.size()); }
  const std::vector<double>& modes() const { return a_; }
  const std::array<double, 5>& poly() const { return q_; }
  bool is_zero() const;

  /// Sum of |a_j| over the top quarter of the spectrum.
  double tail_bound() const;

  SurfaceField& operator+=(const SurfaceField& o);
  SurfaceField& operator-=(const SurfaceField& o);
  SurfaceField& operator*=(double s);
  friend SurfaceField operator+(SurfaceField a, const SurfaceField& b) { return a += b; }
  friend SurfaceField operator-(SurfaceField a, const SurfaceField& b) { return a -= b; }
  friend SurfaceField operator*(double s, SurfaceField a) { return a *= s; }

private:
  void check_compatible(const SurfaceField& o) const;

  double ell_ = 1.0;
  std::array<double, 5> q_{};
  std::vector<double> a_;
};

/// Analytic zero-mean profile by name (value and derivatives 0..3), scaled to half-width ell.
SurfaceField::Sampler profile_sampler(const std::string& name, double ell, double amplitude);

} // namespace contactline
