#pragma once

#include <array>
#include <cmath>

namespace contactline {

/// Truncated bivariate Taylor polynomial of total degree N.
///
/// Coefficient (a,b) stores d1^a d2^b f / (a! b!) at the expansion point, so
/// products are plain truncated polynomial products. Used for exact chain-rule
/// derivatives of the geometry fields and of manufactured solutions.
template <int N>
class Jet {
  static_assert(N >= 0 && N <= 4);

public:
  static constexpr int size = (N + 1) * (N + 2) / 2;
  static constexpr int index(int a, int b) { return (a + b) * (a + b + 1) / 2 + b; }

  constexpr Jet() : c_{} {}
  constexpr Jet(double v) : c_{} { c_[0] = v; }

  /// The coordinate function x_dir expanded at value v.
  static Jet variable(int dir, double v)
  {
    Jet j(v);
    if constexpr (N >= 1) j.c_[dir == 0 ? 1 : 2] = 1.0;
    return j;
  }

  double& coef(int a, int b) { return c_[index(a, b)]; }
  double coef(int a, int b) const { return c_[index(a, b)]; }
  double& operator[](int i) { return c_[i]; }
  double operator[](int i) const { return c_[i]; }

  double value() const { return c_[0]; }
  /// Partial derivative d1^a d2^b (zero beyond the truncation order).
  double derivative(int a, int b) const
  {
    if (a + b > N) return 0.0;
    return coef(a, b) * factorial(a) * factorial(b);
  }
  double d1() const { return derivative(1, 0); }
  double d2() const { return derivative(0, 1); }
  double d11() const { return derivative(2, 0); }
  double d12() const { return derivative(1, 1); }
  double d22() const { return derivative(0, 2); }

  template <int M>
  Jet<M> truncate() const
  {
    static_assert(M <= N);
    Jet<M> r;
    for (int i = 0; i < Jet<M>::size; ++i) r[i] = c_[i];
    return r;
  }

  /// Partial derivative in direction dir as a jet of one order less.
  Jet<(N > 0 ? N - 1 : 0)> diff(int dir) const
  {
    static_assert(N >= 1);
    Jet<N - 1> r;
    for (int k = 0; k < N; ++k)
      for (int b = 0; b <= k; ++b) {
        const int a = k - b;
        r.coef(a, b) = dir == 0 ? (a + 1) * coef(a + 1, b) : (b + 1) * coef(a, b + 1);
      }
    return r;
  }

  Jet& operator+=(const Jet& o)
  {
    for (int i = 0; i < size; ++i) c_[i] += o.c_[i];
    return *this;
  }
  Jet& operator-=(const Jet& o)
  {
    for (int i = 0; i < size; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Jet& operator*=(double s)
  {
    for (auto& v : c_) v *= s;
    return *this;
  }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator-(Jet a)
  {
    for (auto& v : a.c_) v = -v;
    return a;
  }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, double s) { return a *= 1.0 / s; }
  friend Jet operator+(Jet a, double s)
  {
    a.c_[0] += s;
    return a;
  }
  friend Jet operator+(double s, Jet a) { return a + s; }
  friend Jet operator-(Jet a, double s)
  {
    a.c_[0] -= s;
    return a;
  }
  friend Jet operator-(double s, const Jet& a) { return -a + s; }

  friend Jet operator*(const Jet& a, const Jet& b)
  {
    Jet r;
    for (int k1 = 0; k1 <= N; ++k1)
      for (int b1 = 0; b1 <= k1; ++b1) {
        const double x = a.coef(k1 - b1, b1);
        if (x == 0.0) continue;
        for (int k2 = 0; k1 + k2 <= N; ++k2)
          for (int b2 = 0; b2 <= k2; ++b2)
            r.coef(k1 - b1 + k2 - b2, b1 + b2) += x * b.coef(k2 - b2, b2);
      }
    return r;
  }
  friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
  friend Jet operator/(double s, const Jet& b) { return s * reciprocal(b); }

  /// f(jet) given f^(k)(value)/k! for k = 0..N.
  Jet compose(const std::array<double, N + 1>& taylor) const
  {
    Jet h = *this;
    h.c_[0] = 0.0;
    Jet r(taylor[N]);
    for (int k = N - 1; k >= 0; --k) r = r * h + taylor[k];
    return r;
  }

  friend Jet reciprocal(const Jet& a)
  {
    const double v = a.value();
    std::array<double, N + 1> t{};
    double p = 1.0 / v;
    for (int k = 0; k <= N; ++k, p /= -v) t[k] = p;
    return a.compose(t);
  }
  friend Jet sqrt(const Jet& a)
  {
    std::array<double, N + 1> t{};
    const double v = a.value();
    double coefk = 1.0; // binomial(1/2, k)
    for (int k = 0; k <= N; ++k) {
      t[k] = coefk * std::pow(v, 0.5 - k);
      coefk *= (0.5 - k) / (k + 1);
    }
    return a.compose(t);
  }
  friend Jet exp(const Jet& a)
  {
    std::array<double, N + 1> t{};
    const double e = std::exp(a.value());
    for (int k = 0; k <= N; ++k) t[k] = e / factorial(k);
    return a.compose(t);
  }
  friend Jet sin(const Jet& a)
  {
    std::array<double, N + 1> t{};
    const double s = std::sin(a.value()), c = std::cos(a.value());
    const double cyc[4] = {s, c, -s, -c};
    for (int k = 0; k <= N; ++k) t[k] = cyc[k % 4] / factorial(k);
    return a.compose(t);
  }
  friend Jet cos(const Jet& a)
  {
    std::array<double, N + 1> t{};
    const double s = std::sin(a.value()), c = std::cos(a.value());
    const double cyc[4] = {c, -s, -c, s};
    for (int k = 0; k <= N; ++k) t[k] = cyc[k % 4] / factorial(k);
    return a.compose(t);
  }

  static constexpr double factorial(int k)
  {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
  }

private:
  std::array<double, size> c_;
};

/// Jet of a function of x1 only, from its derivatives f, f', f'', ...
template <int N>
Jet<N> jet_in_x1(const double* derivs)
{
  Jet<N> j;
  for (int a = 0; a <= N; ++a) j.coef(a, 0) = derivs[a] / Jet<N>::factorial(a);
  return j;
}

/// Jet of a function of x2 only.
template <int N>
Jet<N> jet_in_x2(const double* derivs)
{
  Jet<N> j;
  for (int b = 0; b <= N; ++b) j.coef(0, b) = derivs[b] / Jet<N>::factorial(b);
  return j;
}

using Jet1 = Jet<1>;
using Jet2 = Jet<2>;
using Jet3 = Jet<3>;

} // namespace contactline
