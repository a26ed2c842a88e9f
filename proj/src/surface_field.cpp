#include "contactline/surface_field.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "contactline/error.hpp"

namespace contactline {

SurfaceField::SurfaceField(double ell, int n_modes) : ell_(ell), a_(static_cast<std::size_t>(n_modes), 0.0) {}

SurfaceField SurfaceField::fit(double ell, int n_modes, const Sampler& f)
{
  if (n_modes < 2) throw std::invalid_argument("SurfaceField needs at least two modes");
  SurfaceField s(ell, n_modes);
  const auto fl = f(-ell), fr = f(ell);
  // q' = c1 + 2 c2 x + 3 c3 x^2 + 4 c4 x^3, q''' = 6 c3 + 24 c4 x
  const double c3 = (fr[3] + fl[3]) / 12.0;
  const double c4 = (fr[3] - fl[3]) / (48.0 * ell);
  const double c1 = 0.5 * (fr[1] + fl[1]) - 3.0 * c3 * ell * ell;
  const double c2 = (0.5 * (fr[1] - fl[1]) - 4.0 * c4 * ell * ell * ell) / (2.0 * ell);
  s.q_ = {0.0, c1, c2, c3, c4};

  const int n = n_modes;
  std::vector<double> r(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double x = k == n - 1 ? ell : -ell + 2.0 * ell * k / (n - 1);
    double qx = 0.0;
    for (int p = 4; p >= 1; --p) qx = (qx + s.q_[p]) * x;
    r[k] = f(x)[0] - qx;
  }
  // inverse DCT-I
  for (int j = 0; j < n; ++j) {
    double acc = 0.0;
    for (int k = 0; k < n; ++k) {
      const double w = (k == 0 || k == n - 1) ? 0.5 : 1.0;
      acc += w * r[k] * std::cos(std::numbers::pi * static_cast<double>(j) * k / (n - 1));
    }
    acc *= 2.0 / (n - 1);
    if (j == 0 || j == n - 1) acc *= 0.5;
    s.a_[j] = acc;
  }
  return s;
}

std::array<double, 4> SurfaceField::eval(double x) const
{
  std::array<double, 4> out{};
  // polynomial part
  for (int k = 1; k <= 4; ++k) {
    const double c = q_[k];
    if (c == 0.0) continue;
    out[0] += c * std::pow(x, k);
    out[1] += c * k * std::pow(x, k - 1);
    if (k >= 2) out[2] += c * k * (k - 1) * std::pow(x, k - 2);
    if (k >= 3) out[3] += c * k * (k - 1) * (k - 2) * std::pow(x, k - 3);
  }
  const double k1 = std::numbers::pi / (2.0 * ell_);
  const std::complex<double> step = std::polar(1.0, k1 * (x + ell_));
  std::complex<double> rho = 1.0;
  double C[4] = {0, 0, 0, 0}, S[4] = {0, 0, 0, 0};
  for (std::size_t j = 0; j < a_.size(); ++j, rho *= step) {
    const double aj = a_[j];
    if (aj == 0.0) continue;
    const double kj = k1 * static_cast<double>(j);
    double p = aj;
    for (int m = 0; m < 4; ++m, p *= kj) {
      C[m] += p * rho.real();
      S[m] += p * rho.imag();
    }
  }
  out[0] += C[0];
  out[1] -= S[1];
  out[2] -= C[2];
  out[3] += S[3];
  return out;
}

Jet3 SurfaceField::extension(double x, double z) const
{
  Jet3 t;
  const std::complex<double> w(x, z);
  const std::complex<double> I(0.0, 1.0);
  static constexpr double binom[5][5] = {{1, 0, 0, 0, 0}, {1, 1, 0, 0, 0}, {1, 2, 1, 0, 0}, {1, 3, 3, 1, 0}, {1, 4, 6, 4, 1}};
  for (int k = 1; k <= 4; ++k) {
    const double c = q_[k];
    if (c == 0.0) continue;
    for (int m = 0; m <= std::min(k, 3); ++m) {
      const std::complex<double> wp = std::pow(w, k - m);
      std::complex<double> ib = 1.0;
      for (int b = 0; b <= m; ++b, ib *= I) t.coef(m - b, b) += c * binom[k][m] * binom[m][b] * (wp * ib).real();
    }
  }
  const double k1 = std::numbers::pi / (2.0 * ell_);
  const std::complex<double> step = std::exp(std::complex<double>(k1 * z, k1 * (x + ell_)));
  std::complex<double> rho = 1.0;
  double C[4] = {0, 0, 0, 0}, S[4] = {0, 0, 0, 0};
  for (std::size_t j = 0; j < a_.size(); ++j, rho *= step) {
    const double aj = a_[j];
    if (aj == 0.0) continue;
    const double kj = k1 * static_cast<double>(j);
    double p = aj;
    for (int m = 0; m < 4; ++m, p *= kj) {
      C[m] += p * rho.real();
      S[m] += p * rho.imag();
    }
  }
  // Re(i^a e^{i theta}) = cos, -sin, -cos, sin for a mod 4
  for (int m = 0; m <= 3; ++m)
    for (int b = 0; b <= m; ++b) {
      const int a = m - b;
      double v = 0.0;
      switch (a % 4) {
      case 0: v = C[m]; break;
      case 1: v = -S[m]; break;
      case 2: v = -C[m]; break;
      default: v = S[m]; break;
      }
      t.coef(a, b) += v / (Jet3::factorial(a) * Jet3::factorial(b));
    }
  return t;
}

bool SurfaceField::is_zero() const
{
  for (double c : q_)
    if (c != 0.0) return false;
  for (double c : a_)
    if (c != 0.0) return false;
  return true;
}

double SurfaceField::tail_bound() const
{
  double s = 0.0;
  for (std::size_t j = 3 * a_.size() / 4; j < a_.size(); ++j) s += std::abs(a_[j]);
  return s;
}

void SurfaceField::check_compatible(const SurfaceField& o) const
{
  if (o.a_.size() != a_.size() || o.ell_ != ell_) throw std::invalid_argument("SurfaceField: incompatible representations");
}

SurfaceField& SurfaceField::operator+=(const SurfaceField& o)
{
  check_compatible(o);
  for (int k = 0; k < 5; ++k) q_[k] += o.q_[k];
  for (std::size_t j = 0; j < a_.size(); ++j) a_[j] += o.a_[j];
  return *this;
}

SurfaceField& SurfaceField::operator-=(const SurfaceField& o)
{
  check_compatible(o);
  for (int k = 0; k < 5; ++k) q_[k] -= o.q_[k];
  for (std::size_t j = 0; j < a_.size(); ++j) a_[j] -= o.a_[j];
  return *this;
}

SurfaceField& SurfaceField::operator*=(double s)
{
  for (auto& c : q_) c *= s;
  for (auto& c : a_) c *= s;
  return *this;
}

SurfaceField::Sampler profile_sampler(const std::string& name, double ell, double amp)
{
  const double pi = std::numbers::pi;
  if (name == "zero") return [](double) { return std::array<double, 4>{}; };
  if (name == "cos" || name == "cos2") {
    const double k = (name == "cos" ? 1.0 : 2.0) * pi / ell;
    return [=](double x) {
      const double c = std::cos(k * x), s = std::sin(k * x);
      return std::array<double, 4>{amp * c, -amp * k * s, -amp * k * k * c, amp * k * k * k * s};
    };
  }
  if (name == "sin") {
    const double k = pi / (2.0 * ell);
    return [=](double x) {
      const double c = std::cos(k * x), s = std::sin(k * x);
      return std::array<double, 4>{amp * s, amp * k * c, -amp * k * k * s, -amp * k * k * k * c};
    };
  }
  if (name == "poly") {
    return [=](double x) {
      const double u = x / ell;
      return std::array<double, 4>{amp * (u * u - 1.0 / 3.0), amp * 2.0 * u / ell, amp * 2.0 / (ell * ell), 0.0};
    };
  }
  if (name.rfind("mode", 0) == 0)
    throw Error(ErrorKind::InvalidConfig, "profile '" + name + "' needs a discretization", {{"profile", name}});
  throw Error(ErrorKind::InvalidConfig, "unknown profile '" + name + "'", {{"profile", name}});
}

} // namespace contactline
