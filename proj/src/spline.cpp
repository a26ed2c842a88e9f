#include "contactline/spline.hpp"

#include <algorithm>
#include <stdexcept>

namespace contactline {

namespace {

// Tridiagonal system for clamped second derivatives: T m = R y + r0.
void clamped_system(const std::vector<double>& x, double sl, double sr, Eigen::MatrixXd& T, Eigen::MatrixXd& R,
                    Eigen::VectorXd& r0)
{
  const int n = static_cast<int>(x.size());
  T.setZero(n, n);
  R.setZero(n, n);
  r0.setZero(n);
  const double h0 = x[1] - x[0];
  T(0, 0) = h0 / 3.0;
  T(0, 1) = h0 / 6.0;
  R(0, 0) = -1.0 / h0;
  R(0, 1) = 1.0 / h0;
  r0(0) = -sl;
  for (int i = 1; i < n - 1; ++i) {
    const double hl = x[i] - x[i - 1], hr = x[i + 1] - x[i];
    T(i, i - 1) = hl / 6.0;
    T(i, i) = (hl + hr) / 3.0;
    T(i, i + 1) = hr / 6.0;
    R(i, i - 1) = 1.0 / hl;
    R(i, i) = -1.0 / hl - 1.0 / hr;
    R(i, i + 1) = 1.0 / hr;
  }
  const double hn = x[n - 1] - x[n - 2];
  T(n - 1, n - 2) = hn / 6.0;
  T(n - 1, n - 1) = hn / 3.0;
  R(n - 1, n - 2) = 1.0 / hn;
  R(n - 1, n - 1) = -1.0 / hn;
  r0(n - 1) = sr;
}

} // namespace

CubicSpline::LinearMaps CubicSpline::linear_maps(const std::vector<double>& x, double sl, double sr)
{
  if (x.size() < 2) throw std::invalid_argument("spline needs at least two knots");
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd T, R;
  Eigen::VectorXd r0;
  clamped_system(x, sl, sr, T, R, r0);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(T);
  LinearMaps maps;
  maps.L = lu.solve(R);
  maps.c = lu.solve(r0);
  // y'_i = (y_{i+1}-y_i)/h - h(2 m_i + m_{i+1})/6, last node clamped.
  maps.D.setZero(n, n);
  maps.e.setZero(n);
  for (int i = 0; i < n - 1; ++i) {
    const double h = x[i + 1] - x[i];
    maps.D(i, i) -= 1.0 / h;
    maps.D(i, i + 1) += 1.0 / h;
    maps.D.row(i) -= h / 6.0 * (2.0 * maps.L.row(i) + maps.L.row(i + 1));
    maps.e(i) -= h / 6.0 * (2.0 * maps.c(i) + maps.c(i + 1));
  }
  maps.e(n - 1) = sr;
  maps.quad.setZero(n);
  for (int i = 0; i < n - 1; ++i) {
    const double h = x[i + 1] - x[i];
    maps.quad(i) += h / 2.0;
    maps.quad(i + 1) += h / 2.0;
    maps.quad -= h * h * h / 24.0 * (maps.L.row(i) + maps.L.row(i + 1));
    maps.quad_c -= h * h * h / 24.0 * (maps.c(i) + maps.c(i + 1));
  }
  return maps;
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y, double sl, double sr)
    : x_(std::move(x)), y_(std::move(y)), sl_(sl), sr_(sr)
{
  if (x_.size() != y_.size() || x_.size() < 2) throw std::invalid_argument("spline: bad knot data");
  for (std::size_t i = 1; i < x_.size(); ++i)
    if (!(x_[i] > x_[i - 1])) throw std::invalid_argument("spline: knots must increase");
  Eigen::MatrixXd T, R;
  Eigen::VectorXd r0;
  clamped_system(x_, sl, sr, T, R, r0);
  const Eigen::Map<const Eigen::VectorXd> yv(y_.data(), static_cast<Eigen::Index>(y_.size()));
  const Eigen::VectorXd m = T.partialPivLu().solve(R * yv + r0);
  m_.assign(m.data(), m.data() + m.size());
}

std::size_t CubicSpline::interval(double x) const
{
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
  return std::min(i, x_.size() - 2);
}

std::array<double, 4> CubicSpline::eval(double x) const
{
  const std::size_t i = interval(x);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - x) / h, b = (x - x_[i]) / h;
  const double mi = m_[i], mj = m_[i + 1];
  std::array<double, 4> r{};
  r[0] = a * y_[i] + b * y_[i + 1] + ((a * a * a - a) * mi + (b * b * b - b) * mj) * h * h / 6.0;
  r[1] = (y_[i + 1] - y_[i]) / h - (3.0 * a * a - 1.0) * h / 6.0 * mi + (3.0 * b * b - 1.0) * h / 6.0 * mj;
  r[2] = a * mi + b * mj;
  r[3] = (mj - mi) / h;
  // exact clamped slopes at the ends
  if (x == x_.front()) r[1] = sl_;
  if (x == x_.back()) r[1] = sr_;
  return r;
}

double CubicSpline::integral() const
{
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < x_.size(); ++i) {
    const double h = x_[i + 1] - x_[i];
    s += h * (y_[i] + y_[i + 1]) / 2.0 - h * h * h * (m_[i] + m_[i + 1]) / 24.0;
  }
  return s;
}

} // namespace contactline
