#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

namespace contactline {

/// C2 cubic spline with clamped end slopes.
class CubicSpline {
public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y, double slope_left, double slope_right);

  /// Value and derivatives 0..3 at x (piecewise cubic; third derivative is piecewise constant).
  std::array<double, 4> eval(double x) const;
  double operator()(double x) const { return eval(x)[0]; }
  double derivative(double x, int order = 1) const { return eval(x)[order]; }

  /// Exact integral over the whole knot range.
  double integral() const;

  const std::vector<double>& knots() const { return x_; }
  const std::vector<double>& values() const { return y_; }
  const std::vector<double>& second_derivatives() const { return m_; }
  double slope_left() const { return sl_; }
  double slope_right() const { return sr_; }
  bool empty() const { return x_.empty(); }

  /// Linear maps of the clamped construction: m = L y + c, y'(nodes) = D y + e.
  struct LinearMaps {
    Eigen::MatrixXd L;
    Eigen::VectorXd c;
    Eigen::MatrixXd D;
    Eigen::VectorXd e;
    Eigen::RowVectorXd quad; ///< integral = quad * y + quad_c
    double quad_c = 0.0;
  };
  static LinearMaps linear_maps(const std::vector<double>& x, double slope_left, double slope_right);

private:
  std::size_t interval(double x) const;

  std::vector<double> x_, y_, m_;
  double sl_ = 0.0, sr_ = 0.0;
};

} // namespace contactline
