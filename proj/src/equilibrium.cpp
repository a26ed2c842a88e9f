#include "contactline/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "contactline/error.hpp"

namespace contactline {

double EquilibriumState::min_zeta() const
{
  const auto& y = zeta.values();
  double m = *std::min_element(y.begin(), y.end());
  // refine between knots
  const auto& x = zeta.knots();
  for (std::size_t i = 0; i + 1 < x.size(); ++i)
    for (int k = 1; k < 4; ++k) m = std::min(m, zeta(x[i] + (x[i + 1] - x[i]) * k / 4.0));
  return m;
}

double EquilibriumState::max_abs_slope() const
{
  const auto& x = zeta.knots();
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i)
    for (int k = 0; k <= 4; ++k) m = std::max(m, std::abs(dzeta0(x[i] + (x[i + 1] - x[i]) * k / 4.0)));
  return m;
}

double EquilibriumState::diameter() const
{
  double top = 0.0;
  for (double z : zeta.values()) top = std::max(top, z);
  return std::hypot(2.0 * cfg.ell, top + cfg.H_bot);
}

double EquilibriumState::curvature_factor(double x) const
{
  const double s = dzeta0(x);
  return std::pow(1.0 + s * s, 1.5);
}

double contact_angle_from_slope(double slope)
{
  return std::acos(slope / std::sqrt(1.0 + slope * slope));
}

double contact_angle(const EquilibriumState& eq)
{
  return contact_angle_from_slope(eq.dzeta0(eq.cfg.ell));
}

double critical_weight(double omega)
{
  return std::max(0.0, 2.0 - std::numbers::pi / omega);
}

double corner_distance(double x1, double x2, const EquilibriumState& eq)
{
  const double dl = std::hypot(x1 - eq.corners[0][0], x2 - eq.corners[0][1]);
  const double dr = std::hypot(x1 - eq.corners[1][0], x2 - eq.corners[1][1]);
  return std::min(dl, dr);
}

double max_admissible_eps(const EquilibriumState& eq)
{
  const auto& x = eq.zeta.knots();
  double min_slope2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < x.size(); ++i)
    for (int k = 0; k <= 8; ++k) {
      const double s = eq.dzeta0(x[i] + (x[i + 1] - x[i]) * k / 8.0);
      min_slope2 = std::min(min_slope2, s * s);
    }
  return 0.25 * std::pow(1.0 + min_slope2, 1.5) / eq.cfg.sigma;
}

void check_epsilon(const EquilibriumState& eq, double eps)
{
  const double bound = max_admissible_eps(eq);
  if (eps > bound)
    throw Error(ErrorKind::InvalidConfig, "eps violates the admissibility bound eps*sigma/(1+min|zeta0'|^2)^{3/2} <= 1/4",
                {{"eps", eps}, {"bound", bound}});
}

EquilibriumState solve_equilibrium(const PhysicalConfig& cfg, int n_nodes)
{
  cfg.validate();
  if (n_nodes < 8) throw Error(ErrorKind::InvalidConfig, "n_nodes must be at least 8", {{"n_nodes", n_nodes}});

  const int n = n_nodes;
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = -cfg.ell * std::cos(std::numbers::pi * i / (n - 1));
  x.front() = -cfg.ell;
  x.back() = cfg.ell;

  const double a = cfg.gamma_jump / cfg.sigma;
  const double s_end = a / std::sqrt(1.0 - a * a);
  const auto maps = CubicSpline::linear_maps(x, -s_end, s_end);
  const double volume = 2.0 * cfg.ell * cfg.mean_height;

  // unknowns: y_0..y_{n-1}, P0
  Eigen::VectorXd z(n + 1);
  z.head(n).setConstant(cfg.mean_height);
  z(n) = cfg.g * cfg.mean_height;

  auto residual = [&](const Eigen::VectorXd& v, Eigen::MatrixXd* jac) {
    const Eigen::VectorXd y = v.head(n);
    const Eigen::VectorXd m = maps.L * y + maps.c;
    const Eigen::VectorXd yp = maps.D * y + maps.e;
    Eigen::VectorXd r(n + 1);
    if (jac) jac->setZero(n + 1, n + 1);
    for (int i = 0; i < n; ++i) {
      const double q = 1.0 + yp(i) * yp(i);
      const double w = std::pow(q, -1.5);
      r(i) = cfg.sigma * m(i) * w - cfg.g * y(i) + v(n);
      if (jac) {
        jac->row(i).head(n) = cfg.sigma * w * maps.L.row(i) - 3.0 * cfg.sigma * m(i) * yp(i) * std::pow(q, -2.5) * maps.D.row(i);
        (*jac)(i, i) -= cfg.g;
        (*jac)(i, n) = 1.0;
      }
    }
    r(n) = maps.quad.dot(y) + maps.quad_c - volume;
    if (jac) jac->row(n).head(n) = maps.quad;
    return r;
  };

  Eigen::MatrixXd jac;
  Eigen::VectorXd r = residual(z, &jac);
  int it = 0;
  const int max_it = 50;
  while (r.lpNorm<Eigen::Infinity>() > 1e-12 && it < max_it) {
    const Eigen::VectorXd step = jac.partialPivLu().solve(-r);
    double lambda = 1.0;
    Eigen::VectorXd trial;
    Eigen::VectorXd rt;
    for (int k = 0; k < 30; ++k, lambda *= 0.5) {
      trial = z + lambda * step;
      rt = residual(trial, nullptr);
      if (rt.allFinite() && rt.lpNorm<Eigen::Infinity>() < r.lpNorm<Eigen::Infinity>()) break;
    }
    if (!rt.allFinite() || !(rt.lpNorm<Eigen::Infinity>() < r.lpNorm<Eigen::Infinity>())) break;
    z = trial;
    r = residual(z, &jac);
    ++it;
  }
  const double res = r.lpNorm<Eigen::Infinity>();
  if (!(res < 1e-10))
    throw Error(ErrorKind::NoConvergence, "equilibrium Newton iteration stalled (parameters near the Young-relation boundary?)",
                {{"residual", res}, {"iterations", it}});

  EquilibriumState eq;
  eq.cfg = cfg;
  std::vector<double> y(z.data(), z.data() + n);
  eq.zeta = CubicSpline(x, y, -s_end, s_end);
  eq.P0 = z(n);
  eq.max_residual = res;
  eq.newton_iterations = it;
  eq.omega = contact_angle(eq);
  eq.delta_omega = critical_weight(eq.omega);
  eq.corners = {{{-cfg.ell, eq.zeta0(-cfg.ell)}, {cfg.ell, eq.zeta0(cfg.ell)}}};
  auto contact = [&](double xe) {
    const double s = eq.dzeta0(xe);
    return cfg.sigma * s / std::sqrt(1.0 + s * s);
  };
  eq.contact_residual = std::max(std::abs(contact(cfg.ell) - cfg.gamma_jump), std::abs(contact(-cfg.ell) + cfg.gamma_jump));
  if (eq.min_zeta() <= 0.0 || *std::max_element(y.begin(), y.end()) >= cfg.channel_height)
    throw Error(ErrorKind::InvalidConfig, "equilibrium surface leaves the channel (0, L)",
                {{"min_zeta", eq.min_zeta()}, {"channel_height", cfg.channel_height}});
  if (!(cfg.delta > eq.delta_omega))
    throw Error(ErrorKind::InvalidConfig, "weight exponent delta must exceed the critical weight",
                {{"delta", cfg.delta}, {"delta_omega", eq.delta_omega}});
  return eq;
}

} // namespace contactline
