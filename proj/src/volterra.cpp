#include "contactline/volterra.hpp"

#include <cmath>

#include "contactline/error.hpp"

namespace contactline {

std::vector<double> uniform_grid(double T, double dt)
{
  std::vector<double> g{0.0};
  if (!(T > 0.0) || !(dt > 0.0)) return g;
  const int n = static_cast<int>(std::ceil(T / dt - 1e-9));
  for (int k = 1; k <= n; ++k) g.push_back(std::min(T, k * dt));
  g.back() = T;
  return g;
}

std::vector<Eigen::VectorXd> volterra_solve(const VolterraKernel& kernel, const VolterraForcing& forcing,
                                            const std::vector<double>& grid)
{
  std::vector<Eigen::VectorXd> d;
  if (grid.empty()) return d;
  d.push_back(forcing(0));
  for (std::size_t n = 1; n < grid.size(); ++n) {
    Eigen::VectorXd rhs = forcing(static_cast<int>(n));
    for (std::size_t k = 0; k < n; ++k) {
      const double wl = k > 0 ? grid[k] - grid[k - 1] : 0.0;
      const double wr = grid[k + 1] - grid[k];
      rhs -= 0.5 * (wl + wr) * (kernel(static_cast<int>(n), static_cast<int>(k)) * d[k]);
    }
    const double h = grid[n] - grid[n - 1];
    const Eigen::MatrixXd Knn = kernel(static_cast<int>(n), static_cast<int>(n));
    const Eigen::MatrixXd step = Eigen::MatrixXd::Identity(Knn.rows(), Knn.cols()) + 0.5 * h * Knn;
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(step);
    if (!lu.isInvertible() || lu.rcond() < 1e-14)
      throw Error(ErrorKind::StepSingular, "Volterra step matrix is singular",
                  {{"step", n}, {"t", grid[n]}, {"rcond", lu.rcond()}});
    d.push_back(lu.solve(rhs));
  }
  return d;
}

std::vector<Eigen::VectorXd> eps_reconstruct(const std::vector<Eigen::VectorXd>& theta, const Eigen::VectorXd& eta0,
                                             double eps, const std::vector<double>& grid,
                                             std::vector<Eigen::VectorXd>* dt_xi)
{
  std::vector<Eigen::VectorXd> xi;
  if (grid.empty()) return xi;
  xi.push_back(eta0);
  for (std::size_t n = 1; n < grid.size(); ++n) {
    const double r = (grid[n] - grid[n - 1]) / eps;
    const double one_minus_E = -std::expm1(-r);
    const double E = 1.0 - one_minus_E;
    // weight of the linear part: 1 - (1 - E)/r
    const double lin = r > 1e-6 ? 1.0 - one_minus_E / r : r / 2.0 - r * r / 6.0;
    xi.push_back(E * xi[n - 1] + one_minus_E * theta[n - 1] + lin * (theta[n] - theta[n - 1]));
  }
  if (dt_xi) {
    dt_xi->clear();
    for (std::size_t n = 0; n < grid.size(); ++n) dt_xi->push_back((theta[n] - xi[n]) / eps);
  }
  return xi;
}

} // namespace contactline
