#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace contactline {

/// Kernel K(t_n, t_k) for k <= n and forcing F(t_n) on a time grid.
using VolterraKernel = std::function<Eigen::MatrixXd(int n, int k)>;
using VolterraForcing = std::function<Eigen::VectorXd(int n)>;

/// Solves d(t) + int_0^t K(t,s) d(s) ds = F(t) at the grid nodes with the
/// trapezoidal rule and an implicit solve with (I + dt_n/2 K(t_n, t_n)) per step.
/// Throws StepSingular when that matrix is singular.
std::vector<Eigen::VectorXd> volterra_solve(const VolterraKernel& kernel, const VolterraForcing& forcing,
                                            const std::vector<double>& grid);

/// Solution of xi + eps dt xi = theta with xi(0) = eta0, exact for theta piecewise
/// linear between nodes. Returns xi at the nodes; dt_xi (if non-null) = (theta - xi)/eps.
std::vector<Eigen::VectorXd> eps_reconstruct(const std::vector<Eigen::VectorXd>& theta, const Eigen::VectorXd& eta0,
                                             double eps, const std::vector<double>& grid,
                                             std::vector<Eigen::VectorXd>* dt_xi = nullptr);

/// Uniform grid 0, dt, ..., T (last step shortened if dt does not divide T).
std::vector<double> uniform_grid(double T, double dt);

} // namespace contactline
