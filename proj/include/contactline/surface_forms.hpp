#pragma once

#include <functional>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "contactline/fe_space.hpp"
#include "contactline/surface_field.hpp"

namespace contactline {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

/// Matrices of the 1-D surface space (P2 on the surface row of the mesh).
struct SurfaceOps {
  SpMat S;     ///< (phi, psi)_{1,Sigma} = int g phi psi + sigma phi' psi' / (1 + zeta0'^2)^{3/2}
  SpMat mass;  ///< plain L2 mass
  SpMat stiff; ///< int phi' psi' (unweighted)
  SpMat Kc;    ///< corner bracket [phi, psi] = kappa (phi psi)(l) + kappa (phi psi)(-l)
  SpMat Bb;    ///< b(phi, psi) = psi^T Bb phi, endpoint flux of phi tested against psi
  SpMat T;     ///< free velocity dofs -> nodal normal flux w . (-zeta0', 1)
  Vec mean_weights; ///< int N_k dx1
  double sigma = 1.0, g = 1.0, kappa = 1.0;
  int n_s = 0;
};

SurfaceOps build_surface_ops(const FESpace& V);

/// P2 surface vector of point values f(x_k) at the surface nodes.
Vec interpolate_surface(const FESpace& V, const std::function<double(double)>& f);

/// Value and derivative of a surface P2 vector at each surface quadrature point.
void surface_values(const FESpace& V, const Vec& phi, std::vector<double>& val, std::vector<double>& der);

/// Convert a P2 surface vector into a SurfaceField: clamped cubic spline
/// through the nodes (end slopes from the P2 elements), then fitted with n_modes
/// and no endpoint third derivative.
SurfaceField surface_field_from_nodal(const FESpace& V, const Vec& phi, int n_modes);

/// Mean over (-ell, ell) of a P2 surface vector.
double surface_mean(const SurfaceOps& ops, const Vec& phi, double ell);

/// Minimum eigenvalue of the symmetric part of eps S + Kc - eps Bb (surface coercivity margin).
double corner_coercivity_margin(const SurfaceOps& ops, double eps);

} // namespace contactline
