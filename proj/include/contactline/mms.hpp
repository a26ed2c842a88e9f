#pragma once

#include <vector>

#include "contactline/linear_solver.hpp"

namespace contactline {

/// Manufactured solution of the linear eps problem. The reference velocity is
/// w* = (d2 psi, -d1 psi) with psi vanishing on the walls and the bottom, so
/// u* = M w* is div_A-free with u*.nu = 0; xi* = xi0 + t (w*.N0) on the surface
/// satisfies the kinematic equation exactly, and eta = t phi moves the geometry.
struct ManufacturedCase {
  double eps = 0.1;
  double T = 0.1;
  double dt = 0.05;
  double psi_amp = 0.2;
  double p_amp = 0.5;
  double xi_amp = 0.02;
  double eta_amp = 0.02; ///< amplitude of the cosine profile phi
  double F3_amp = 0.05;
};

struct ManufacturedErrors {
  double h = 0.0;
  int n_free = 0;
  double velocity_h1 = 0.0; ///< |u - u*|_{H^1} at the final time
  double pressure_l2 = 0.0;
  double surface_l2 = 0.0;  ///< |xi - xi*|_{L^2} at the final time
  double seconds = 0.0;
};

struct ManufacturedStudy {
  std::vector<ManufacturedErrors> runs;
  std::vector<double> velocity_order, pressure_order, surface_order;
};

/// One solve on the mesh of width h.
ManufacturedErrors manufactured_errors(const EquilibriumState& eq, const MeshParams& mp, const ManufacturedCase& mc);

/// Solves on each h and computes observed orders log(e_k/e_{k+1}) / log(h_k/h_{k+1}).
ManufacturedStudy manufactured_study(const EquilibriumState& eq, MeshParams mp, const std::vector<double>& hs,
                                     const ManufacturedCase& mc);

} // namespace contactline
