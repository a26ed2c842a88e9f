#pragma once

#include <array>

#include "contactline/linear_solver.hpp"
#include "contactline/norms.hpp"
#include "contactline/remainder.hpp"

namespace contactline {

ResponseFunction response_function(const PhysicalConfig& cfg);

/// Corner residuals of the two compatibility conditions at (-ell, +ell):
///   kappa z + kappa What(z) +- sigma (eta0'/c + R(zeta0', eta0')),
///   kappa (1 + What'(z)) z2 +- sigma (z'/c + d_z R(zeta0', eta0') z'),
/// with z = dt eta(0), z2 = dt^2 eta(0) and c = (1 + zeta0'^2)^{3/2}.
struct CompatibilityResiduals {
  std::array<double, 2> first{}, second{};
  double max_abs() const;
};

CompatibilityResiduals compatibility_residuals(const EquilibriumState& eq, const ResponseFunction& rf,
                                               const SurfacePerturbation& data);

/// Corner values that satisfy the compatibility conditions, blended into given
/// interior profiles. The blend weight is a quintic smoothstep supported within
/// ell/4 of each corner, so endpoint slopes of the interior profile are kept; a
/// (1 - (x/ell)^2)^3 bump then restores zero mean.
struct RepairedData {
  std::array<double, 2> dt_eta_corner{};  ///< dt eta(0) at -ell, +ell
  std::array<double, 2> dt2_eta_corner{}; ///< dt^2 eta(0) at -ell, +ell
  SurfacePerturbation data;               ///< eta0, dt eta(0), dt^2 eta(0) at t = 0
};

RepairedData repair_compatibility(const SurfaceField& eta0, const ResponseFunction& rf, const EquilibriumState& eq,
                                  const SurfaceField::Sampler& dt_eta_interior = {},
                                  const SurfaceField::Sampler& dt2_eta_interior = {});

/// Initial bundle of the eps problem. Velocities are free coefficients w with u = M w.
struct InitialData {
  SurfacePerturbation data;
  Vec w0, p0;   ///< steady Stokes solve with u0.N = dt eta(0), zero tangential stress
  Vec dw0, dp0; ///< D_t u(0) = M dw0 from the B-form solve, dt p(0) its multiplier
  Vec xi0, dt_xi0, dt2_xi0; ///< surface nodal values of the three surface data
  CompatibilityResiduals compat;
  double flux_slack = 0.0;       ///< constant shift needed to reconcile T w0 with B0 w0 = 0
  double dt2_gap = 0.0;          ///< L2 gap between T dw0 and dt^2 eta(0)
  double stokes_constant = 0.0;  ///< |u0|_{W^2_delta} / |dt eta(0)|_{3/2}
  double dt_pressure_mean = 0.0;
  double E0 = 0.0;               ///< initial data functional
};

/// Throws IncompatibleData (residuals attached) when the corner conditions fail by more than `tol`.
InitialData construct_initial_data(const Discretization& disc, const SurfacePerturbation& data, double eps,
                                   double tol = 1e-8);

/// Divergence-free solve with B(v, w) = ((v, w)) + (v.N, w.N)_{1,Sigma}: returns (w, multiplier).
void b_form_solve(const Discretization& disc, const SpMat& A0, const Vec& rhs, Vec& w, Vec& p);

/// |eta0|^2_{W^{5/2}_delta} + |dt eta(0)|^2_{3/2} + sum_j |dt^j eta(0)|^2_1.
double initial_energy(const WeightedNormEvaluator& norms, const SurfacePerturbation& data);

/// The interior recipe: eta0 = amplitude * profile, zero interior time derivatives, repaired at the corners.
SurfacePerturbation recipe_data(const EquilibriumState& eq, const std::string& profile, double amplitude, int n_modes);

/// Index of a `modeK` profile name (K = 1..3), -1 for analytic profiles.
int mode_index(const std::string& profile);

/// Well-prepared data from the index-th slowest decaying eigenmode v (rate lambda) of the
/// eps = 0 surface evolution on the equilibrium: eta0 = v scaled to max |v| = amplitude,
/// dt eta(0) = lambda eta0, dt^2 eta(0) = lambda^2 eta0, repaired at the corners.
SurfacePerturbation mode_data(const Discretization& disc, int index, double amplitude);

/// Either recipe by name: `mode1`..`mode3` or an analytic profile.
SurfacePerturbation recipe_data(const Discretization& disc, const std::string& profile, double amplitude);

} // namespace contactline
