#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "contactline/equilibrium.hpp"
#include "contactline/fe_space.hpp"
#include "contactline/jet.hpp"
#include "contactline/surface_field.hpp"

namespace contactline {

/// Surface perturbation eta and its time derivatives on a shared representation.
struct SurfacePerturbation {
  SurfaceField eta, dt_eta, dt2_eta, dt3_eta;

  static SurfacePerturbation zero(double ell, int n_modes);
};

/// Smoothstep cutoff: 0 below `lower`, x2 above `upper`, quintic blend between.
struct CutoffSpec {
  double lower = 0.0, upper = 0.0;

  static CutoffSpec from_equilibrium(const EquilibriumState& eq);
  /// phi and its derivatives 0..3 at x2.
  std::array<double, 4> eval(double x2) const;
};

using Mat2 = Eigen::Matrix2d;

/// Flattening-map fields at one point. A = d1 psi and J = 1 + d2 psi are kept
/// as second-order jets, with their time derivatives.
struct GeometryPoint {
  Jet2 A{}, J{1.0}, At{}, Jt{};
  double eta_bar = 0.0, eta_bar_t = 0.0;
  double psi = 0.0; ///< vertical displacement of the map

  double K() const { return 1.0 / J.value(); }
  Jet2 K_jet() const { return reciprocal(J); }
  /// Time derivative of K as a jet: -Jt / J^2.
  Jet2 Kt_jet() const;
  /// Time derivative of AK as a jet.
  Jet2 AKt_jet() const;

  Mat2 calA() const;
  Mat2 dt_calA() const;
  /// M = K grad Phi = [[K, 0], [AK, 1]]
  Mat2 M() const;
  Mat2 Minv() const;
  Mat2 dt_M() const;
  /// R = dt M * M^{-1}
  Mat2 R() const;
  /// Spatial derivatives d_k M (k = 0, 1).
  std::array<Mat2, 2> grad_M() const;
  std::array<Mat2, 2> grad_dt_M() const;
};

/// Pointwise evaluator of the flattening map built from a perturbation.
class GeometryEvaluator {
public:
  GeometryEvaluator(const EquilibriumState& eq, const SurfacePerturbation& pert);
  GeometryEvaluator(const EquilibriumState& eq, const SurfacePerturbation& pert, CutoffSpec cutoff);

  GeometryPoint at(double x1, double x2) const;
  /// eta_bar(x1, x2) = E eta(x1, x2 - zeta0(x1)) as a jet of the physical coordinates.
  Jet3 extend(const SurfaceField& f, double x1, double x2) const;

  const EquilibriumState& equilibrium() const { return *eq_; }
  const SurfacePerturbation& perturbation() const { return *pert_; }
  const CutoffSpec& cutoff() const { return cutoff_; }

private:
  const EquilibriumState* eq_;
  const SurfacePerturbation* pert_;
  CutoffSpec cutoff_;
};

/// Geometry snapshot on every quadrature point of an FE space.
struct GeometryMaps {
  std::vector<GeometryPoint> vol, surf, wall;
  double min_J = 1.0;
  double max_J = 1.0;
  double tail_bound = 0.0;
  bool trivial = false; ///< eta and dt eta both vanish
};

/// Evaluate the map on all quadrature points (OpenMP when `parallel`); throws
/// DegenerateMap if min J <= j_floor.
GeometryMaps build_geometry(const SurfacePerturbation& pert, const EquilibriumState& eq, const FESpace& V,
                            bool parallel = true);

/// Serial reference of build_geometry.
GeometryMaps build_geometry_serial(const SurfacePerturbation& pert, const EquilibriumState& eq, const FESpace& V);

/// R at every volume point.
std::vector<Mat2> build_R(const GeometryMaps& maps);

/// Surface normals (-zeta0', 1) and (-zeta0' - eta', 1).
std::array<double, 2> normal0(const EquilibriumState& eq, double x1);
std::array<double, 2> normal(const EquilibriumState& eq, const SurfaceField& eta, double x1);

/// Identity residuals (maxima over sample points).
struct IdentityReport {
  double piola_jet = 0.0;       ///< d_j (J calA_ij) from the jets
  std::vector<double> piola_fd; ///< finite-difference residuals for each step in `fd_steps`
  std::vector<double> fd_steps;
  double normal_identity = 0.0; ///< |J calA N0 - N| on the surface
  double normal_transport = 0.0;///< |R^T N + dt N| on the surface
  double wall_tangency = 0.0;   ///< |(R u).nu| on the walls and bottom, u.nu = 0
  double min_J = 0.0;
};

IdentityReport identity_suite(const EquilibriumState& eq, const SurfacePerturbation& pert, const FESpace& V);

} // namespace contactline
