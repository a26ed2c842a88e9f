#pragma once

#include <functional>
#include <vector>

#include "contactline/assembly.hpp"
#include "contactline/config.hpp"
#include "contactline/equilibrium.hpp"
#include "contactline/geometry.hpp"
#include "contactline/surface_forms.hpp"

namespace contactline {

struct DivFreeBasis;

/// Mesh, spaces and the geometry-independent matrices of one run.
struct Discretization {
  FESpace V;
  SurfaceOps ops;
  SpMat B0;
  int n_modes = 128;

  const EquilibriumState& eq() const { return V.mesh.eq; }
  const PhysicalConfig& cfg() const { return V.mesh.eq.cfg; }
  double ell() const { return V.mesh.eq.cfg.ell; }
};

Discretization build_discretization(const EquilibriumState& eq, const MeshParams& mp);

/// Linear epsilon problem on a time grid. The coefficient geometry comes from
/// a given surface path; forcing pieces are evaluated per node.
struct LinearProblem {
  const Discretization* disc = nullptr;
  double eps = 0.1;
  std::vector<double> grid;
  /// Surface perturbation and its time derivatives at node n (null: eta = 0).
  std::function<SurfacePerturbation(int)> geometry;
  /// Forcing pieces at node n (null: zero).
  std::function<ForcingData(int, const GeometryMaps&)> forcing;
  /// Time derivative of the forcing pieces (null: central differences of the assembled loads).
  std::function<ForcingData(int, const GeometryMaps&)> dt_forcing;
  Vec xi0; ///< surface nodal values of xi(0) (empty: zero)
  bool with_dt = true;
  bool parallel = true;
  /// Reject the run when the surface evolution operator at t = 0 has a growing mode.
  bool check_stability = true;
};

/// Discrete trajectory. Velocity is stored as free coefficients w with u = M w;
/// dw holds the coefficients of D_t u = M dw.
struct FlowState {
  std::vector<double> t;
  std::vector<SurfacePerturbation> path; ///< coefficient geometry per node
  std::vector<Vec> w, p, xi, dt_xi;
  std::vector<Vec> dw, dp, dt2_xi, dt3_xi;
  std::vector<Vec> load; ///< assembled right-hand side F(v) per node
  bool has_dt = false;
  bool has_dt3 = false;
  std::vector<double> min_J;
  std::vector<double> div_residual;       ///< max |B0 w|
  std::vector<double> kinematic_residual; ///< L2 gap between dt xi and u.N on the surface
  std::vector<double> pressure_mean;
  std::vector<double> dissipation; ///< w'A w + eps |Tw|_S^2 + [Tw]^2 - eps b(Tw, Tw) per node
  std::vector<double> power;       ///< F(w) per node
  double step_margin = 0.0; ///< smallest eigenvalue of the symmetric surface block
  double max_growth = 0.0;  ///< largest real part of the evolution spectrum at t = 0 (relative)
  int nodes() const { return static_cast<int>(t.size()); }
};

/// Trapezoidal time stepping of the saddle-point system
///   (A_n + T'((eps + dt/2) S + Kc - eps Bb) T) w_n - B0' p_n = F_n - T' S (xi_{n-1} + dt/2 T w_{n-1}),
///   B0 w_n = 0,
/// with xi_n = xi_{n-1} + dt/2 (T w_{n-1} + T w_n); node 0 uses xi_0 directly.
/// When requested, the time-derivative slots solve the differentiated system
/// with the same matrix and right side dF - Adot w - T' S T w.
FlowState solve_linear_epsilon(const LinearProblem& prob);

/// Galerkin matrices in the coordinates of a divergence-free basis W:
/// Gram(t) = W'(A + T'(eps S + Kc - eps Bb) T) W, memory C = W' T' S T W and
/// load(t) = W'(F(t) - T' S xi0).
struct GalerkinSystem {
  std::vector<Eigen::MatrixXd> gram;
  Eigen::MatrixXd memory;
  std::vector<Eigen::VectorXd> load;
  std::vector<double> min_sym_eig; ///< smallest eigenvalue of the symmetric part of gram
};

/// The symmetric part of the Gram matrix is not definite in general (the corner
/// flux term is not controlled by the trace norm); its smallest eigenvalue is
/// reported. Throws NotPositiveDefinite when a Gram matrix is singular.
GalerkinSystem assemble_galerkin_system(const LinearProblem& prob, const DivFreeBasis& basis);

/// Truncated-basis route: coefficients d from the Volterra equation
/// d + int Gram^{-1} C d = Gram^{-1} load, xi from the trapezoidal kinematic
/// integral and pressure from the momentum residual.
FlowState solve_linear_galerkin(const LinearProblem& prob, const DivFreeBasis& basis);

/// Least-squares pressure with B0' p = momentum residual of (w, xi) at node n.
Vec recover_pressure(const Discretization& disc, const SpMat& step_matrix, const Vec& w, const Vec& rhs);

/// Per-step energy balance of the trapezoidal scheme:
/// (E_n - E_{n-1})/dt + (D_n + D_{n-1})/2 - (P_n + P_{n-1})/2 with E = xi'S xi/2,
/// D = w'A w + eps |Tw|_S^2 + [Tw]^2 - eps b(Tw, Tw), P = F(w).
struct EnergyBalance {
  std::vector<double> energy, dissipation, power, imbalance;
  double max_imbalance = 0.0;
};
EnergyBalance energy_balance(const FlowState& st, const SurfaceOps& ops);

/// Pointwise forcing terms of the differentiated strong system at the volume,
/// surface and wall quadrature points:
///   G1 = R' grad_A p + div_A(D_A(R u) + D_{dt A} u - R D_A u),
///   G4 = mu D_A(R u) N - (pI - mu D_A u) dt N + mu D_{dt A} u N + (L(theta) - sigma d1 F3) dt N,
///   G5 = (mu D_A(R u) nu + mu D_{dt A} u nu + beta R u) . tau.
struct DtForcings {
  std::vector<Eigen::Vector2d> G1, G4;
  std::vector<double> G5;
};
/// `theta_minus_F3` holds L(xi + eps dt xi) - sigma d1 F3 at the surface points (empty: zero).
DtForcings assemble_dt_forcings(const Discretization& disc, const GeometryMaps& maps, const Vec& w, const Vec& p,
                                const std::vector<double>& theta_minus_F3);

/// Surface evolution map xi -> T w of the equilibrium geometry with zero load:
/// w solves the stationary system with right side -T' S xi.
Eigen::MatrixXd surface_evolution_matrix(const Discretization& disc, double eps);

/// Second-order three-point time derivative of a nodal sequence (non-uniform grids allowed).
std::vector<Vec> time_derivative(const std::vector<Vec>& f, const std::vector<double>& grid);

/// Scalar zero-mean test: the mean of p over the domain (volume weighted).
double pressure_mean(const FESpace& V, const Vec& p);

} // namespace contactline
