#pragma once

#include <string>
#include <vector>

#include "contactline/energy.hpp"
#include "contactline/initial_data.hpp"

namespace contactline {

/// Nonlinear forcing of the fixed-point map from an input surface path:
/// F3 = R(zeta0', eta') on the surface and What(dt eta(+-ell)) at the corners.
ForcingData nonlinear_forcing(const Discretization& disc, const SurfacePerturbation& eta, const ResponseFunction& rf);
/// Time derivative of the same pieces: R_z(zeta0', eta') dt eta' and What'(dt eta) dt^2 eta.
ForcingData nonlinear_dt_forcing(const Discretization& disc, const SurfacePerturbation& eta,
                                 const ResponseFunction& rf);

/// One element of the fixed-point space on a time grid.
struct Iterate {
  std::vector<double> t;
  std::vector<SurfacePerturbation> eta; ///< own surface path
  FlowState flow;                       ///< empty for the starting iterate
  std::vector<Vec> w, p;                ///< free velocity coefficients (u = M(coefficient geometry) w), pressure
  std::vector<std::vector<std::array<Jet2, 2>>> u; ///< physical velocity jets at the volume points
  std::vector<std::array<double, 2>> dt_corner;    ///< dt eta(-ell), dt eta(ell)
  double K = 0.0;                       ///< K(u, p, eta) (K(eta) for the starting iterate)
  bool has_flow() const { return !flow.t.empty(); }
};

/// Distance of the fixed-point metric: |u - v|_{L2 H1} + |p - q|_{L2 H0, zero mean}
/// + |eta - xi|_{Linf W^{5/2}_delta} + |[dt eta - dt xi]_ell|_{L2(0,T)}.
struct IterateDistance {
  double du = 0.0, dp = 0.0, deta = 0.0, dcorner = 0.0;
  double total() const { return du + dp + deta + dcorner; }
};
IterateDistance iterate_distance(const Discretization& disc, const Iterate& a, const Iterate& b);

struct FixedPointProblem {
  const Discretization* disc = nullptr;
  double eps = 0.1;
  std::vector<double> grid;
  InitialData init;
  ContractionConfig cc;
  bool parallel = true;
  /// Starting surface path: Taylor polynomial of the initial data, or its linear part eta0 + t dt eta(0).
  enum class Start { Taylor, Linear } start = Start::Taylor;
};

/// eta(t) = eta0 + t dt eta(0) + t^2/2 dt^2 eta(0) (or without the t^2 term), u = M(eta) w0 and p = p0 at every node.
Iterate starting_iterate(const FixedPointProblem& fp);

/// Solve the linear problem with coefficients and nonlinear forcing from the input iterate.
/// Throws BallExit when the input or the output leaves the ball K^{1/2} <= sigma_small, or when
/// the input surface makes the flattening map degenerate.
Iterate contraction_step(const FixedPointProblem& fp, const Iterate& in);

struct IterationRecord {
  int iter = 0;
  IterateDistance d;
  double ratio = 0.0; ///< d_k / d_{k-1} (0 for the first)
  double K = 0.0;
};

/// Discrete residuals of the nonlinear system at a trajectory whose coefficient geometry is
/// replaced by its own surface path. Velocity rows are grouped by node type (interior: momentum,
/// surface: dynamic condition, walls and bottom: slip, contact points: corner law) and measured
/// in the H1 norm of their Riesz representers; time aggregation is L2(0, T).
struct NonlinearResiduals {
  double momentum = 0.0, dynamic = 0.0, slip = 0.0, corner = 0.0;
  double divergence = 0.0;     ///< max |B0 w|
  double no_penetration = 0.0; ///< max |u . nu| at wall nodes
  double kinematic = 0.0;      ///< max |xi_n - xi_{n-1} - dt/2 (T w_n + T w_{n-1})|
  double initial = 0.0;        ///< max |xi_0 - eta0| at the surface nodes
  std::vector<double> per_node; ///< total velocity residual per node
  double max() const;
};
NonlinearResiduals nonlinear_residuals(const FixedPointProblem& fp, const Iterate& it);

struct FixedPointResult {
  Iterate solution;
  std::vector<IterationRecord> log;
  NonlinearResiduals residuals;
  bool converged = false;
  int iterations() const { return static_cast<int>(log.size()); }
};

/// Iterate until the distance between successive iterates drops below tol_fix.
/// Throws NoContraction (ratio history attached) after max_iter steps or when the
/// distances stop decreasing for three consecutive iterations.
FixedPointResult run_fixed_point(const FixedPointProblem& fp);

/// Converged run with its energy report.
struct NonlinearRun {
  double eps = 0.0;
  FixedPointResult fixed;
  EnergyReport energy;
  PathFunctionals eta_functionals;
};
NonlinearRun solve_nonlinear(const FixedPointProblem& fp);

struct SweepEntry {
  double eps = 0.0;
  bool ok = false;
  std::string error; ///< error JSON text when the run failed
  NonlinearRun run;
};
struct SweepReport {
  std::vector<SweepEntry> entries;
  std::vector<double> distances; ///< metric distance between consecutive successful entries
  bool monotone = false;         ///< distances strictly decreasing
  double sup_E_variation = 0.0;  ///< (max - min) / max of sup E over the schedule
  bool energy_degrades = false;  ///< sup E grows by more than 20% as eps decreases
  SweepEntry eps_zero;           ///< direct eps = 0 attempt
  double eps_zero_distance = -1.0; ///< distance from the smallest-eps solution (-1 if unavailable)
};

/// run_fixed_point for every eps of the schedule (initial data rebuilt per eps), plus eps = 0.
/// Per-eps failures are recorded, not thrown.
SweepReport epsilon_sweep(const Discretization& disc, const SurfacePerturbation& data, const std::vector<double>& grid,
                          const ContractionConfig& cc, bool with_eps_zero = true);

} // namespace contactline
