#pragma once

#include <string>
#include <vector>

#include "contactline/linear_solver.hpp"
#include "contactline/norms.hpp"

namespace contactline {

/// Surface fields of a trajectory's own surface (xi and its time-derivative slots) per node.
/// Node 0 uses `eta0` when given, so the path starts exactly at the initial surface.
std::vector<SurfacePerturbation> own_surface_path(const Discretization& disc, const FlowState& st,
                                                  const SurfaceField* eta0 = nullptr);

/// Names of the energy and dissipation terms, in storage order.
const std::vector<std::string>& energy_term_names();
const std::vector<std::string>& dissipation_term_names();

/// Functionals at one time node. Norms are squared; p enters through its zero-mean part where
/// the energy asks for it. The path functionals (frak_*) of the coefficient geometry eta are
/// running values on [0, t]: sup in time for the energy part, trapezoidal integral for the
/// dissipation part.
struct EnergySample {
  double t = 0.0;
  double E = 0.0, D = 0.0;
  double script_E = 0.0; ///< sum_{j <= 2} |dt^j xi|^2_{1,Sigma} / 2
  double script_D = 0.0; ///< sum_{j <= 2} mu/2 |D_A dt^j u|^2_J + beta |dt^j u . tau|^2_{Sigma_s,J} + [dt^j u . N]^2
  double frak_E = 0.0, frak_D = 0.0, frak_K = 0.0;
  double min_J = 1.0;
  double div_residual = 0.0, kinematic_residual = 0.0;
  std::vector<double> E_terms, D_terms;
};

struct EnergyReport {
  std::vector<EnergySample> samples;
  std::vector<std::string> absent; ///< derivative slots the state does not carry (terms omitted)
  std::vector<std::string> differenced; ///< slots obtained by three-point time differences
  double E0 = 0.0;
  double sup_E = 0.0, int_D = 0.0;
  double frak_K_solution = 0.0; ///< K(u, p, xi): sum of per-term sups of E plus int D
  double bound_constant = 0.0;  ///< (sup E + int D) / E0 (0 when E0 = 0)
  double diffeo_constant = 0.0; ///< max over nodes of (1 - min J) / |eta|_{W^{5/2}_delta}
};

/// Energy, dissipation and path functionals along a trajectory. `surface` is the solution's own
/// surface path (see own_surface_path); the coefficient geometry is `st.path`.
EnergyReport uniform_energy_monitor(const Discretization& disc, const FlowState& st,
                                    const std::vector<SurfacePerturbation>& surface, double E0);

/// Running path functionals E(eta), D(eta), K(eta) of a surface path on a grid (last-node values).
struct PathFunctionals {
  double E = 0.0, D = 0.0;
  double K() const { return E + D; }
};
PathFunctionals path_functionals(const WeightedNormEvaluator& norms, const std::vector<SurfacePerturbation>& path,
                                 const std::vector<double>& grid, double kappa);

} // namespace contactline
