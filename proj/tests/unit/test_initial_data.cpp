#include <doctest.h>

#include <cmath>

#include "contactline/divfree_basis.hpp"
#include "contactline/error.hpp"
#include "contactline/initial_data.hpp"

using namespace contactline;

namespace {

EquilibriumState flat(double c3)
{
  PhysicalConfig cfg;
  cfg.gamma_jump = 0.0;
  cfg.c3 = c3;
  return solve_equilibrium(cfg, 16);
}

const EquilibriumState& curved()
{
  static const EquilibriumState eq = solve_equilibrium(PhysicalConfig{}, 32);
  return eq;
}

Discretization disc(const EquilibriumState& eq, double h)
{
  MeshParams mp;
  mp.h = h;
  mp.n_modes = 64;
  return build_discretization(eq, mp);
}

// amp (u^2 - 1/3): slope 2 amp at x = 1, -2 amp at x = -1
SurfaceField poly(double amp) { return SurfaceField::fit(1.0, 64, profile_sampler("poly", 1.0, amp)); }

double mean(const SurfaceField& f)
{
  double s = 0.0;
  const int n = 4000;
  for (int k = 0; k < n; ++k) s += f(-1.0 + (k + 0.5) * 2.0 / n) * 2.0 / n;
  return s / 2.0;
}

} // namespace

TEST_SUITE("initial_data") {

TEST_CASE("zero data give zero corner values and a zero bundle")
{
  const auto eq = curved();
  const RepairedData r = repair_compatibility(SurfaceField(1.0, 64), response_function(eq.cfg), eq);
  CHECK(r.dt_eta_corner[0] == 0.0);
  CHECK(r.dt_eta_corner[1] == 0.0);
  CHECK(r.data.dt_eta.is_zero());
  CHECK(r.data.dt2_eta.is_zero());
  const Discretization d = disc(eq, 0.4);
  const InitialData id = construct_initial_data(d, r.data, 0.1);
  CHECK(id.w0.cwiseAbs().maxCoeff() == 0.0);
  CHECK(id.p0.cwiseAbs().maxCoeff() == 0.0);
  CHECK(id.dw0.cwiseAbs().maxCoeff() == 0.0);
  CHECK(id.dp0.cwiseAbs().maxCoeff() == 0.0);
  CHECK(id.E0 == 0.0);
}

TEST_CASE("closed-form corner values in the linear flat case")
{
  const auto eq = flat(0.0);
  const RepairedData r = repair_compatibility(poly(-0.05), response_function(eq.cfg), eq);
  // kappa z = -sigma (eta0' + R(0, eta0')) at x = ell with eta0' = -0.1
  const double expect = 0.1 - curvature_remainder_closed(0.0, -0.1);
  CHECK(r.dt_eta_corner[1] == doctest::Approx(expect).epsilon(1e-12));
  CHECK(r.dt_eta_corner[1] == doctest::Approx(0.1 / std::sqrt(1.01)).epsilon(1e-12));
  CHECK(r.dt_eta_corner[0] == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("nonlinear response law and both compatibility residuals")
{
  for (double c3 : {0.0, 0.5, 2.0}) {
    const auto eq = flat(c3);
    const ResponseFunction rf = response_function(eq.cfg);
    const RepairedData r = repair_compatibility(poly(-0.2), rf, eq);
    const double rhs = 0.4 - curvature_remainder_closed(0.0, -0.4);
    CHECK(rf.W(r.dt_eta_corner[1]) == doctest::Approx(rhs).epsilon(1e-12));
    const CompatibilityResiduals res = compatibility_residuals(eq, rf, r.data);
    CHECK(res.max_abs() < 1e-10);
  }
  const ResponseFunction rf = response_function(curved().cfg);
  const RepairedData r = repair_compatibility(poly(0.03), rf, curved());
  CHECK(compatibility_residuals(curved(), rf, r.data).max_abs() < 1e-10);
  CHECK(r.dt2_eta_corner[1] != 0.0);
}

TEST_CASE("repair keeps endpoint slopes, zero mean and the interior away from the corners")
{
  const auto& eq = curved();
  const auto interior = profile_sampler("cos2", 1.0, 0.02);
  const RepairedData r = repair_compatibility(poly(0.03), response_function(eq.cfg), eq, interior);
  CHECK(std::abs(mean(r.data.dt_eta)) < 1e-10);
  CHECK(std::abs(mean(r.data.dt2_eta)) < 1e-10);
  for (double x : {-1.0, 1.0}) CHECK(r.data.dt_eta.eval(x)[1] == doctest::Approx(interior(x)[1]).epsilon(1e-9));
  CHECK(r.data.dt_eta(1.0) == doctest::Approx(r.dt_eta_corner[1]).epsilon(1e-12));
  // outside the blend zone only the mean-correcting bump remains: difference is a multiple of (1 - x^2)^3
  // up to the 64-mode representation error of the blend
  const double c = (interior(0.0)[0] - r.data.dt_eta(0.0));
  for (double x : {-0.7, -0.3, 0.4, 0.6}) {
    const double b = std::pow(1.0 - x * x, 3);
    CHECK(std::abs(interior(x)[0] - r.data.dt_eta(x) - c * b) < 2e-5);
  }
}

TEST_CASE("incompatible data are rejected with residuals attached")
{
  const auto& eq = curved();
  const Discretization d = disc(eq, 0.4);
  SurfacePerturbation bad = SurfacePerturbation::zero(1.0, 64);
  bad.eta = poly(0.03);
  try {
    construct_initial_data(d, bad, 0.1);
    FAIL("expected IncompatibleData");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IncompatibleData);
    CHECK(e.details().contains("first"));
    CHECK(std::abs(e.details()["first"][1].get<double>()) > 1e-3);
  }
}

TEST_CASE("steady Stokes data carry the prescribed flux")
{
  const auto& eq = curved();
  const Discretization d = disc(eq, 0.2);
  const SurfacePerturbation data = recipe_data(eq, "poly", 0.03, 64);
  const InitialData id = construct_initial_data(d, data, 0.1);
  // nodal flux against the exact divergence: the slack is small and shrinks with h
  CHECK(std::abs(id.flux_slack) < 1e-3 * id.dt_xi0.cwiseAbs().maxCoeff());
  CHECK((d.ops.T * id.w0 - id.dt_xi0).cwiseAbs().maxCoeff() == doctest::Approx(std::abs(id.flux_slack)).epsilon(1e-6));
  CHECK((d.B0 * id.w0).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(std::abs(pressure_mean(d.V, id.p0)) < 1e-12);
  CHECK(id.w0.norm() > 0.0);
  CHECK(std::isfinite(id.dt2_gap));
  CHECK(id.E0 > 0.0);
  MESSAGE("flux slack " << id.flux_slack << " dt2 gap " << id.dt2_gap << " dt p mean " << id.dt_pressure_mean);
}

TEST_CASE("Stokes constant stays bounded under refinement")
{
  const auto& eq = curved();
  const SurfacePerturbation data = recipe_data(eq, "poly", 0.03, 64);
  std::vector<double> c, slack;
  for (double h : {0.4, 0.2, 0.1}) {
    const InitialData id = construct_initial_data(disc(eq, h), data, 0.1);
    c.push_back(id.stokes_constant);
    slack.push_back(std::abs(id.flux_slack));
  }
  MESSAGE("flux slack " << slack[0] << " " << slack[1] << " " << slack[2]);
  CHECK(slack[2] < slack[1]);
  MESSAGE("Stokes constants " << c[0] << " " << c[1] << " " << c[2]);
  for (double v : c) CHECK(std::isfinite(v));
  CHECK(c[2] / c[1] < 1.5);
}

TEST_CASE("B-form solve recovers a divergence-free field")
{
  const auto& eq = curved();
  const Discretization d = disc(eq, 0.4);
  const GeometryMaps m0 = build_geometry(SurfacePerturbation::zero(1.0, 64), eq, d.V);
  const SpMat A0 = assemble_velocity(d.V, m0, eq.cfg, false).A;
  const DivFreeBasis b = build_divfree_basis(d.B0, A0, 5);
  const Vec z = b.W.col(0) + 0.5 * b.W.col(4);
  const Vec rhs = A0 * z + SpMat(d.ops.T.transpose()) * (d.ops.S * (d.ops.T * z));
  Vec w, p;
  b_form_solve(d, A0, rhs, w, p);
  CHECK((w - z).norm() < 1e-10);
  CHECK(p.norm() < 1e-8);
}

}
