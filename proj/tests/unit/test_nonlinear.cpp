#include <doctest.h>

#include <cmath>
#include <string>

#include "contactline/divfree_basis.hpp"
#include "contactline/error.hpp"
#include "contactline/nonlinear.hpp"

using namespace contactline;

namespace {

const EquilibriumState& curved()
{
  static const EquilibriumState eq = solve_equilibrium(PhysicalConfig{}, 32);
  return eq;
}

const Discretization& coarse()
{
  static const Discretization d = [] {
    MeshParams mp;
    mp.h = 0.4;
    mp.n_modes = 64;
    return build_discretization(curved(), mp);
  }();
  return d;
}

std::vector<double> grid(double T, double dt)
{
  std::vector<double> g;
  const int n = static_cast<int>(std::lround(T / dt));
  for (int k = 0; k <= n; ++k) g.push_back(k * dt);
  return g;
}

FixedPointProblem problem(double amp, double T = 0.2, double dt = 0.02, double eps = 0.1,
                          const std::string& profile = "mode1")
{
  FixedPointProblem fp;
  fp.disc = &coarse();
  fp.eps = eps;
  fp.grid = grid(T, dt);
  fp.init = construct_initial_data(coarse(), recipe_data(coarse(), profile, amp), eps);
  return fp;
}

// geometric mean of the distance ratios from iteration 2 on
double mean_ratio(const FixedPointResult& r)
{
  const auto& log = r.log;
  REQUIRE(log.size() >= 3);
  return std::pow(log.back().d.total() / log[0].d.total(), 1.0 / (log.size() - 1));
}

} // namespace

TEST_SUITE("energy") {

TEST_CASE("zero state gives zero functionals")
{
  const Discretization& d = coarse();
  const FixedPointProblem fp = problem(0.0, 0.04, 0.02);
  const Iterate it = contraction_step(fp, starting_iterate(fp));
  const EnergyReport rep = uniform_energy_monitor(d, it.flow, it.eta, 0.0);
  REQUIRE(rep.samples.size() == 3);
  for (const auto& s : rep.samples) {
    CHECK(s.E == 0.0);
    CHECK(s.D == 0.0);
    CHECK(s.script_E == 0.0);
    CHECK(s.script_D == 0.0);
    CHECK(s.frak_K == 0.0);
  }
  CHECK(rep.frak_K_solution == 0.0);
  CHECK(rep.bound_constant == 0.0);
}

TEST_CASE("script D of a divergence-free mode matches the assembled form")
{
  const Discretization& d = coarse();
  const auto zero = SurfacePerturbation::zero(d.ell(), d.n_modes);
  const GeometryMaps m0 = build_geometry(zero, d.eq(), d.V);
  const SpMat A0 = assemble_velocity(d.V, m0, d.cfg(), false).A;
  const DivFreeBasis b = build_divfree_basis(d.B0, A0, 3);
  for (int k = 0; k < 3; ++k) {
    const Vec w = b.W.col(k);
    const Vec tw = d.ops.T * w;
    FlowState st;
    for (int n = 0; n < 3; ++n) {
      st.t.push_back(0.1 * n);
      st.path.push_back(zero);
      st.w.push_back(w);
      st.p.push_back(Vec::Zero(d.B0.rows()));
      st.xi.push_back(Vec::Zero(tw.size()));
      st.dt_xi.push_back(tw);
      st.min_J.push_back(1.0);
      st.div_residual.push_back(0.0);
      st.kinematic_residual.push_back(0.0);
    }
    const EnergyReport rep = uniform_energy_monitor(d, st, std::vector<SurfacePerturbation>(3, zero), 0.0);
    const double kappa = d.cfg().kappa;
    const double oracle = w.dot(A0 * w) + kappa * (tw(0) * tw(0) + tw(tw.size() - 1) * tw(tw.size() - 1));
    CHECK(rep.samples[1].script_D == doctest::Approx(oracle).epsilon(1e-10));
    CHECK(rep.absent.size() >= 3);
  }
}

}

TEST_SUITE("nonlinear") {

TEST_CASE("zero data converge in one iteration to the zero state")
{
  const FixedPointResult r = run_fixed_point(problem(0.0));
  CHECK(r.converged);
  CHECK(r.iterations() == 1);
  CHECK(r.log[0].d.total() == 0.0);
  for (const Vec& w : r.solution.w) CHECK(w.cwiseAbs().maxCoeff() == 0.0);
  for (const Vec& p : r.solution.p) CHECK(p.cwiseAbs().maxCoeff() == 0.0);
  CHECK(r.residuals.max() == 0.0);
}

TEST_CASE("small data contract and the limit solves the nonlinear system")
{
  const FixedPointProblem fp = problem(0.05);
  const FixedPointResult r = run_fixed_point(fp);
  CHECK(r.converged);
  for (std::size_t k = 1; k < r.log.size(); ++k) CHECK(r.log[k].ratio < 0.9);
  CHECK(r.log.back().d.total() < fp.cc.tol_fix);
  CHECK(std::sqrt(r.solution.K) <= fp.cc.sigma_small);
  const NonlinearResiduals& res = r.residuals;
  MESSAGE("residuals " << res.momentum << " " << res.dynamic << " " << res.slip << " " << res.corner << " "
                       << res.divergence << " " << res.no_penetration << " " << res.kinematic);
  CHECK(res.max() < 10 * fp.cc.tol_fix);
}

TEST_CASE("contraction improves when the horizon is halved")
{
  const double r1 = mean_ratio(run_fixed_point(problem(0.1, 0.2)));
  const double r2 = mean_ratio(run_fixed_point(problem(0.1, 0.1)));
  const double r3 = mean_ratio(run_fixed_point(problem(0.1, 0.05)));
  MESSAGE("mean ratios " << r1 << " " << r2 << " " << r3);
  CHECK(r2 < r1);
  CHECK(r3 < r2);
}

TEST_CASE("metric is positive, symmetric and satisfies the triangle inequality")
{
  const Discretization& d = coarse();
  const FixedPointProblem fp = problem(0.05, 0.1);
  const Iterate a = starting_iterate(fp);
  const Iterate b = contraction_step(fp, a);
  const Iterate c = contraction_step(fp, b);
  const auto dist = [&](const Iterate& x, const Iterate& y) { return iterate_distance(d, x, y).total(); };
  CHECK(dist(a, a) == 0.0);
  CHECK(dist(b, b) == 0.0);
  CHECK(dist(a, b) > 0.0);
  CHECK(dist(a, b) == doctest::Approx(dist(b, a)).epsilon(1e-14));
  CHECK(dist(a, c) <= dist(a, b) + dist(b, c) + 1e-15);
  CHECK(dist(b, c) <= dist(b, a) + dist(a, c) + 1e-15);
}

TEST_CASE("two starting iterates reach the same fixed point")
{
  FixedPointProblem fp = problem(0.05, 0.1);
  const FixedPointResult a = run_fixed_point(fp);
  fp.start = FixedPointProblem::Start::Linear;
  const FixedPointResult b = run_fixed_point(fp);
  CHECK(iterate_distance(*fp.disc, a.solution, b.solution).total() < 2 * fp.cc.tol_fix);
}

TEST_CASE("data outside the smallness regime exit the ball")
{
  FixedPointProblem fp = problem(0.14);
  try {
    run_fixed_point(fp);
    FAIL("expected BallExit");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BallExit);
    CHECK(e.details().contains("E0_max"));
  }
  // without the energy cap the converging iterates still leave the default ball
  fp.cc.E0_max = 1e9;
  try {
    run_fixed_point(fp);
    FAIL("expected BallExit");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BallExit);
    CHECK(e.details()["K_sqrt"].get<double>() > fp.cc.sigma_small);
  }
  // data sized for a doubled ball already break the flattening map
  fp.cc.sigma_small *= 2.0;
  try {
    FixedPointProblem big = problem(0.15);
    big.cc = fp.cc;
    run_fixed_point(big);
    FAIL("expected a failure");
  } catch (const Error& e) {
    CHECK((e.kind() == ErrorKind::BallExit || e.kind() == ErrorKind::DegenerateMap));
  }
}

TEST_CASE("eps above the admissible bound is rejected")
{
  FixedPointProblem fp = problem(0.0, 0.04, 0.02);
  fp.eps = 1.1 * max_admissible_eps(curved());
  CHECK_THROWS_AS(run_fixed_point(fp), Error);
}

TEST_CASE("energy report of a converged run")
{
  const NonlinearRun run = solve_nonlinear(problem(0.05));
  const EnergyReport& e = run.energy;
  CHECK(e.E0 > 0.0);
  CHECK(e.sup_E > 0.0);
  CHECK(e.int_D > 0.0);
  CHECK(std::isfinite(e.bound_constant));
  CHECK(e.bound_constant == doctest::Approx((e.sup_E + e.int_D) / e.E0).epsilon(1e-12));
  for (const auto& s : e.samples) CHECK(s.min_J > 0.5);
  MESSAGE("C = " << e.bound_constant << " diffeo constant " << e.diffeo_constant);
}

TEST_CASE("zero-data sweep gives zero distances")
{
  const SweepReport rep = epsilon_sweep(coarse(), recipe_data(coarse(), "mode1", 0.0), grid(0.04, 0.02),
                                        ContractionConfig{});
  REQUIRE(rep.entries.size() == 3);
  for (const auto& e : rep.entries) CHECK(e.ok);
  for (double x : rep.distances) CHECK(x == 0.0);
  CHECK(rep.eps_zero.ok);
  CHECK(rep.eps_zero_distance == 0.0);
}

TEST_CASE("small-data sweep is Cauchy in eps with uniform energy")
{
  const SweepReport rep = epsilon_sweep(coarse(), recipe_data(coarse(), "mode1", 0.05), grid(0.2, 0.02),
                                        ContractionConfig{});
  for (const auto& e : rep.entries) CHECK_MESSAGE(e.ok, e.error);
  REQUIRE(rep.distances.size() == 2);
  MESSAGE("distances " << rep.distances[0] << " " << rep.distances[1] << " sup E variation " << rep.sup_E_variation
                       << " eps = 0: " << (rep.eps_zero.ok ? "ok" : rep.eps_zero.error) << " "
                       << rep.eps_zero_distance);
  CHECK(rep.monotone);
  CHECK(rep.sup_E_variation < 0.2);
  CHECK_FALSE(rep.energy_degrades);
}

}

TEST_SUITE("nonlinear") {

TEST_CASE("analytic data with a corner layer lose eps uniformity")
{
  // a cosine profile is smooth but not compatible with the discrete evolution to
  // second order; its dt^2 xi(0) builds a corner layer whose H1 norm grows as eps drops
  const SurfacePerturbation data = recipe_data(curved(), "cos", 0.005, 64);
  ContractionConfig cc;
  cc.sigma_small = 1e3;
  cc.E0_max = 1e3;
  const SweepReport rep = epsilon_sweep(coarse(), data, grid(0.04, 0.02), cc, false);
  for (const auto& e : rep.entries) REQUIRE_MESSAGE(e.ok, e.error);
  const double first = rep.entries.front().run.energy.samples[0].E_terms[8];
  const double last = rep.entries.back().run.energy.samples[0].E_terms[8];
  MESSAGE("|dt^2 xi(0)|_1^2 at eps 0.1 and 0.025: " << first << " " << last);
  CHECK(last > 2.0 * first);
}

TEST_CASE("mode data are an eigenmode of the surface evolution")
{
  const Discretization& d = coarse();
  const SurfacePerturbation m = mode_data(d, 0, 0.01);
  const double ell = d.ell();
  // dt eta = lambda eta away from the corners, up to the small zero-mean bump of the repair
  const double lambda = m.dt_eta(0.1) / m.eta(0.1);
  CHECK(lambda < 0.0);
  for (double x : {-0.5, -0.2, 0.3, 0.6}) CHECK(m.dt_eta(x) == doctest::Approx(lambda * m.eta(x)).epsilon(0.02));
  for (double x : {-0.5, 0.3}) CHECK(m.dt2_eta(x) == doctest::Approx(lambda * lambda * m.eta(x)).epsilon(0.02));
  double mx = 0.0;
  for (int k = 0; k <= 200; ++k) mx = std::max(mx, std::abs(m.eta(-ell + k * ell / 100.0)));
  CHECK(mx == doctest::Approx(0.01).epsilon(0.05));
  CHECK(mode_index("mode2") == 1);
  CHECK(mode_index("cos") == -1);
  CHECK_THROWS_AS(profile_sampler("mode1", 1.0, 0.1), Error);
}

}
