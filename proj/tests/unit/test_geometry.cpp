#include <doctest.h>

#include <cmath>
#include <numbers>

#include "contactline/error.hpp"
#include "contactline/geometry.hpp"

using namespace contactline;

namespace {

const double pi = std::numbers::pi;

EquilibriumState state()
{
  PhysicalConfig cfg;
  return solve_equilibrium(cfg, 48);
}

SurfaceField cosine(double amp, double k, double ell = 1.0, int modes = 128)
{
  return SurfaceField::fit(ell, modes, [=](double x) {
    const double w = k * pi / ell;
    return std::array<double, 4>{amp * std::cos(w * x), -amp * w * std::sin(w * x), -amp * w * w * std::cos(w * x),
                                 amp * w * w * w * std::sin(w * x)};
  });
}

// J div_calA(X) = J d1 X1 - A d2 X1 + d2 X2 for jets X
double J_div(const GeometryPoint& g, const Jet2& X1, const Jet2& X2)
{
  return g.J.value() * X1.d1() - g.A.value() * X1.d2() + X2.d2();
}

} // namespace

TEST_SUITE("geometry") {

TEST_CASE("zero perturbation gives the identity map")
{
  const auto eq = state();
  const FESpace V = build_fe_space(build_mesh(eq, 0.3, 1.0));
  const auto pert = SurfacePerturbation::zero(1.0, 64);
  const auto maps = build_geometry(pert, eq, V);
  CHECK(maps.trivial);
  for (const auto& g : maps.vol) {
    CHECK(g.J.value() == 1.0);
    CHECK(g.A.value() == 0.0);
    CHECK(g.calA() == Mat2::Identity());
    CHECK(g.M() == Mat2::Identity());
    CHECK(g.R() == Mat2::Zero());
  }
  for (double r : [&] {
         std::vector<double> v;
         for (const auto& m : build_R(maps)) v.push_back(m.norm());
         return v;
       }())
    CHECK(r == 0.0);
}

TEST_CASE("cutoff is C2 and equals x2 above the blend")
{
  const CutoffSpec c{0.1, 0.2};
  CHECK(c.eval(0.05)[0] == 0.0);
  CHECK(c.eval(0.3)[0] == 0.3);
  CHECK(c.eval(0.3)[1] == 1.0);
  for (double x : {0.1, 0.2}) {
    const double e = 1e-10;
    const auto lo = c.eval(x - e), hi = c.eval(x + e);
    for (int k = 0; k < 3; ++k) CHECK(std::abs(lo[k] - hi[k]) < 1e-5);
  }
  // derivative consistency inside the blend
  const double x = 0.137, e = 1e-6;
  for (int k = 0; k < 3; ++k)
    CHECK(c.eval(x)[k + 1] == doctest::Approx((c.eval(x + e)[k] - c.eval(x - e)[k]) / (2 * e)).epsilon(1e-6));
}

TEST_CASE("extension reproduces the surface trace and decays by mode")
{
  const auto eq = state();
  const auto f = cosine(1.0, 0.5);
  const SurfacePerturbation pert{f, f, f, f};
  const GeometryEvaluator ev(eq, pert);
  for (double x = -1.0; x <= 1.0; x += 0.05) {
    CHECK(std::abs(ev.extend(f, x, eq.zeta0(x)).value() - std::cos(0.5 * pi * x)) < 1e-8);
  }
  // single cosine mode j: amplitude e^{j pi z / (2 ell)} at depth z
  const int j = 6;
  SurfaceField mode = SurfaceField::fit(1.0, 32, [&](double x) {
    const double w = j * pi / 2.0, t = w * (x + 1.0);
    return std::array<double, 4>{std::cos(t), -w * std::sin(t), -w * w * std::cos(t), w * w * w * std::sin(t)};
  });
  for (double z : {-0.1, -0.3, -0.7}) {
    const double x = 0.23;
    const double expect = std::exp(j * pi * z / 2.0) * std::cos(j * pi / 2.0 * (x + 1.0));
    CHECK(mode.extension(x, z).value() == doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("identity suite on a manufactured perturbation")
{
  const auto eq = state();
  const FESpace V = build_fe_space(build_mesh(eq, 0.2, 0.7));
  const SurfacePerturbation pert{cosine(0.01, 1.0), cosine(0.02, 1.0), cosine(0.0, 1.0), cosine(0.0, 1.0)};
  const auto rep = identity_suite(eq, pert, V);
  CHECK(rep.piola_jet < 1e-12);
  CHECK(rep.normal_identity < 1e-12);
  CHECK(rep.normal_transport < 1e-12);
  CHECK(rep.wall_tangency < 1e-12);
  REQUIRE(rep.piola_fd.size() == 3);
  MESSAGE("piola fd residuals ", rep.piola_fd[0], " ", rep.piola_fd[1], " ", rep.piola_fd[2]);
  for (int k = 0; k < 2; ++k) CHECK(std::log2(rep.piola_fd[k] / rep.piola_fd[k + 1]) >= 1.0);
  CHECK(rep.min_J > 0.9);
}

TEST_CASE("R against a finite difference in time")
{
  const auto eq = state();
  const auto eta1 = cosine(0.01, 1.0);
  const SurfaceField zero(1.0, 128);
  const SurfacePerturbation at0{zero, eta1, zero, zero};
  const GeometryEvaluator ev0(eq, at0);
  const double x1 = 0.31, x2 = 0.2;
  const Mat2 R = ev0.at(x1, x2).R();
  CHECK(R.norm() > 1e-4);
  double prev = 0.0;
  for (double h : {1e-1, 5e-2, 2.5e-2}) {
    const SurfacePerturbation ph{h * eta1, eta1, zero, zero};
    const GeometryEvaluator evh(eq, ph);
    const Mat2 fd = (evh.at(x1, x2).M() - ev0.at(x1, x2).M()) / h * ev0.at(x1, x2).Minv();
    const double err = (fd - R).norm();
    if (prev > 0.0) CHECK(prev / err == doctest::Approx(2.0).epsilon(0.1));
    prev = err;
  }
}

TEST_CASE("divergence transport identity")
{
  const auto eq = state();
  const auto eta0 = cosine(0.01, 1.0), eta1 = cosine(0.015, 0.5);
  const double tau = 1e-3;
  for (double t : {0.0, 0.5}) {
    const SurfacePerturbation p{eta0 + t * eta1, eta1, eta1, eta1};
    const SurfacePerturbation pp{eta0 + (t + tau) * eta1, eta1, eta1, eta1};
    const SurfacePerturbation pm{eta0 + (t - tau) * eta1, eta1, eta1, eta1};
    const GeometryEvaluator ev(eq, p), evp(eq, pp), evm(eq, pm);
    for (auto [x1, x2] : {std::pair{0.2, 0.3}, std::pair{-0.6, 0.17}, std::pair{0.1, -0.2}}) {
      // v = (sin x1 cos x2, x1 x2^2)
      auto v = [&](int i) {
        const Jet2 X1 = Jet2::variable(0, x1), X2 = Jet2::variable(1, x2);
        return i == 0 ? sin(X1) * cos(X2) : X1 * X2 * X2;
      };
      const auto g = ev.at(x1, x2);
      // w = dt(M^{-1} v) = (Jt v1, -At v1); X = M w
      const Jet2 w1 = g.Jt * v(0), w2 = -1.0 * (g.At * v(0));
      const Jet2 K = g.K_jet();
      const Jet2 X1 = K * w1, X2 = g.A * K * w1 + w2;
      const double lhs = J_div(g, X1, X2);
      const double rhs = (J_div(evp.at(x1, x2), v(0), v(1)) - J_div(evm.at(x1, x2), v(0), v(1))) / (2 * tau);
      CHECK(std::abs(lhs - rhs) < 1e-8);
    }
  }
}

TEST_CASE("degenerate map is rejected")
{
  const auto eq = state();
  const FESpace V = build_fe_space(build_mesh(eq, 0.3, 1.0));
  const auto bad = SurfaceField::fit(1.0, 16, [](double) { return std::array<double, 4>{-0.45, 0, 0, 0}; });
  const SurfaceField zero(1.0, 16);
  const SurfacePerturbation pert{bad, zero, zero, zero};
  try {
    build_geometry(pert, eq, V);
    FAIL("expected DegenerateMap");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateMap);
  }
}

TEST_CASE("parallel and serial geometry agree bitwise")
{
  const auto eq = state();
  const FESpace V = build_fe_space(build_mesh(eq, 0.2, 0.6));
  const SurfacePerturbation pert{cosine(0.01, 1.0), cosine(0.02, 0.5), cosine(0.0, 1.0), cosine(0.0, 1.0)};
  const auto a = build_geometry(pert, eq, V, true);
  const auto b = build_geometry_serial(pert, eq, V);
  REQUIRE(a.vol.size() == b.vol.size());
  bool same = true;
  for (std::size_t q = 0; q < a.vol.size(); ++q)
    for (int i = 0; i < Jet2::size; ++i)
      same = same && a.vol[q].A[i] == b.vol[q].A[i] && a.vol[q].J[i] == b.vol[q].J[i] && a.vol[q].Jt[i] == b.vol[q].Jt[i];
  CHECK(same);
}

}
