#include <doctest.h>

#include <cmath>
#include <numbers>

#include "contactline/error.hpp"
#include "contactline/operators.hpp"

using namespace contactline;

namespace {

const double pi = std::numbers::pi;

SurfaceField cosine(double amp)
{
  return SurfaceField::fit(1.0, 64, [=](double x) {
    return std::array<double, 4>{amp * std::cos(pi * x), -amp * pi * std::sin(pi * x), -amp * pi * pi * std::cos(pi * x),
                                 amp * pi * pi * pi * std::sin(pi * x)};
  });
}

EquilibriumState state()
{
  PhysicalConfig cfg;
  return solve_equilibrium(cfg, 48);
}

// L2 error of grad_A (f o Phi) against (grad f) o Phi, f(y) = y1 y2, on a uniform mesh
double pullback_error(const EquilibriumState& eq, const SurfacePerturbation& pert, double h)
{
  const FESpace V = build_fe_space(build_mesh(eq, h, 1.0));
  const GeometryEvaluator ev(eq, pert);
  const auto maps = build_geometry(pert, eq, V);
  Eigen::VectorXd f = Eigen::VectorXd::Zero(V.n_vel);
  for (int n = 0; n < V.mesh.n_nodes(); ++n) {
    const auto& x = V.mesh.nodes[n];
    f(2 * n) = x[0] * (x[1] + ev.at(x[0], x[1]).psi);
  }
  const auto g = apply_transformed_field(OpKind::GradA, V, maps, f, Eigen::VectorXd(), 1.0, true);
  double err = 0.0;
  for (std::size_t q = 0; q < V.vq.size(); ++q) {
    const auto& x = V.vq[q].x;
    const Eigen::Vector2d exact(x[1] + maps.vol[q].psi, x[0]);
    err += V.vq[q].w * (g[q].vec - exact).squaredNorm();
  }
  return std::sqrt(err);
}

} // namespace

TEST_SUITE("operators") {

TEST_CASE("identity geometry gives Euclidean operators")
{
  const GeometryPoint g;
  const Jet2 X = Jet2::variable(0, 0.3), Y = Jet2::variable(1, -0.2);
  const Jet2 f = X * X * Y + 2.0 * Y * Y;
  const auto gr = apply_transformed(OpKind::GradA, FieldJets::scalar(f), g);
  CHECK(gr.vec(0) == doctest::Approx(2 * 0.3 * -0.2));
  CHECK(gr.vec(1) == doctest::Approx(0.09 + 4 * -0.2));
  CHECK(apply_transformed(OpKind::LapA, FieldJets::scalar(f), g).scalar == doctest::Approx(2 * -0.2 + 4.0));
  const auto dv = apply_transformed(OpKind::DivA, FieldJets::vector(f, X * Y), g);
  CHECK(dv.scalar == doctest::Approx(2 * 0.3 * -0.2 + 0.3));
}

TEST_CASE("linear shear")
{
  const GeometryPoint g;
  const Jet2 Y = Jet2::variable(1, 0.7);
  const auto u = FieldJets::vector(Y, Jet2(0.0));
  const auto D = apply_transformed(OpKind::SymGradA, u, g);
  CHECK(D.tensor(0, 0) == 0.0);
  CHECK(D.tensor(0, 1) == 1.0);
  CHECK(D.tensor(1, 0) == 1.0);
  CHECK(D.tensor(1, 1) == 0.0);
  const auto L = apply_transformed(OpKind::LapA, u, g);
  CHECK(L.vec.norm() == 0.0);
}

TEST_CASE("rank mismatch")
{
  const GeometryPoint g;
  CHECK_THROWS_AS(apply_transformed(OpKind::GradA, FieldJets::vector(Jet2(1.0), Jet2(0.0)), g), Error);
  CHECK_THROWS_AS(apply_transformed(OpKind::DivA, FieldJets::scalar(Jet2(1.0)), g), Error);
  CHECK_THROWS_AS(apply_transformed(OpKind::SymGradA, FieldJets::scalar(Jet2(1.0)), g), Error);
  try {
    apply_transformed(OpKind::StressA, FieldJets::scalar(Jet2(1.0)), g);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::RankMismatch);
  }
}

TEST_CASE("pull-back oracle converges at second order")
{
  const auto eq = state();
  const SurfaceField zero(1.0, 64);
  const SurfacePerturbation pert{cosine(0.02), zero, zero, zero};
  const double e1 = pullback_error(eq, pert, 0.05);
  const double e2 = pullback_error(eq, pert, 0.025);
  const double e3 = pullback_error(eq, pert, 0.0125);
  const double r1 = std::log2(e1 / e2), r2 = std::log2(e2 / e3);
  MESSAGE("pull-back errors ", e1, " ", e2, " ", e3, " orders ", r1, " ", r2);
  CHECK(r2 >= 1.8);
}

TEST_CASE("stress symmetry and divergence of the stress")
{
  const auto eq = state();
  const SurfaceField zero(1.0, 64);
  const SurfacePerturbation pert{cosine(0.03), cosine(0.01), zero, zero};
  const GeometryEvaluator ev(eq, pert);
  const double mu = 1.3;
  for (auto [x1, x2] : {std::pair{0.1, 0.3}, std::pair{-0.5, 0.2}, std::pair{0.4, 0.45}}) {
    const GeometryPoint g = ev.at(x1, x2);
    // div-free field u = M curl(s): J div_A(M w) = div w
    const Jet3 X = Jet3::variable(0, x1), Y = Jet3::variable(1, x2);
    const Jet3 s = sin(X) * Y * Y + X * X * X * Y;
    const Jet2 w1 = s.diff(1), w2 = -1.0 * s.diff(0);
    const Jet2 K = reciprocal(g.J);
    FieldJets u = FieldJets::vector(K * w1, g.A * K * w1 + w2);
    CHECK(std::abs(apply_transformed(OpKind::DivA, u, g).scalar) < 1e-13);
    const Jet2 p = cos(X.truncate<2>()) * Y.truncate<2>();
    u.pressure = p;
    const auto S = apply_transformed(OpKind::StressA, u, g, mu);
    CHECK(std::abs(S.tensor(0, 1) - S.tensor(1, 0)) < 1e-15);
    const Eigen::Vector2d lhs = div_stress(u, g, mu);
    const Eigen::Vector2d rhs = -mu * apply_transformed(OpKind::LapA, u, g).vec + apply_transformed(OpKind::GradA, FieldJets::scalar(p), g).vec;
    CHECK((lhs - rhs).norm() < 1e-11);
  }
}

}
