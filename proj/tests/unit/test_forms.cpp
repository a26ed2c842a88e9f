#include <doctest.h>

#include <cmath>
#include <numbers>

#include "contactline/assembly.hpp"
#include "contactline/error.hpp"

using namespace contactline;

namespace {

const double pi = std::numbers::pi;

EquilibriumState flat()
{
  PhysicalConfig cfg;
  cfg.gamma_jump = 0.0;
  return solve_equilibrium(cfg, 16);
}

EquilibriumState curved()
{
  PhysicalConfig cfg;
  return solve_equilibrium(cfg, 48);
}

SurfaceField cosine(double amp, double k)
{
  return SurfaceField::fit(1.0, 64, [=](double x) {
    const double w = k * pi;
    return std::array<double, 4>{amp * std::cos(w * x), -amp * w * std::sin(w * x), -amp * w * w * std::cos(w * x),
                                 amp * w * w * w * std::sin(w * x)};
  });
}

} // namespace

TEST_SUITE("forms") {

TEST_CASE("surface form symmetry and Fourier symbol")
{
  const auto eq = flat();
  const FESpace V = build_fe_space(build_mesh(eq, 0.05, 1.0));
  const SurfaceOps ops = build_surface_ops(V);
  const Eigen::MatrixXd S(ops.S);
  CHECK((S - S.transpose()).cwiseAbs().maxCoeff() < 1e-14);
  for (int k : {1, 2, 3}) {
    const Vec phi = interpolate_surface(V, [&](double x) { return std::cos(k * pi * x); });
    // int_{-1}^{1} cos^2 = 1, int sin^2 = 1
    const double expect = eq.cfg.g + eq.cfg.sigma * k * k * pi * pi;
    CHECK(phi.dot(ops.S * phi) == doctest::Approx(expect).epsilon(1e-3));
  }
  // L(const) = g const
  const Vec one = Vec::Ones(V.n_s);
  CHECK((ops.S * one - eq.cfg.g * (ops.mass * one)).norm() < 1e-13);
}

TEST_CASE("corner bracket and endpoint form")
{
  const auto eq = curved();
  const FESpace V = build_fe_space(build_mesh(eq, 0.2, 0.6));
  const SurfaceOps ops = build_surface_ops(V);
  const Vec a = interpolate_surface(V, [](double x) { return 1.0 + x + 0.3 * x * x; });
  const Vec b = interpolate_surface(V, [](double x) { return 2.0 - x; });
  const double kappa = eq.cfg.kappa;
  CHECK(b.dot(ops.Kc * a) == doctest::Approx(kappa * (2.3 * 1.0 + 0.3 * 3.0)).epsilon(1e-14));
  CHECK(a.dot(ops.Kc * a) >= 0.0);
  // b(phi, psi) = sigma phi'(l) psi(l)/c(l) - sigma phi'(-l) psi(-l)/c(-l), exact on quadratics
  const double cl = eq.curvature_factor(-1.0), cr = eq.curvature_factor(1.0);
  const double expect = eq.cfg.sigma * (1.6 * 1.0 / cr - 0.4 * 3.0 / cl);
  CHECK(b.dot(ops.Bb * a) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("trace operator maps velocity to normal flux")
{
  const auto eq = curved();
  const FESpace V = build_fe_space(build_mesh(eq, 0.2, 0.7));
  const SurfaceOps ops = build_surface_ops(V);
  Vec full = Vec::Zero(V.n_vel);
  for (int n = 0; n < V.mesh.n_nodes(); ++n) {
    const auto& x = V.mesh.nodes[n];
    full(2 * n) = std::sin(x[0]) * (1 - x[0] * x[0]);
    full(2 * n + 1) = x[0] + x[1];
  }
  const Vec t = ops.T * V.restrict_free(full);
  for (int k = 0; k < V.n_s; ++k) {
    const double x = V.surface_x[k], z = eq.zeta0(x);
    const double u1 = (k == 0 || k == V.n_s - 1) ? 0.0 : std::sin(x) * (1 - x * x);
    CHECK(t(k) == doctest::Approx(-eq.dzeta0(x) * u1 + x + z).epsilon(1e-12));
  }
}

TEST_CASE("velocity form: symmetry, kernel and parallel equivalence")
{
  const auto eq = curved();
  const FESpace V = build_fe_space(build_mesh(eq, 0.25, 0.6));
  const SurfaceField zero(1.0, 64);
  const SurfacePerturbation pert{cosine(0.02, 1.0), cosine(0.03, 0.5), zero, zero};
  const auto maps = build_geometry(pert, eq, V);
  const auto par = assemble_velocity(V, maps, eq.cfg, true, true);
  const auto ser = assemble_velocity_serial(V, maps, eq.cfg, true);
  const Eigen::MatrixXd A(par.A), As(ser.A), Ad(par.Adot), Ads(ser.Adot);
  CHECK((A - As).cwiseAbs().maxCoeff() == 0.0);
  CHECK((Ad - Ads).cwiseAbs().maxCoeff() == 0.0);
  CHECK((A - A.transpose()).cwiseAbs().maxCoeff() < 1e-12 * A.cwiseAbs().maxCoeff());
  // the wall constraints leave no rigid motions: A is positive definite
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (A + A.transpose()), Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues()(0) > 0.0);
}

TEST_CASE("velocity form derivative matches a time finite difference")
{
  const auto eq = curved();
  const FESpace V = build_fe_space(build_mesh(eq, 0.3, 0.7));
  const auto eta0 = cosine(0.02, 1.0), eta1 = cosine(0.03, 0.5);
  const SurfaceField zero(1.0, 64);
  const double tau = 1e-4;
  auto A_at = [&](double t, bool dot) {
    const SurfacePerturbation p{eta0 + t * eta1, eta1, zero, zero};
    return assemble_velocity(V, build_geometry(p, eq, V), eq.cfg, dot);
  };
  const auto mid = A_at(0.0, true);
  const Eigen::MatrixXd fd = (Eigen::MatrixXd(A_at(tau, false).A) - Eigen::MatrixXd(A_at(-tau, false).A)) / (2 * tau);
  const Eigen::MatrixXd Ad(mid.Adot);
  CHECK(Ad.cwiseAbs().maxCoeff() > 1e-4);
  CHECK((fd - Ad).cwiseAbs().maxCoeff() < 1e-6 * (1.0 + Ad.cwiseAbs().maxCoeff()));
}

TEST_CASE("divergence pairing")
{
  const auto eq = curved();
  const FESpace V = build_fe_space(build_mesh(eq, 0.25, 0.6));
  const SpMat B = assemble_divergence(V);
  CHECK(B.rows() == V.n_p);
  CHECK(B.cols() == V.n_free);
  // constant pressure pairs with the surface flux of z
  Vec full = Vec::Zero(V.n_vel);
  for (int n = 0; n < V.mesh.n_nodes(); ++n) {
    const auto& x = V.mesh.nodes[n];
    full(2 * n + 1) = x[1] + V.mesh.H; // vanishes on the bottom
  }
  const Vec z = V.restrict_free(full);
  const double pairing = Vec::Ones(V.n_p).dot(B * z);
  // int div z = int_Sigma z . n ds = int (zeta0 + H) dx1
  CHECK(pairing == doctest::Approx(2.0 * (0.5 + V.mesh.H)).epsilon(1e-6));
}

TEST_CASE("forcing functional pieces")
{
  const auto eq = curved();
  const FESpace V = build_fe_space(build_mesh(eq, 0.25, 0.6));
  const SurfaceOps ops = build_surface_ops(V);
  const auto maps = build_geometry(SurfacePerturbation::zero(1.0, 16), eq, V);
  // corner data only: -[Tv, What]
  ForcingData d;
  d.corner = {0.3, -0.2};
  const Vec f = assemble_forcing(V, maps, ops, d);
  Vec full = Vec::Zero(V.n_vel);
  for (int n = 0; n < V.mesh.n_nodes(); ++n) full(2 * n + 1) = 1.0;
  const Vec z = V.restrict_free(full);
  CHECK(f.dot(z) == doctest::Approx(-eq.cfg.kappa * (0.3 - 0.2)));
  // volume force F1 = e2: int v2 J = int z2 for the identity geometry
  ForcingData d1;
  d1.F1.assign(V.vq.size(), Eigen::Vector2d(0.0, 1.0));
  // with z2 = x2 + H (zero on the bottom), the pairing is int (x2 + H)
  Vec lin = Vec::Zero(V.n_vel);
  for (int n = 0; n < V.mesh.n_nodes(); ++n) lin(2 * n + 1) = V.mesh.nodes[n][1] + V.mesh.H;
  double expect = 0.0;
  for (const auto& q : V.vq) expect += q.w * (q.x[1] + V.mesh.H);
  CHECK(assemble_forcing(V, maps, ops, d1).dot(V.restrict_free(lin)) == doctest::Approx(expect).epsilon(1e-6));
}

}
