#include <doctest.h>

#include "contactline/assembly.hpp"
#include "contactline/divfree_basis.hpp"
#include "contactline/error.hpp"
#include "contactline/norms.hpp"

using namespace contactline;

namespace {

struct Setup {
  EquilibriumState eq;
  FESpace V;
  SpMat B0, A0;
};

Setup coarse()
{
  Setup s;
  s.eq = solve_equilibrium(PhysicalConfig{}, 32);
  s.V = build_fe_space(build_mesh(s.eq, 0.4, 0.5));
  s.B0 = assemble_divergence(s.V);
  s.A0 = assemble_velocity(s.V, build_geometry(SurfacePerturbation::zero(1.0, 64), s.eq, s.V), s.eq.cfg, false).A;
  return s;
}

SurfacePerturbation bump(double amp)
{
  SurfacePerturbation p = SurfacePerturbation::zero(1.0, 64);
  p.eta = SurfaceField::fit(1.0, 64, profile_sampler("cos", 1.0, amp));
  p.dt_eta = SurfaceField::fit(1.0, 64, profile_sampler("cos2", 1.0, amp));
  return p;
}

} // namespace

TEST_SUITE("divfree") {

TEST_CASE("nullspace of the discrete divergence")
{
  const Setup s = coarse();
  const DivFreeBasis b = build_divfree_basis(s.B0, s.A0);
  CHECK(b.rank_B0 == s.V.n_p);
  CHECK(b.nullspace_dim == s.V.n_free - s.V.n_p);
  CHECK(b.m() == b.nullspace_dim);
  const Eigen::MatrixXd G = b.W.transpose() * b.W;
  CHECK((G - Eigen::MatrixXd::Identity(b.m(), b.m())).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((s.B0 * b.W).cwiseAbs().maxCoeff() < 1e-12);
  for (int j = 1; j < b.m(); ++j) CHECK(b.energy(j) >= b.energy(j - 1));
  CHECK(b.energy(0) > 0.0);
}

TEST_CASE("div_A pairing of M w vanishes on a perturbed geometry")
{
  const Setup s = coarse();
  const DivFreeBasis b = build_divfree_basis(s.B0, s.A0, 12);
  CHECK(b.m() == 12);
  const SurfacePerturbation p = bump(0.03);
  const GeometryMaps maps = build_geometry(p, s.eq, s.V);
  for (int j = 0; j < b.m(); ++j) CHECK(divergence_pairing(s.V, maps, b.W.col(j)) < 1e-10);
  // a field that is not divergence free pairs to B0 w (identity J div_A(M w) = div w)
  const Eigen::VectorXd w = Eigen::VectorXd::LinSpaced(s.V.n_free, -1.0, 1.0);
  CHECK(divergence_pairing(s.V, maps, w) == doctest::Approx((s.B0 * w).cwiseAbs().maxCoeff()).epsilon(1e-9));
}

TEST_CASE("zero perturbation gives v = w")
{
  const Setup s = coarse();
  const DivFreeBasis b = build_divfree_basis(s.B0, s.A0, 3);
  const GeometryMaps maps = build_geometry(SurfacePerturbation::zero(1.0, 64), s.eq, s.V);
  const Eigen::VectorXd full = s.V.expand(b.W.col(0));
  for (int q = 0; q < static_cast<int>(s.V.vq.size()); q += 37) {
    const auto u = physical_velocity(s.V, maps, full, q);
    const auto w = s.V.velocity_jets(full, q);
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < Jet2::size; ++k) CHECK(u[i][k] == doctest::Approx(w[i][k]).epsilon(1e-14));
  }
}

TEST_CASE("rank-deficient divergence and oversized requests")
{
  const Setup s = coarse();
  Eigen::MatrixXd B = Eigen::MatrixXd(s.B0);
  B.row(3) = B.row(5);
  const SpMat Bdup = B.sparseView();
  CHECK_THROWS_AS(build_divfree_basis(Bdup, s.A0), Error);
  try {
    build_divfree_basis(Bdup, s.A0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::RankDeficient);
  }
  try {
    build_divfree_basis(s.B0, s.A0, s.V.n_free);
    FAIL("expected RankDeficient");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::RankDeficient);
  }
}

}
