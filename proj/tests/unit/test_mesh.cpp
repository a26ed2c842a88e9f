#include <doctest.h>

#include <cmath>
#include <sstream>

#include "contactline/error.hpp"
#include "contactline/fe_space.hpp"
#include "contactline/mesh.hpp"

using namespace contactline;

namespace {

EquilibriumState curved_state()
{
  PhysicalConfig cfg;
  cfg.gamma_jump = -0.2;
  return solve_equilibrium(cfg, 48);
}

// max over fine samples of |zeta0 - P2 interpolant of the surface nodes|
double surface_interp_error(const Mesh& m)
{
  double err = 0.0;
  for (int i = 0; i + 2 < m.fine_nx(); i += 2) {
    const double xa = m.xr[i], xb = m.xr[i + 2];
    const double za = m.nodes[m.surface_node(i)][1], zm = m.nodes[m.surface_node(i + 1)][1],
                 zb = m.nodes[m.surface_node(i + 2)][1];
    for (int k = 0; k <= 20; ++k) {
      const double t = k / 20.0;
      const double p = za * (1 - t) * (1 - 2 * t) + zm * 4 * t * (1 - t) + zb * t * (2 * t - 1);
      err = std::max(err, std::abs(p - m.eq.zeta0(xa + t * (xb - xa))));
    }
  }
  return err;
}

} // namespace

TEST_SUITE("mesh") {

TEST_CASE("uniform flat mesh")
{
  PhysicalConfig cfg;
  cfg.gamma_jump = 0.0;
  const auto eq = solve_equilibrium(cfg, 16);
  const Mesh m = build_mesh(eq, 0.25, 1.0);
  CHECK(m.nx == 8);
  CHECK(m.ny == 4);
  CHECK(m.cells.size() == 64);
  CHECK(m.n_nodes() == 17 * 9);
  for (int i = 0; i < m.fine_nx(); ++i) CHECK(m.xr[i] == doctest::Approx(-1.0 + 0.125 * i));
  CHECK(m.max_cell_diameter() == doctest::Approx(std::sqrt(2.0) * 0.25));
  const FESpace V = build_fe_space(m);
  double area = 0.0;
  for (const auto& q : V.vq) area += q.w;
  CHECK(area == doctest::Approx(2.0));
}

TEST_CASE("corner grading")
{
  const auto eq = curved_state();
  const double gamma = 0.5, h = 0.1;
  const Mesh m = build_mesh(eq, h, gamma);
  const int n = m.nx / 2;
  CHECK(n == static_cast<int>(std::ceil(1.0 / (gamma * h))));
  // first coarse cell next to the wall: ell (1/n)^(1/gamma)
  CHECK(m.xr[2] - m.xr[0] == doctest::Approx(std::pow(1.0 / n, 1.0 / gamma)));
  // interior width stays below h
  for (int i = 0; i + 2 < m.fine_nx(); i += 2) CHECK(m.xr[i + 2] - m.xr[i] <= h * (1 + 1e-12));
  CHECK(m.min_corner_cell_diameter() < 0.1 * m.max_cell_diameter());
  // surface grading toward s = 1
  CHECK(m.sr[m.fine_ny() - 1] - m.sr[m.fine_ny() - 3] < m.sr[2] - m.sr[0]);
}

TEST_CASE("mirror symmetry")
{
  const auto eq = curved_state();
  const Mesh m = build_mesh(eq, 0.2, 0.6);
  for (int j = 0; j < m.fine_ny(); ++j)
    for (int i = 0; i < m.fine_nx(); ++i) {
      const auto& a = m.nodes[m.node(i, j)];
      const auto& b = m.nodes[m.node(m.fine_nx() - 1 - i, j)];
      CHECK(a[0] == doctest::Approx(-b[0]).epsilon(1e-14));
      CHECK(a[1] == doctest::Approx(b[1]).epsilon(1e-12));
    }
}

TEST_CASE("surface interpolation error is third order")
{
  const auto eq = curved_state();
  const double e1 = surface_interp_error(build_mesh(eq, 0.2, 1.0));
  const double e2 = surface_interp_error(build_mesh(eq, 0.1, 1.0));
  CHECK(e1 / e2 > 6.0);
  CHECK(e2 < 1e-5);
}

TEST_CASE("export and import round trip")
{
  const auto eq = curved_state();
  const Mesh m = build_mesh(eq, 0.3, 0.7);
  const MeshData d = export_mesh(m);
  std::stringstream ss;
  write_mesh(ss, d);
  const MeshData r = read_mesh(ss);
  REQUIRE(r.vertices.size() == d.vertices.size());
  REQUIRE(r.cells.size() == d.cells.size());
  REQUIRE(r.boundary.size() == d.boundary.size());
  for (std::size_t i = 0; i < d.vertices.size(); ++i) {
    CHECK(r.vertices[i][0] == d.vertices[i][0]);
    CHECK(r.vertices[i][1] == d.vertices[i][1]);
  }
  for (std::size_t i = 0; i < d.cells.size(); ++i) CHECK(r.cells[i] == d.cells[i]);
  for (std::size_t i = 0; i < d.boundary.size(); ++i) {
    CHECK(r.boundary[i].first == d.boundary[i].first);
    CHECK(r.boundary[i].second == d.boundary[i].second);
  }
  std::stringstream bad("vertices 2\n0 0\n");
  CHECK_THROWS_AS(read_mesh(bad), Error);
}

TEST_CASE("invalid mesh parameters")
{
  const auto eq = curved_state();
  CHECK_THROWS_AS(build_mesh(eq, -0.1, 1.0), Error);
  CHECK_THROWS_AS(build_mesh(eq, 0.1, 1.5), Error);
}

TEST_CASE("finite element basis jets")
{
  const auto eq = curved_state();
  const Mesh m = build_mesh(eq, 0.25, 0.7);
  const FESpace V = build_fe_space(m);
  const double H = m.H;
  for (std::size_t q = 0; q < V.vq.size(); q += 5) {
    const auto& vp = V.vq[q];
    const auto& c = m.cells[vp.cell];
    Jet2 one, x1, s2;
    for (int a = 0; a < 6; ++a) {
      const auto r = m.reference(c[a]);
      one += vp.N[a];
      x1 += r[0] * vp.N[a];
      s2 += r[1] * r[1] * vp.N[a];
    }
    CHECK(one.value() == doctest::Approx(1.0));
    CHECK(std::abs(one.d1()) + std::abs(one.d2()) + std::abs(one.d11()) + std::abs(one.d12()) + std::abs(one.d22()) < 1e-9);
    CHECK(x1.value() == doctest::Approx(vp.x[0]));
    CHECK(x1.d1() == doctest::Approx(1.0));
    CHECK(std::abs(x1.d2()) < 1e-10);
    // s(x)^2 with s = (x2 + H)/(zeta0(x1) + H), differentiated by central differences
    auto f = [&](double y1, double y2) {
      const double s = (y2 + H) / (eq.zeta0(y1) + H);
      return s * s;
    };
    const double e = 1e-4, y1 = vp.x[0], y2 = vp.x[1];
    CHECK(s2.value() == doctest::Approx(f(y1, y2)).epsilon(1e-12));
    CHECK(s2.d1() == doctest::Approx((f(y1 + e, y2) - f(y1 - e, y2)) / (2 * e)).epsilon(1e-6));
    CHECK(s2.d2() == doctest::Approx((f(y1, y2 + e) - f(y1, y2 - e)) / (2 * e)).epsilon(1e-6));
    CHECK(s2.d22() == doctest::Approx((f(y1, y2 + e) - 2 * f(y1, y2) + f(y1, y2 - e)) / (e * e)).epsilon(1e-4));
    CHECK(s2.d11() == doctest::Approx((f(y1 + e, y2) - 2 * f(y1, y2) + f(y1 - e, y2)) / (e * e)).epsilon(1e-3));
    CHECK(s2.d12() ==
          doctest::Approx((f(y1 + e, y2 + e) - f(y1 + e, y2 - e) - f(y1 - e, y2 + e) + f(y1 - e, y2 - e)) / (4 * e * e))
              .epsilon(1e-3));
  }
}

TEST_CASE("boundary quadrature measures")
{
  const auto eq = curved_state();
  const Mesh m = build_mesh(eq, 0.2, 0.6);
  const FESpace V = build_fe_space(m);
  double surf = 0.0, bot = 0.0, wl = 0.0, wr = 0.0;
  for (const auto& b : V.sq) surf += b.w;
  for (const auto& b : V.wq) {
    if (b.tag == BoundaryTag::Bottom) bot += b.w;
    if (b.tag == BoundaryTag::WallLeft) wl += b.w;
    if (b.tag == BoundaryTag::WallRight) wr += b.w;
  }
  CHECK(surf == doctest::Approx(2.0));
  CHECK(bot == doctest::Approx(2.0));
  CHECK(wl == doctest::Approx(eq.zeta0(-1.0) + m.H));
  CHECK(wr == doctest::Approx(eq.zeta0(1.0) + m.H));
  double area = 0.0;
  for (const auto& q : V.vq) area += q.w;
  CHECK(area == doctest::Approx(2.0 * (0.5 + m.H)).epsilon(1e-6));
  // free dofs: x1 dropped on both walls, x2 on the bottom row
  const int fx = m.fine_nx(), fy = m.fine_ny();
  CHECK(V.n_free == 2 * fx * fy - 2 * fy - fx);
}

}
