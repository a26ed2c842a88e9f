#include "contactline/mms.hpp"

#include <chrono>
#include <cmath>

#include <numbers>

#include "contactline/norms.hpp"
#include "contactline/operators.hpp"
#include "contactline/volterra.hpp"

namespace contactline {

namespace {

class Manufactured {
public:
  Manufactured(const EquilibriumState& eq, const ManufacturedCase& mc, int n_modes)
      : eq_(eq), mc_(mc), ell_(eq.cfg.ell), H_(eq.cfg.H_bot),
        phi_(SurfaceField::fit(eq.cfg.ell, n_modes, profile_sampler("cos", eq.cfg.ell, mc.eta_amp)))
  {
  }

  SurfacePerturbation path(double t) const
  {
    SurfacePerturbation p = SurfacePerturbation::zero(ell_, phi_.n_modes());
    p.eta = t * phi_;
    p.dt_eta = phi_;
    return p;
  }

  // reference velocity jets at (x1, x2)
  std::array<Jet2, 2> w(double x1, double x2) const
  {
    const Jet3 X = Jet3::variable(0, x1), Y = Jet3::variable(1, x2);
    const Jet3 psi = mc_.psi_amp * (ell_ * ell_ - X * X) * (Y + H_) * (1.0 + 0.3 * sin(2.0 * X + Y));
    return {psi.diff(1), -1.0 * psi.diff(0)};
  }

  Jet2 p(double x1, double x2) const
  {
    const Jet2 X = Jet2::variable(0, x1), Y = Jet2::variable(1, x2);
    return mc_.p_amp * cos(X) * (Y + 1.0);
  }

  static std::array<Jet2, 2> physical(const GeometryPoint& g, const std::array<Jet2, 2>& w)
  {
    const Jet2 K = g.K_jet();
    return {K * w[0], g.A * K * w[0] + w[1]};
  }

  // flux w*.N0 along the surface and its first two x-derivatives
  std::array<double, 3> flux(double x) const
  {
    const auto z = eq_.zeta_derivs(x);
    const auto wj = w(x, z[0]);
    // total derivatives of f(x, zeta0(x))
    auto along = [&](const Jet2& f) {
      return std::array<double, 3>{f.value(), f.d1() + z[1] * f.d2(),
                                   f.d11() + 2.0 * z[1] * f.d12() + z[1] * z[1] * f.d22() + z[2] * f.d2()};
    };
    const auto a = along(wj[0]), b = along(wj[1]);
    return {-z[1] * a[0] + b[0], -z[2] * a[0] - z[1] * a[1] + b[1],
            -z[3] * a[0] - 2.0 * z[2] * a[1] - z[1] * a[2] + b[2]};
  }

  std::array<double, 3> xi0(double x) const
  {
    const double k = std::numbers::pi / ell_;
    return {mc_.xi_amp * (std::cos(k * x) + 0.5 * x), mc_.xi_amp * (-k * std::sin(k * x) + 0.5),
            -mc_.xi_amp * k * k * std::cos(k * x)};
  }

  std::array<double, 3> xi(double t, double x) const
  {
    const auto a = xi0(x), b = flux(x);
    return {a[0] + t * b[0], a[1] + t * b[1], a[2] + t * b[2]};
  }

  std::array<double, 2> F3(double x) const { return {mc_.F3_amp * std::sin(x), mc_.F3_amp * std::cos(x)}; }

  // L(f) = g f - sigma d1(f'/c) from f, f', f''
  double L(double x, const std::array<double, 3>& f) const
  {
    const double y = eq_.dzeta0(x), y2 = eq_.zeta_derivs(x)[2];
    const double c = eq_.curvature_factor(x);
    const double dc = 3.0 * std::sqrt(1.0 + y * y) * y * y2;
    return eq_.cfg.g * f[0] - eq_.cfg.sigma * (f[2] / c - f[1] * dc / (c * c));
  }

  Mat2 stress(const GeometryPoint& g, double x1, double x2) const
  {
    const auto u = physical(g, w(x1, x2));
    FieldJets f = FieldJets::vector(u[0], u[1]);
    f.pressure = p(x1, x2);
    return apply_transformed(OpKind::StressA, f, g, eq_.cfg.mu).tensor;
  }

  // int J div_A S . v, integrated by parts: -int J S : grad_A v + int_boundary S (J calA n) . v.
  // Only first derivatives of M enter, so the load stays accurate across the cutoff joins.
  Vec volume_load(const FESpace& V, const GeometryMaps& maps) const
  {
    Vec full = Vec::Zero(V.n_vel);
    for (std::size_t q = 0; q < V.vq.size(); ++q) {
      const auto& vp = V.vq[q];
      const GeometryPoint& g = maps.vol[q];
      const Mat2 S = stress(g, vp.x[0], vp.x[1]);
      const Mat2 a = g.calA(), M = g.M();
      const auto dM = g.grad_M();
      const auto& cell = V.mesh.cells[vp.cell];
      for (int n = 0; n < 6; ++n) {
        const Jet2& N = vp.N[n];
        for (int c = 0; c < 2; ++c) {
          Mat2 dv; // dv(i, k) = d_k v_i
          for (int k = 0; k < 2; ++k) dv.col(k) = dM[k].col(c) * N.value() + M.col(c) * (k == 0 ? N.d1() : N.d2());
          full(2 * cell[n] + c) -= vp.w * g.J.value() * (S.cwiseProduct(dv * a.transpose())).sum();
        }
      }
    }
    auto boundary = [&](const BoundaryPoint& b, const GeometryPoint& g, const Eigen::Vector2d& n) {
      const Eigen::Vector2d t = stress(g, b.x[0], b.x[1]) * (g.J.value() * g.calA() * n);
      const Eigen::RowVector2d tM = t.transpose() * g.M();
      for (int i = 0; i < 3; ++i)
        for (int c = 0; c < 2; ++c) full(2 * b.nodes[i] + c) += b.w * b.N[i] * tM(c);
    };
    for (std::size_t q = 0; q < V.sq.size(); ++q)
      boundary(V.sq[q], maps.surf[q], Eigen::Vector2d(-eq_.dzeta0(V.sq[q].x[0]), 1.0));
    for (std::size_t q = 0; q < V.wq.size(); ++q) {
      const auto& b = V.wq[q];
      const Eigen::Vector2d n = b.tag == BoundaryTag::Bottom     ? Eigen::Vector2d(0.0, -1.0)
                                : b.tag == BoundaryTag::WallLeft ? Eigen::Vector2d(-1.0, 0.0)
                                                                 : Eigen::Vector2d(1.0, 0.0);
      boundary(b, maps.wall[q], n);
    }
    return full;
  }

  ForcingData forcing(double t, const FESpace& V, const GeometryMaps& maps) const
  {
    const auto& cfg = eq_.cfg;
    ForcingData fd;
    fd.load = volume_load(V, maps);
    fd.F3.resize(V.sq.size());
    fd.F4.resize(V.sq.size());
    for (std::size_t q = 0; q < V.sq.size(); ++q) {
      const auto& x = V.sq[q].x;
      const GeometryPoint& g = maps.surf[q];
      const auto u = physical(g, w(x[0], x[1]));
      FieldJets f = FieldJets::vector(u[0], u[1]);
      f.pressure = p(x[0], x[1]);
      const Mat2 S = apply_transformed(OpKind::StressA, f, g, cfg.mu).tensor;
      const double z1 = eq_.dzeta0(x[0]);
      const double deta = g.A.value() + (g.J.value() - 1.0) * z1;
      const Eigen::Vector2d N(-z1 - deta, 1.0);
      const auto a = xi0(x[0]), b = flux(x[0]);
      const std::array<double, 3> theta{a[0] + (t + mc_.eps) * b[0], a[1] + (t + mc_.eps) * b[1],
                                        a[2] + (t + mc_.eps) * b[2]};
      fd.F3[q] = F3(x[0])[0];
      fd.F4[q] = S * N - (L(x[0], theta) - cfg.sigma * F3(x[0])[1]) * N;
    }
    fd.F5.resize(V.wq.size());
    for (std::size_t q = 0; q < V.wq.size(); ++q) {
      const auto& b = V.wq[q];
      const GeometryPoint& g = maps.wall[q];
      const auto u = physical(g, w(b.x[0], b.x[1]));
      FieldJets f = FieldJets::vector(u[0], u[1]);
      f.pressure = p(b.x[0], b.x[1]);
      const Mat2 S = apply_transformed(OpKind::StressA, f, g, cfg.mu).tensor;
      const Eigen::Vector2d nu = b.tag == BoundaryTag::Bottom     ? Eigen::Vector2d(0.0, -1.0)
                                 : b.tag == BoundaryTag::WallLeft ? Eigen::Vector2d(-1.0, 0.0)
                                                                  : Eigen::Vector2d(1.0, 0.0);
      const Eigen::Vector2d uv(u[0].value(), u[1].value());
      fd.F5[q] = (S * nu - cfg.beta * uv).dot(wall_tangent(b.tag));
    }
    // corner law: kappa What = -+ sigma xi'/c - kappa u.N -+ sigma F3
    for (int side = 0; side < 2; ++side) {
      const double x = side == 0 ? -ell_ : ell_;
      const double sign = side == 0 ? -1.0 : 1.0;
      const double rhs = -sign * cfg.sigma * (xi(t, x)[1] / eq_.curvature_factor(x) + F3(x)[0]);
      fd.corner[side] = rhs / cfg.kappa - flux(x)[0];
    }
    return fd;
  }

private:
  const EquilibriumState& eq_;
  ManufacturedCase mc_;
  double ell_, H_;
  SurfaceField phi_;
};

double log_ratio(double a, double b, double ha, double hb) { return std::log(a / b) / std::log(ha / hb); }

} // namespace

ManufacturedErrors manufactured_errors(const EquilibriumState& eq, const MeshParams& mp, const ManufacturedCase& mc)
{
  const auto t0 = std::chrono::steady_clock::now();
  const Discretization d = build_discretization(eq, mp);
  const FESpace& V = d.V;
  const Manufactured ms(eq, mc, mp.n_modes);
  LinearProblem pb;
  pb.disc = &d;
  pb.eps = mc.eps;
  pb.grid = uniform_grid(mc.T, mc.dt);
  pb.with_dt = false;
  const auto grid = pb.grid;
  pb.geometry = [&ms, grid](int n) { return ms.path(grid[n]); };
  pb.forcing = [&ms, &V, grid](int n, const GeometryMaps& maps) { return ms.forcing(grid[n], V, maps); };
  pb.xi0 = interpolate_surface(V, [&](double x) { return ms.xi0(x)[0]; });
  const FlowState st = solve_linear_epsilon(pb);

  const int last = st.nodes() - 1;
  const double t = st.t[last];
  const GeometryMaps maps = build_geometry(st.path[last], eq, V);
  const Vec full = V.expand(st.w[last]);
  ManufacturedErrors e;
  e.h = mp.h;
  e.n_free = V.n_free;
  double ev = 0.0, ep = 0.0;
  for (std::size_t q = 0; q < V.vq.size(); ++q) {
    const auto& vp = V.vq[q];
    const auto uh = physical_velocity(V, maps, full, static_cast<int>(q));
    const auto ue = Manufactured::physical(maps.vol[q], ms.w(vp.x[0], vp.x[1]));
    for (int i = 0; i < 2; ++i) {
      const Jet2 diff = uh[i] - ue[i];
      ev += vp.w * (diff.value() * diff.value() + diff.d1() * diff.d1() + diff.d2() * diff.d2());
    }
    const double dp = V.pressure_jet(st.p[last], static_cast<int>(q)).value() - ms.p(vp.x[0], vp.x[1]).value();
    ep += vp.w * dp * dp;
  }
  std::vector<double> val, der;
  surface_values(V, st.xi[last], val, der);
  double es = 0.0;
  for (std::size_t q = 0; q < V.sq.size(); ++q) {
    const double diff = val[q] - ms.xi(t, V.sq[q].x[0])[0];
    es += V.sq[q].w * diff * diff;
  }
  e.velocity_h1 = std::sqrt(ev);
  e.pressure_l2 = std::sqrt(ep);
  e.surface_l2 = std::sqrt(es);
  e.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return e;
}

ManufacturedStudy manufactured_study(const EquilibriumState& eq, MeshParams mp, const std::vector<double>& hs,
                                     const ManufacturedCase& mc)
{
  ManufacturedStudy s;
  for (double h : hs) {
    mp.h = h;
    s.runs.push_back(manufactured_errors(eq, mp, mc));
  }
  for (std::size_t k = 0; k + 1 < s.runs.size(); ++k) {
    const auto& a = s.runs[k];
    const auto& b = s.runs[k + 1];
    s.velocity_order.push_back(log_ratio(a.velocity_h1, b.velocity_h1, a.h, b.h));
    s.pressure_order.push_back(log_ratio(a.pressure_l2, b.pressure_l2, a.h, b.h));
    s.surface_order.push_back(log_ratio(a.surface_l2, b.surface_l2, a.h, b.h));
  }
  return s;
}

} // namespace contactline
