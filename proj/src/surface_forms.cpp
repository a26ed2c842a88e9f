#include "contactline/surface_forms.hpp"

#include <cmath>

#include "contactline/spline.hpp"

namespace contactline {

SurfaceOps build_surface_ops(const FESpace& V)
{
  const Mesh& m = V.mesh;
  const auto& cfg = m.eq.cfg;
  SurfaceOps ops;
  ops.sigma = cfg.sigma;
  ops.g = cfg.g;
  ops.kappa = cfg.kappa;
  const int ns = V.n_s;
  ops.n_s = ns;
  std::vector<Eigen::Triplet<double>> ts, tm, tk;
  ops.mean_weights = Vec::Zero(ns);
  for (const auto& b : V.sq) {
    const int base = 2 * b.edge;
    const double c = m.eq.curvature_factor(b.x[0]);
    for (int i = 0; i < 3; ++i) {
      ops.mean_weights(base + i) += b.w * b.N[i];
      for (int j = 0; j < 3; ++j) {
        tm.emplace_back(base + i, base + j, b.w * b.N[i] * b.N[j]);
        tk.emplace_back(base + i, base + j, b.w * b.dN[i] * b.dN[j]);
        ts.emplace_back(base + i, base + j, b.w * (cfg.g * b.N[i] * b.N[j] + cfg.sigma * b.dN[i] * b.dN[j] / c));
      }
    }
  }
  ops.S.resize(ns, ns);
  ops.S.setFromTriplets(ts.begin(), ts.end());
  ops.mass.resize(ns, ns);
  ops.mass.setFromTriplets(tm.begin(), tm.end());
  ops.stiff.resize(ns, ns);
  ops.stiff.setFromTriplets(tk.begin(), tk.end());

  ops.Kc.resize(ns, ns);
  ops.Kc.insert(0, 0) = cfg.kappa;
  ops.Kc.insert(ns - 1, ns - 1) = cfg.kappa;

  // endpoint derivatives of the boundary elements
  const double ell = cfg.ell;
  const double dl = m.xr[2] - m.xr[0], dr = m.xr[ns - 1] - m.xr[ns - 3];
  const double cl = m.eq.curvature_factor(-ell), cr = m.eq.curvature_factor(ell);
  std::vector<Eigen::Triplet<double>> tb;
  const double left[3] = {-3.0 / dl, 4.0 / dl, -1.0 / dl};
  const double right[3] = {1.0 / dr, -4.0 / dr, 3.0 / dr};
  for (int k = 0; k < 3; ++k) {
    tb.emplace_back(0, k, -cfg.sigma / cl * left[k]);
    tb.emplace_back(ns - 1, ns - 3 + k, cfg.sigma / cr * right[k]);
  }
  ops.Bb.resize(ns, ns);
  ops.Bb.setFromTriplets(tb.begin(), tb.end());

  std::vector<Eigen::Triplet<double>> tt;
  const int fy = m.fine_ny();
  for (int k = 0; k < ns; ++k) {
    const int node = m.node(k, fy - 1);
    const double slope = m.eq.dzeta0(m.xr[k]);
    const int f0 = V.free_dof(node, 0), f1 = V.free_dof(node, 1);
    if (f0 >= 0) tt.emplace_back(k, f0, -slope);
    if (f1 >= 0) tt.emplace_back(k, f1, 1.0);
  }
  ops.T.resize(ns, V.n_free);
  ops.T.setFromTriplets(tt.begin(), tt.end());
  return ops;
}

Vec interpolate_surface(const FESpace& V, const std::function<double(double)>& f)
{
  Vec v(V.n_s);
  for (int k = 0; k < V.n_s; ++k) v(k) = f(V.surface_x[k]);
  return v;
}

void surface_values(const FESpace& V, const Vec& phi, std::vector<double>& val, std::vector<double>& der)
{
  val.assign(V.sq.size(), 0.0);
  der.assign(V.sq.size(), 0.0);
  for (std::size_t q = 0; q < V.sq.size(); ++q) {
    const auto& b = V.sq[q];
    for (int i = 0; i < 3; ++i) {
      val[q] += b.N[i] * phi(2 * b.edge + i);
      der[q] += b.dN[i] * phi(2 * b.edge + i);
    }
  }
}

SurfaceField surface_field_from_nodal(const FESpace& V, const Vec& phi, int n_modes)
{
  const int ns = V.n_s;
  const double ell = V.mesh.eq.cfg.ell;
  if (phi.cwiseAbs().maxCoeff() == 0.0) return SurfaceField(ell, n_modes);
  const auto& x = V.surface_x;
  const double dl = x[2] - x[0], dr = x[ns - 1] - x[ns - 3];
  const double sl = (-3.0 * phi(0) + 4.0 * phi(1) - phi(2)) / dl;
  const double sr = (phi(ns - 3) - 4.0 * phi(ns - 2) + 3.0 * phi(ns - 1)) / dr;
  const CubicSpline sp(x, std::vector<double>(phi.data(), phi.data() + ns), sl, sr);
  // P2 data do not determine a third derivative; a noisy one would enter the
  // polynomial part, whose extension grows with depth.
  return SurfaceField::fit(ell, n_modes, [&](double t) {
    auto v = sp.eval(t);
    if (std::abs(t) >= ell) v[3] = 0.0;
    return v;
  });
}

double surface_mean(const SurfaceOps& ops, const Vec& phi, double ell) { return ops.mean_weights.dot(phi) / (2.0 * ell); }

double corner_coercivity_margin(const SurfaceOps& ops, double eps)
{
  const Eigen::MatrixXd M = Eigen::MatrixXd(eps * ops.S + ops.Kc - eps * ops.Bb);
  const Eigen::MatrixXd sym = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

} // namespace contactline
