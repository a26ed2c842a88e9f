#include "contactline/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "contactline/error.hpp"

namespace contactline {

SurfacePerturbation SurfacePerturbation::zero(double ell, int n_modes)
{
  SurfaceField z(ell, n_modes);
  return {z, z, z, z};
}

CutoffSpec CutoffSpec::from_equilibrium(const EquilibriumState& eq)
{
  const double m = eq.min_zeta();
  return {0.25 * m, 0.5 * m};
}

std::array<double, 4> CutoffSpec::eval(double x2) const
{
  if (x2 <= lower) return {0.0, 0.0, 0.0, 0.0};
  if (x2 >= upper) return {x2, 1.0, 0.0, 0.0};
  const double w = upper - lower, t = (x2 - lower) / w;
  const double S = t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
  const double S1 = 30.0 * t * t * (1.0 - t) * (1.0 - t) / w;
  const double S2 = (60.0 * t - 180.0 * t * t + 120.0 * t * t * t) / (w * w);
  const double S3 = (60.0 - 360.0 * t + 360.0 * t * t) / (w * w * w);
  return {x2 * S, S + x2 * S1, 2.0 * S1 + x2 * S2, 3.0 * S2 + x2 * S3};
}

Jet2 GeometryPoint::Kt_jet() const
{
  const Jet2 K = reciprocal(J);
  return -1.0 * (Jt * K * K);
}

Jet2 GeometryPoint::AKt_jet() const
{
  const Jet2 K = reciprocal(J);
  return At * K + A * Kt_jet();
}

Mat2 GeometryPoint::calA() const
{
  const double K = 1.0 / J.value();
  Mat2 m;
  m << 1.0, -A.value() * K, 0.0, K;
  return m;
}

Mat2 GeometryPoint::dt_calA() const
{
  Mat2 m;
  m << 0.0, -AKt_jet().value(), 0.0, Kt_jet().value();
  return m;
}

Mat2 GeometryPoint::M() const
{
  const double K = 1.0 / J.value();
  Mat2 m;
  m << K, 0.0, A.value() * K, 1.0;
  return m;
}

Mat2 GeometryPoint::Minv() const
{
  Mat2 m;
  m << J.value(), 0.0, -A.value(), 1.0;
  return m;
}

Mat2 GeometryPoint::dt_M() const
{
  Mat2 m;
  m << Kt_jet().value(), 0.0, AKt_jet().value(), 0.0;
  return m;
}

Mat2 GeometryPoint::R() const
{
  const double j = J.value();
  Mat2 m;
  m << Kt_jet().value() * j, 0.0, AKt_jet().value() * j, 0.0;
  return m;
}

std::array<Mat2, 2> GeometryPoint::grad_M() const
{
  const Jet2 K = reciprocal(J);
  const Jet2 AK = A * K;
  std::array<Mat2, 2> g;
  g[0] << K.d1(), 0.0, AK.d1(), 0.0;
  g[1] << K.d2(), 0.0, AK.d2(), 0.0;
  return g;
}

std::array<Mat2, 2> GeometryPoint::grad_dt_M() const
{
  const Jet2 Kt = Kt_jet(), AKt = AKt_jet();
  std::array<Mat2, 2> g;
  g[0] << Kt.d1(), 0.0, AKt.d1(), 0.0;
  g[1] << Kt.d2(), 0.0, AKt.d2(), 0.0;
  return g;
}

GeometryEvaluator::GeometryEvaluator(const EquilibriumState& eq, const SurfacePerturbation& pert)
    : GeometryEvaluator(eq, pert, CutoffSpec::from_equilibrium(eq))
{
}

GeometryEvaluator::GeometryEvaluator(const EquilibriumState& eq, const SurfacePerturbation& pert, CutoffSpec cutoff)
    : eq_(&eq), pert_(&pert), cutoff_(cutoff)
{
}

Jet3 GeometryEvaluator::extend(const SurfaceField& f, double x1, double x2) const
{
  const auto z0 = eq_->zeta_derivs(x1);
  const Jet3 e = f.extension(x1, x2 - z0[0]);
  // increments dX = dx1, dZ = dx2 - (zeta0(x1 + dx1) - zeta0(x1))
  Jet3 dZ;
  dZ.coef(0, 1) = 1.0;
  dZ.coef(1, 0) = -z0[1];
  dZ.coef(2, 0) = -z0[2] / 2.0;
  dZ.coef(3, 0) = -z0[3] / 6.0;
  const Jet3 dX = Jet3::variable(0, 0.0);
  std::array<Jet3, 4> Xp, Zp;
  Xp[0] = Zp[0] = Jet3(1.0);
  for (int k = 1; k <= 3; ++k) {
    Xp[k] = Xp[k - 1] * dX;
    Zp[k] = Zp[k - 1] * dZ;
  }
  Jet3 r;
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; a + b <= 3; ++b) {
      const double c = e.coef(a, b);
      if (c != 0.0) r += c * (Xp[a] * Zp[b]);
    }
  return r;
}

GeometryPoint GeometryEvaluator::at(double x1, double x2) const
{
  GeometryPoint g;
  g.J = Jet2(1.0);
  g.Jt = Jet2(0.0);
  const auto phi = cutoff_.eval(x2);
  const bool zero_eta = pert_->eta.is_zero(), zero_dt = pert_->dt_eta.is_zero();
  if (zero_eta && zero_dt) return g;
  const auto z0 = eq_->zeta_derivs(x1);
  const Jet3 weight = jet_in_x2<3>(phi.data()) * reciprocal(jet_in_x1<3>(z0.data()));
  if (!zero_eta) {
    const Jet3 eb = extend(pert_->eta, x1, x2);
    g.eta_bar = eb.value();
    if (phi[0] != 0.0 || phi[1] != 0.0 || phi[2] != 0.0 || phi[3] != 0.0) {
      const Jet3 psi = weight * eb;
      g.psi = psi.value();
      g.A = psi.diff(0);
      g.J = 1.0 + psi.diff(1);
    }
  }
  if (!zero_dt) {
    const Jet3 eb = extend(pert_->dt_eta, x1, x2);
    g.eta_bar_t = eb.value();
    if (phi[0] != 0.0 || phi[1] != 0.0 || phi[2] != 0.0 || phi[3] != 0.0) {
      const Jet3 psi = weight * eb;
      g.At = psi.diff(0);
      g.Jt = psi.diff(1);
    }
  }
  return g;
}

namespace {

GeometryMaps build(const SurfacePerturbation& pert, const EquilibriumState& eq, const FESpace& V, bool parallel)
{
  const GeometryEvaluator ev(eq, pert);
  GeometryMaps maps;
  maps.trivial = pert.eta.is_zero() && pert.dt_eta.is_zero();
  maps.vol.resize(V.vq.size());
  maps.surf.resize(V.sq.size());
  maps.wall.resize(V.wq.size());
  const long nv = static_cast<long>(V.vq.size()), ns = static_cast<long>(V.sq.size()),
             nw = static_cast<long>(V.wq.size());
  const long total = nv + ns + nw;
  auto eval = [&](long k) {
    if (k < nv) maps.vol[k] = ev.at(V.vq[k].x[0], V.vq[k].x[1]);
    else if (k < nv + ns) maps.surf[k - nv] = ev.at(V.sq[k - nv].x[0], V.sq[k - nv].x[1]);
    else maps.wall[k - nv - ns] = ev.at(V.wq[k - nv - ns].x[0], V.wq[k - nv - ns].x[1]);
  };
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (long k = 0; k < total; ++k) eval(k);
  } else {
    for (long k = 0; k < total; ++k) eval(k);
  }
  double mn = 1.0, mx = 1.0;
  for (const auto* set : {&maps.vol, &maps.surf, &maps.wall})
    for (const auto& g : *set) {
      mn = std::min(mn, g.J.value());
      mx = std::max(mx, g.J.value());
    }
  maps.min_J = mn;
  maps.max_J = mx;
  maps.tail_bound = pert.eta.tail_bound() + pert.dt_eta.tail_bound();
  if (!(mn > eq.cfg.j_floor) || !std::isfinite(mx))
    throw Error(ErrorKind::DegenerateMap, "flattening map Jacobian fell below the floor",
                {{"min_J", mn}, {"j_floor", eq.cfg.j_floor}});
  return maps;
}

} // namespace

GeometryMaps build_geometry(const SurfacePerturbation& pert, const EquilibriumState& eq, const FESpace& V, bool parallel)
{
  return build(pert, eq, V, parallel);
}

GeometryMaps build_geometry_serial(const SurfacePerturbation& pert, const EquilibriumState& eq, const FESpace& V)
{
  return build(pert, eq, V, false);
}

std::vector<Mat2> build_R(const GeometryMaps& maps)
{
  std::vector<Mat2> r;
  r.reserve(maps.vol.size());
  for (const auto& g : maps.vol) r.push_back(g.R());
  return r;
}

std::array<double, 2> normal0(const EquilibriumState& eq, double x1) { return {-eq.dzeta0(x1), 1.0}; }

std::array<double, 2> normal(const EquilibriumState& eq, const SurfaceField& eta, double x1)
{
  return {-eq.dzeta0(x1) - eta.eval(x1)[1], 1.0};
}

IdentityReport identity_suite(const EquilibriumState& eq, const SurfacePerturbation& pert, const FESpace& V)
{
  IdentityReport rep;
  const GeometryEvaluator ev(eq, pert);
  const GeometryMaps maps = build_geometry(pert, eq, V);
  rep.min_J = maps.min_J;
  for (const auto& g : maps.vol) rep.piola_jet = std::max(rep.piola_jet, std::abs(g.J.d1() - g.A.d2()));
  rep.fd_steps = {0.02, 0.01, 0.005};
  for (double h : rep.fd_steps) {
    double r = 0.0;
    for (std::size_t q = 0; q < V.vq.size(); q += 3) {
      const double x1 = V.vq[q].x[0], x2 = V.vq[q].x[1];
      if (std::abs(x1) > eq.cfg.ell - h) continue;
      const double dJ = (ev.at(x1 + h, x2).J.value() - ev.at(x1 - h, x2).J.value()) / (2 * h);
      const double dA = (ev.at(x1, x2 + h).A.value() - ev.at(x1, x2 - h).A.value()) / (2 * h);
      r = std::max(r, std::abs(dJ - dA));
    }
    rep.piola_fd.push_back(r);
  }
  for (std::size_t q = 0; q < V.sq.size(); ++q) {
    const auto& g = maps.surf[q];
    const double x1 = V.sq[q].x[0];
    const auto n0 = normal0(eq, x1);
    const auto n = normal(eq, pert.eta, x1);
    const Eigen::Vector2d N0(n0[0], n0[1]), N(n[0], n[1]);
    rep.normal_identity = std::max(rep.normal_identity, (g.J.value() * g.calA() * N0 - N).norm());
    const Eigen::Vector2d dtN(-pert.dt_eta.eval(x1)[1], 0.0);
    rep.normal_transport = std::max(rep.normal_transport, (g.R().transpose() * N + dtN).norm());
  }
  for (std::size_t q = 0; q < V.wq.size(); ++q) {
    const auto& g = maps.wall[q];
    const bool bottom = V.wq[q].tag == BoundaryTag::Bottom;
    const Eigen::Vector2d u = bottom ? Eigen::Vector2d(1.0, 0.0) : Eigen::Vector2d(0.0, 1.0);
    const Eigen::Vector2d nu = bottom ? Eigen::Vector2d(0.0, -1.0) : Eigen::Vector2d(1.0, 0.0);
    rep.wall_tangency = std::max(rep.wall_tangency, std::abs((g.R() * u).dot(nu)));
  }
  return rep;
}

} // namespace contactline
