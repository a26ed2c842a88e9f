#include "contactline/energy.hpp"

#include <algorithm>
#include <cmath>

#include "contactline/operators.hpp"

namespace contactline {

namespace {

using VJets = std::vector<std::array<Jet2, 2>>;

const GeometryPoint kIdentity{};
const GeometryPoint& point(const std::vector<GeometryPoint>& v, std::size_t q) { return v.empty() ? kIdentity : v[q]; }

// u = M w and dt u = dt M w + M dw as jets
std::array<Jet2, 2> physical(const GeometryPoint& g, const std::array<Jet2, 2>& w)
{
  const Jet2 K = g.K_jet();
  return {K * w[0], g.A * K * w[0] + w[1]};
}

std::array<Jet2, 2> physical_dt(const GeometryPoint& g, const std::array<Jet2, 2>& w, const std::array<Jet2, 2>& dw)
{
  const Jet2 K = g.K_jet();
  return {g.Kt_jet() * w[0] + K * dw[0], g.AKt_jet() * w[0] + g.A * K * dw[0] + dw[1]};
}

Vec pack(const VJets& f)
{
  Vec v(static_cast<Eigen::Index>(f.size()) * 2 * Jet2::size);
  Eigen::Index k = 0;
  for (const auto& a : f)
    for (int c = 0; c < 2; ++c)
      for (int i = 0; i < Jet2::size; ++i) v(k++) = a[c][i];
  return v;
}

VJets unpack(const Vec& v)
{
  VJets f(static_cast<std::size_t>(v.size()) / (2 * Jet2::size));
  Eigen::Index k = 0;
  for (auto& a : f)
    for (int c = 0; c < 2; ++c)
      for (int i = 0; i < Jet2::size; ++i) a[c][i] = v(k++);
  return f;
}

std::vector<Jet2> pressure_jets(const FESpace& V, const Vec& p, double shift)
{
  std::vector<Jet2> out(V.vq.size());
  for (std::size_t q = 0; q < V.vq.size(); ++q) out[q] = V.pressure_jet(p, static_cast<int>(q)) - Jet2(shift);
  return out;
}

double sq(double x) { return x * x; }

double wall_l2(const FESpace& V, const VJets& u)
{
  double s = 0.0;
  for (std::size_t q = 0; q < V.wq.size(); ++q) s += V.wq[q].w * (sq(u[q][0].value()) + sq(u[q][1].value()));
  return s;
}

// mu/2 int |D_A u|^2 J + beta int_{Sigma_s} |u . tau|^2 J
double physical_dissipation(const FESpace& V, const GeometryMaps& maps, const VJets& uv, const VJets& uw)
{
  const auto& cfg = V.mesh.eq.cfg;
  double s = 0.0;
  for (std::size_t q = 0; q < V.vq.size(); ++q) {
    const GeometryPoint& g = point(maps.vol, q);
    const Mat2 D = apply_transformed(OpKind::SymGradA, FieldJets::vector(uv[q][0], uv[q][1]), g).tensor;
    s += 0.5 * cfg.mu * V.vq[q].w * g.J.value() * D.squaredNorm();
  }
  for (std::size_t q = 0; q < V.wq.size(); ++q) {
    const auto& b = V.wq[q];
    const Eigen::Vector2d u(uw[q][0].value(), uw[q][1].value());
    s += cfg.beta * b.w * point(maps.wall, q).J.value() * sq(u.dot(wall_tangent(b.tag)));
  }
  return s;
}

double bracket(const Vec& v, double kappa)
{
  if (v.size() == 0) return 0.0;
  return kappa * (sq(v(0)) + sq(v(v.size() - 1)));
}

double bracket(const SurfaceField& f, double kappa)
{
  const double l = f.ell();
  return kappa * (sq(f(l)) + sq(f(-l)));
}

struct PathTerms {
  std::array<double, 5> e{}; ///< |eta|^2_{5/2,delta}, |dt eta|^2_{3/2}, |dt^j eta|^2_1 (j = 0..2)
  double d = 0.0;            ///< integrand of D(eta)
};

PathTerms path_terms(const WeightedNormEvaluator& nm, const SurfacePerturbation& p, double kappa)
{
  auto n2 = [&](const SurfaceField& f, double s, bool w) { return sq(nm.boundary(field_sampler(f), s, w)); };
  PathTerms r;
  const double eta52 = n2(p.eta, 2.5, true), deta32 = n2(p.dt_eta, 1.5, false);
  r.e = {eta52, deta32, n2(p.eta, 1.0, false), n2(p.dt_eta, 1.0, false), n2(p.dt2_eta, 1.0, false)};
  r.d = eta52 + n2(p.dt_eta, 2.5, true) + n2(p.eta, 1.5, false) + deta32 + n2(p.dt2_eta, 1.5, false) +
        n2(p.dt3_eta, 0.5, true) + bracket(p.dt_eta, kappa) + bracket(p.dt2_eta, kappa) + bracket(p.dt3_eta, kappa);
  return r;
}

} // namespace

std::vector<SurfacePerturbation> own_surface_path(const Discretization& disc, const FlowState& st,
                                                  const SurfaceField* eta0)
{
  const int nm = disc.n_modes;
  std::vector<SurfacePerturbation> out;
  out.reserve(st.nodes());
  for (int n = 0; n < st.nodes(); ++n) {
    SurfacePerturbation p = SurfacePerturbation::zero(disc.ell(), nm);
    p.eta = (n == 0 && eta0) ? *eta0 : surface_field_from_nodal(disc.V, st.xi[n], nm);
    p.dt_eta = surface_field_from_nodal(disc.V, st.dt_xi[n], nm);
    if (st.has_dt) p.dt2_eta = surface_field_from_nodal(disc.V, st.dt2_xi[n], nm);
    if (st.has_dt3) p.dt3_eta = surface_field_from_nodal(disc.V, st.dt3_xi[n], nm);
    out.push_back(std::move(p));
  }
  return out;
}

const std::vector<std::string>& energy_term_names()
{
  static const std::vector<std::string> n{"u_W2d",  "dtu_H1", "p_W1d",   "dtp_L2",  "xi_W52d",
                                          "dtxi_H32", "xi_H1", "dtxi_H1", "dt2xi_H1"};
  return n;
}

const std::vector<std::string>& dissipation_term_names()
{
  static const std::vector<std::string> n{
      "u_W2d",      "dtu_W2d",      "p_W1d",     "dtp_W1d",     "xi_W52d",      "dtxi_W52d",
      "u_H1",       "dtu_H1",       "dt2u_H1",   "u_L2wall",    "dtu_L2wall",   "dt2u_L2wall",
      "uN_corner",  "dtuN_corner",  "dt2uN_corner", "p_L2",      "dtp_L2",       "dt2p_L2",
      "xi_H32",     "dtxi_H32",     "dt2xi_H32", "dt3xi_W12d"};
  return n;
}

PathFunctionals path_functionals(const WeightedNormEvaluator& norms, const std::vector<SurfacePerturbation>& path,
                                 const std::vector<double>& grid, double kappa)
{
  PathFunctionals f;
  std::array<double, 5> sup{};
  double prev = 0.0;
  for (std::size_t n = 0; n < path.size(); ++n) {
    const PathTerms t = path_terms(norms, path[n], kappa);
    for (int i = 0; i < 5; ++i) sup[i] = std::max(sup[i], t.e[i]);
    if (n > 0) f.D += 0.5 * (grid[n] - grid[n - 1]) * (prev + t.d);
    prev = t.d;
  }
  for (double s : sup) f.E += s;
  return f;
}

EnergyReport uniform_energy_monitor(const Discretization& disc, const FlowState& st,
                                    const std::vector<SurfacePerturbation>& surface, double E0)
{
  const FESpace& V = disc.V;
  const SurfaceOps& ops = disc.ops;
  const auto& cfg = disc.cfg();
  const WeightedNormEvaluator nm(V, cfg.delta);
  const int N = st.nodes();
  const bool has_dt = st.has_dt, has_dt2 = st.has_dt && N >= 3, has_dt3 = st.has_dt3;

  EnergyReport rep;
  rep.E0 = E0;
  if (!has_dt) rep.absent = {"dt_u", "dt_p", "dt2_xi"};
  if (!has_dt2) {
    rep.absent.push_back("dt2_u");
    rep.absent.push_back("dt2_p");
  } else {
    rep.differenced = {"dt2_u", "dt2_p"};
  }
  if (!has_dt3)
    rep.absent.push_back("dt3_xi");
  else
    rep.differenced.push_back("dt3_xi");

  // pointwise fields per node
  std::vector<GeometryMaps> maps(N);
  std::vector<VJets> u(N), uw(N), du(N), duw(N);
  for (int n = 0; n < N; ++n) {
    maps[n] = build_geometry(st.path[n], disc.eq(), V);
    const Vec w = V.expand(st.w[n]);
    const Vec dw = has_dt ? V.expand(st.dw[n]) : Vec::Zero(V.n_vel);
    u[n].resize(V.vq.size());
    du[n].resize(V.vq.size());
    for (std::size_t q = 0; q < V.vq.size(); ++q) {
      const auto wj = V.velocity_jets(w, static_cast<int>(q));
      const auto dwj = V.velocity_jets(dw, static_cast<int>(q));
      u[n][q] = physical(point(maps[n].vol, q), wj);
      du[n][q] = physical_dt(point(maps[n].vol, q), wj, dwj);
    }
    uw[n].resize(V.wq.size());
    duw[n].resize(V.wq.size());
    for (std::size_t q = 0; q < V.wq.size(); ++q) {
      const auto wj = V.boundary_velocity_jets(w, V.wq[q]);
      const auto dwj = V.boundary_velocity_jets(dw, V.wq[q]);
      uw[n][q] = physical(point(maps[n].wall, q), wj);
      duw[n][q] = physical_dt(point(maps[n].wall, q), wj, dwj);
    }
  }
  std::vector<VJets> d2u(N), d2uw(N);
  std::vector<Vec> d2p(N);
  if (has_dt2) {
    std::vector<Vec> a(N), b(N);
    for (int n = 0; n < N; ++n) {
      a[n] = pack(du[n]);
      b[n] = pack(duw[n]);
    }
    const auto da = time_derivative(a, st.t), db = time_derivative(b, st.t);
    d2p = time_derivative(st.dp, st.t);
    for (int n = 0; n < N; ++n) {
      d2u[n] = unpack(da[n]);
      d2uw[n] = unpack(db[n]);
    }
  }

  const double kappa = cfg.kappa;
  std::array<double, 5> path_sup{};
  std::vector<double> E_sup(energy_term_names().size(), 0.0);
  double prev_D = 0.0, prev_path_d = 0.0, int_path = 0.0;
  for (int n = 0; n < N; ++n) {
    EnergySample s;
    s.t = st.t[n];
    const SurfacePerturbation& xi = surface[n];
    auto v2 = [&](const VJets& f, int k, bool w) { return sq(nm.volume(f, k, w)); };
    auto s2 = [&](const std::vector<Jet2>& f, int k, bool w) { return sq(nm.volume_scalar(f, k, w)); };
    auto b2 = [&](const SurfaceField& f, double k, bool w) { return sq(nm.boundary(field_sampler(f), k, w)); };
    const double pm = pressure_mean(V, st.p[n]);
    const auto p_ring = pressure_jets(V, st.p[n], pm);
    const auto p_plain = pressure_jets(V, st.p[n], 0.0);
    std::vector<Jet2> dp_ring, dp_plain, d2p_plain;
    if (has_dt) {
      dp_ring = pressure_jets(V, st.dp[n], pressure_mean(V, st.dp[n]));
      dp_plain = pressure_jets(V, st.dp[n], 0.0);
    }
    if (has_dt2) d2p_plain = pressure_jets(V, d2p[n], 0.0);

    const double u_W2 = v2(u[n], 2, true), xi52 = b2(xi.eta, 2.5, true), dxi32 = b2(xi.dt_eta, 1.5, false);
    const double du_H1 = has_dt ? v2(du[n], 1, false) : 0.0;
    const double dp_L2r = has_dt ? s2(dp_ring, 0, false) : 0.0;
    s.E_terms = {u_W2,  du_H1, s2(p_ring, 1, true), dp_L2r, xi52, dxi32, b2(xi.eta, 1.0, false),
                 b2(xi.dt_eta, 1.0, false), has_dt ? b2(xi.dt2_eta, 1.0, false) : 0.0};
    s.D_terms = {u_W2,
                 has_dt ? v2(du[n], 2, true) : 0.0,
                 s2(p_ring, 1, true),
                 has_dt ? s2(dp_ring, 1, true) : 0.0,
                 xi52,
                 b2(xi.dt_eta, 2.5, true),
                 v2(u[n], 1, false),
                 du_H1,
                 has_dt2 ? v2(d2u[n], 1, false) : 0.0,
                 wall_l2(V, uw[n]),
                 has_dt ? wall_l2(V, duw[n]) : 0.0,
                 has_dt2 ? wall_l2(V, d2uw[n]) : 0.0,
                 bracket(st.dt_xi[n], kappa),
                 has_dt ? bracket(st.dt2_xi[n], kappa) : 0.0,
                 has_dt3 ? bracket(st.dt3_xi[n], kappa) : 0.0,
                 s2(p_plain, 0, false),
                 has_dt ? s2(dp_plain, 0, false) : 0.0,
                 has_dt2 ? s2(d2p_plain, 0, false) : 0.0,
                 b2(xi.eta, 1.5, false),
                 dxi32,
                 has_dt ? b2(xi.dt2_eta, 1.5, false) : 0.0,
                 has_dt3 ? b2(xi.dt3_eta, 0.5, true) : 0.0};
    for (double v : s.E_terms) s.E += v;
    for (double v : s.D_terms) s.D += v;
    for (std::size_t i = 0; i < E_sup.size(); ++i) E_sup[i] = std::max(E_sup[i], s.E_terms[i]);

    s.script_E = 0.5 * (st.xi[n].dot(ops.S * st.xi[n]) + st.dt_xi[n].dot(ops.S * st.dt_xi[n]));
    s.script_D = physical_dissipation(V, maps[n], u[n], uw[n]) + bracket(st.dt_xi[n], kappa);
    if (has_dt) {
      s.script_E += 0.5 * st.dt2_xi[n].dot(ops.S * st.dt2_xi[n]);
      s.script_D += physical_dissipation(V, maps[n], du[n], duw[n]) + bracket(st.dt2_xi[n], kappa);
    }
    if (has_dt2) s.script_D += physical_dissipation(V, maps[n], d2u[n], d2uw[n]);
    if (has_dt3) s.script_D += bracket(st.dt3_xi[n], kappa);

    const PathTerms pt = path_terms(nm, st.path[n], kappa);
    for (int i = 0; i < 5; ++i) path_sup[i] = std::max(path_sup[i], pt.e[i]);
    if (n > 0) {
      const double dt = st.t[n] - st.t[n - 1];
      int_path += 0.5 * dt * (prev_path_d + pt.d);
      rep.int_D += 0.5 * dt * (prev_D + s.D);
    }
    prev_path_d = pt.d;
    prev_D = s.D;
    for (double v : path_sup) s.frak_E += v;
    s.frak_D = int_path;
    s.frak_K = s.frak_E + s.frak_D;

    s.min_J = maps[n].min_J;
    if (n < static_cast<int>(st.div_residual.size())) s.div_residual = st.div_residual[n];
    if (n < static_cast<int>(st.kinematic_residual.size())) s.kinematic_residual = st.kinematic_residual[n];
    const double eta_norm = std::sqrt(pt.e[0]);
    if (eta_norm > 0.0) rep.diffeo_constant = std::max(rep.diffeo_constant, (1.0 - s.min_J) / eta_norm);
    rep.sup_E = std::max(rep.sup_E, s.E);
    rep.samples.push_back(std::move(s));
  }
  for (double v : E_sup) rep.frak_K_solution += v;
  rep.frak_K_solution += rep.int_D;
  rep.bound_constant = E0 > 0.0 ? (rep.sup_E + rep.int_D) / E0 : 0.0;
  return rep;
}

} // namespace contactline
