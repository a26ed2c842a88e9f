#include "contactline/nonlinear.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SparseCholesky>

#include "contactline/error.hpp"

namespace contactline {

namespace {

double sq(double x) { return x * x; }

std::vector<std::array<Jet2, 2>> velocity_field(const FESpace& V, const GeometryMaps& maps, const Vec& w)
{
  const Vec full = V.expand(w);
  std::vector<std::array<Jet2, 2>> u(V.vq.size());
  for (std::size_t q = 0; q < V.vq.size(); ++q) u[q] = physical_velocity(V, maps, full, static_cast<int>(q));
  return u;
}

double trapezoid(const std::vector<double>& t, const std::vector<double>& f)
{
  double s = 0.0;
  for (std::size_t n = 1; n < t.size(); ++n) s += 0.5 * (t[n] - t[n - 1]) * (f[n] + f[n - 1]);
  return s;
}

enum class DofGroup { Interior, Surface, Wall, Corner };

std::vector<DofGroup> dof_groups(const FESpace& V)
{
  const Mesh& m = V.mesh;
  std::vector<DofGroup> g(V.n_free);
  for (int f = 0; f < V.n_free; ++f) {
    const int node = V.free_dofs[f] / 2;
    const int i = node % m.fine_nx(), j = node / m.fine_nx();
    const bool side = i == 0 || i == m.fine_nx() - 1, top = j == m.fine_ny() - 1, bottom = j == 0;
    g[f] = top && side ? DofGroup::Corner : top ? DofGroup::Surface : (side || bottom) ? DofGroup::Wall : DofGroup::Interior;
  }
  return g;
}

// A degenerate flattening map means the surface is already too large for the ball.
template <class F>
auto ball_guard(double sigma, F&& f)
{
  try {
    return f();
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DegenerateMap) throw;
    nlohmann::json det = e.details();
    det["cause"] = "DegenerateMap";
    det["sigma_small"] = sigma;
    throw Error(ErrorKind::BallExit, "coefficient geometry left the diffeomorphism regime", det);
  }
}

} // namespace

ForcingData nonlinear_forcing(const Discretization& disc, const SurfacePerturbation& eta, const ResponseFunction& rf)
{
  ForcingData fd;
  const FESpace& V = disc.V;
  if (!eta.eta.is_zero()) {
    fd.F3.resize(V.sq.size());
    for (std::size_t q = 0; q < V.sq.size(); ++q) {
      const double x = V.sq[q].x[0];
      fd.F3[q] = curvature_remainder(disc.eq().dzeta0(x), eta.eta.eval(x)[1]).value;
    }
  }
  const double l = disc.ell();
  fd.corner = {rf.What(eta.dt_eta(-l)), rf.What(eta.dt_eta(l))};
  return fd;
}

ForcingData nonlinear_dt_forcing(const Discretization& disc, const SurfacePerturbation& eta,
                                 const ResponseFunction& rf)
{
  ForcingData fd;
  const FESpace& V = disc.V;
  if (!eta.dt_eta.is_zero()) {
    fd.F3.resize(V.sq.size());
    for (std::size_t q = 0; q < V.sq.size(); ++q) {
      const double x = V.sq[q].x[0];
      fd.F3[q] = curvature_remainder(disc.eq().dzeta0(x), eta.eta.eval(x)[1]).dz * eta.dt_eta.eval(x)[1];
    }
  }
  const double l = disc.ell();
  fd.corner = {rf.dWhat(eta.dt_eta(-l)) * eta.dt2_eta(-l), rf.dWhat(eta.dt_eta(l)) * eta.dt2_eta(l)};
  return fd;
}

IterateDistance iterate_distance(const Discretization& disc, const Iterate& a, const Iterate& b)
{
  const FESpace& V = disc.V;
  const WeightedNormEvaluator nm(V, disc.cfg().delta);
  const int N = static_cast<int>(a.t.size());
  if (static_cast<int>(b.t.size()) != N) throw Error(ErrorKind::InvalidConfig, "iterates live on different grids");
  std::vector<double> fu(N), fp(N), fc(N);
  IterateDistance d;
  for (int n = 0; n < N; ++n) {
    std::vector<std::array<Jet2, 2>> du(V.vq.size());
    for (std::size_t q = 0; q < du.size(); ++q)
      for (int c = 0; c < 2; ++c) du[q][c] = a.u[n][q][c] - b.u[n][q][c];
    fu[n] = sq(nm.volume(du, 1, false));
    const Vec dp = a.p[n] - b.p[n];
    const double mean = pressure_mean(V, dp);
    std::vector<Jet2> pj(V.vq.size());
    for (std::size_t q = 0; q < pj.size(); ++q) pj[q] = V.pressure_jet(dp, static_cast<int>(q)) - Jet2(mean);
    fp[n] = sq(nm.volume_scalar(pj, 0, false));
    const SurfaceField de = a.eta[n].eta - b.eta[n].eta;
    d.deta = std::max(d.deta, nm.boundary(field_sampler(de), 2.5, true));
    fc[n] = disc.cfg().kappa * (sq(a.dt_corner[n][0] - b.dt_corner[n][0]) + sq(a.dt_corner[n][1] - b.dt_corner[n][1]));
  }
  d.du = std::sqrt(trapezoid(a.t, fu));
  d.dp = std::sqrt(trapezoid(a.t, fp));
  d.dcorner = std::sqrt(trapezoid(a.t, fc));
  return d;
}

Iterate starting_iterate(const FixedPointProblem& fp)
{
  const Discretization& d = *fp.disc;
  const auto& data = fp.init.data;
  const double l = d.ell();
  Iterate it;
  it.t = fp.grid;
  for (double t : fp.grid) {
    SurfacePerturbation p = SurfacePerturbation::zero(l, data.eta.n_modes());
    p.eta = data.eta + t * data.dt_eta;
    p.dt_eta = data.dt_eta;
    if (fp.start == FixedPointProblem::Start::Taylor) {
      p.eta += (0.5 * t * t) * data.dt2_eta;
      p.dt_eta += t * data.dt2_eta;
      p.dt2_eta = data.dt2_eta;
    }
    const GeometryMaps maps = ball_guard(fp.cc.sigma_small, [&] { return build_geometry(p, d.eq(), d.V, fp.parallel); });
    it.u.push_back(velocity_field(d.V, maps, fp.init.w0));
    it.w.push_back(fp.init.w0);
    it.p.push_back(fp.init.p0);
    it.dt_corner.push_back({p.dt_eta(-l), p.dt_eta(l)});
    it.eta.push_back(std::move(p));
  }
  const WeightedNormEvaluator nm(d.V, d.cfg().delta);
  it.K = path_functionals(nm, it.eta, it.t, d.cfg().kappa).K();
  return it;
}

Iterate contraction_step(const FixedPointProblem& fp, const Iterate& in)
{
  const Discretization& d = *fp.disc;
  const double sigma = fp.cc.sigma_small;
  if (std::sqrt(in.K) > sigma)
    throw Error(ErrorKind::BallExit, "input iterate lies outside the ball K^{1/2} <= sigma_small",
                {{"K_sqrt", std::sqrt(in.K)}, {"sigma_small", sigma}});
  const ResponseFunction rf = response_function(d.cfg());
  LinearProblem pb;
  pb.disc = &d;
  pb.eps = fp.eps;
  pb.grid = fp.grid;
  pb.geometry = [&in](int n) { return in.eta[n]; };
  pb.forcing = [&](int n, const GeometryMaps&) { return nonlinear_forcing(d, in.eta[n], rf); };
  pb.dt_forcing = [&](int n, const GeometryMaps&) { return nonlinear_dt_forcing(d, in.eta[n], rf); };
  pb.xi0 = fp.init.xi0;
  pb.with_dt = true;
  pb.parallel = fp.parallel;

  Iterate out;
  out.t = fp.grid;
  out.flow = ball_guard(sigma, [&] { return solve_linear_epsilon(pb); });
  const FlowState& st = out.flow;
  out.eta = own_surface_path(d, st, &fp.init.data.eta);
  out.w = st.w;
  out.p = st.p;
  for (int n = 0; n < st.nodes(); ++n) {
    const GeometryMaps maps = build_geometry(in.eta[n], d.eq(), d.V, fp.parallel);
    out.u.push_back(velocity_field(d.V, maps, st.w[n]));
    out.dt_corner.push_back({st.dt_xi[n](0), st.dt_xi[n](st.dt_xi[n].size() - 1)});
  }
  out.K = uniform_energy_monitor(d, st, out.eta, fp.init.E0).frak_K_solution;
  if (!std::isfinite(out.K)) throw Error(ErrorKind::NonFinite, "iterate norm is not finite");
  if (std::sqrt(out.K) > sigma)
    throw Error(ErrorKind::BallExit, "iterate left the ball K^{1/2} <= sigma_small",
                {{"K_sqrt", std::sqrt(out.K)}, {"sigma_small", sigma}});
  return out;
}

double NonlinearResiduals::max() const
{
  return std::max({momentum, dynamic, slip, corner, divergence, no_penetration, kinematic, initial});
}

NonlinearResiduals nonlinear_residuals(const FixedPointProblem& fp, const Iterate& it)
{
  const Discretization& d = *fp.disc;
  const FESpace& V = d.V;
  const SurfaceOps& ops = d.ops;
  const FlowState& st = it.flow;
  const int N = st.nodes();
  const ResponseFunction rf = response_function(d.cfg());
  NonlinearResiduals r;
  if (N == 0) return r;

  const GeometryMaps flat = build_geometry(SurfacePerturbation::zero(d.ell(), d.n_modes), d.eq(), V, fp.parallel);
  const SpMat A0 = assemble_velocity(V, flat, d.cfg(), false, fp.parallel).A;
  Eigen::SimplicialLDLT<SpMat> riesz(A0);
  if (riesz.info() != Eigen::Success) throw Error(ErrorKind::NotPositiveDefinite, "velocity form is not definite");
  const auto groups = dof_groups(V);
  const SpMat Tt = ops.T.transpose();
  const SpMat surf = fp.eps * ops.S + ops.Kc - fp.eps * ops.Bb;
  const SpMat B0t = d.B0.transpose();

  std::array<std::vector<double>, 4> g2;
  for (auto& v : g2) v.assign(N, 0.0);
  std::vector<double> total(N);
  for (int n = 0; n < N; ++n) {
    const GeometryMaps maps = build_geometry(it.eta[n], d.eq(), V, fp.parallel);
    const SpMat A = assemble_velocity(V, maps, d.cfg(), false, fp.parallel).A;
    const Vec F = assemble_forcing(V, maps, ops, nonlinear_forcing(d, it.eta[n], rf));
    const Vec& w = st.w[n];
    const Vec res = A * w + Tt * (surf * (ops.T * w)) + Tt * (ops.S * st.xi[n]) - B0t * st.p[n] - F;
    total[n] = std::sqrt(std::max(0.0, res.dot(riesz.solve(res))));
    r.per_node.push_back(total[n]);
    for (int k = 0; k < 4; ++k) {
      Vec part = Vec::Zero(res.size());
      for (int f = 0; f < V.n_free; ++f)
        if (static_cast<int>(groups[f]) == k) part(f) = res(f);
      g2[k][n] = part.dot(riesz.solve(part));
    }
    r.divergence = std::max(r.divergence, (d.B0 * w).cwiseAbs().maxCoeff());
    const Vec full = V.expand(w);
    const Mesh& m = V.mesh;
    for (int node = 0; node < m.n_nodes(); ++node) {
      const int i = node % m.fine_nx(), j = node / m.fine_nx();
      if (i == 0 || i == m.fine_nx() - 1) r.no_penetration = std::max(r.no_penetration, std::abs(full(2 * node)));
      if (j == 0) r.no_penetration = std::max(r.no_penetration, std::abs(full(2 * node + 1)));
    }
    if (n > 0) {
      const double dt = st.t[n] - st.t[n - 1];
      const Vec k = st.xi[n] - st.xi[n - 1] - 0.5 * dt * (ops.T * w + ops.T * st.w[n - 1]);
      r.kinematic = std::max(r.kinematic, k.cwiseAbs().maxCoeff());
    }
  }
  r.momentum = std::sqrt(trapezoid(st.t, g2[0]));
  r.dynamic = std::sqrt(trapezoid(st.t, g2[1]));
  r.slip = std::sqrt(trapezoid(st.t, g2[2]));
  r.corner = std::sqrt(trapezoid(st.t, g2[3]));
  r.initial = (st.xi[0] - fp.init.xi0).cwiseAbs().maxCoeff();
  return r;
}

FixedPointResult run_fixed_point(const FixedPointProblem& fp)
{
  if (!fp.disc) throw Error(ErrorKind::InvalidConfig, "fixed-point problem without a discretization");
  if (fp.eps > 0.0) check_epsilon(fp.disc->eq(), fp.eps);
  if (fp.init.E0 > fp.cc.E0_max)
    throw Error(ErrorKind::BallExit, "initial energy exceeds E0_max", {{"E0", fp.init.E0}, {"E0_max", fp.cc.E0_max}});
  FixedPointResult res;
  Iterate prev = starting_iterate(fp);
  nlohmann::json ratios = nlohmann::json::array();
  int rising = 0;
  for (int k = 1; k <= fp.cc.max_iter; ++k) {
    Iterate next = contraction_step(fp, prev);
    IterationRecord rec;
    rec.iter = k;
    rec.d = iterate_distance(*fp.disc, next, prev);
    rec.K = next.K;
    if (!res.log.empty() && res.log.back().d.total() > 0.0) rec.ratio = rec.d.total() / res.log.back().d.total();
    res.log.push_back(rec);
    ratios.push_back(rec.ratio);
    prev = std::move(next);
    if (rec.d.total() < fp.cc.tol_fix) {
      res.converged = true;
      break;
    }
    rising = rec.ratio >= 1.0 ? rising + 1 : 0;
    if (rising >= 3)
      throw Error(ErrorKind::NoContraction, "successive distances stopped decreasing",
                  {{"ratios", ratios}, {"eps", fp.eps}});
  }
  if (!res.converged)
    throw Error(ErrorKind::NoContraction, "fixed-point iteration did not reach tol_fix",
                {{"ratios", ratios}, {"eps", fp.eps}, {"last_distance", res.log.back().d.total()}});
  res.residuals = nonlinear_residuals(fp, prev);
  res.solution = std::move(prev);
  return res;
}

NonlinearRun solve_nonlinear(const FixedPointProblem& fp)
{
  NonlinearRun run;
  run.eps = fp.eps;
  run.fixed = run_fixed_point(fp);
  const Discretization& d = *fp.disc;
  const Iterate& s = run.fixed.solution;
  run.energy = uniform_energy_monitor(d, s.flow, s.eta, fp.init.E0);
  const WeightedNormEvaluator nm(d.V, d.cfg().delta);
  run.eta_functionals = path_functionals(nm, s.flow.path, s.t, d.cfg().kappa);
  return run;
}

SweepReport epsilon_sweep(const Discretization& disc, const SurfacePerturbation& data, const std::vector<double>& grid,
                          const ContractionConfig& cc, bool with_eps_zero)
{
  auto run_one = [&](double eps) {
    SweepEntry e;
    e.eps = eps;
    try {
      FixedPointProblem fp;
      fp.disc = &disc;
      fp.eps = eps;
      fp.grid = grid;
      fp.cc = cc;
      fp.init = construct_initial_data(disc, data, eps);
      e.run = solve_nonlinear(fp);
      e.ok = true;
    } catch (const Error& err) {
      e.error = err.to_json().dump();
    }
    return e;
  };
  SweepReport rep;
  for (double eps : cc.eps_schedule) rep.entries.push_back(run_one(eps));
  const SweepEntry* last = nullptr;
  double emax = 0.0, emin = 1e300;
  for (const auto& e : rep.entries) {
    if (!e.ok) continue;
    if (last) rep.distances.push_back(iterate_distance(disc, last->run.fixed.solution, e.run.fixed.solution).total());
    last = &e;
    emax = std::max(emax, e.run.energy.sup_E);
    emin = std::min(emin, e.run.energy.sup_E);
  }
  rep.monotone = rep.distances.size() >= 2;
  for (std::size_t i = 1; i < rep.distances.size(); ++i)
    if (!(rep.distances[i] < rep.distances[i - 1])) rep.monotone = false;
  rep.sup_E_variation = emax > 0.0 ? (emax - emin) / emax : 0.0;
  const SweepEntry* first = nullptr;
  for (const auto& e : rep.entries)
    if (e.ok && !first) first = &e;
  if (first && last && first->run.energy.sup_E > 0.0)
    rep.energy_degrades = last->run.energy.sup_E > 1.2 * first->run.energy.sup_E;
  if (with_eps_zero) {
    rep.eps_zero = run_one(0.0);
    if (rep.eps_zero.ok && last)
      rep.eps_zero_distance = iterate_distance(disc, last->run.fixed.solution, rep.eps_zero.run.fixed.solution).total();
  }
  return rep;
}

} // namespace contactline
