#include "contactline/linear_solver.hpp"

#include <cmath>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "contactline/divfree_basis.hpp"
#include "contactline/error.hpp"
#include "contactline/volterra.hpp"

namespace contactline {

Discretization build_discretization(const EquilibriumState& eq, const MeshParams& mp)
{
  Discretization d;
  d.V = build_fe_space(build_mesh(eq, mp.h, mp.effective_grading(eq.cfg.delta)));
  d.ops = build_surface_ops(d.V);
  d.B0 = assemble_divergence(d.V);
  d.n_modes = mp.n_modes;
  return d;
}

namespace {

const GeometryPoint kIdentity{};
const GeometryPoint& point(const std::vector<GeometryPoint>& v, std::size_t q) { return v.empty() ? kIdentity : v[q]; }

SpMat saddle_matrix(const SpMat& K, const SpMat& B0)
{
  const int nf = static_cast<int>(K.rows()), np = static_cast<int>(B0.rows());
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(K.nonZeros() + 2 * B0.nonZeros());
  for (int k = 0; k < K.outerSize(); ++k)
    for (SpMat::InnerIterator it(K, k); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
  for (int k = 0; k < B0.outerSize(); ++k)
    for (SpMat::InnerIterator it(B0, k); it; ++it) {
      t.emplace_back(nf + it.row(), it.col(), -it.value());
      t.emplace_back(it.col(), nf + it.row(), -it.value());
    }
  SpMat S(nf + np, nf + np);
  S.setFromTriplets(t.begin(), t.end());
  return S;
}

class SaddleSolver {
public:
  void factor(const SpMat& K, const SpMat& B0)
  {
    nf_ = static_cast<int>(K.rows());
    np_ = static_cast<int>(B0.rows());
    lu_.compute(saddle_matrix(K, B0));
    if (lu_.info() != Eigen::Success)
      throw Error(ErrorKind::StepSingular, "saddle-point factorization failed", {{"detail", lu_.lastErrorMessage()}});
  }
  void solve(const Vec& f, Vec& w, Vec& p) const
  {
    Vec rhs = Vec::Zero(nf_ + np_);
    rhs.head(nf_) = f;
    const Vec x = lu_.solve(rhs);
    w = x.head(nf_);
    p = x.tail(np_);
  }

private:
  Eigen::SparseLU<SpMat> lu_;
  int nf_ = 0, np_ = 0;
};

double kinematic_gap(const FESpace& V, const SurfaceOps& ops, const Vec& w)
{
  const Vec full = V.expand(w);
  std::vector<double> val, der;
  surface_values(V, ops.T * w, val, der);
  double s = 0.0;
  for (std::size_t q = 0; q < V.sq.size(); ++q) {
    const auto& b = V.sq[q];
    double w1 = 0.0, w2 = 0.0;
    for (int i = 0; i < 3; ++i) {
      w1 += b.N[i] * full(2 * b.nodes[i]);
      w2 += b.N[i] * full(2 * b.nodes[i] + 1);
    }
    const double flux = -V.mesh.eq.dzeta0(b.x[0]) * w1 + w2;
    s += b.w * (val[q] - flux) * (val[q] - flux);
  }
  return std::sqrt(s);
}

Vec load_at(const LinearProblem& prob, int n, const GeometryMaps& maps)
{
  const auto& d = *prob.disc;
  if (!prob.forcing) return Vec::Zero(d.V.n_free);
  return assemble_forcing(d.V, maps, d.ops, prob.forcing(n, maps));
}

SurfacePerturbation path_at(const LinearProblem& prob, int n)
{
  if (prob.geometry) return prob.geometry(n);
  return SurfacePerturbation::zero(prob.disc->ell(), prob.disc->n_modes);
}

Vec initial_xi(const LinearProblem& prob)
{
  return prob.xi0.size() > 0 ? prob.xi0 : Vec::Zero(prob.disc->V.n_s);
}

double symmetric_min_eig(const Eigen::MatrixXd& G)
{
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (G + G.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

Eigen::MatrixXd evolution_matrix(const SaddleSolver& solver, const SurfaceOps& ops, const SpMat& TSt)
{
  const int ns = ops.n_s;
  Eigen::MatrixXd L(ns, ns);
  for (int j = 0; j < ns; ++j) {
    Vec w, p;
    solver.solve(-TSt * Vec::Unit(ns, j), w, p);
    L.col(j) = ops.T * w;
  }
  return L;
}

// Largest real part among the eigenvalues of the evolution map (relative to the spectral radius).
double growth_rate(const SaddleSolver& solver, const SurfaceOps& ops, const SpMat& TSt)
{
  const int ns = ops.n_s;
  Eigen::EigenSolver<Eigen::MatrixXd> es(evolution_matrix(solver, ops, TSt), false);
  double re = -1e300, rad = 0.0;
  for (int i = 0; i < ns; ++i) {
    re = std::max(re, es.eigenvalues()(i).real());
    rad = std::max(rad, std::abs(es.eigenvalues()(i)));
  }
  return rad > 0.0 ? re / rad : 0.0;
}

} // namespace

Eigen::MatrixXd surface_evolution_matrix(const Discretization& d, double eps)
{
  const SurfaceOps& ops = d.ops;
  const SpMat Tt = ops.T.transpose();
  const GeometryMaps flat = build_geometry(SurfacePerturbation::zero(d.ell(), d.n_modes), d.eq(), d.V);
  const SpMat K = assemble_velocity(d.V, flat, d.cfg(), false).A + Tt * (eps * ops.S + ops.Kc - eps * ops.Bb) * ops.T;
  SaddleSolver solver;
  solver.factor(K, d.B0);
  return evolution_matrix(solver, ops, SpMat(Tt * ops.S));
}

std::vector<Vec> time_derivative(const std::vector<Vec>& f, const std::vector<double>& grid)
{
  const int n = static_cast<int>(f.size());
  std::vector<Vec> out(n);
  if (n < 2) {
    for (auto& v : out) v = Vec::Zero(f.empty() ? 0 : f[0].size());
    return out;
  }
  if (n == 2) {
    const Vec d = (f[1] - f[0]) / (grid[1] - grid[0]);
    out[0] = out[1] = d;
    return out;
  }
  // derivative of the quadratic through three consecutive nodes, evaluated at node j
  auto lagrange = [&](int a, int j) {
    const double x0 = grid[a], x1 = grid[a + 1], x2 = grid[a + 2], x = grid[j];
    const double c0 = ((x - x1) + (x - x2)) / ((x0 - x1) * (x0 - x2));
    const double c1 = ((x - x0) + (x - x2)) / ((x1 - x0) * (x1 - x2));
    const double c2 = ((x - x0) + (x - x1)) / ((x2 - x0) * (x2 - x1));
    return Vec(c0 * f[a] + c1 * f[a + 1] + c2 * f[a + 2]);
  };
  out[0] = lagrange(0, 0);
  for (int j = 1; j < n - 1; ++j) out[j] = lagrange(j - 1, j);
  out[n - 1] = lagrange(n - 3, n - 1);
  return out;
}

double pressure_mean(const FESpace& V, const Vec& p)
{
  double s = 0.0, m = 0.0;
  for (std::size_t q = 0; q < V.vq.size(); ++q) {
    s += V.vq[q].w * V.pressure_jet(p, static_cast<int>(q)).value();
    m += V.vq[q].w;
  }
  return s / m;
}

FlowState solve_linear_epsilon(const LinearProblem& prob)
{
  if (!prob.disc) throw Error(ErrorKind::InvalidConfig, "linear problem without a discretization");
  const Discretization& d = *prob.disc;
  const FESpace& V = d.V;
  const SurfaceOps& ops = d.ops;
  const auto& cfg = d.cfg();
  const int N = static_cast<int>(prob.grid.size());
  const double eps = prob.eps;
  const SpMat Tt = ops.T.transpose();
  const SpMat surf_eps = eps * ops.S + ops.Kc - eps * ops.Bb;
  const SpMat K_surf = Tt * surf_eps * ops.T;
  const SpMat TSt = Tt * ops.S;
  const SpMat TST = TSt * ops.T;
  const bool static_geometry = !prob.geometry;

  FlowState st;
  st.t = prob.grid;
  st.step_margin = corner_coercivity_margin(ops, eps);
  st.path.reserve(N);
  std::vector<VelocityMatrices> mats;
  std::vector<GeometryMaps> maps_keep;
  SaddleSolver solver;
  double factored_dt = -1.0;
  VelocityMatrices vm_static;

  for (int n = 0; n < N; ++n) {
    st.path.push_back(path_at(prob, n));
    GeometryMaps maps = build_geometry(st.path.back(), d.eq(), V, prob.parallel);
    VelocityMatrices vm;
    if (static_geometry && n > 0) {
      vm = vm_static;
    } else {
      vm = assemble_velocity(V, maps, cfg, prob.with_dt, prob.parallel);
      if (static_geometry) vm_static = vm;
    }
    const double dtn = n > 0 ? prob.grid[n] - prob.grid[n - 1] : 0.0;
    const SpMat K = vm.A + K_surf;
    if (!static_geometry || std::abs(dtn - factored_dt) > 1e-14 * (1.0 + dtn)) {
      solver.factor(SpMat(K + (0.5 * dtn) * TST), d.B0);
      factored_dt = static_geometry ? dtn : -1.0;
    }
    if (n == 0 && prob.check_stability) {
      st.max_growth = growth_rate(solver, ops, TSt);
      if (st.max_growth > 1e-8)
        throw Error(ErrorKind::NotPositiveDefinite, "surface evolution operator has a growing mode",
                    {{"growth_rate", st.max_growth}, {"surface_margin", st.step_margin}});
    }
    const Vec F = load_at(prob, n, maps);
    const Vec xihat = n == 0 ? initial_xi(prob) : Vec(st.xi[n - 1] + 0.5 * dtn * st.dt_xi[n - 1]);
    Vec w, p;
    solver.solve(F - TSt * xihat, w, p);
    const Vec Tw = ops.T * w;
    st.w.push_back(w);
    st.p.push_back(p);
    st.dt_xi.push_back(Tw);
    st.xi.push_back(xihat + 0.5 * dtn * Tw);
    st.load.push_back(F);
    st.min_J.push_back(maps.min_J);
    st.div_residual.push_back((d.B0 * w).cwiseAbs().maxCoeff());
    st.kinematic_residual.push_back(kinematic_gap(V, ops, w));
    st.pressure_mean.push_back(pressure_mean(V, p));
    st.dissipation.push_back(w.dot(vm.A * w) + Tw.dot(surf_eps * Tw));
    st.power.push_back(F.dot(w));
    if (prob.with_dt) {
      mats.push_back(std::move(vm));
      maps_keep.push_back(std::move(maps));
    }
  }

  if (prob.with_dt && N > 0) {
    std::vector<Vec> dF;
    if (!prob.dt_forcing) dF = time_derivative(st.load, prob.grid);
    bool factored = false;
    for (int n = 0; n < N; ++n) {
      if (!static_geometry || !factored) {
        solver.factor(SpMat(mats[n].A + K_surf), d.B0);
        factored = true;
      }
      const Vec dFn = prob.dt_forcing ? assemble_forcing(V, maps_keep[n], ops, prob.dt_forcing(n, maps_keep[n])) : dF[n];
      Vec dw, dp;
      solver.solve(dFn - mats[n].Adot * st.w[n] - TST * st.w[n], dw, dp);
      st.dw.push_back(dw);
      st.dp.push_back(dp);
      st.dt2_xi.push_back(ops.T * dw);
    }
    st.has_dt = true;
    if (N >= 3) {
      st.dt3_xi = time_derivative(st.dt2_xi, prob.grid);
      st.has_dt3 = true;
    }
  }
  return st;
}

GalerkinSystem assemble_galerkin_system(const LinearProblem& prob, const DivFreeBasis& basis)
{
  const Discretization& d = *prob.disc;
  const SurfaceOps& ops = d.ops;
  const double eps = prob.eps;
  const Eigen::MatrixXd& W = basis.W;
  const Eigen::MatrixXd TW = ops.T * W;
  const Eigen::MatrixXd surf = Eigen::MatrixXd(eps * ops.S + ops.Kc - eps * ops.Bb);
  const Eigen::MatrixXd Sd = Eigen::MatrixXd(ops.S);
  const Eigen::MatrixXd surf_part = TW.transpose() * surf * TW;
  const Vec xi0 = initial_xi(prob);
  const Vec TSxi0 = ops.T.transpose() * (ops.S * xi0);

  GalerkinSystem gs;
  gs.memory = TW.transpose() * Sd * TW;
  const int N = static_cast<int>(prob.grid.size());
  for (int n = 0; n < N; ++n) {
    const SurfacePerturbation pert = path_at(prob, n);
    const GeometryMaps maps = build_geometry(pert, d.eq(), d.V, prob.parallel);
    const VelocityMatrices vm = assemble_velocity(d.V, maps, d.cfg(), false, prob.parallel);
    Eigen::MatrixXd G = W.transpose() * (vm.A * W) + surf_part;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(G);
    if (lu.rank() < G.rows())
      throw Error(ErrorKind::NotPositiveDefinite, "Galerkin Gram matrix is singular", {{"node", n}});
    gs.min_sym_eig.push_back(symmetric_min_eig(G));
    gs.gram.push_back(std::move(G));
    gs.load.push_back(W.transpose() * (load_at(prob, n, maps) - TSxi0));
  }
  return gs;
}

Vec recover_pressure(const Discretization& disc, const SpMat& step_matrix, const Vec& w, const Vec& rhs)
{
  const SpMat BBt = disc.B0 * SpMat(disc.B0.transpose());
  Eigen::SimplicialLDLT<SpMat> ldlt(BBt);
  if (ldlt.info() != Eigen::Success) throw Error(ErrorKind::RankDeficient, "B0 B0' is singular");
  const Vec r = step_matrix * w - rhs;
  return ldlt.solve(disc.B0 * r);
}

FlowState solve_linear_galerkin(const LinearProblem& prob, const DivFreeBasis& basis)
{
  const Discretization& d = *prob.disc;
  const FESpace& V = d.V;
  const SurfaceOps& ops = d.ops;
  const double eps = prob.eps;
  const GalerkinSystem gs = assemble_galerkin_system(prob, basis);
  const int N = static_cast<int>(prob.grid.size());

  std::vector<Eigen::MatrixXd> kern(N);
  std::vector<Eigen::VectorXd> rhs(N);
  for (int n = 0; n < N; ++n) {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(gs.gram[n]);
    kern[n] = lu.solve(gs.memory);
    rhs[n] = lu.solve(gs.load[n]);
  }
  const auto dco = volterra_solve([&](int n, int) { return kern[n]; }, [&](int n) { return rhs[n]; }, prob.grid);

  FlowState st;
  st.t = prob.grid;
  st.step_margin = corner_coercivity_margin(ops, eps);
  const SpMat surf_eps = eps * ops.S + ops.Kc - eps * ops.Bb;
  const SpMat K_surf = SpMat(ops.T.transpose()) * surf_eps * ops.T;
  const Vec xi0 = initial_xi(prob);
  for (int n = 0; n < N; ++n) {
    st.path.push_back(path_at(prob, n));
    const GeometryMaps maps = build_geometry(st.path.back(), d.eq(), V, prob.parallel);
    const VelocityMatrices vm = assemble_velocity(V, maps, d.cfg(), false, prob.parallel);
    const Vec w = basis.W * dco[n];
    const Vec Tw = ops.T * w;
    const Vec xi = n == 0 ? xi0 : Vec(st.xi[n - 1] + 0.5 * (prob.grid[n] - prob.grid[n - 1]) * (st.dt_xi[n - 1] + Tw));
    const Vec F = load_at(prob, n, maps);
    const SpMat K = vm.A + K_surf;
    const Vec p = recover_pressure(d, K, w, F - ops.T.transpose() * (ops.S * xi));
    st.w.push_back(w);
    st.p.push_back(p);
    st.xi.push_back(xi);
    st.dt_xi.push_back(Tw);
    st.load.push_back(F);
    st.min_J.push_back(maps.min_J);
    st.div_residual.push_back((d.B0 * w).cwiseAbs().maxCoeff());
    st.kinematic_residual.push_back(kinematic_gap(V, ops, w));
    st.pressure_mean.push_back(pressure_mean(V, p));
    st.dissipation.push_back(w.dot(vm.A * w) + Tw.dot(surf_eps * Tw));
    st.power.push_back(F.dot(w));
  }
  return st;
}

EnergyBalance energy_balance(const FlowState& st, const SurfaceOps& ops)
{
  EnergyBalance eb;
  const int N = st.nodes();
  for (int n = 0; n < N; ++n) eb.energy.push_back(0.5 * st.xi[n].dot(ops.S * st.xi[n]));
  eb.dissipation = st.dissipation;
  eb.power = st.power;
  eb.imbalance.assign(N, 0.0);
  for (int n = 1; n < N; ++n) {
    const double dt = st.t[n] - st.t[n - 1];
    eb.imbalance[n] = (eb.energy[n] - eb.energy[n - 1]) / dt + 0.5 * (eb.dissipation[n] + eb.dissipation[n - 1]) -
                      0.5 * (eb.power[n] + eb.power[n - 1]);
    eb.max_imbalance = std::max(eb.max_imbalance, std::abs(eb.imbalance[n]));
  }
  return eb;
}

namespace {

using JetMat = std::array<std::array<Jet2, 2>, 2>;
using JetMat1 = std::array<std::array<Jet1, 2>, 2>;

// (D_a v)_ij = a_jk d_k v_i + a_ik d_k v_j as first-order jets
JetMat1 sym_grad(const JetMat& a, const std::array<Jet2, 2>& v)
{
  JetMat1 D;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Jet1 s;
      for (int k = 0; k < 2; ++k)
        s += a[j][k].truncate<1>() * v[i].diff(k) + a[i][k].truncate<1>() * v[j].diff(k);
      D[i][j] = s;
    }
  return D;
}

// (div_a X)_i = a_jk d_k X_ij
Eigen::Vector2d div_tensor(const JetMat& a, const JetMat1& X)
{
  Eigen::Vector2d r = Eigen::Vector2d::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) r(i) += a[j][k].value() * (k == 0 ? X[i][j].d1() : X[i][j].d2());
  return r;
}

Mat2 values(const JetMat1& X)
{
  Mat2 m;
  m << X[0][0].value(), X[0][1].value(), X[1][0].value(), X[1][1].value();
  return m;
}

struct PointJets {
  JetMat a, at, R;
  std::array<Jet2, 2> u, Ru;
};

PointJets point_jets(const GeometryPoint& g, const std::array<Jet2, 2>& w)
{
  PointJets pj;
  const Jet2 K = g.K_jet(), AK = g.A * K;
  const Jet2 Kt = g.Kt_jet(), AKt = g.AKt_jet();
  pj.a = {{{Jet2(1.0), -1.0 * AK}, {Jet2(), K}}};
  pj.at = {{{Jet2(), -1.0 * AKt}, {Jet2(), Kt}}};
  pj.R = {{{Kt * g.J, Jet2()}, {AKt * g.J, Jet2()}}};
  pj.u = {K * w[0], AK * w[0] + w[1]};
  for (int i = 0; i < 2; ++i) pj.Ru[i] = pj.R[i][0] * pj.u[0] + pj.R[i][1] * pj.u[1];
  return pj;
}

} // namespace

DtForcings assemble_dt_forcings(const Discretization& disc, const GeometryMaps& maps, const Vec& w, const Vec& p,
                                const std::vector<double>& theta_minus_F3)
{
  const FESpace& V = disc.V;
  const auto& cfg = disc.cfg();
  const double mu = cfg.mu;
  const Vec full = V.expand(w);
  DtForcings out;
  out.G1.resize(V.vq.size());
  for (std::size_t q = 0; q < V.vq.size(); ++q) {
    const GeometryPoint& g = point(maps.vol, q);
    const PointJets pj = point_jets(g, V.velocity_jets(full, static_cast<int>(q)));
    const Jet2 pq = p.size() > 0 ? V.pressure_jet(p, static_cast<int>(q)) : Jet2();
    const Mat2 a = g.calA();
    const Eigen::Vector2d gradp(a(0, 0) * pq.d1() + a(0, 1) * pq.d2(), a(1, 0) * pq.d1() + a(1, 1) * pq.d2());
    Mat2 Rv;
    Rv << pj.R[0][0].value(), pj.R[0][1].value(), pj.R[1][0].value(), pj.R[1][1].value();
    // R D_A u as first-order jets
    const JetMat1 Du = sym_grad(pj.a, pj.u);
    JetMat1 RD;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) RD[i][j] = pj.R[i][0].truncate<1>() * Du[0][j] + pj.R[i][1].truncate<1>() * Du[1][j];
    const JetMat1 DRu = sym_grad(pj.a, pj.Ru);
    const JetMat1 Dt = sym_grad(pj.at, pj.u);
    JetMat1 X;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) X[i][j] = DRu[i][j] + Dt[i][j] - RD[i][j];
    out.G1[q] = Rv.transpose() * gradp + mu * div_tensor(pj.a, X);
  }
  out.G4.resize(V.sq.size());
  for (std::size_t q = 0; q < V.sq.size(); ++q) {
    const auto& b = V.sq[q];
    const GeometryPoint& g = point(maps.surf, q);
    const PointJets pj = point_jets(g, V.boundary_velocity_jets(full, b));
    const double z1 = disc.eq().dzeta0(b.x[0]);
    const double deta = g.A.value() + (g.J.value() - 1.0) * z1;
    const double dteta = g.At.value() + g.Jt.value() * z1;
    const Eigen::Vector2d N(-z1 - deta, 1.0), dN(-dteta, 0.0);
    const double pv = p.size() > 0 ? V.boundary_pressure(p, b) : 0.0;
    const Mat2 S = pv * Mat2::Identity() - mu * values(sym_grad(pj.a, pj.u));
    const double th = theta_minus_F3.empty() ? 0.0 : theta_minus_F3[q];
    out.G4[q] = mu * values(sym_grad(pj.a, pj.Ru)) * N - S * dN + mu * values(sym_grad(pj.at, pj.u)) * N + th * dN;
  }
  out.G5.resize(V.wq.size());
  for (std::size_t q = 0; q < V.wq.size(); ++q) {
    const auto& b = V.wq[q];
    const GeometryPoint& g = point(maps.wall, q);
    const PointJets pj = point_jets(g, V.boundary_velocity_jets(full, b));
    const Eigen::Vector2d nu = b.tag == BoundaryTag::Bottom    ? Eigen::Vector2d(0.0, -1.0)
                               : b.tag == BoundaryTag::WallLeft ? Eigen::Vector2d(-1.0, 0.0)
                                                                : Eigen::Vector2d(1.0, 0.0);
    const Eigen::Vector2d tau = wall_tangent(b.tag);
    const Eigen::Vector2d Ru(pj.Ru[0].value(), pj.Ru[1].value());
    out.G5[q] = (mu * values(sym_grad(pj.a, pj.Ru)) * nu + mu * values(sym_grad(pj.at, pj.u)) * nu + cfg.beta * Ru).dot(tau);
  }
  return out;
}

} // namespace contactline
