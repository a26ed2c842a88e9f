#include "contactline/initial_data.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>
#include <boost/math/quadrature/gauss.hpp>

#include "contactline/error.hpp"

namespace contactline {

ResponseFunction response_function(const PhysicalConfig& cfg) { return {cfg.kappa, cfg.c3}; }

double CompatibilityResiduals::max_abs() const
{
  double m = 0.0;
  for (int i = 0; i < 2; ++i) m = std::max({m, std::abs(first[i]), std::abs(second[i])});
  return m;
}

CompatibilityResiduals compatibility_residuals(const EquilibriumState& eq, const ResponseFunction& rf,
                                               const SurfacePerturbation& data)
{
  CompatibilityResiduals r;
  const double ell = eq.cfg.ell, sigma = eq.cfg.sigma;
  for (int side = 0; side < 2; ++side) {
    const double x = side == 0 ? -ell : ell;
    const double sign = side == 0 ? -1.0 : 1.0; // the "+-" of the corner law
    const double c = eq.curvature_factor(x);
    const double y = eq.dzeta0(x);
    const double deta = data.eta.eval(x)[1];
    const auto v = data.dt_eta.eval(x);
    const double z2 = data.dt2_eta.eval(x)[0];
    const Remainder R = curvature_remainder(y, deta);
    r.first[side] = rf.W(v[0]) + sign * sigma * (deta / c + R.value);
    r.second[side] = rf.kappa * (1.0 + rf.dWhat(v[0])) * z2 + sign * sigma * (v[1] / c + R.dz * v[1]);
  }
  return r;
}

namespace {

double integrate_field(const SurfaceField::Sampler& f, double ell)
{
  constexpr int panels = 32;
  double s = 0.0;
  const double h = 2.0 * ell / panels;
  for (int k = 0; k < panels; ++k) {
    const double a = -ell + k * h;
    s += boost::math::quadrature::gauss<double, 10>::integrate([&](double x) { return f(x)[0]; }, a, a + h);
  }
  return s;
}

// septic smoothstep (C^3 at both ends) and its derivatives on [0, 1]
std::array<double, 4> smoothstep7(double t)
{
  if (t >= 1.0) return {1.0, 0.0, 0.0, 0.0};
  const double u = 1.0 - t;
  return {t * t * t * t * (35.0 - 84.0 * t + 70.0 * t * t - 20.0 * t * t * t), 140.0 * t * t * t * u * u * u,
          420.0 * t * t * u * u * (1.0 - 2.0 * t), 840.0 * t * u * (1.0 - 5.0 * t + 5.0 * t * t)};
}

// interior profile with the corner values replaced, fitted, then shifted to zero mean
SurfaceField blend(const SurfaceField::Sampler& interior, std::array<double, 2> corner, double ell, int n_modes)
{
  const double r = 0.25 * ell;
  const std::array<double, 4> pl = interior ? interior(-ell) : std::array<double, 4>{};
  const std::array<double, 4> pr = interior ? interior(ell) : std::array<double, 4>{};
  const std::array<double, 2> jump{corner[0] - pl[0], corner[1] - pr[0]};
  if (!interior && jump[0] == 0.0 && jump[1] == 0.0) return SurfaceField(ell, n_modes);
  const SurfaceField raw = SurfaceField::fit(ell, n_modes, [=](double x) {
    std::array<double, 4> f = interior ? interior(x) : std::array<double, 4>{};
    for (int side = 0; side < 2; ++side) {
      const double dir = side == 0 ? 1.0 : -1.0; // d(dist)/dx
      const double dist = side == 0 ? x + ell : ell - x;
      const auto s = smoothstep7(dist / r);
      double scale = 1.0;
      f[0] += jump[side] * (1.0 - s[0]);
      for (int k = 1; k < 4; ++k) {
        scale *= dir / r;
        f[k] -= jump[side] * s[k] * scale;
      }
    }
    return f;
  });
  // (1 - u^2)^3 has zero value and slope at the corners
  const SurfaceField bump = SurfaceField::fit(ell, n_modes, [=](double x) {
    const double u = x / ell, b = 1.0 - u * u;
    return std::array<double, 4>{b * b * b, -6.0 * u * b * b / ell, (-6.0 * b * b + 24.0 * u * u * b) / (ell * ell),
                                 (72.0 * u * b - 48.0 * u * u * u) / (ell * ell * ell)};
  });
  auto sampler = [](const SurfaceField& f) { return [&f](double x) { return f.eval(x); }; };
  const double c = integrate_field(sampler(raw), ell) / integrate_field(sampler(bump), ell);
  return raw - c * bump;
}

} // namespace

RepairedData repair_compatibility(const SurfaceField& eta0, const ResponseFunction& rf, const EquilibriumState& eq,
                                  const SurfaceField::Sampler& dt_eta_interior,
                                  const SurfaceField::Sampler& dt2_eta_interior)
{
  const double ell = eq.cfg.ell, sigma = eq.cfg.sigma;
  const int nm = eta0.n_modes();
  RepairedData out;
  out.data = SurfacePerturbation::zero(ell, nm);
  out.data.eta = eta0;
  for (int side = 0; side < 2; ++side) {
    const double x = side == 0 ? -ell : ell;
    const double sign = side == 0 ? -1.0 : 1.0;
    const double deta = eta0.eval(x)[1];
    const double rhs = -sign * sigma * (deta / eq.curvature_factor(x) + curvature_remainder(eq.dzeta0(x), deta).value);
    out.dt_eta_corner[side] = response_solve(rhs, rf);
  }
  out.data.dt_eta = blend(dt_eta_interior, out.dt_eta_corner, ell, nm);
  for (int side = 0; side < 2; ++side) {
    const double x = side == 0 ? -ell : ell;
    const double sign = side == 0 ? -1.0 : 1.0;
    const double z = out.dt_eta_corner[side];
    const double dz = out.data.dt_eta.eval(x)[1];
    const double dR = curvature_remainder(eq.dzeta0(x), eta0.eval(x)[1]).dz;
    out.dt2_eta_corner[side] =
        -sign * sigma * (dz / eq.curvature_factor(x) + dR * dz) / (rf.kappa * (1.0 + rf.dWhat(z)));
  }
  out.data.dt2_eta = blend(dt2_eta_interior, out.dt2_eta_corner, ell, nm);
  return out;
}

void b_form_solve(const Discretization& disc, const SpMat& A0, const Vec& rhs, Vec& w, Vec& p)
{
  const SpMat K = A0 + SpMat(disc.ops.T.transpose()) * disc.ops.S * disc.ops.T;
  const int nf = disc.V.n_free, np = disc.V.n_p;
  std::vector<Eigen::Triplet<double>> t;
  for (int k = 0; k < K.outerSize(); ++k)
    for (SpMat::InnerIterator it(K, k); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
  for (int k = 0; k < disc.B0.outerSize(); ++k)
    for (SpMat::InnerIterator it(disc.B0, k); it; ++it) {
      t.emplace_back(nf + it.row(), it.col(), -it.value());
      t.emplace_back(it.col(), nf + it.row(), -it.value());
    }
  SpMat M(nf + np, nf + np);
  M.setFromTriplets(t.begin(), t.end());
  Eigen::SparseLU<SpMat> lu(M);
  if (lu.info() != Eigen::Success) throw Error(ErrorKind::StepSingular, "B-form saddle factorization failed");
  Vec b = Vec::Zero(nf + np);
  b.head(nf) = rhs;
  const Vec x = lu.solve(b);
  w = x.head(nf);
  p = x.tail(np);
}

namespace {

// Stokes solve with prescribed normal flux: unknowns (w, p, flux multiplier, slack c);
// rows: momentum, divergence, T w - c = d1, zero pressure mean.
void constrained_stokes(const Discretization& disc, const SpMat& A0, const Vec& d1, Vec& w, Vec& p, double& slack)
{
  const FESpace& V = disc.V;
  const int nf = V.n_free, np = V.n_p, ns = V.n_s;
  const int n = nf + np + ns + 1;
  Vec pm = Vec::Zero(np);
  for (const auto& vp : V.vq) {
    const auto& pc = V.mesh.p1cells[vp.cell];
    for (int k = 0; k < 3; ++k) pm(pc[k]) += vp.w * vp.L[k].value();
  }
  std::vector<Eigen::Triplet<double>> t;
  for (int k = 0; k < A0.outerSize(); ++k)
    for (SpMat::InnerIterator it(A0, k); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
  for (int k = 0; k < disc.B0.outerSize(); ++k)
    for (SpMat::InnerIterator it(disc.B0, k); it; ++it) {
      t.emplace_back(nf + it.row(), it.col(), -it.value());
      t.emplace_back(it.col(), nf + it.row(), -it.value());
    }
  for (int k = 0; k < disc.ops.T.outerSize(); ++k)
    for (SpMat::InnerIterator it(disc.ops.T, k); it; ++it) {
      t.emplace_back(nf + np + it.row(), it.col(), it.value());
      t.emplace_back(it.col(), nf + np + it.row(), it.value());
    }
  for (int j = 0; j < ns; ++j) t.emplace_back(nf + np + j, n - 1, -1.0);
  for (int k = 0; k < np; ++k) t.emplace_back(n - 1, nf + k, pm(k));
  SpMat M(n, n);
  M.setFromTriplets(t.begin(), t.end());
  Eigen::SparseLU<SpMat> lu(M);
  if (lu.info() != Eigen::Success) throw Error(ErrorKind::StepSingular, "initial Stokes factorization failed");
  Vec b = Vec::Zero(n);
  b.segment(nf + np, ns) = d1;
  const Vec x = lu.solve(b);
  w = x.head(nf);
  p = x.segment(nf, np);
  slack = x(n - 1);
}

} // namespace

double initial_energy(const WeightedNormEvaluator& norms, const SurfacePerturbation& data)
{
  const double a = norms.boundary(field_sampler(data.eta), 2.5, true);
  const double b = norms.boundary(field_sampler(data.dt_eta), 1.5, false);
  double s = a * a + b * b;
  for (const SurfaceField* f : {&data.eta, &data.dt_eta, &data.dt2_eta}) {
    const double n1 = norms.boundary(field_sampler(*f), 1.0, false);
    s += n1 * n1;
  }
  return s;
}

InitialData construct_initial_data(const Discretization& disc, const SurfacePerturbation& data, double eps, double tol)
{
  const FESpace& V = disc.V;
  const SurfaceOps& ops = disc.ops;
  const EquilibriumState& eq = disc.eq();
  const ResponseFunction rf = response_function(disc.cfg());
  InitialData out;
  out.data = data;
  out.compat = compatibility_residuals(eq, rf, data);
  if (out.compat.max_abs() > tol)
    throw Error(ErrorKind::IncompatibleData, "initial data violate the corner compatibility conditions",
                {{"first", out.compat.first}, {"second", out.compat.second}, {"tolerance", tol}});

  out.xi0 = interpolate_surface(V, [&](double x) { return data.eta(x); });
  out.dt_xi0 = interpolate_surface(V, [&](double x) { return data.dt_eta(x); });
  out.dt2_xi0 = interpolate_surface(V, [&](double x) { return data.dt2_eta(x); });

  const GeometryMaps maps = build_geometry(data, eq, V);
  const VelocityMatrices vm = assemble_velocity(V, maps, disc.cfg(), true);
  constrained_stokes(disc, vm.A, out.dt_xi0, out.w0, out.p0, out.flux_slack);

  // differentiated load: sigma d_z R(zeta0', eta0') dt eta' and kappa What'(dt eta) dt^2 eta at the corners
  ForcingData dF;
  dF.F3.resize(V.sq.size());
  for (std::size_t q = 0; q < V.sq.size(); ++q) {
    const double x = V.sq[q].x[0];
    dF.F3[q] = curvature_remainder(eq.dzeta0(x), data.eta.eval(x)[1]).dz * data.dt_eta.eval(x)[1];
  }
  const double ell = disc.ell();
  dF.corner = {rf.dWhat(data.dt_eta(-ell)) * data.dt2_eta(-ell), rf.dWhat(data.dt_eta(ell)) * data.dt2_eta(ell)};
  const SpMat Tt = ops.T.transpose();
  const Vec rhs = assemble_forcing(V, maps, ops, dF) - vm.Adot * out.w0 + Tt * (ops.S * (out.dt2_xi0 - out.dt_xi0)) -
                  Tt * (SpMat(eps * ops.S + ops.Kc - eps * ops.Bb) * out.dt2_xi0);
  b_form_solve(disc, vm.A, rhs, out.dw0, out.dp0);

  const Vec gap = ops.T * out.dw0 - out.dt2_xi0;
  out.dt2_gap = std::sqrt(gap.dot(ops.mass * gap));
  out.dt_pressure_mean = pressure_mean(V, out.dp0);

  const WeightedNormEvaluator norms(V, eq.cfg.delta);
  const Vec full = V.expand(out.w0);
  std::vector<std::array<Jet2, 2>> u(V.vq.size());
  for (std::size_t q = 0; q < V.vq.size(); ++q) u[q] = physical_velocity(V, maps, full, static_cast<int>(q));
  const double dnorm = norms.boundary(field_sampler(data.dt_eta), 1.5, false);
  out.stokes_constant = dnorm > 0.0 ? norms.volume(u, 2, true) / dnorm : 0.0;
  out.E0 = initial_energy(norms, data);
  return out;
}

SurfacePerturbation recipe_data(const EquilibriumState& eq, const std::string& profile, double amplitude, int n_modes)
{
  const double ell = eq.cfg.ell;
  const SurfaceField eta0 = SurfaceField::fit(ell, n_modes, profile_sampler(profile, ell, amplitude));
  return repair_compatibility(eta0, response_function(eq.cfg), eq).data;
}

int mode_index(const std::string& profile)
{
  if (profile.size() == 5 && profile.compare(0, 4, "mode") == 0 && profile[4] >= '1' && profile[4] <= '3')
    return profile[4] - '1';
  return -1;
}

SurfacePerturbation mode_data(const Discretization& disc, int index, double amplitude)
{
  const Eigen::MatrixXd L = surface_evolution_matrix(disc, 0.0);
  const Eigen::EigenSolver<Eigen::MatrixXd> es(L);
  const auto& ev = es.eigenvalues();
  double rad = 0.0;
  for (int i = 0; i < ev.size(); ++i) rad = std::max(rad, std::abs(ev(i)));
  // decaying modes by rate; the near-null direction (constant volume shift) is skipped
  std::vector<std::pair<double, int>> order;
  for (int i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i)) > 1e-9 * rad) order.emplace_back(-ev(i).real(), i);
  std::sort(order.begin(), order.end());
  if (index < 0 || index >= static_cast<int>(order.size()))
    throw Error(ErrorKind::InvalidConfig, "no such surface mode", {{"index", index}});
  const int i = order[index].second;
  if (std::abs(ev(i).imag()) > 1e-9 * rad)
    throw Error(ErrorKind::InvalidConfig, "surface mode is oscillatory", {{"index", index}});
  const double lambda = ev(i).real();
  Vec v = es.eigenvectors().col(i).real();
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  v *= amplitude / v(imax);
  const SurfaceField eta0 = surface_field_from_nodal(disc.V, v, disc.n_modes);
  auto scaled = [&eta0](double s) {
    return [&eta0, s](double x) {
      auto a = eta0.eval(x);
      for (double& c : a) c *= s;
      return a;
    };
  };
  return repair_compatibility(eta0, response_function(disc.cfg()), disc.eq(), scaled(lambda), scaled(lambda * lambda))
      .data;
}

SurfacePerturbation recipe_data(const Discretization& disc, const std::string& profile, double amplitude)
{
  const int m = mode_index(profile);
  if (m >= 0) return mode_data(disc, m, amplitude);
  return recipe_data(disc.eq(), profile, amplitude, disc.n_modes);
}

} // namespace contactline
