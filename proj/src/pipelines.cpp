#include "contactline/pipelines.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

#include "contactline/canonical_json.hpp"
#include "contactline/error.hpp"
#include "contactline/geometry.hpp"
#include "contactline/mesh.hpp"
#include "contactline/mms.hpp"
#include "contactline/remainder.hpp"
#include "contactline/volterra.hpp"

namespace contactline {

namespace {

const double pi = std::numbers::pi;

struct Setup {
  EquilibriumState eq;
  Discretization disc;
};

Setup setup(const RunConfig& cfg)
{
  Setup s{solve_equilibrium(cfg.phys, cfg.mesh.n_eq_nodes), {}};
  s.disc = build_discretization(s.eq, cfg.mesh);
  return s;
}

std::filesystem::path run_dir(const std::string& command, const RunConfig& cfg)
{
  return std::filesystem::path(cfg.out) / run_id(command, cfg);
}

RunMetadata metadata(const std::string& command, const RunConfig& cfg)
{
  return {command, cfg.mesh.h, cfg.time.dt, cfg.phys.eps, cfg.contraction.sigma_small, cfg.hash(), cfg.to_json()};
}

FixedPointProblem fixed_point_problem(const RunConfig& cfg, const Discretization& disc)
{
  FixedPointProblem fp;
  fp.disc = &disc;
  fp.eps = cfg.phys.eps;
  fp.grid = uniform_grid(cfg.time.T, cfg.time.dt);
  fp.cc = cfg.contraction;
  fp.init = construct_initial_data(disc, recipe_data(disc, cfg.initial.profile, cfg.initial.amplitude), fp.eps);
  return fp;
}

// summary.json written on its own, for commands without an energy report
CommandOutput finish(const std::string& command, const RunConfig& cfg, nlohmann::json results,
                     std::vector<std::pair<std::string, std::string>> extra_files = {})
{
  CommandOutput out{command, run_dir(command, cfg), {}, {}};
  out.summary = {{"schema_version", report_schema_version},
                 {"meta", {{"command", command}, {"config_hash", cfg.hash()}, {"config", cfg.to_json()}}},
                 {"results", std::move(results)}};
  std::vector<std::pair<std::filesystem::path, std::string>> files;
  for (auto& [name, text] : extra_files) files.emplace_back(out.dir / name, std::move(text));
  files.emplace_back(out.dir / "summary.json", canonical_dump(out.summary));
  for (const auto& [p, text] : files) {
    write_text_file(p, text);
    out.files.push_back(p);
  }
  return out;
}

nlohmann::json functionals_json(const PathFunctionals& f) { return {{"E", f.E}, {"D", f.D}, {"K", f.K()}}; }

// smooth random profile: cosine and odd sine modes with 1/k^2 decay
SurfaceField::Sampler random_profile(std::mt19937_64& rng, double ell)
{
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::array<double, 4> a{}, b{};
  for (int k = 0; k < 4; ++k) {
    a[k] = U(rng) / ((k + 1.0) * (k + 1.0));
    b[k] = U(rng) / ((k + 1.0) * (k + 1.0));
  }
  return [=](double x) {
    std::array<double, 4> v{};
    for (int k = 0; k < 4; ++k) {
      const double wc = (k + 1) * pi / ell, ws = (2 * k + 1) * pi / (2.0 * ell);
      const double c = std::cos(wc * x), s = std::sin(wc * x), cs = std::cos(ws * x), ss = std::sin(ws * x);
      v[0] += a[k] * c + b[k] * ss;
      v[1] += -a[k] * wc * s + b[k] * ws * cs;
      v[2] += -a[k] * wc * wc * c - b[k] * ws * ws * ss;
      v[3] += a[k] * wc * wc * wc * s - b[k] * ws * ws * ws * cs;
    }
    return v;
  };
}

SurfaceField scaled_fit(const SurfaceField::Sampler& f, double ell, int n_modes, double amplitude)
{
  double m = 0.0;
  for (int i = 0; i <= 400; ++i) m = std::max(m, std::abs(f(-ell + ell * i / 200.0)[0]));
  SurfaceField s = SurfaceField::fit(ell, n_modes, f);
  if (m > 0.0) s *= amplitude / m;
  return s;
}

} // namespace

const std::vector<std::string>& command_names()
{
  static const std::vector<std::string> n{"equilibrium", "geometry", "verify", "mms", "linear", "solve", "sweep"};
  return n;
}

std::string run_id(const std::string& command, const RunConfig& cfg) { return command + "-" + cfg.hash(); }

std::vector<SurfacePerturbation> random_perturbations(double ell, int n_modes, int count, double amplitude,
                                                      std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::vector<SurfacePerturbation> out;
  for (int i = 0; i < count; ++i) {
    SurfacePerturbation p = SurfacePerturbation::zero(ell, n_modes);
    p.eta = scaled_fit(random_profile(rng, ell), ell, n_modes, amplitude);
    p.dt_eta = scaled_fit(random_profile(rng, ell), ell, n_modes, amplitude);
    p.dt2_eta = scaled_fit(random_profile(rng, ell), ell, n_modes, amplitude);
    out.push_back(std::move(p));
  }
  return out;
}

nlohmann::json identity_checks(const RunConfig& cfg, int count, double amplitude, std::uint64_t seed)
{
  const EquilibriumState eq = solve_equilibrium(cfg.phys, cfg.mesh.n_eq_nodes);
  const FESpace V = build_fe_space(build_mesh(eq, cfg.mesh.h, cfg.mesh.effective_grading(cfg.phys.delta)));
  double piola = 0.0, normal = 0.0, transport = 0.0, wall = 0.0, min_J = 1.0, min_order = 1e300;
  for (const auto& p : random_perturbations(cfg.phys.ell, cfg.mesh.n_modes, count, amplitude, seed)) {
    const IdentityReport r = identity_suite(eq, p, V);
    piola = std::max(piola, r.piola_jet);
    normal = std::max(normal, r.normal_identity);
    transport = std::max(transport, r.normal_transport);
    wall = std::max(wall, r.wall_tangency);
    min_J = std::min(min_J, r.min_J);
    for (std::size_t k = 0; k + 1 < r.piola_fd.size(); ++k)
      min_order = std::min(min_order, std::log(r.piola_fd[k] / r.piola_fd[k + 1]) /
                                          std::log(r.fd_steps[k] / r.fd_steps[k + 1]));
  }
  const bool pass = piola < 1e-12 && normal < 1e-12 && transport < 1e-12 && wall < 1e-12 && min_order >= 1.0;
  return {{"pass", pass},          {"samples", count},       {"amplitude", amplitude},
          {"piola_jet", piola},    {"normal_identity", normal}, {"normal_transport", transport},
          {"wall_tangency", wall}, {"min_J", min_J},         {"piola_fd_min_order", min_order}};
}

nlohmann::json remainder_checks()
{
  double err = 0.0;
  for (int i = 0; i < 100; ++i)
    for (int k = 0; k < 100; ++k) {
      const double y = -2.0 + 4.0 * i / 99.0, z = -2.0 + 4.0 * k / 99.0;
      const double lhs = (y + z) / std::sqrt(1.0 + (y + z) * (y + z));
      const double rhs = y / std::sqrt(1.0 + y * y) + z / std::pow(1.0 + y * y, 1.5) + curvature_remainder(y, z).value;
      err = std::max(err, std::abs(lhs - rhs));
    }
  const double special = std::abs(curvature_remainder(0.0, 1.0).value - (1.0 / std::sqrt(2.0) - 1.0));
  return {{"pass", err < 1e-12 && special < 1e-10}, {"identity_max_error", err}, {"R01_error", special}};
}

nlohmann::json volterra_checks()
{
  auto scalar = [](double dt) {
    const auto grid = uniform_grid(1.0, dt);
    const auto d = volterra_solve([](int, int) { return Eigen::MatrixXd::Ones(1, 1); },
                                  [](int) { return Eigen::VectorXd::Ones(1); }, grid);
    double e = 0.0;
    for (std::size_t n = 0; n < grid.size(); ++n) e = std::max(e, std::abs(d[n](0) - std::exp(-grid[n])));
    return e;
  };
  const double e1 = scalar(0.01), e2 = scalar(0.005);
  const double ratio = e1 / e2;

  // piecewise-linear theta: ODE residual and agreement with a fine RK4 integration
  const double eps = 0.1;
  const auto grid = uniform_grid(1.0, 0.05);
  std::vector<Eigen::VectorXd> th, dxi;
  for (double t : grid) th.push_back(Eigen::VectorXd::Constant(1, std::sin(3.0 * t) + t * t));
  const auto xi = eps_reconstruct(th, Eigen::VectorXd::Constant(1, 0.3), eps, grid, &dxi);
  double ode = 0.0, rk = 0.0, x = 0.3;
  for (std::size_t n = 0; n < grid.size(); ++n) {
    ode = std::max(ode, std::abs(xi[n](0) + eps * dxi[n](0) - th[n](0)));
    if (n == 0) continue;
    const double a = grid[n - 1], h = (grid[n] - a) / 400;
    auto theta = [&](double t) { return th[n - 1](0) + (t - a) / (grid[n] - a) * (th[n](0) - th[n - 1](0)); };
    for (int k = 0; k < 400; ++k) {
      const double t = a + k * h;
      const double k1 = (theta(t) - x) / eps, k2 = (theta(t + h / 2) - (x + h / 2 * k1)) / eps;
      const double k3 = (theta(t + h / 2) - (x + h / 2 * k2)) / eps, k4 = (theta(t + h) - (x + h * k3)) / eps;
      x += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    rk = std::max(rk, std::abs(xi[n](0) - x));
  }
  // constant theta from zero: xi = c (1 - e^{-t/eps})
  std::vector<Eigen::VectorXd> c(grid.size(), Eigen::VectorXd::Constant(1, 2.0));
  const auto xc = eps_reconstruct(c, Eigen::VectorXd::Zero(1), eps, grid);
  double closed = 0.0;
  for (std::size_t n = 0; n < grid.size(); ++n)
    closed = std::max(closed, std::abs(xc[n](0) - 2.0 * (1.0 - std::exp(-grid[n] / eps))));

  const bool pass = e1 < 1e-4 && std::abs(ratio - 4.0) <= 0.6 && ode < 1e-10 && rk < 1e-10 && closed < 1e-13;
  return {{"pass", pass},
          {"scalar_error_dt_0.01", e1},
          {"scalar_error_dt_0.005", e2},
          {"self_convergence_ratio", ratio},
          {"reconstruct_ode_residual", ode},
          {"reconstruct_rk4_gap", rk},
          {"reconstruct_closed_form_error", closed}};
}

CommandOutput run_equilibrium(const RunConfig& cfg)
{
  const EquilibriumState eq = solve_equilibrium(cfg.phys, cfg.mesh.n_eq_nodes);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i <= 200; ++i) {
    const double x = -cfg.phys.ell + 2.0 * cfg.phys.ell * i / 200.0;
    rows.push_back({x, eq.zeta0(x), eq.dzeta0(x)});
  }
  const double young = std::abs(std::cos(eq.omega) - cfg.phys.gamma_jump / cfg.phys.sigma);
  nlohmann::json res{{"P0", eq.P0},
                     {"omega", eq.omega},
                     {"delta_omega", eq.delta_omega},
                     {"young_residual", young},
                     {"max_residual", eq.max_residual},
                     {"contact_residual", eq.contact_residual},
                     {"newton_iterations", eq.newton_iterations},
                     {"min_zeta", eq.min_zeta()},
                     {"max_abs_slope", eq.max_abs_slope()},
                     {"diameter", eq.diameter()},
                     {"max_admissible_eps", max_admissible_eps(eq)}};
  return finish("equilibrium", cfg, res, {{"equilibrium.csv", csv_table({"x", "zeta0", "dzeta0"}, rows)}});
}

CommandOutput run_geometry(const RunConfig& cfg)
{
  const Setup s = setup(cfg);
  const FESpace& V = s.disc.V;
  const SurfacePerturbation data = recipe_data(s.disc, cfg.initial.profile, cfg.initial.amplitude);
  const GeometryMaps maps = build_geometry(data, s.eq, V);
  const IdentityReport id = identity_suite(s.eq, data, V);
  std::ostringstream mesh;
  write_mesh(mesh, export_mesh(V.mesh));
  nlohmann::json res{{"nx", V.mesh.nx},
                     {"ny", V.mesh.ny},
                     {"nodes", V.mesh.n_nodes()},
                     {"max_cell_diameter", V.mesh.max_cell_diameter()},
                     {"min_corner_cell_diameter", V.mesh.min_corner_cell_diameter()},
                     {"grading", V.mesh.grading},
                     {"min_J", maps.min_J},
                     {"max_J", maps.max_J},
                     {"tail_bound", maps.tail_bound},
                     {"identities",
                      {{"piola_jet", id.piola_jet},
                       {"piola_fd", id.piola_fd},
                       {"fd_steps", id.fd_steps},
                       {"normal_identity", id.normal_identity},
                       {"normal_transport", id.normal_transport},
                       {"wall_tangency", id.wall_tangency}}}};
  return finish("geometry", cfg, res, {{"mesh.txt", mesh.str()}});
}

CommandOutput run_verify(const RunConfig& cfg)
{
  nlohmann::json res{{"identities", identity_checks(cfg)},
                     {"remainder", remainder_checks()},
                     {"volterra", volterra_checks()}};
  std::vector<std::string> failed;
  for (auto it = res.begin(); it != res.end(); ++it)
    if (!it.value()["pass"].get<bool>()) failed.push_back(it.key());
  res["pass"] = failed.empty();
  CommandOutput out = finish("verify", cfg, res);
  if (!failed.empty())
    throw Error(ErrorKind::VerificationFailed, "verification suites failed", {{"failed", failed}, {"results", res}});
  return out;
}

CommandOutput run_mms(const RunConfig& cfg)
{
  const EquilibriumState eq = solve_equilibrium(cfg.phys, cfg.mesh.n_eq_nodes);
  ManufacturedCase mc;
  mc.eps = cfg.phys.eps;
  const std::vector<double> hs{cfg.mesh.h, cfg.mesh.h / 2, cfg.mesh.h / 4};
  const ManufacturedStudy st = manufactured_study(eq, cfg.mesh, hs, mc);
  std::vector<std::vector<double>> rows;
  for (const auto& r : st.runs) rows.push_back({r.h, static_cast<double>(r.n_free), r.velocity_h1, r.pressure_l2, r.surface_l2});
  nlohmann::json res{{"h", hs},
                     {"velocity_order", st.velocity_order},
                     {"pressure_order", st.pressure_order},
                     {"surface_order", st.surface_order}};
  return finish("mms", cfg, res,
                {{"mms.csv", csv_table({"h", "n_free", "velocity_h1", "pressure_l2", "surface_l2"}, rows)}});
}

CommandOutput run_linear(const RunConfig& cfg)
{
  const Setup s = setup(cfg);
  const FixedPointProblem fp = fixed_point_problem(cfg, s.disc);
  const Iterate it = contraction_step(fp, starting_iterate(fp));
  RunReport rep;
  rep.meta = metadata("linear", cfg);
  rep.energy = uniform_energy_monitor(s.disc, it.flow, it.eta, fp.init.E0);
  const EnergyBalance eb = energy_balance(it.flow, s.disc.ops);
  std::vector<std::vector<double>> rows;
  for (int n = 0; n < it.flow.nodes(); ++n)
    rows.push_back({it.flow.t[n], eb.energy[n], eb.dissipation[n], eb.power[n], eb.imbalance[n]});
  rep.results = {{"K", it.K},
                 {"max_energy_imbalance", eb.max_imbalance},
                 {"step_margin", it.flow.step_margin},
                 {"max_growth", it.flow.max_growth}};
  CommandOutput out{"linear", run_dir("linear", cfg), summary_json(rep), {}};
  const std::string balance = csv_table({"t", "energy", "dissipation", "power", "imbalance"}, rows);
  out.files = emit_report(rep, out.dir);
  write_text_file(out.dir / "balance.csv", balance);
  out.files.push_back(out.dir / "balance.csv");
  return out;
}

CommandOutput run_solve(const RunConfig& cfg)
{
  const Setup s = setup(cfg);
  const FixedPointProblem fp = fixed_point_problem(cfg, s.disc);
  const NonlinearRun run = solve_nonlinear(fp);
  RunReport rep;
  rep.meta = metadata("solve", cfg);
  rep.energy = run.energy;
  rep.iterations = run.fixed.log;
  rep.results = {{"converged", run.fixed.converged},
                 {"iterations", run.fixed.iterations()},
                 {"residuals", residuals_json(run.fixed.residuals)},
                 {"K_sqrt", std::sqrt(run.fixed.solution.K)},
                 {"eta_functionals", functionals_json(run.eta_functionals)},
                 {"compatibility_residual", fp.init.compat.max_abs()}};
  CommandOutput out{"solve", run_dir("solve", cfg), summary_json(rep), {}};
  out.files = emit_report(rep, out.dir);
  return out;
}

CommandOutput run_sweep(const RunConfig& cfg)
{
  const Setup s = setup(cfg);
  const SurfacePerturbation data = recipe_data(s.disc, cfg.initial.profile, cfg.initial.amplitude);
  const SweepReport sw =
      epsilon_sweep(s.disc, data, uniform_grid(cfg.time.T, cfg.time.dt), cfg.contraction, true);
  CommandOutput out{"sweep", run_dir("sweep", cfg), {}, {}};

  auto entry_json = [&](const SweepEntry& e, const std::string& sub) {
    nlohmann::json j{{"eps", e.eps}, {"ok", e.ok}};
    if (!e.ok) {
      j["error"] = nlohmann::json::parse(e.error);
      return j;
    }
    RunReport rep;
    rep.meta = metadata("sweep", cfg);
    rep.meta.eps = e.eps;
    rep.energy = e.run.energy;
    rep.iterations = e.run.fixed.log;
    rep.results = {{"converged", e.run.fixed.converged}, {"residuals", residuals_json(e.run.fixed.residuals)}};
    for (auto& p : emit_report(rep, out.dir / sub)) out.files.push_back(p);
    j["dir"] = sub;
    j["sup_E"] = e.run.energy.sup_E;
    j["bound_constant"] = e.run.energy.bound_constant;
    j["iterations"] = e.run.fixed.iterations();
    j["residual_max"] = e.run.fixed.residuals.max();
    return j;
  };
  nlohmann::json entries = nlohmann::json::array();
  nlohmann::json failures = nlohmann::json::array();
  for (const auto& e : sw.entries) {
    char sub[48];
    std::snprintf(sub, sizeof sub, "eps_%g", e.eps);
    entries.push_back(entry_json(e, sub));
    if (!e.ok) failures.push_back(entries.back());
  }
  nlohmann::json res{{"entries", entries},
                     {"distances", sw.distances},
                     {"monotone", sw.monotone},
                     {"sup_E_variation", sw.sup_E_variation},
                     {"energy_degrades", sw.energy_degrades},
                     {"eps_zero", entry_json(sw.eps_zero, "eps_0")},
                     {"eps_zero_distance", sw.eps_zero_distance}};
  out.summary = {{"schema_version", report_schema_version},
                 {"meta", {{"command", "sweep"}, {"config_hash", cfg.hash()}, {"config", cfg.to_json()}}},
                 {"results", res}};
  write_text_file(out.dir / "summary.json", canonical_dump(out.summary));
  out.files.push_back(out.dir / "summary.json");
  if (!failures.empty())
    throw Error(ErrorKind::NoConvergence, "sweep runs failed for some eps", {{"failures", failures}});
  return out;
}

CommandOutput run_command(const std::string& command, const RunConfig& cfg)
{
  cfg.validate();
  if (command == "equilibrium") return run_equilibrium(cfg);
  if (command == "geometry") return run_geometry(cfg);
  if (command == "verify") return run_verify(cfg);
  if (command == "mms") return run_mms(cfg);
  if (command == "linear") return run_linear(cfg);
  if (command == "solve") return run_solve(cfg);
  if (command == "sweep") return run_sweep(cfg);
  throw Error(ErrorKind::InvalidConfig, "unknown command '" + command + "'", {{"command", command}});
}

} // namespace contactline
