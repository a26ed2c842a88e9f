#include <benchmark/benchmark.h>

#include <map>

#include "contactline/assembly.hpp"
#include "contactline/linear_solver.hpp"

using namespace contactline;

namespace {

struct Fixture {
  EquilibriumState eq;
  FESpace V;
  SurfacePerturbation pert;
};

const Fixture& fixture(double h)
{
  static std::map<double, Fixture> cache;
  auto it = cache.find(h);
  if (it == cache.end()) {
    Fixture f;
    f.eq = solve_equilibrium(PhysicalConfig{}, 48);
    f.V = build_fe_space(build_mesh(f.eq, h, 0.5));
    f.pert = SurfacePerturbation::zero(1.0, 128);
    f.pert.eta = SurfaceField::fit(1.0, 128, profile_sampler("cos", 1.0, 0.02));
    f.pert.dt_eta = SurfaceField::fit(1.0, 128, profile_sampler("cos2", 1.0, 0.02));
    it = cache.emplace(h, std::move(f)).first;
  }
  return it->second;
}

double width(const benchmark::State& s) { return 1.0 / static_cast<double>(s.range(0)); }

void BM_geometry_serial(benchmark::State& s)
{
  const Fixture& f = fixture(width(s));
  for (auto _ : s) benchmark::DoNotOptimize(build_geometry_serial(f.pert, f.eq, f.V));
}

void BM_geometry_parallel(benchmark::State& s)
{
  const Fixture& f = fixture(width(s));
  for (auto _ : s) benchmark::DoNotOptimize(build_geometry(f.pert, f.eq, f.V, true));
}

void BM_velocity_serial(benchmark::State& s)
{
  const Fixture& f = fixture(width(s));
  const GeometryMaps maps = build_geometry(f.pert, f.eq, f.V);
  for (auto _ : s) benchmark::DoNotOptimize(assemble_velocity_serial(f.V, maps, f.eq.cfg, true));
}

void BM_velocity_parallel(benchmark::State& s)
{
  const Fixture& f = fixture(width(s));
  const GeometryMaps maps = build_geometry(f.pert, f.eq, f.V);
  for (auto _ : s) benchmark::DoNotOptimize(assemble_velocity(f.V, maps, f.eq.cfg, true, true));
}

} // namespace

// argument: 1/h
BENCHMARK(BM_geometry_serial)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_geometry_parallel)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_velocity_serial)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_velocity_parallel)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
