#include <doctest.h>

#include <cmath>
#include <random>

#include "contactline/norms.hpp"

using namespace contactline;

namespace {

EquilibriumState state()
{
  PhysicalConfig cfg;
  return solve_equilibrium(cfg, 48);
}

std::vector<std::array<Jet2, 2>> random_field(const FESpace& V, std::mt19937& rng)
{
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Eigen::VectorXd u(V.n_vel);
  for (int i = 0; i < V.n_vel; ++i) u(i) = U(rng);
  std::vector<std::array<Jet2, 2>> f(V.vq.size());
  for (std::size_t q = 0; q < V.vq.size(); ++q) f[q] = V.velocity_jets(u, static_cast<int>(q));
  return f;
}

} // namespace

TEST_SUITE("norms") {

TEST_CASE("constant field and the zero weight")
{
  const auto eq = state();
  const FESpace V = build_fe_space(build_mesh(eq, 0.2, 0.6));
  const WeightedNormEvaluator ev(V, 0.5);
  std::vector<Jet2> one(V.vq.size(), Jet2(1.0));
  double direct = 0.0;
  for (std::size_t q = 0; q < V.vq.size(); ++q) direct += V.vq[q].w * ev.volume_weights()[q];
  CHECK(ev.volume_scalar(one, 0) == doctest::Approx(std::sqrt(direct)).epsilon(1e-14));
  std::mt19937 rng(7);
  const auto f = random_field(V, rng);
  const WeightedNormEvaluator flat(V, 0.0);
  for (int k = 0; k <= 2; ++k) CHECK(std::abs(flat.volume(f, k) - flat.volume(f, k, false)) <= 1e-14 * flat.volume(f, k));
}

TEST_CASE("weight monotonicity and the diameter bound")
{
  const auto eq = state();
  const FESpace V = build_fe_space(build_mesh(eq, 0.2, 0.6));
  const double diam = eq.diameter();
  std::mt19937 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const auto f = random_field(V, rng);
    const WeightedNormEvaluator a(V, 0.3), b(V, 0.7);
    CHECK(b.volume(f, 0) <= std::pow(diam, 0.4) * a.volume(f, 0) * (1 + 1e-12));
    CHECK(a.volume(f, 0) <= std::pow(diam, 0.3) * a.volume(f, 0, false) * (1 + 1e-12));
  }
}

TEST_CASE("corner singularity: weighted norm finite, high Lr norm grows")
{
  // u = d^{-delta + 0.01}; the weighted L2 norm integrates d^{0.02}, while the
  // unweighted L^r norm with r = 2.2/delta diverges under refinement.
  const auto eq = state();
  const double delta = 0.5, r = 2.2 / delta;
  std::vector<double> weighted, lr;
  for (double h : {0.2, 0.1, 0.05}) {
    const FESpace V = build_fe_space(build_mesh(eq, h, 0.3));
    const WeightedNormEvaluator ev(V, delta);
    std::vector<Jet2> u(V.vq.size());
    double s = 0.0;
    for (std::size_t q = 0; q < V.vq.size(); ++q) {
      const double d = corner_distance(V.vq[q].x[0], V.vq[q].x[1], eq);
      u[q] = Jet2(std::pow(d, -delta + 0.01));
      s += V.vq[q].w * std::pow(d, r * (-delta + 0.01));
    }
    weighted.push_back(ev.volume_scalar(u, 0));
    lr.push_back(std::pow(s, 1.0 / r));
  }
  // radial oracle for the weighted integral near one corner: int_0^R d^{0.02} d dd is finite
  CHECK(std::abs(weighted[2] - weighted[1]) < 0.05 * weighted[2]);
  CHECK(lr[2] > lr[1]);
  CHECK(lr[1] > lr[0]);
}

TEST_CASE("boundary norms")
{
  const auto eq = state();
  const FESpace V = build_fe_space(build_mesh(eq, 0.1, 1.0));
  const WeightedNormEvaluator ev(V, 0.5);
  auto constant = [](double) { return std::array<double, 4>{2.0, 0.0, 0.0, 0.0}; };
  // Gagliardo part vanishes for constants
  CHECK(ev.boundary(constant, 0.5, false) == doctest::Approx(ev.boundary(constant, 0.0, false)));
  CHECK(ev.boundary(constant, 0.0, false) == doctest::Approx(std::sqrt(8.0)));
  // f = x: seminorm of order 1/2 is int int 1 = 4 (minus the diagonal of the quadrature)
  auto linear = [](double x) { return std::array<double, 4>{x, 1.0, 0.0, 0.0}; };
  const double l2 = 2.0 / 3.0;
  CHECK(ev.boundary(linear, 0.5, false) == doctest::Approx(std::sqrt(l2 + 4.0)).epsilon(1e-2));
  // higher order norms dominate lower ones
  auto smooth = [](double x) {
    return std::array<double, 4>{std::cos(x), -std::sin(x), -std::cos(x), std::sin(x)};
  };
  CHECK(ev.boundary(smooth, 2.5) >= ev.boundary(smooth, 2.0));
  CHECK(ev.boundary(smooth, 1.5) >= ev.boundary(smooth, 1.0));
}

}
