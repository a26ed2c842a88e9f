#include <doctest.h>

#include <cmath>
#include <initializer_list>

#include "contactline/remainder.hpp"

using namespace contactline;

TEST_SUITE("remainder") {

TEST_CASE("Taylor identity and special values")
{
  CHECK(std::abs(curvature_remainder(0.0, 1.0).value - (1.0 / std::sqrt(2.0) - 1.0)) < 1e-12);
  for (double y : {-2.0, -0.3, 0.0, 1.7}) {
    const auto r = curvature_remainder(y, 0.0);
    CHECK(r.value == 0.0);
    CHECK(r.dz == 0.0);
  }
  for (double y = -2; y <= 2; y += 0.37)
    for (double z = -2; z <= 2; z += 0.41) {
      const double lhs = (y + z) / std::sqrt(1 + (y + z) * (y + z));
      const double rhs = y / std::sqrt(1 + y * y) + z / std::pow(1 + y * y, 1.5) + curvature_remainder(y, z).value;
      CHECK(std::abs(lhs - rhs) < 1e-12);
    }
}

TEST_CASE("partials against the closed form")
{
  const double h = 1e-5;
  for (double y : {-1.2, 0.1, 0.9})
    for (double z : {-0.8, 0.05, 1.3}) {
      const auto r = curvature_remainder(y, z);
      const double fy = (curvature_remainder_closed(y + h, z) - curvature_remainder_closed(y - h, z)) / (2 * h);
      const double fz = (curvature_remainder_closed(y, z + h) - curvature_remainder_closed(y, z - h)) / (2 * h);
      CHECK(r.dy == doctest::Approx(fy).epsilon(1e-7));
      CHECK(r.dz == doctest::Approx(fz).epsilon(1e-7));
      const double exact_dz = 1.0 / std::pow(1 + (y + z) * (y + z), 1.5) - 1.0 / std::pow(1 + y * y, 1.5);
      CHECK(std::abs(r.dz - exact_dz) < 1e-13);
      const double fzz = (curvature_remainder(y, z + h).dz - curvature_remainder(y, z - h).dz) / (2 * h);
      CHECK(r.dzz == doctest::Approx(fzz).epsilon(1e-6));
    }
}

TEST_CASE("dz bound grows at most linearly")
{
  // |dz R(y,z)| <= C |z| with C = max |d/ds (1+s^2)^{-3/2}| = 3 * 0.3578...
  for (double y = -2; y <= 2; y += 0.1)
    for (double z = -2; z <= 2; z += 0.1) CHECK(std::abs(curvature_remainder(y, z).dz) <= 1.08 * std::abs(z) + 1e-14);
}

TEST_CASE("response function")
{
  ResponseFunction lin{1.0, 0.0};
  CHECK(response_solve(0.0, lin) == 0.0);
  CHECK(response_solve(2.0, lin) == doctest::Approx(2.0));
  ResponseFunction cub{1.0, 1.0};
  CHECK(std::abs(response_solve(2.0, cub) - 1.0) < 1e-14);
  CHECK(std::abs(response_solve(-2.0, cub) + 1.0) < 1e-14);
  ResponseFunction rf{0.7, 0.3};
  CHECK(rf.What(0.0) == 0.0);
  CHECK(rf.dWhat(0.0) == 0.0);
  // bisection oracle
  for (double c : {-3.0, -0.01, 0.4, 5.0}) {
    double lo = -10, hi = 10;
    for (int i = 0; i < 200; ++i) {
      const double m = 0.5 * (lo + hi);
      (rf.W(m) < c ? lo : hi) = m;
    }
    CHECK(response_solve(c, rf) == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-13));
    const double z = response_solve(c, rf);
    CHECK(rf.kappa * z + rf.kappa * rf.What(z) == doctest::Approx(c));
  }
}

}
