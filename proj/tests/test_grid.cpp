#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "ssflow/grid.hpp"

using namespace ssflow;

TEST_CASE("uniform grid basics") {
  Grid g = build_grid(16, 40, 0.05, 0.1, Grading::uniform);
  CHECK(g.h1 == Catch::Approx(0.05 / 16).epsilon(1e-15));
  CHECK(g.x1.front() == 0.0);
  CHECK(g.x1.back() == Catch::Approx(0.05));
  CHECK(g.x2.front() == 0.0);
  CHECK(g.x2.back() == 2.0);
  // quadrature of 1 equals the area
  double s = 0.0;
  for (int i = 0; i <= g.n1; ++i)
    for (int j = 0; j <= g.n2; ++j) s += g.weight(i, j);
  CHECK(s == Catch::Approx(2.0 * 0.05).epsilon(1e-13));
}

TEST_CASE("tanh grading is symmetric, monotone, gentle") {
  Grid g = build_grid(16, 160, 0.05, 0.1, Grading::tanh_walls, 1.5);
  for (int j = 0; j <= g.n2; ++j)
    CHECK(g.x2[j] + g.x2[g.n2 - j] == Catch::Approx(2.0).margin(1e-13));
  for (int j = 0; j < g.n2; ++j) CHECK(g.x2[j + 1] > g.x2[j]);
  for (int j = 1; j < g.n2; ++j) {
    double r = (g.x2[j + 1] - g.x2[j]) / (g.x2[j] - g.x2[j - 1]);
    if (r < 1.0) r = 1.0 / r;
    CHECK(r <= 1.15 + 1e-9);
  }
  CHECK(g.min_dx2() < 2.0 / 160);  // clustered at the walls
  // trapezoid quadrature is exact for linear functions on any node set
  double s = 0.0;
  for (int j = 0; j <= g.n2; ++j) s += g.w2[j] * g.x2[j];
  CHECK(s == Catch::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("grid guards") {
  CHECK_THROWS_AS(build_grid(4, 20, 0.05, 0.1), GridTooCoarse);
  CHECK_THROWS_AS(build_grid(16, 20, -1.0, 0.1, Grading::uniform),
                  ConfigError);
  // violent stretching trips the cell-ratio guard
  CHECK_THROWS_AS(build_grid(16, 64, 0.05, 0.1, Grading::tanh_walls, 15.0),
                  GridTooCoarse);
  // sublayer-resolution guard: eps = 1e-4 needs dx2 <= 0.0025 near walls
  CHECK_THROWS_AS(build_grid(16, 64, 0.05, 1e-4, Grading::uniform),
                  GridTooCoarse);
  // but a sufficiently clustered grid passes the same eps
  CHECK_NOTHROW(build_grid(16, 1024, 0.05, 1e-3, Grading::tanh_walls, 1.5));
}
