#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "ssflow/transport.hpp"

using namespace ssflow;

namespace {
struct Straight {
  Grid g;
  Field U, V;
  CoordinateMap cm;
  Straight(int n1, int n2, double L) : g(build_grid(n1, n2, L, 0.25,
                                                    Grading::uniform)) {
    U = Field(g);
    V = Field(g);
    for (int i = 0; i <= g.n1; ++i)
      for (int j = 0; j <= g.n2; ++j) U(i, j) = 2.0 + 0.1 * g.x2[j];
    cm = build_coordinate_map(g, U, V);
  }
};
}  // namespace

TEST_CASE("integrated density vanishes identically on the inflow column") {
  Straight s(16, 32, 0.05);
  Field f0(s.g), divd(s.g);
  for (int i = 0; i <= s.g.n1; ++i)
    for (int j = 0; j <= s.g.n2; ++j)
      f0(i, j) = std::sin(3.0 * i) + std::cos(2.0 * j);
  Field rho = solve_transport(s.g, s.cm, s.U, f0, divd);
  for (int j = 0; j <= s.g.n2; ++j) CHECK(rho(0, j) == 0.0);
}

TEST_CASE("a constant integrand integrates to an exact linear ramp") {
  Straight s(16, 32, 0.05);
  double K = 3.7;
  Field f0(s.g), divd(s.g);
  for (int i = 0; i <= s.g.n1; ++i)
    for (int j = 0; j <= s.g.n2; ++j) f0(i, j) = K * s.U(i, j);
  Field rho = solve_transport(s.g, s.cm, s.U, f0, divd);
  for (int i = 0; i <= s.g.n1; ++i)
    for (int j = 0; j <= s.g.n2; ++j)
      CHECK(rho(i, j) == Catch::Approx(K * s.g.x1[i]).margin(1e-13));
}

TEST_CASE("source split between forcing and divergence changes nothing") {
  Straight s(16, 32, 0.05);
  Field f0(s.g), divd(s.g), f0b(s.g), divdb(s.g);
  for (int i = 0; i <= s.g.n1; ++i)
    for (int j = 0; j <= s.g.n2; ++j) {
      double a = std::sin(50.0 * s.g.x1[i]) * std::cos(s.g.x2[j]);
      double b = 0.3 * s.g.x2[j];
      f0(i, j) = a;
      f0b(i, j) = a + b;
      divdb(i, j) = b;
    }
  Field r1 = solve_transport(s.g, s.cm, s.U, f0, divd);
  Field r2 = solve_transport(s.g, s.cm, s.U, f0b, divdb);
  for (int i = 0; i <= s.g.n1; ++i)
    for (int j = 0; j <= s.g.n2; ++j)
      CHECK(r1(i, j) == Catch::Approx(r2(i, j)).margin(1e-13));
}

TEST_CASE("manufactured profile converges at second order in the march") {
  double L = 0.05, k = 2.0 * M_PI / L;
  auto err = [&](int n1) {
    Straight s(n1, 2 * n1, L);
    Field f0(s.g), divd(s.g);
    for (int i = 0; i <= s.g.n1; ++i)
      for (int j = 0; j <= s.g.n2; ++j)
        f0(i, j) = s.U(i, j) * k * std::cos(k * s.g.x1[i]) *
                   std::cos(M_PI * s.g.x2[j] / 2.0);
    Field rho = solve_transport(s.g, s.cm, s.U, f0, divd);
    double e = 0.0;
    for (int i = 0; i <= s.g.n1; ++i)
      for (int j = 0; j <= s.g.n2; ++j)
        e = std::max(e, std::abs(rho(i, j) -
                                 std::sin(k * s.g.x1[i]) *
                                     std::cos(M_PI * s.g.x2[j] / 2.0)));
    return e;
  };
  double e16 = err(16), e32 = err(32);
  CHECK(e16 / e32 >= 3.5);
  CHECK(e32 < 0.05);
}

TEST_CASE("transport solve rejects mismatched field shapes") {
  Straight s(16, 32, 0.05);
  Field bad(8, 8);
  CHECK_THROWS_AS(solve_transport(s.g, s.cm, s.U, bad, bad), GridMismatch);
}
