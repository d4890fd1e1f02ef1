#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "ssflow/linear_solver.hpp"

using namespace ssflow;

namespace {
// Frozen supersonic shear 2 + 0.1 x2 with sound speed 1: the setting every
// energy statement of the mixed solve assumes.
struct Frozen {
  Grid g;
  LinearProblem lp;
  Frozen(int n1 = 16, int n2 = 32) {
    g = build_grid(n1, n2, 0.05, 0.1, Grading::tanh_walls, 1.5);
    lp.g = &g;
    lp.us = Field(g);
    lp.usx2 = Field(g);
    lp.ueps = Field(g);
    lp.veps = Field(g);
    lp.f0 = Field(g);
    lp.f1 = Field(g);
    lp.f2 = Field(g);
    for (int i = 0; i <= g.n1; ++i)
      for (int j = 0; j <= g.n2; ++j) {
        lp.us(i, j) = 2.0 + 0.1 * g.x2[j];
        lp.usx2(i, j) = 0.1;
        lp.ueps(i, j) = lp.us(i, j);
      }
    lp.eps = 0.1;
    lp.c = 1.0;
  }
  void small_forcing() {
    for (int i = 0; i <= g.n1; ++i)
      for (int j = 0; j <= g.n2; ++j) {
        double s1 = std::sin(M_PI * g.x1[i] / g.L);
        double s2 = std::sin(M_PI * g.x2[j] / 2.0);
        lp.f0(i, j) = 1e-3 * s1 * s2;
        lp.f1(i, j) = 1e-3 * s1 * s2 * s2;
        lp.f2(i, j) = 5e-4 * s1 * s1 * s2;
      }
  }
};
}  // namespace

TEST_CASE("zero forcing yields the zero state in one sweep") {
  Frozen fx;
  LinearSolution sol = linear_fixed_point(fx.lp);
  CHECK(sol.converged);
  CHECK(sol.sweeps == 1);
  CHECK(norm_inf(sol.u) == 0.0);
  CHECK(norm_inf(sol.v) == 0.0);
  CHECK(norm_inf(sol.rho) == 0.0);
}

TEST_CASE("small forcing converges with bounded measured constants") {
  Frozen fx;
  fx.small_forcing();
  LinearSolution sol = linear_fixed_point(fx.lp);
  CHECK(sol.converged);
  CHECK(sol.final_diff <= fx.lp.tol);
  CHECK(norm_inf(sol.u) > 0.0);
  // homogeneous velocity boundary, homogeneous inflow density
  const Grid& g = fx.g;
  for (int j = 0; j <= g.n2; ++j) {
    CHECK(sol.u(0, j) == 0.0);
    CHECK(sol.u(g.n1, j) == 0.0);
    CHECK(sol.rho(0, j) == 0.0);
  }
  for (int i = 0; i <= g.n1; ++i) {
    CHECK(sol.u(i, 0) == 0.0);
    CHECK(sol.v(i, g.n2) == 0.0);
  }
  EnergyReport er = weighted_energy_report(fx.lp, sol);
  CHECK(std::isfinite(er.C_weighted));
  CHECK(std::isfinite(er.C_flux));
  CHECK(er.C_weighted >= 0.0);
  CHECK(er.C_weighted < 1e3);
  CHECK(er.C_flux < 1e3);
  CHECK(er.delta_len > 0.0);
  // supersonic structure: the pointwise quadratic form is a sum of squares
  CHECK(sos_min_nodes(fx.lp, sol) >= -1e-14);
  CHECK(er.sos_min >= -1e-14);
  IdentityCheck ic = density_derivative_identity_check(fx.lp, sol);
  CHECK(ic.ok);
  CHECK(ic.mismatch <= 10.0 * ic.tau + 1e-12);
}

TEST_CASE("zero continuation weight reduces to pure density transport") {
  Frozen fx;
  fx.small_forcing();
  fx.lp.t = 0.0;
  LinearSolution sol = linear_fixed_point(fx.lp);
  CHECK(norm_inf(sol.u) == 0.0);
  CHECK(norm_inf(sol.v) == 0.0);
  const Grid& g = fx.g;
  Field zero(g);
  CoordinateMap cm = build_coordinate_map(g, fx.lp.ueps, zero);
  Field f0d = mollify(fx.lp.f0, g, fx.lp.smoothing_cells);
  Field expect = solve_transport(g, cm, fx.lp.ueps, f0d, zero);
  Field d = sol.rho;
  d -= expect;
  CHECK(norm_inf(d) <= 1e-9);
}

TEST_CASE("sweep-starved relaxation refuses to report a state") {
  Frozen fx;
  fx.small_forcing();
  fx.lp.max_sweeps = 1;
  fx.lp.tol = 1e-30;
  CHECK_THROWS_AS(linear_fixed_point(fx.lp), NoConvergence);
}

TEST_CASE("subsonic transport speed is rejected with its location") {
  Frozen fx;
  for (int i = 0; i <= fx.g.n1; ++i)
    for (int j = 0; j <= fx.g.n2; ++j) fx.lp.ueps(i, j) = 0.5;
  CHECK_THROWS_AS(linear_fixed_point(fx.lp), SubsonicPoint);
}

TEST_CASE("margin tightening can reject an otherwise supersonic speed") {
  Frozen fx;
  fx.lp.margin = 1.5;  // demands U >= 2.5 everywhere; the profile starts at 2
  CHECK_THROWS_AS(linear_fixed_point(fx.lp), SubsonicPoint);
}

TEST_CASE("leaky wall in the frozen speed is a compatibility violation") {
  Frozen fx;
  fx.lp.veps(3, 0) = 0.1;
  CHECK_THROWS_AS(linear_fixed_point(fx.lp), CompatibilityViolation);
}

TEST_CASE("continuation weight outside the unit interval is refused") {
  Frozen fx;
  fx.lp.t = 1.5;
  CHECK_THROWS_AS(linear_fixed_point(fx.lp), ConfigError);
  fx.lp.t = -0.1;
  CHECK_THROWS_AS(linear_fixed_point(fx.lp), ConfigError);
}

TEST_CASE("state norm combines the scaled gradient and the mass") {
  Frozen fx;
  const Grid& g = fx.g;
  Field u(g), v(g);
  for (int i = 0; i <= g.n1; ++i)
    for (int j = 0; j <= g.n2; ++j)
      u(i, j) = std::sin(M_PI * g.x1[i] / g.L) * std::sin(M_PI * g.x2[j] / 2);
  double x1 = xnorm(u, v, g, 0.01);
  double x2 = xnorm(u, v, g, 0.04);
  double l2 = std::sqrt(norm_l2(u, g) * norm_l2(u, g));
  // doubling sqrt(eps) doubles the gradient part and leaves the L2 part
  CHECK(x2 - l2 == Catch::Approx(2.0 * (x1 - l2)).epsilon(1e-12));
}
