#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "ssflow/layer.hpp"

using namespace ssflow;

TEST_CASE("layer grid: clustering and weights") {
  LayerGrid lg = make_layer_grid(0.05, 200);
  CHECK(lg.Y.front() == 0.0);
  CHECK(lg.Y.back() == Catch::Approx(12.0));
  CHECK(lg.Y[1] - lg.Y[0] <= 0.05);
  for (int j = 0; j < lg.nY; ++j) CHECK(lg.Y[j + 1] > lg.Y[j]);
  double s = 0.0;
  for (double w : lg.wY) s += w;
  CHECK(s == Catch::Approx(12.0).epsilon(1e-12));
  CHECK(lg.dx1 == Catch::Approx(0.05 / 200).epsilon(1e-15));
  CHECK_THROWS_AS(make_layer_grid(0.05, 200, 8), GridTooCoarse);
  // too few nodes for the target wall spacing
  CHECK_THROWS_AS(make_layer_grid(0.05, 200, 32, 12.0, 0.0), GridTooCoarse);
}

TEST_CASE("initial profile polynomial from corner derivatives") {
  // du[k] = d^k of the trace; order 1 keeps 4 terms with A^k/(2k)! weights
  std::vector<double> du = {0.0, 1.0, 2.0, 6.0, 24.0};
  LayerInitial p1 = layer_initial_polynomial(du, 2.0, 1);
  REQUIRE(p1.coef.size() == 4);
  CHECK(p1.coef[0] == Catch::Approx(-1.0).epsilon(1e-14));        // -2*1/2!
  CHECK(p1.coef[1] == Catch::Approx(-1.0 / 3.0).epsilon(1e-14));  // -4*2/4!
  CHECK(p1.coef[2] == Catch::Approx(-8.0 * 6.0 / 720.0).epsilon(1e-14));
  CHECK(p1.coef[3] == Catch::Approx(-16.0 * 24.0 / 40320.0).epsilon(1e-14));
  CHECK(p1.value(0.0) == 0.0);
  CHECK(p1.deriv0(2) == Catch::Approx(-2.0).epsilon(1e-14));  // -A du[1]
  CHECK(p1.value(3.0) == 0.0);  // cutoff kills the tail
  LayerInitial p2 = layer_initial_polynomial(du, 2.0, 2);
  REQUIRE(p2.coef.size() == 2);
  CHECK(p2.coef[0] == Catch::Approx(-1.0).epsilon(1e-14));
  // value matches the closed form inside the plateau
  double Y = 0.5;
  CHECK(p2.value(Y) ==
        Catch::Approx(-(0.25 + (1.0 / 3.0) * 0.0625)).epsilon(1e-13));
}

TEST_CASE("half-strip march reproduces the similarity solution") {
  // A u_x1 = u_YY with data erfc(Y / (2 sqrt(t0))) marches to
  // erfc(Y / (2 sqrt(t0 + x1/A))); probe at the acceptance point.
  double t0 = 0.004, A = 1.0, L = 0.036;
  LayerGrid lg = make_layer_grid(L, 240);
  auto init = [&](double Y) { return std::erfc(Y / (2.0 * std::sqrt(t0))); };
  auto wall = [](double) { return -1.0; };
  LayerSolution sol =
      solve_half_strip_parabolic(A, init, wall, nullptr, lg, 1, 0, 1);
  double got = detail::interp_row(lg.Y, sol.u[sol.nrows - 1], 0.2);
  CHECK(got == Catch::Approx(0.4795001221869535).margin(2e-3));
  // far field stays pinned
  CHECK(std::abs(sol.u[sol.nrows - 1][lg.nY]) < 1e-12);
  // refining the march must not make the error worse
  LayerGrid lg2 = make_layer_grid(L, 480);
  LayerSolution sol2 =
      solve_half_strip_parabolic(A, init, wall, nullptr, lg2, 1, 0, 1);
  double e1 = std::abs(got - 0.4795001221869535);
  double e2 = std::abs(detail::interp_row(lg2.Y, sol2.u[sol2.nrows - 1], 0.2) -
                       0.4795001221869535);
  CHECK(e2 <= e1 * 1.05 + 1e-6);
}

TEST_CASE("discrete maximum principle") {
  LayerGrid lg = make_layer_grid(0.05, 100);
  auto init = [](double Y) { return std::exp(-Y) * (1.0 - std::exp(-Y)); };
  auto wall = [](double) { return 0.0; };
  LayerSolution sol =
      solve_half_strip_parabolic(2.0, init, wall, nullptr, lg, 1, 0, 1);
  double lo = 0.0, hi = 0.25;  // bounds of the data
  for (int r = 0; r < sol.nrows; ++r)
    for (int j = 0; j <= lg.nY; ++j) {
      CHECK(sol.u[r][j] >= lo - 1e-12);
      CHECK(sol.u[r][j] <= hi + 1e-12);
    }
}

TEST_CASE("corner mismatch between data and wall value is refused") {
  LayerGrid lg = make_layer_grid(0.05, 50);
  auto init = [](double Y) { return 0.3 + 0.0 * Y; };
  auto wall = [](double) { return 0.0; };
  CHECK_THROWS_AS(
      solve_half_strip_parabolic(2.0, init, wall, nullptr, lg, 1, 0, 1),
      CornerMismatch);
  try {
    solve_half_strip_parabolic(2.0, init, wall, nullptr, lg, 1, 0, 1);
  } catch (const CornerMismatch& e) {
    CHECK(std::string(e.what()).find("corner") != std::string::npos);
  }
  // stride must divide the march
  auto ok = [](double) { return 0.0; };
  CHECK_THROWS_AS(
      solve_half_strip_parabolic(2.0, ok, wall, nullptr, lg, 1, 0, 7),
      GridMismatch);
}

TEST_CASE("stored derivative rows satisfy the scheme identity") {
  // The marched arrays must obey A ux1 = uYY at every node so that the
  // residual assembly can cancel the interior exactly.
  LayerGrid lg = make_layer_grid(0.04, 80);
  auto init = [](double Y) {
    double c = chi(Y);
    return -0.8 * Y * Y * c;
  };
  auto wall = [](double) { return 0.0; };
  LayerSolution sol =
      solve_half_strip_parabolic(1.7, init, wall, nullptr, lg, 1, 0, 1);
  for (int r : {0, 1, 40, sol.nrows - 1}) {
    for (int j = 0; j <= lg.nY; ++j) {
      double res = 1.7 * sol.ux1[r][j] - sol.uYY[r][j];
      CHECK(std::abs(res) < 1e-9);
    }
  }
}

TEST_CASE("slaved vertical velocity obeys continuity") {
  LayerGrid lg = make_layer_grid(0.04, 80);
  auto init = [](double Y) { return -0.5 * Y * Y * chi(Y); };
  auto wall = [](double) { return 0.0; };
  LayerSolution s1 =
      solve_half_strip_parabolic(2.0, init, wall, nullptr, lg, 1, 0, 1);
  LayerSolution s2 =
      solve_half_strip_parabolic(2.0, init, wall, nullptr, lg, 2, 0, 1);
  int r = s1.nrows - 1;
  // order 1 integrates from far field, order 2 from the wall
  CHECK(std::abs(s1.v[r][lg.nY]) < 1e-14);
  CHECK(std::abs(s2.v[r][0]) < 1e-14);
  // d_Y v = -ux1 at interior nodes, up to quadrature truncation
  for (int j = 20; j <= 40; ++j) {
    double dv = (s1.v[r][j + 1] - s1.v[r][j - 1]) /
                (lg.Y[j + 1] - lg.Y[j - 1]);
    CHECK(dv == Catch::Approx(-s1.ux1[r][j]).margin(2.5e-3));
  }
}

TEST_CASE("weighted decay diagnostics") {
  // 1-D oracle: f = exp(-Y), m = 2; the weighted sup lives on [3,4] where
  // (1+Y)^2 exp(-Y) falls from ~0.797 to ~0.458.
  double sup = weighted_sup_profile([](double Y) { return std::exp(-Y); }, 2,
                                    12.0);
  CHECK(sup > 0.45);
  CHECK(sup < 0.80);
  LayerGrid lg = make_layer_grid(0.04, 40);
  auto init = [](double Y) { return -0.5 * Y * Y * chi(Y); };
  auto wall = [](double) { return 0.0; };
  LayerSolution sol =
      solve_half_strip_parabolic(2.0, init, wall, nullptr, lg, 1, 0, 1);
  DecayNorms n0 = weighted_decay_norms(sol, 2, 0);
  DecayNorms n1 = weighted_decay_norms(sol, 2, 1);
  CHECK(n0.sup >= 0.0);
  CHECK(n0.lp > 0.0);
  CHECK(std::isfinite(n1.sup));
  CHECK(std::isfinite(n1.lp));
}

TEST_CASE("cutoff assembly: support, divergence, and the residual split") {
  BaseFlow f = BaseFlow::quartic(2.0, 2.2, 0.15);
  double eps = 0.1, a0 = 0.4;
  Grid g = build_grid(24, 96, 0.04, eps, Grading::tanh_walls, 1.5);
  LayerGrid lg = make_layer_grid(0.04, 24 * 4);
  auto initL = [](double Y) { return -0.4 * Y * Y * chi(Y); };
  auto initU = [](double Y) { return 0.3 * Y * Y * chi(Y); };
  auto wall = [](double) { return 0.0; };
  LayerSolution low =
      solve_half_strip_parabolic(f.mu(0.0), initL, wall, nullptr, lg, 1, 0, 4);
  LayerSolution up =
      solve_half_strip_parabolic(f.mu(2.0), initU, wall, nullptr, lg, 1, 1, 4);
  LayerPhysical ph = apply_cutoff(low, up, g, f, eps, a0);

  // support confined to wall collars of width a0
  for (int i = 0; i <= g.n1; ++i)
    for (int j = 0; j <= g.n2; ++j)
      if (g.x2[j] > a0 && g.x2[j] < 2.0 - a0) {
        CHECK(ph.up(i, j) == 0.0);
        CHECK(ph.vp(i, j) == 0.0);
      }

  // the scaled pair is divergence-free to rounding
  CHECK(divergence_free_layer_check(ph, g) < 1e-11);

  // product-rule split: mu d_x1 u_p - eps d2_x2 u_p equals the cutoff
  // commutator plus the slow-coefficient correction at every node
  double worst = 0.0;
  for (int i = 0; i <= g.n1; ++i)
    for (int j = 0; j <= g.n2; ++j) {
      double lhs = f.mu(g.x2[j]) * ph.up_x1(i, j) - ph.upYY(i, j);
      double rhs = ph.Ccut_true(i, j) + ph.Capp(i, j);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  CHECK(worst < 1e-10);

  // mirrored wall: vertical velocity flips sign, streamwise does not
  int jw = g.n2;  // upper wall row
  CHECK(ph.up(3, jw) == Catch::Approx(up.u[3][0]).margin(1e-12));
  CHECK(ph.vp(3, jw) == Catch::Approx(-up.v[3][0]).margin(1e-12));
  CHECK(ph.up(3, 0) == Catch::Approx(low.u[3][0]).margin(1e-12));
  CHECK(ph.vp(3, 0) == Catch::Approx(low.v[3][0]).margin(1e-12));

  CHECK_THROWS_AS(apply_cutoff(low, up, g, f, eps, 1.2), ConfigError);
}
