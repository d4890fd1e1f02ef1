#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "ssflow/approx.hpp"

using namespace ssflow;

namespace {
struct Setup {
  Params pr;
  BaseFlow flow = BaseFlow::quartic(2.0, 2.2, 0.15);
  Grid g;
  Setup(double eps) {
    pr.eps = eps;
    pr.L = 0.05;
    g = build_grid(48, 96, pr.L, eps, Grading::tanh_walls, 1.5);
  }
};
}  // namespace

TEST_CASE("assembled flow pins the wall values exactly") {
  Setup s(0.1);
  ApproxSolution ap = assemble_approximation(s.pr, s.g, s.flow);
  double mu0 = s.flow.mu(0.0), mu2 = s.flow.mu(2.0);
  for (int i = 0; i <= s.g.n1; ++i) {
    CHECK(std::abs(ap.us(i, 0) - mu0) < 5e-12);
    CHECK(std::abs(ap.us(i, s.g.n2) - mu2) < 5e-12);
    CHECK(std::abs(ap.vs(i, 0)) < 1e-13);
    CHECK(std::abs(ap.vs(i, s.g.n2)) < 1e-13);
  }
  // density stays near the reference state
  for (int i = 0; i <= s.g.n1; ++i)
    for (int j = 0; j <= s.g.n2; ++j)
      CHECK(std::abs(ap.rhos(i, j) - 1.0) < 0.5);

  // the scaled sublayer pair carries no divergence of its own
  CHECK(ap.layer_div_defect < 1e-12);

  // slaved corner values of the vertical sublayer velocity vanish
  // analytically for profiles with no linear term; discretization only
  CHECK(std::abs(ap.corner_v_low.first) < 5e-3);
  CHECK(std::abs(ap.corner_v_up.first) < 5e-3);

  // second-corrector wall data cancels the first sublayer's vertical trace:
  // e2.v at the wall is the negated stored row value, no interpolation
  for (int i = 0; i <= s.g.n1; i += 7) {
    CHECK(ap.e2.v(i, 0) ==
          Catch::Approx(-ap.lay1_low.v[i][0]).margin(1e-14));
    CHECK(ap.e2.v(i, s.g.n2) ==
          Catch::Approx(ap.lay1_up.v[i][0]).margin(1e-14));
  }

  // diagnostics are populated and finite
  CHECK(ap.sup_Ccut > 0.0);
  CHECK(ap.lp_Ccut > 0.0);
  CHECK(ap.sup_Capp > 0.0);
  CHECK(ap.lp_Capp > 0.0);
  CHECK(std::isfinite(norm_inf(ap.us_x2)));
}

TEST_CASE("residual forcing: the two assembly routes agree") {
  Setup s(0.1);
  ApproxSolution ap = assemble_approximation(s.pr, s.g, s.flow);
  ForcingResiduals ft = forcing_residuals(ap, s.g, s.flow,
                                          ResidualRoute::termwise);
  ForcingResiduals fc = forcing_residuals(ap, s.g, s.flow,
                                          ResidualRoute::composite);
  std::array<double, 3> agr = residual_route_agreement(ft, fc, s.g);
  CHECK(agr[0] < 1e-10);   // mass row: exact sublayer divergence cancellation
  CHECK(agr[1] < 1e-8);    // streamwise row: product-rule vs direct defect
  CHECK(agr[2] < 1e-15);   // vertical row: shared expression

  CHECK(ft.l2_g0 > 0.0);
  CHECK(std::isfinite(ft.lp_total));
  // vector-magnitude norm dominates each component norm
  CHECK(ft.lp_total >= ft.lp_g1 * (1.0 - 1e-12));
  CHECK(ft.lp_total >= ft.lp_g2 * (1.0 - 1e-12));
}

TEST_CASE("forcing shrinks as the viscosity parameter drops") {
  Setup s1(0.1), s2(0.05);
  ApproxSolution a1 = assemble_approximation(s1.pr, s1.g, s1.flow);
  ApproxSolution a2 = assemble_approximation(s2.pr, s2.g, s2.flow);
  ForcingResiduals f1 = forcing_residuals(a1, s1.g, s1.flow,
                                          ResidualRoute::termwise);
  ForcingResiduals f2 = forcing_residuals(a2, s2.g, s2.flow,
                                          ResidualRoute::termwise);
  // mass forcing is quadratic in eps; halving eps wins at least a factor 2
  CHECK(f2.l2_g0 < 0.5 * f1.l2_g0);
  CHECK(f2.lp_total < f1.lp_total);
  // the cutoff commutator samples the profile tail: super-polynomial drop
  CHECK(a2.sup_Ccut < 0.5 * a1.sup_Ccut);
}
