#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "base_flow.hpp"
#include "cutoffs.hpp"
#include "errors.hpp"
#include "euler.hpp"
#include "field.hpp"
#include "field_ops.hpp"
#include "grid.hpp"
#include "jet.hpp"
#include "layer.hpp"
#include "params.hpp"

namespace ssflow {

// ---------------------------------------------------------------------------
// Assembly of the multi-scale approximate solution
//   u_s = mu + eps (U_E + U_P),  v_s = eps V_E + eps^{3/2} V_P,
//   rho_s = 1 + eps P_E,
// with U_E = u1 + sqrt(eps) u2 (inviscid correctors) and U_P, V_P the
// cutoff sublayer bundles.  All first/second derivatives that the residual
// bundles and the solvers consume are cached here once; sublayer x2
// derivatives are carried in the scaled slots (UPY = sqrt(eps) d_x2 U_P,
// UPYY = eps d2_x2 U_P, ...) so that no difference quotient ever straddles
// the eps^{1/2} wall scale.
// ---------------------------------------------------------------------------

struct ApproxConfig {
  double a0 = 0.4;       // cutoff radius of the sublayer
  double b = 0.25;       // cutoff width of the second-corrector inflow data
  double Ymax = 12.0;
  int layer_nY = 240;
  double layer_beta = 3.0;
  int layer_mult = 4;    // sublayer marching steps per x1 grid interval
};

struct ApproxSolution {
  Params pr;
  ApproxConfig ac;
  // stage outputs kept for diagnostics
  EulerField e1, e2;
  SecondCorrectorBC bc2;
  CornerTraces tr1_low, tr1_up, tr2_low, tr2_up;
  LayerSolution lay1_low, lay1_up, lay2_low, lay2_up;
  LayerPhysical ph1, ph2;
  std::pair<double, double> corner_v_low, corner_v_up;  // (v_p1, d_x1 v_p1)
  double layer_div_defect = 0.0;
  // bundles
  Field UE, VE, PE, UP, VP;
  Field UE_x1, UE_x2, VE_x1, VE_x2, PE_x1, PE_x2;
  Field UE_x1x1, UE_x2x2, VE_x1x1, VE_x2x2, VE_x1x2, UE_x1x2;
  Field divUE, divUE_x2;
  Field UP_x1, UP_x1x1, UPY, UPYY, VP_x1, VP_x1x1, VPY, VPYY;
  // composite state and first derivatives
  Field us, vs, rhos;
  Field us_x1, us_x2, vs_x1, vs_x2, rhos_x1, rhos_x2;
  // cutoff commutator of the full bundle (product-rule form), for scaling
  // diagnostics
  Field Ccut_bundle, Capp_bundle;
  double sup_Ccut = 0.0, lp_Ccut = 0.0, sup_Capp = 0.0, lp_Capp = 0.0;
};

namespace detail {
// Wall trace of a field as a function of x1 (exact at grid nodes, cubic
// Lagrange in between for the sublayer march).
inline std::function<double(double)> wall_trace(const Field& f, const Grid& g,
                                                int j) {
  std::vector<double> vals(g.n1 + 1);
  for (int i = 0; i <= g.n1; ++i) vals[i] = f(i, j);
  double h = g.h1;
  int n1 = g.n1;
  return [vals, h, n1](double x) {
    double t = x / h;
    int i = std::min(std::max(static_cast<int>(t) - 1, 0), n1 - 3);
    double r = 0.0;
    for (int a = 0; a < 4; ++a) {
      double term = vals[i + a];
      for (int b2 = 0; b2 < 4; ++b2) {
        if (a == b2) continue;
        term *= (t - (i + b2)) / static_cast<double>(a - b2);
      }
      r += term;
    }
    return r;
  };
}
}  // namespace detail

inline ApproxSolution assemble_approximation(const Params& pr, const Grid& g,
                                             const BaseFlow& flow,
                                             const ApproxConfig& ac = {}) {
  ApproxSolution ap;
  ap.pr = pr;
  ap.ac = ac;
  double c = pr.sound_speed(), eps = pr.eps, se = std::sqrt(eps);

  // --- first inviscid corrector and its corner jets ---
  ap.e1 = solve_hyperbolic(g, flow, c, first_corrector_input(flow));
  Jet<6> zj = Jet<6>::constant(0.0);
  ap.tr1_low = corner_x1_derivatives(flow, c, 0, 4, true, zj, zj);
  ap.tr1_up = corner_x1_derivatives(flow, c, 1, 4, true, zj, zj);

  // --- first sublayer (order 1), both walls ---
  LayerGrid lg = make_layer_grid(pr.L, ac.layer_mult * g.n1, ac.layer_nY,
                                 ac.Ymax, ac.layer_beta);
  double A_low = flow.mu(0.0), A_up = flow.mu(2.0);
  LayerInitial i1_low = layer_initial_polynomial(ap.tr1_low.du, A_low, 1);
  LayerInitial i1_up = layer_initial_polynomial(ap.tr1_up.du, A_up, 1);
  auto w1_low = detail::wall_trace(ap.e1.u, g, 0);
  auto w1_up = detail::wall_trace(ap.e1.u, g, g.n2);
  ap.lay1_low = solve_half_strip_parabolic(
      A_low, [&](double Y) { return i1_low.value(Y); }, w1_low, nullptr, lg, 1,
      0, ac.layer_mult);
  ap.lay1_up = solve_half_strip_parabolic(
      A_up, [&](double Y) { return i1_up.value(Y); }, w1_up, nullptr, lg, 1, 1,
      ac.layer_mult);
  ap.corner_v_low = layer_corner_v(ap.lay1_low);
  ap.corner_v_up = layer_corner_v(ap.lay1_up);

  // --- second corrector: inflow data repairs the corner mismatch left by
  // the first sublayer's slaved vertical velocity ---
  ap.bc2 = second_corrector_boundary_data(
      ap.corner_v_low.first, ap.corner_v_low.second, ap.corner_v_up.first,
      ap.corner_v_up.second, ac.b, flow, c);
  EulerInput in2;
  in2.in_u = [](double) { return 0.0; };
  in2.in_v = [&ap](double x2) { return ap.bc2.v0(x2); };
  in2.in_rho = [&ap](double x2) { return ap.bc2.rho0(x2); };
  // wall data cancels the sublayer's residual vertical velocity
  {
    const LayerSolution& sl = ap.lay1_low;
    const LayerSolution& su = ap.lay1_up;
    double step = sl.stride * sl.lg.dx1;
    in2.wall_v_low = [&sl, step](double x) {
      int r = std::min(static_cast<int>(std::lround(x / step)), sl.nrows - 1);
      return -sl.v[r][0];  // physical v_p1(x,0) = +v(x,0)
    };
    in2.wall_v_up = [&su, step](double x) {
      int r = std::min(static_cast<int>(std::lround(x / step)), su.nrows - 1);
      return su.v[r][0];   // physical v_p1(x,2) = -v~(x,0)
    };
  }
  in2.forcing = [](double, double) -> std::array<double, 3> {
    return {0.0, 0.0, 0.0};
  };
  ap.e2 = solve_hyperbolic(g, flow, c, in2);

  // --- corner jets of the second corrector (wall-local inflow data) ---
  {
    Jet<6> s_jet = Jet<6>::variable();
    Jet<6> mu_low = flow.wall_jet(0), mu_up = flow.wall_jet(1);
    Jet<6> v_low = Jet<6>::constant(-ap.bc2.v_low);
    Jet<6> r_low = mu_low * s_jet * (ap.bc2.dv_low / (c * c));
    Jet<6> v_up = Jet<6>::constant(ap.bc2.v_up);
    Jet<6> r_up = mu_up * s_jet * (-ap.bc2.dv_up / (c * c));
    ap.tr2_low = corner_x1_derivatives(flow, c, 0, 2, false, v_low, r_low);
    ap.tr2_up = corner_x1_derivatives(flow, c, 1, 2, false, v_up, r_up);
  }

  // --- second sublayer (order 2), both walls ---
  LayerInitial i2_low = layer_initial_polynomial(ap.tr2_low.du, A_low, 2);
  LayerInitial i2_up = layer_initial_polynomial(ap.tr2_up.du, A_up, 2);
  auto w2_low = detail::wall_trace(ap.e2.u, g, 0);
  auto w2_up = detail::wall_trace(ap.e2.u, g, g.n2);
  ap.lay2_low = solve_half_strip_parabolic(
      A_low, [&](double Y) { return i2_low.value(Y); }, w2_low, nullptr, lg, 2,
      0, ac.layer_mult);
  ap.lay2_up = solve_half_strip_parabolic(
      A_up, [&](double Y) { return i2_up.value(Y); }, w2_up, nullptr, lg, 2, 1,
      ac.layer_mult);

  // --- physical sublayer fields and bundles ---
  ap.ph1 = apply_cutoff(ap.lay1_low, ap.lay1_up, g, flow, eps, ac.a0, pr.p);
  ap.ph2 = apply_cutoff(ap.lay2_low, ap.lay2_up, g, flow, eps, ac.a0, pr.p);
  ap.layer_div_defect = std::max(divergence_free_layer_check(ap.ph1, g),
                                 divergence_free_layer_check(ap.ph2, g));

  using detail::axpy;
  ap.UE = axpy(ap.e1.u, se, ap.e2.u);
  ap.VE = axpy(ap.e1.v, se, ap.e2.v);
  ap.PE = axpy(ap.e1.rho, se, ap.e2.rho);
  ap.UP = axpy(ap.ph1.up, se, ap.ph2.up);
  ap.VP = axpy(ap.ph1.vp, se, ap.ph2.vp);
  ap.UP_x1 = axpy(ap.ph1.up_x1, se, ap.ph2.up_x1);
  ap.UP_x1x1 = axpy(ap.ph1.up_x1x1, se, ap.ph2.up_x1x1);
  ap.UPY = axpy(ap.ph1.upY, se, ap.ph2.upY);
  ap.UPYY = axpy(ap.ph1.upYY, se, ap.ph2.upYY);
  ap.VP_x1 = axpy(ap.ph1.vp_x1, se, ap.ph2.vp_x1);
  ap.VP_x1x1 = axpy(ap.ph1.vp_x1x1, se, ap.ph2.vp_x1x1);
  ap.VPY = axpy(ap.ph1.vpY, se, ap.ph2.vpY);
  ap.VPYY = axpy(ap.ph1.vpYY, se, ap.ph2.vpYY);
  ap.Ccut_bundle = axpy(ap.ph1.Ccut_true, se, ap.ph2.Ccut_true);
  ap.Capp_bundle = axpy(ap.ph1.Capp, se, ap.ph2.Capp);
  ap.sup_Ccut = norm_inf(ap.Ccut_bundle);
  ap.lp_Ccut = norm_lp(ap.Ccut_bundle, g, pr.p);
  ap.sup_Capp = norm_inf(ap.Capp_bundle);
  ap.lp_Capp = norm_lp(ap.Capp_bundle, g, pr.p);

  using namespace detail;
  ap.UE_x1 = dx1_field(ap.UE, g);
  ap.UE_x2 = dx2_field(ap.UE, g);
  ap.VE_x1 = dx1_field(ap.VE, g);
  ap.VE_x2 = dx2_field(ap.VE, g);
  ap.PE_x1 = dx1_field(ap.PE, g);
  ap.PE_x2 = dx2_field(ap.PE, g);
  ap.UE_x1x1 = dx1x1_field(ap.UE, g);
  ap.UE_x2x2 = dx2x2_field(ap.UE, g);
  ap.UE_x1x2 = dx1x2_field(ap.UE, g);
  ap.VE_x1x1 = dx1x1_field(ap.VE, g);
  ap.VE_x2x2 = dx2x2_field(ap.VE, g);
  ap.VE_x1x2 = dx1x2_field(ap.VE, g);
  ap.divUE = ap.UE_x1;
  ap.divUE += ap.VE_x2;
  ap.divUE_x2 = dx2_field(ap.divUE, g);

  ap.us = Field(g);
  ap.vs = Field(g);
  ap.rhos = Field(g);
  ap.us_x1 = Field(g);
  ap.us_x2 = Field(g);
  ap.vs_x1 = Field(g);
  ap.vs_x2 = Field(g);
  ap.rhos_x1 = Field(g);
  ap.rhos_x2 = Field(g);
  for (int i = 0; i <= g.n1; ++i)
    for (int j = 0; j <= g.n2; ++j) {
      double mu = flow.mu(g.x2[j]), dmu = flow.mu(g.x2[j], 1);
      ap.us(i, j) = mu + eps * (ap.UE(i, j) + ap.UP(i, j));
      ap.vs(i, j) = eps * ap.VE(i, j) + eps * se * ap.VP(i, j);
      ap.rhos(i, j) = 1.0 + eps * ap.PE(i, j);
      ap.us_x1(i, j) = eps * (ap.UE_x1(i, j) + ap.UP_x1(i, j));
      ap.us_x2(i, j) = dmu + eps * ap.UE_x2(i, j) + se * ap.UPY(i, j);
      ap.vs_x1(i, j) = eps * ap.VE_x1(i, j) + eps * se * ap.VP_x1(i, j);
      ap.vs_x2(i, j) = eps * (ap.VE_x2(i, j) + ap.VPY(i, j));
      ap.rhos_x1(i, j) = eps * ap.PE_x1(i, j);
      ap.rhos_x2(i, j) = eps * ap.PE_x2(i, j);
    }
  return ap;
}

// ---------------------------------------------------------------------------
// Residual forcing of the assembled approximation.  The O(eps) inviscid rows
// and the O(1) base-flow rows cancel against the corrector systems exactly,
// so what remains is the structural bundle below.  Two assembly routes must
// agree: `termwise` splits the sublayer momentum defect into the cutoff
// commutator plus the slow-coefficient correction (the product-rule algebra),
// `composite` evaluates mu d_x1 U_P - UPYY directly from the cached fields.
// The pressure nonlinearity is kept exact: (p'(rho_s) - c^2) d_x1 rho_s, no
// Taylor truncation.
// ---------------------------------------------------------------------------

enum class ResidualRoute { termwise, composite };

struct ForcingResiduals {
  Field g0, g1, g2;
  double l2_g0 = 0.0;       // mass row, L2
  double lp_total = 0.0;    // all rows, L^p of the vector magnitude
  double lp_g1 = 0.0, lp_g2 = 0.0;
};

inline ForcingResiduals forcing_residuals(const ApproxSolution& ap,
                                          const Grid& g, const BaseFlow& flow,
                                          ResidualRoute route) {
  const Params& pr = ap.pr;
  double eps = pr.eps, se = std::sqrt(eps), c = pr.sound_speed();
  double c2 = c * c, lam = pr.lambda;
  double e2 = eps * eps, e25 = e2 * se, e3 = e2 * eps, e35 = e3 * se;
  ForcingResiduals fr;
  fr.g0 = Field(g);
  fr.g1 = Field(g);
  fr.g2 = Field(g);

  for (int i = 0; i <= g.n1; ++i)
    for (int j = 0; j <= g.n2; ++j) {
      double mu = flow.mu(g.x2[j]), dmu = flow.mu(g.x2[j], 1);
      double E = ap.UE(i, j), P = ap.UP(i, j), V = ap.VE(i, j),
             W = ap.VP(i, j), R = ap.PE(i, j);
      double Ex1 = ap.UE_x1(i, j), Px1 = ap.UP_x1(i, j);
      double Ex2 = ap.UE_x2(i, j), Rx1 = ap.PE_x1(i, j), Rx2 = ap.PE_x2(i, j);
      double Vx1 = ap.VE_x1(i, j), Vx2 = ap.VE_x2(i, j);
      double Wx1 = ap.VP_x1(i, j);
      double upy = ap.UPY(i, j), vpy = ap.VPY(i, j);

      // mass row
      double div_here =
          route == ResidualRoute::composite
              ? (ap.us_x1(i, j) + ap.vs_x2(i, j)) / eps
              : ap.divUE(i, j);
      fr.g0(i, j) = e2 * (R * div_here + (E + P) * Rx1 + V * Rx2) +
                    e25 * W * Rx2;

      // streamwise momentum row
      double lay_u;
      if (route == ResidualRoute::composite)
        lay_u = mu * Px1 - ap.UPYY(i, j);
      else
        lay_u = ap.Ccut_bundle(i, j) + ap.Capp_bundle(i, j);
      double sum_x1 = Ex1 + Px1;
      double g1 = eps * lay_u + eps * se * (dmu * W + V * upy) +
                  e2 * ((E + P + mu * R) * sum_x1 + V * Ex2 + W * upy +
                        dmu * R * V - (1.0 + lam) * ap.UE_x1x1(i, j) -
                        ap.UE_x2x2(i, j) - lam * ap.VE_x1x2(i, j) -
                        ap.UP_x1x1(i, j)) +
                  e25 * (W * Ex2 + dmu * R * W + R * V * upy) +
                  e3 * (R * (E + P) * sum_x1 + R * V * Ex2 + R * W * upy) +
                  e35 * R * W * Ex2 +
                  (pr.p_prime(ap.rhos(i, j)) - c2) * eps * Rx1;
      fr.g1(i, j) = g1;

      // vertical momentum row
      double lay_v = mu * Wx1 - ap.VPYY(i, j);
      double g2v = eps * se * lay_v +
                   e2 * ((E + P + mu * R) * Vx1 + V * (Vx2 + vpy) -
                         ap.VE_x1x1(i, j) - ap.VE_x2x2(i, j) -
                         lam * ap.divUE_x2(i, j)) +
                   e25 * ((E + P + mu * R) * Wx1 + W * (Vx2 + vpy) -
                          ap.VP_x1x1(i, j)) +
                   e3 * (R * (E + P) * Vx1 + R * V * (Vx2 + vpy)) +
                   e35 * (R * (E + P) * Wx1 + R * W * (Vx2 + vpy)) +
                   (pr.p_prime(ap.rhos(i, j)) - c2) * eps * Rx2;
      fr.g2(i, j) = g2v;
    }

  fr.l2_g0 = norm_l2(fr.g0, g);
  fr.lp_g1 = norm_lp(fr.g1, g, pr.p);
  fr.lp_g2 = norm_lp(fr.g2, g, pr.p);
  double acc = 0.0;
  for (int i = 0; i <= g.n1; ++i)
    for (int j = 0; j <= g.n2; ++j) {
      double m = std::sqrt(fr.g0(i, j) * fr.g0(i, j) +
                           fr.g1(i, j) * fr.g1(i, j) +
                           fr.g2(i, j) * fr.g2(i, j));
      acc += g.weight(i, j) * std::pow(m, pr.p);
    }
  fr.lp_total = std::pow(acc, 1.0 / pr.p);
  return fr;
}

// Relative interior L2 discrepancy between the two assembly routes, per row.
// Wall rows are excluded: the termwise route keeps the exact algebra there
// while one-sided difference stencils degrade the composite one.
inline std::array<double, 3> residual_route_agreement(const ForcingResiduals& a,
                                                      const ForcingResiduals& b,
                                                      const Grid& g) {
  std::array<double, 3> out{};
  const Field* fa[3] = {&a.g0, &a.g1, &a.g2};
  const Field* fb[3] = {&b.g0, &b.g1, &b.g2};
  for (int k = 0; k < 3; ++k) {
    double num = 0.0, den = 0.0;
    for (int i = 0; i <= g.n1; ++i)
      for (int j = 1; j < g.n2; ++j) {
        double d = (*fa[k])(i, j) - (*fb[k])(i, j);
        double v = (*fa[k])(i, j);
        num += g.weight(i, j) * d * d;
        den += g.weight(i, j) * v * v;
      }
    out[k] = std::sqrt(num) / (std::sqrt(den) + 1e-300);
  }
  return out;
}

}  // namespace ssflow
