#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "approx.hpp"
#include "boundary_data.hpp"
#include "field.hpp"
#include "grid.hpp"
#include "params.hpp"

namespace ssflow {

// Boundary lift for the remainder problem.  The prescribed in/outflow
// deviations (du, dv at x1 = 0, L; drho at x1 = 0) are absorbed into
//   b1 = (1 - x1/L) du_in(x2) + (x1/L) du_out(x2),
//   b2 = (1 - x1/L) dv_in(x2) + (x1/L) dv_out(x2),
//   S  = drho_in(x2),
// after which the remainder unknowns satisfy homogeneous conditions.
// Substituting the shifted state into the linearized system moves the
// state-independent part of the forcing onto the right-hand side:
//   g0bar = -div b - (vs + b2) S',
//   g1bar = -us b1_x1 - us_x2 b2 + eps lap b1 + eps lam d_x1(div b),
//   g2bar = -us b2_x1 + eps lap b2 + eps lam d_x2(div b) - c^2 S'.
// (The remainder's own coupling to the shift, -vbar S', depends on the
// iterate and is applied by the outer driver.)  The lifts are linear in x1
// and analytic in x2, so every derivative field here is assembled from
// closed-form series derivatives, not finite differences.  Wall rows of b1
// and b2 are snapped to exact zeros: the series vanish there analytically
// and removing the last-bit roundoff keeps the wall streamlines of the
// shifted transport speed invariant.
struct HomogenizedProblem {
  Field b1, b2;
  Field b1_x1, b1_x2, b2_x1, b2_x2;
  Field lap_b1, lap_b2;       // = b*_x2x2: the x1 dependence is affine
  Field divb_x1, divb_x2;     // d_x1(div b), d_x2(div b)
  std::vector<double> S, Sp;  // density shift and derivative per x2 node
  Field g0bar, g1bar, g2bar;
  double shift_max = 0.0;
};

inline HomogenizedProblem homogenize(const Params& pr, const Grid& g,
                                     const ApproxSolution& ap,
                                     const BoundaryData& bd) {
  if (std::abs(g.L - pr.L) > 1e-13 * std::max(1.0, pr.L))
    throw GridMismatch("boundary lift: grid length " + std::to_string(g.L) +
                       " vs parameter L " + std::to_string(pr.L));
  check_shape(ap.us, g, "boundary lift us");
  check_shape(ap.vs, g, "boundary lift vs");
  check_shape(ap.us_x2, g, "boundary lift us_x2");
  HomogenizedProblem hp;
  for (Field* f : {&hp.b1, &hp.b2, &hp.b1_x1, &hp.b1_x2, &hp.b2_x1,
                   &hp.b2_x2, &hp.lap_b1, &hp.lap_b2, &hp.divb_x1,
                   &hp.divb_x2, &hp.g0bar, &hp.g1bar, &hp.g2bar})
    *f = Field(g);
  hp.S.resize(g.n2 + 1);
  hp.Sp.resize(g.n2 + 1);
  for (int j = 0; j <= g.n2; ++j) {
    hp.S[j] = bd.drho_in(g.x2[j]);
    hp.Sp[j] = bd.drho_in(g.x2[j], 1);
  }
  double c = pr.sound_speed(), c2 = c * c;
  double eps = pr.eps, lam = pr.lambda, L = g.L;
  for (int j = 0; j <= g.n2; ++j) {
    double y = g.x2[j];
    bool wall = (j == 0 || j == g.n2);
    double dui = wall ? 0.0 : bd.du_in(y), duo = wall ? 0.0 : bd.du_out(y);
    double dvi = wall ? 0.0 : bd.dv_in(y), dvo = wall ? 0.0 : bd.dv_out(y);
    double dui1 = bd.du_in(y, 1), duo1 = bd.du_out(y, 1);
    double dvi1 = bd.dv_in(y, 1), dvo1 = bd.dv_out(y, 1);
    double dui2 = bd.du_in(y, 2), duo2 = bd.du_out(y, 2);
    double dvi2 = bd.dv_in(y, 2), dvo2 = bd.dv_out(y, 2);
    for (int i = 0; i <= g.n1; ++i) {
      double s = g.x1[i] / L, om = 1.0 - s;
      hp.b1(i, j) = om * dui + s * duo;
      hp.b2(i, j) = om * dvi + s * dvo;
      hp.b1_x1(i, j) = (duo - dui) / L;
      hp.b2_x1(i, j) = (dvo - dvi) / L;
      hp.b1_x2(i, j) = om * dui1 + s * duo1;
      hp.b2_x2(i, j) = om * dvi1 + s * dvo1;
      hp.lap_b1(i, j) = om * dui2 + s * duo2;
      hp.lap_b2(i, j) = om * dvi2 + s * dvo2;
      hp.divb_x1(i, j) = (dvo1 - dvi1) / L;
      hp.divb_x2(i, j) = (duo1 - dui1) / L + om * dvi2 + s * dvo2;
      hp.g0bar(i, j) = -(hp.b1_x1(i, j) + hp.b2_x2(i, j)) -
                       (ap.vs(i, j) + hp.b2(i, j)) * hp.Sp[j];
      hp.g1bar(i, j) = -ap.us(i, j) * hp.b1_x1(i, j) -
                       ap.us_x2(i, j) * hp.b2(i, j) +
                       eps * hp.lap_b1(i, j) + eps * lam * hp.divb_x1(i, j);
      hp.g2bar(i, j) = -ap.us(i, j) * hp.b2_x1(i, j) +
                       eps * hp.lap_b2(i, j) + eps * lam * hp.divb_x2(i, j) -
                       c2 * hp.Sp[j];
    }
  }
  double sm = std::max(norm_inf(hp.b1), norm_inf(hp.b2));
  for (double x : hp.S) sm = std::max(sm, std::abs(x));
  hp.shift_max = sm;
  return hp;
}

}  // namespace ssflow
