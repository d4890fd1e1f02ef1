#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "base_flow.hpp"
#include "characteristics.hpp"
#include "cutoffs.hpp"
#include "errors.hpp"
#include "field.hpp"
#include "grid.hpp"
#include "jet.hpp"

namespace ssflow {

// ---------------------------------------------------------------------------
// Inviscid corrector solver.  The system, in marching form
//   U_x1 + M(x2) U_x2 + A^{-1} D U = A^{-1} F,   U = (u, v, rho),
// has M = A^{-1} B with the closed-form entries below; the first-order
// upwind scheme splits M into its up/down-running parts pointwise and steps
// explicitly in x1 under a CFL bound.  Wall rows impose v through the
// incoming characteristic, inflow prescribes all three components.
// ---------------------------------------------------------------------------

struct EulerCoeffs {
  double mu, dmu, c;
  double det;           // mu (mu^2 - c^2)
  double s, kk, mm;     // speed c/sqrt(mu^2-c^2), c^2/(mu^2-c^2), mu/(mu^2-c^2)

  EulerCoeffs(const BaseFlow& f, double x2, double c_) {
    mu = f.mu(x2);
    dmu = f.mu(x2, 1);
    c = c_;
    double d = mu * mu - c * c;
    if (d <= 0.0)
      throw SubsonicPoint(x2, "corrector system degenerate: mu <= c at x2 = " +
                                  std::to_string(x2));
    det = mu * d;
    s = c / std::sqrt(d);
    kk = c * c / d;
    mm = mu / d;
  }

  // A^{-1} applied to a vector.
  std::array<double, 3> ainv(const std::array<double, 3>& f) const {
    return {(-mu * c * c * f[0] + mu * mu * f[1]) / det,
            (mu * mu - c * c) * f[2] / det,
            (mu * mu * f[0] - mu * f[1]) / det};
  }
  // M^+ U_x2 + M^- U_x2 with separate slopes for the up/down-running parts.
  // M^+ = s r2 l2^T, M^- = -s r3 l3^T with r2 = (-kk, s, mm),
  // r3 = (kk, s, -mm), l2 = (0, 1/(2s), 1/(2mm)), l3 = (0, 1/(2s), -1/(2mm)).
  std::array<double, 3> flux(const std::array<double, 3>& dm,
                             const std::array<double, 3>& dp) const {
    double w2 = 0.5 * (dm[1] / s + dm[2] / mm);   // up-running uses backward
    double w3 = 0.5 * (dp[1] / s - dp[2] / mm);   // down-running uses forward
    return {s * (-kk * w2) - s * (kk * w3), s * (s * w2) - s * (s * w3),
            s * (mm * w2) - s * (-mm * w3)};
  }
};

struct EulerField {
  Field u, v, rho;
  double cfl = 0.0;  // max |lambda| dt / dx2 actually used

  EulerField() = default;
  explicit EulerField(const Grid& g) : u(g), v(g), rho(g) {}
};

struct EulerInput {
  std::function<double(double)> in_u, in_v, in_rho;    // inflow data of x2
  std::function<double(double)> wall_v_low, wall_v_up; // wall v data of x1
  // forcing F(x1, x2) -> 3 components; the first-order corrector uses
  // (0, mu''(x2), 0).
  std::function<std::array<double, 3>(double, double)> forcing;
};

inline EulerInput first_corrector_input(const BaseFlow& flow) {
  EulerInput in;
  auto zero1 = [](double) { return 0.0; };
  in.in_u = zero1;
  in.in_v = zero1;
  in.in_rho = zero1;
  in.wall_v_low = zero1;
  in.wall_v_up = zero1;
  in.forcing = [&flow](double, double x2) -> std::array<double, 3> {
    return {0.0, flow.mu(x2, 2), 0.0};
  };
  return in;
}

inline EulerField solve_hyperbolic(const Grid& g, const BaseFlow& flow,
                                   double c, const EulerInput& in) {
  const int n2 = g.n2;
  std::vector<EulerCoeffs> co;
  co.reserve(n2 + 1);
  double max_speed = 0.0;
  for (int j = 0; j <= n2; ++j) {
    co.emplace_back(flow, g.x2[j], c);
    max_speed = std::max(max_speed, co.back().s);
  }
  // CFL: the explicit step must not outrun the finest local cell.
  double allowed = 0.9 * g.min_dx2() / max_speed;
  if (g.h1 > allowed)
    throw CFLViolation("x1 step " + std::to_string(g.h1) +
                       " exceeds stability bound " + std::to_string(allowed) +
                       " = 0.9 min(dx2) / max|lambda|");

  EulerField out(g);
  out.cfl = max_speed * g.h1 / g.min_dx2();
  std::vector<std::array<double, 3>> cur(n2 + 1), nxt(n2 + 1);
  for (int j = 0; j <= n2; ++j)
    cur[j] = {in.in_u(g.x2[j]), in.in_v(g.x2[j]), in.in_rho(g.x2[j])};
  auto store = [&](int i, const std::vector<std::array<double, 3>>& U) {
    for (int j = 0; j <= n2; ++j) {
      out.u(i, j) = U[j][0];
      out.v(i, j) = U[j][1];
      out.rho(i, j) = U[j][2];
    }
  };
  store(0, cur);

  std::array<double, 3> zero{0.0, 0.0, 0.0};
  for (int i = 0; i < g.n1; ++i) {
    double dt = g.x1[i + 1] - g.x1[i];
    for (int j = 0; j <= n2; ++j) {
      const EulerCoeffs& cj = co[j];
      std::array<double, 3> dm = zero, dp = zero;
      if (j > 0) {
        double h = g.x2[j] - g.x2[j - 1];
        for (int k = 0; k < 3; ++k) dm[k] = (cur[j][k] - cur[j - 1][k]) / h;
      }
      if (j < n2) {
        double h = g.x2[j + 1] - g.x2[j];
        for (int k = 0; k < 3; ++k) dp[k] = (cur[j + 1][k] - cur[j][k]) / h;
      }
      // At the walls only the outgoing slope exists; the incoming family is
      // fixed afterwards through the boundary projection.
      if (j == 0) dm = dp;   // placeholder slope; the w2 row is overwritten
      if (j == n2) dp = dm;
      std::array<double, 3> fl = cj.flux(dm, dp);
      std::array<double, 3> low = cj.ainv(
          {0.0, cj.dmu * cur[j][1], 0.0});  // A^{-1} D U, D = diag-row mu' v
      std::array<double, 3> src = cj.ainv(in.forcing(g.x1[i], g.x2[j]));
      for (int k = 0; k < 3; ++k)
        nxt[j][k] = cur[j][k] + dt * (src[k] - fl[k] - low[k]);
    }
    // Wall rows: project the provisional state onto the prescribed v via the
    // incoming eigenvector (r2 from below, r3 from above).
    {
      const EulerCoeffs& c0 = co[0];
      double alpha = (in.wall_v_low(g.x1[i + 1]) - nxt[0][1]) / c0.s;
      nxt[0][0] += alpha * (-c0.kk);
      nxt[0][1] += alpha * c0.s;
      nxt[0][2] += alpha * c0.mm;
      const EulerCoeffs& cN = co[n2];
      double beta = (in.wall_v_up(g.x1[i + 1]) - nxt[n2][1]) / cN.s;
      nxt[n2][0] += beta * cN.kk;
      nxt[n2][1] += beta * cN.s;
      nxt[n2][2] += beta * (-cN.mm);
    }
    cur.swap(nxt);
    store(i + 1, cur);
  }
  return out;
}

// Discrete residual || A U_x1 + B U_x2 + D U - F ||_{L1} of a solved field,
// with centered/one-sided differences.  First-order upwinding makes this
// O(h); reported, not asserted, in production runs.
inline double euler_residual_l1(const EulerField& ef, const Grid& g,
                                const BaseFlow& flow, double c,
                                const EulerInput& in) {
  double acc = 0.0;
  for (int i = 0; i <= g.n1; ++i)
    for (int j = 0; j <= g.n2; ++j) {
      double mu = flow.mu(g.x2[j]), dmu = flow.mu(g.x2[j], 1);
      double ux1 = ddx1(ef.u, g, i, j), vx1 = ddx1(ef.v, g, i, j),
             rx1 = ddx1(ef.rho, g, i, j);
      double vx2 = ddx2(ef.v, g, i, j), rx2 = ddx2(ef.rho, g, i, j);
      std::array<double, 3> F = in.forcing(g.x1[i], g.x2[j]);
      double r0 = ux1 + vx2 + mu * rx1 - F[0];
      double r1 = mu * ux1 + dmu * ef.v(i, j) + c * c * rx1 - F[1];
      double r2 = mu * vx1 + c * c * rx2 - F[2];
      acc += g.weight(i, j) * (std::abs(r0) + std::abs(r1) + std::abs(r2));
    }
  return acc;
}

// ---------------------------------------------------------------------------
// Corner traces.  Differentiating the system in x1 and restricting to the
// inflow boundary gives the recursion
//   V_{k+1} = A^{-1} [ F delta_{k0} - B V_k' - D V_k ],   V_0 = inflow data,
// carried out in wall-local Taylor jets (the mirrored upper-wall system has
// the same form with mu~(s) = mu(2-s)).  Each step consumes one x2 order, so
// order-6 profile jets support k <= 4 cleanly.
// ---------------------------------------------------------------------------

struct CornerTraces {
  std::vector<double> du;       // du[k] = d^k_x1 u_e(0, wall), k = 0..K
  double drho_dx1 = 0.0;        // d_x1 rho_e at the corner
  double d2rho_dx1dx2 = 0.0;    // wall-normal derivative of the above
  double dv_dx1 = 0.0;          // d_x1 v_e at the corner
};

// wall: 0 lower, 1 upper.  with_forcing: include F = (0, mu'', 0) (first
// corrector); inflow_v/inflow_rho: wall-local jets of the inflow data (zero
// for the first corrector).
inline CornerTraces corner_x1_derivatives(const BaseFlow& flow, double c,
                                          int wall, int max_k,
                                          bool with_forcing,
                                          const Jet<6>& inflow_v,
                                          const Jet<6>& inflow_rho) {
  using J = Jet<6>;
  J mu = flow.wall_jet(wall);
  J dmu = mu.derivative();
  J c2 = J::constant(c * c);
  J det = mu * (mu * mu - c2);
  // rows of A^{-1}
  auto ainv = [&](const std::array<J, 3>& f) -> std::array<J, 3> {
    return {((mu * c2 * f[0]) * (-1.0) + mu * mu * f[1]) / det,
            ((mu * mu - c2) * f[2]) / det,
            (mu * mu * f[0] - mu * f[1]) / det};
  };
  std::array<J, 3> V = {J::constant(0.0), inflow_v, inflow_rho};
  CornerTraces out;
  out.du.push_back(V[0].value());
  for (int k = 1; k <= max_k; ++k) {
    std::array<J, 3> rhs;
    // B V' = (v', 0, c^2 rho'), D V = (0, mu' v, 0)
    J vp = V[1].derivative(), rp = V[2].derivative();
    rhs[0] = -vp;
    rhs[1] = dmu * V[1] * (-1.0);
    rhs[2] = (c2 * rp) * (-1.0);
    if (k == 1 && with_forcing) rhs[1] = rhs[1] + mu.derivative().derivative();
    V = ainv(rhs);
    out.du.push_back(V[0].value());
    if (k == 1) {
      out.drho_dx1 = V[2].value();
      out.d2rho_dx1dx2 = V[2].deriv(1);
      out.dv_dx1 = V[1].value();
    }
  }
  return out;
}

// Closed forms from restricting the first-corrector system to the inflow
// corner (used to cross-check the jet recursion and to flag the loss of
// second-order corner compatibility when mu'' != 0 at a wall).
inline double corner_rho_x1_closed(const BaseFlow& flow, double c, int wall) {
  double x0 = wall == 0 ? 0.0 : 2.0;
  double mu = flow.mu(x0);
  return flow.mu(x0, 2) / (c * c - mu * mu);
}
inline double corner_rho_x1x2_closed(const BaseFlow& flow, double c,
                                     int wall) {
  double x0 = wall == 0 ? 0.0 : 2.0;
  double sgn = wall == 0 ? 1.0 : -1.0;  // wall-local derivative
  double mu = flow.mu(x0), d = c * c - mu * mu;
  return sgn * (flow.mu(x0, 3) / d +
                2.0 * mu * flow.mu(x0, 1) * flow.mu(x0, 2) / (d * d));
}

struct CompatibilityReport {
  bool second_order_ok = true;
  double defect_low = 0.0, defect_up = 0.0;  // mu'' at the walls
  std::vector<std::string> warnings;
};

inline CompatibilityReport check_corner_compatibility_euler(
    const BaseFlow& flow, double tol = 1e-12) {
  CompatibilityReport r;
  r.defect_low = flow.mu(0.0, 2);
  r.defect_up = flow.mu(2.0, 2);
  if (std::abs(r.defect_low) > tol || std::abs(r.defect_up) > tol) {
    r.second_order_ok = false;
    r.warnings.push_back(
        "mu'' nonzero at a wall: second-order corner compatibility of the "
        "corrector data fails (expected; limits attainable regularity)");
  }
  return r;
}

// ---------------------------------------------------------------------------
// Inflow data of the second corrector, built from the first layer's corner
// behavior: a plateau continuation of -v_p1 near each wall for v, and the
// linear-in-wall-distance density profile that restores first-order corner
// compatibility, both cut off at distance b from the wall.
// ---------------------------------------------------------------------------

struct SecondCorrectorBC {
  double b = 0.25;
  double v_low = 0.0, v_up = 0.0;    // physical v_p1(0, wall)
  double dv_low = 0.0, dv_up = 0.0;  // physical d_x1 v_p1(0, wall)
  double c2 = 1.0;
  const BaseFlow* flow = nullptr;

  double v0(double x2) const {
    return -v_low * chi(x2 / b) - v_up * chi((2.0 - x2) / b);
  }
  double rho0(double x2) const {
    double mu = flow->mu(x2);
    return mu / c2 * dv_low * x2 * chi(x2 / b) -
           mu / c2 * dv_up * (2.0 - x2) * chi((2.0 - x2) / b);
  }
};

inline SecondCorrectorBC second_corrector_boundary_data(
    double v_p1_low, double dv_p1_low, double v_p1_up, double dv_p1_up,
    double b, const BaseFlow& flow, double c) {
  if (b <= 0.0 || b > 1.0)
    throw ConfigError("second corrector cutoff width b must lie in (0,1]");
  SecondCorrectorBC bc;
  bc.b = b;
  bc.v_low = v_p1_low;
  bc.v_up = v_p1_up;
  bc.dv_low = dv_p1_low;
  bc.dv_up = dv_p1_up;
  bc.c2 = c * c;
  bc.flow = &flow;
  return bc;
}

}  // namespace ssflow
