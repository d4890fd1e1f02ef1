#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "base_flow.hpp"
#include "errors.hpp"
#include "grid.hpp"

namespace ssflow {

// Wave speeds of the first-order corrector system in the marching form
// U_x1 + M(x2) U_x2 + ... : one standing family (speed 0) and the pair
// +-c / sqrt(mu^2 - c^2).  Supersonic mu > c is required throughout.
inline double char_speed(double mu, double c) {
  double d = mu * mu - c * c;
  if (d <= 0.0)
    throw SubsonicPoint(0.0, "characteristic speed needs mu > c, got mu = " +
                                 std::to_string(mu));
  return c / std::sqrt(d);
}

inline std::array<double, 3> eigen_speeds(double mu, double c) {
  double s = char_speed(mu, c);
  return {0.0, s, -s};
}

// det(B - lambda A) for the corrector pencil; its roots are the speeds above.
// Used by property tests.
inline double pencil_det(double mu, double c, double lam) {
  // A = [[1,0,mu],[mu,0,c^2],[0,mu,0]], B = [[0,1,0],[0,0,0],[0,0,c^2]]
  double a11 = -lam, a12 = 1.0, a13 = -lam * mu;
  double a21 = -lam * mu, a22 = 0.0, a23 = -lam * c * c;
  double a31 = 0.0, a32 = -lam * mu, a33 = c * c;
  return a11 * (a22 * a33 - a23 * a32) - a12 * (a21 * a33 - a23 * a31) +
         a13 * (a21 * a32 - a22 * a31);
}

// Integrate dy/dx1 = speed(y) with classical RK4 at the grid's x1 nodes,
// clamped to the channel.  family: 0 standing, +1 up-running, -1
// down-running.
inline std::vector<double> trace_characteristic(const Grid& g,
                                                const BaseFlow& flow, double c,
                                                double y0, int family) {
  auto speed = [&](double y) -> double {
    y = std::min(std::max(y, 0.0), 2.0);
    if (family == 0) return 0.0;
    return family > 0 ? char_speed(flow.mu(y), c) : -char_speed(flow.mu(y), c);
  };
  std::vector<double> y(g.n1 + 1);
  y[0] = y0;
  for (int i = 0; i < g.n1; ++i) {
    double h = g.x1[i + 1] - g.x1[i], yy = y[i];
    double k1 = speed(yy);
    double k2 = speed(yy + 0.5 * h * k1);
    double k3 = speed(yy + 0.5 * h * k2);
    double k4 = speed(yy + h * k3);
    yy += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    y[i + 1] = std::min(std::max(yy, 0.0), 2.0);
  }
  return y;
}

// Influence partition: region 1 below the up-running characteristic from the
// lower inflow corner, region 3 above the down-running one from the upper
// inflow corner, region 2 between (where the standing family from the inflow
// carries the data).  Labels are per cell, by cell center.
struct Partition {
  std::vector<double> curve_low;   // y2(x1; 0)
  std::vector<double> curve_high;  // y3(x1; 2)
  std::vector<int> label;          // n1 * n2 entries, values 1/2/3
  bool crossed = false;            // corner characteristics met before x1 = L
  int count1 = 0, count2 = 0, count3 = 0;

  int cell(int i, int j, int n2) const { return label[i * n2 + j]; }
};

inline Partition partition_domain(const Grid& g, const BaseFlow& flow,
                                  double c) {
  Partition p;
  p.curve_low = trace_characteristic(g, flow, c, 0.0, +1);
  p.curve_high = trace_characteristic(g, flow, c, 2.0, -1);
  for (int i = 0; i <= g.n1; ++i)
    if (p.curve_low[i] >= p.curve_high[i]) p.crossed = true;
  p.label.assign(static_cast<std::size_t>(g.n1) * g.n2, 0);
  for (int i = 0; i < g.n1; ++i) {
    double xc_low = 0.5 * (p.curve_low[i] + p.curve_low[i + 1]);
    double xc_high = 0.5 * (p.curve_high[i] + p.curve_high[i + 1]);
    for (int j = 0; j < g.n2; ++j) {
      double yc = 0.5 * (g.x2[j] + g.x2[j + 1]);
      int lab = (yc < xc_low) ? 1 : (yc > xc_high ? 3 : 2);
      p.label[i * g.n2 + j] = lab;
      (lab == 1 ? p.count1 : lab == 2 ? p.count2 : p.count3)++;
    }
  }
  return p;
}

}  // namespace ssflow
