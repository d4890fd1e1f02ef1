#pragma once

#include <vector>

#include "errors.hpp"
#include "field.hpp"
#include "grid.hpp"
#include "straighten.hpp"

namespace ssflow {

// Density transport along the frozen streamlines.  In streamline coordinates
// the mass row reduces to an x1-integration: following the label ell,
//
//   rho(x1, ell) = integral_0^{x1} (rhs - div u) / U  ds,
//
// with the integrand read off the physical grid at the streamline position
// (cubic interpolation across x2, trapezoid accumulation in x1) and the
// result pushed back to the physical nodes through the monotone label table.
// The inflow column is identically zero: station 0 is the identity map and
// the accumulated integral starts at zero, so no interpolation error can
// contaminate the inflow boundary condition.
inline Field solve_transport(const Grid& g, const CoordinateMap& cm,
                             const Field& ueps, const Field& f0d,
                             const Field& divud) {
  check_shape(ueps, g, "solve_transport ueps");
  check_shape(f0d, g, "solve_transport f0d");
  check_shape(divud, g, "solve_transport divud");
  int n1 = g.n1, n2 = g.n2;
  // integrand q(station, label) = (f0d - divud)/ueps at the streamline point
  std::vector<std::vector<double>> q(n1 + 1, std::vector<double>(n2 + 1));
  for (int i = 0; i <= n1; ++i)
    for (int j = 0; j <= n2; ++j) {
      double y = cm.pos[i][j];
      double num = detail::interp_x2(f0d, g, i, y) -
                   detail::interp_x2(divud, g, i, y);
      double den = detail::interp_x2(ueps, g, i, y);
      q[i][j] = num / den;
    }
  std::vector<std::vector<double>> line(n1 + 1,
                                        std::vector<double>(n2 + 1, 0.0));
  for (int i = 1; i <= n1; ++i)
    for (int j = 0; j <= n2; ++j)
      line[i][j] = line[i - 1][j] + g.h1 / 2.0 * (q[i - 1][j] + q[i][j]);
  // push back: physical node (i, x2[j]) lies between two labels at station i
  Field rho(g);
  for (int i = 0; i <= n1; ++i) {
    const std::vector<double>& p = cm.pos[i];
    int k = 0;
    for (int j = 0; j <= n2; ++j) {
      double y = g.x2[j];
      while (k < n2 - 1 && p[k + 1] <= y) ++k;
      if (y <= p[0]) {
        rho(i, j) = line[i][0];
      } else if (y >= p[n2]) {
        rho(i, j) = line[i][n2];
      } else {
        double t = (y - p[k]) / (p[k + 1] - p[k]);
        rho(i, j) = line[i][k] + t * (line[i][k + 1] - line[i][k]);
      }
    }
  }
  return rho;
}

}  // namespace ssflow
