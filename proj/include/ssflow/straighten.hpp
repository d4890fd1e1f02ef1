#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "errors.hpp"
#include "field.hpp"
#include "grid.hpp"

namespace ssflow {

// Streamline coordinates for the transport solve.  Each inflow node x2[j]
// labels the streamline of the frozen velocity (U, V) through (0, x2[j]);
// the map stores its physical height at every station x1[i].  dx2/dx1 = V/U
// is integrated with classical RK4 (two substeps per grid interval) on
// bilinearly interpolated velocities.  Walls are streamlines by construction
// (V vanishes on the wall rows), so the wall labels stay at 0 and 2 exactly.
// If two streamlines touch or cross, the frozen field cannot be straightened
// on this grid and the map refuses to build.

namespace detail {

inline int locate(const std::vector<double>& x, double y) {
  int n = static_cast<int>(x.size()) - 1;
  int k = static_cast<int>(std::upper_bound(x.begin(), x.end(), y) -
                           x.begin()) -
          1;
  return std::min(std::max(k, 0), n - 1);
}

inline double bilinear(const Field& f, const Grid& g, double x, double y) {
  int i = std::min(std::max(static_cast<int>(x / g.h1), 0), g.n1 - 1);
  double tx = (x - g.x1[i]) / g.h1;
  tx = std::min(std::max(tx, 0.0), 1.0);
  int j = locate(g.x2, y);
  double ty = (y - g.x2[j]) / (g.x2[j + 1] - g.x2[j]);
  ty = std::min(std::max(ty, 0.0), 1.0);
  double a = (1.0 - ty) * f(i, j) + ty * f(i, j + 1);
  double b = (1.0 - ty) * f(i + 1, j) + ty * f(i + 1, j + 1);
  return (1.0 - tx) * a + tx * b;
}

// Cubic Lagrange interpolation in x2 along one fixed station, exact at the
// nodes; falls back to the clamped end windows near the walls.
inline double interp_x2(const Field& f, const Grid& g, int i, double y) {
  int j = locate(g.x2, y);
  int j0 = std::min(std::max(j - 1, 0), g.n2 - 3);
  double r = 0.0;
  for (int a = 0; a < 4; ++a) {
    double term = f(i, j0 + a);
    for (int b = 0; b < 4; ++b) {
      if (a == b) continue;
      term *= (y - g.x2[j0 + b]) / (g.x2[j0 + a] - g.x2[j0 + b]);
    }
    r += term;
  }
  return r;
}

}  // namespace detail

struct CoordinateMap {
  const Grid* g = nullptr;
  // pos[i][j]: physical x2 of the streamline labelled x2[j] at station x1[i]
  std::vector<std::vector<double>> pos;
  double max_jacobian_deviation = 0.0;  // max |d(pos)/d(label) - 1|

  // label-space coordinate of the physical height y at station i (monotone
  // table inversion, linear between labels)
  double label_of(int i, double y) const {
    const std::vector<double>& p = pos[i];
    const std::vector<double>& l = g->x2;
    int n = static_cast<int>(p.size()) - 1;
    if (y <= p[0]) return l[0];
    if (y >= p[n]) return l[n];
    int k = static_cast<int>(std::upper_bound(p.begin(), p.end(), y) -
                             p.begin()) -
            1;
    k = std::min(std::max(k, 0), n - 1);
    double t = (y - p[k]) / (p[k + 1] - p[k]);
    return l[k] + t * (l[k + 1] - l[k]);
  }
};

inline CoordinateMap build_coordinate_map(const Grid& g, const Field& U,
                                          const Field& V) {
  check_shape(U, g, "build_coordinate_map U");
  check_shape(V, g, "build_coordinate_map V");
  CoordinateMap cm;
  cm.g = &g;
  cm.pos.assign(g.n1 + 1, std::vector<double>(g.n2 + 1, 0.0));
  for (int j = 0; j <= g.n2; ++j) cm.pos[0][j] = g.x2[j];
  auto slope = [&](double x, double y) {
    double u = detail::bilinear(U, g, x, y);
    double v = detail::bilinear(V, g, x, y);
    return v / u;
  };
  for (int i = 0; i < g.n1; ++i) {
    for (int j = 0; j <= g.n2; ++j) {
      double x = g.x1[i], y = cm.pos[i][j];
      for (int sub = 0; sub < 2; ++sub) {
        double h = g.h1 / 2.0;
        double k1 = slope(x, y);
        double k2 = slope(x + h / 2.0, y + h / 2.0 * k1);
        double k3 = slope(x + h / 2.0, y + h / 2.0 * k2);
        double k4 = slope(x + h, y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        x += h;
      }
      cm.pos[i + 1][j] = y;
    }
    for (int j = 0; j < g.n2; ++j) {
      if (!(cm.pos[i + 1][j + 1] > cm.pos[i + 1][j]))
        throw StreamlineCrossing(
            "labels " + std::to_string(g.x2[j]) + " and " +
            std::to_string(g.x2[j + 1]) + " collide at x1 = " +
            std::to_string(g.x1[i + 1]));
    }
  }
  for (int i = 0; i <= g.n1; ++i)
    for (int j = 0; j < g.n2; ++j) {
      double dd = (cm.pos[i][j + 1] - cm.pos[i][j]) /
                      (g.x2[j + 1] - g.x2[j]) -
                  1.0;
      cm.max_jacobian_deviation =
          std::max(cm.max_jacobian_deviation, std::abs(dd));
    }
  return cm;
}

}  // namespace ssflow
