#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "field.hpp"
#include "grid.hpp"

namespace ssflow {

// Conservative grid-scale mollifier.  Repeated nearest-neighbor diffusion
// passes in flux form, one direction at a time: the effective kernel is the
// many-fold convolution of a nonnegative 3-point kernel, i.e. a normalized
// compactly supported bump whose standard deviation is ~ radius_cells cells
// (passes per direction = 2 * radius^2, each pass adds variance h^2/2).
// Zero end fluxes realize the reflection boundary, so the weighted mean
// (trapezoid quadrature) is conserved exactly up to roundoff and constants
// pass through bitwise.  radius_cells = 0 returns the input unchanged.
namespace detail {
inline void smooth_line(std::vector<double>& v, const std::vector<double>& w,
                        int passes, std::vector<double>& flux) {
  int n = static_cast<int>(v.size()) - 1;
  flux.resize(n);
  for (int p = 0; p < passes; ++p) {
    for (int k = 0; k < n; ++k)
      flux[k] = 0.25 * std::min(w[k], w[k + 1]) * (v[k + 1] - v[k]);
    for (int k = 0; k <= n; ++k) {
      double in = (k < n) ? flux[k] : 0.0;
      double out = (k > 0) ? flux[k - 1] : 0.0;
      v[k] += (in - out) / w[k];
    }
  }
}
}  // namespace detail

inline Field mollify(const Field& f, const Grid& g, int radius_cells) {
  check_shape(f, g, "mollify");
  if (radius_cells < 0) throw ConfigError("mollify: radius_cells >= 0");
  Field r = f;
  if (radius_cells == 0) return r;
  int passes = 2 * radius_cells * radius_cells;
  std::vector<double> line, flux;
  line.reserve(std::max(g.n1, g.n2) + 1);
  for (int j = 0; j <= g.n2; ++j) {
    line.assign(g.n1 + 1, 0.0);
    for (int i = 0; i <= g.n1; ++i) line[i] = r(i, j);
    detail::smooth_line(line, g.w1, passes, flux);
    for (int i = 0; i <= g.n1; ++i) r(i, j) = line[i];
  }
  for (int i = 0; i <= g.n1; ++i) {
    line.assign(g.n2 + 1, 0.0);
    for (int j = 0; j <= g.n2; ++j) line[j] = r(i, j);
    detail::smooth_line(line, g.w2, passes, flux);
    for (int j = 0; j <= g.n2; ++j) r(i, j) = line[j];
  }
  return r;
}

// The smoothing length delta = radius * max cell width should sit below the
// viscosity scale; outside that regime the solve still runs, but the a priori
// bounds the reports track are no longer the guaranteed ones.
inline std::optional<std::string> mollify_width_warning(const Grid& g,
                                                        double eps,
                                                        int radius_cells) {
  double hmax = g.h1;
  for (int j = 0; j < g.n2; ++j)
    hmax = std::max(hmax, g.x2[j + 1] - g.x2[j]);
  double delta = radius_cells * hmax;
  if (delta >= eps)
    return "smoothing length " + std::to_string(delta) +
           " is not small against eps = " + std::to_string(eps) +
           "; refine the grid or reduce the smoothing radius";
  return std::nullopt;
}

inline double mollify_length(const Grid& g, int radius_cells) {
  double hmax = g.h1;
  for (int j = 0; j < g.n2; ++j)
    hmax = std::max(hmax, g.x2[j + 1] - g.x2[j]);
  return radius_cells * hmax;
}

}  // namespace ssflow
