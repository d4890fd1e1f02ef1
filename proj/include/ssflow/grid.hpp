#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "errors.hpp"

namespace ssflow {

enum class Grading { uniform, tanh_walls };

// Tensor-product node grid on [0,L] x [0,2]: uniform in x1 (the marching
// direction), optionally wall-clustered in x2 via a smooth two-sided tanh
// stretching.  Refining n2 resamples the same smooth map, so one-sided cell
// ratios shrink like O(h) and centered differences keep second order.
struct Grid {
  int n1 = 0, n2 = 0;
  double L = 0.0;
  Grading grading = Grading::uniform;
  double strength = 0.0;
  std::vector<double> x1, x2;  // node coordinates, sizes n1+1 / n2+1
  std::vector<double> w1, w2;  // trapezoid quadrature weights per axis
  double h1 = 0.0;             // uniform x1 spacing

  int idx(int i, int j) const { return i * (n2 + 1) + j; }
  int nodes() const { return (n1 + 1) * (n2 + 1); }
  double weight(int i, int j) const { return w1[i] * w2[j]; }
  double min_dx2() const {
    double m = 1e300;
    for (int j = 0; j < n2; ++j) m = std::min(m, x2[j + 1] - x2[j]);
    return m;
  }
};

inline Grid build_grid(int n1, int n2, double L, double eps,
                       Grading grading = Grading::tanh_walls,
                       double strength = 1.5) {
  if (n1 < 8 || n2 < 8) throw GridTooCoarse("need n1, n2 >= 8");
  if (L <= 0.0 || eps <= 0.0) throw ConfigError("build_grid: L, eps > 0");
  Grid g;
  g.n1 = n1;
  g.n2 = n2;
  g.L = L;
  g.grading = grading;
  g.strength = strength;
  g.h1 = L / n1;
  g.x1.resize(n1 + 1);
  for (int i = 0; i <= n1; ++i) g.x1[i] = L * i / n1;
  g.x1[n1] = L;
  g.x2.resize(n2 + 1);
  if (grading == Grading::uniform || strength <= 0.0) {
    for (int j = 0; j <= n2; ++j) g.x2[j] = 2.0 * j / n2;
  } else {
    // x2(xi) = 1 + tanh(s (xi - 1/2)) / tanh(s/2), xi in [0,1]: symmetric,
    // clusters nodes at both walls, reduces to uniform as s -> 0.
    double s = strength, t0 = std::tanh(s / 2.0);
    for (int j = 0; j <= n2; ++j) {
      double xi = static_cast<double>(j) / n2;
      g.x2[j] = 1.0 + std::tanh(s * (xi - 0.5)) / t0;
    }
    g.x2[0] = 0.0;
    g.x2[n2] = 2.0;
  }
  // One-sided cell ratio guard: keeps the stretching gentle enough that
  // nonuniform centered differences stay effectively second order.
  for (int j = 1; j < n2; ++j) {
    double r = (g.x2[j + 1] - g.x2[j]) / (g.x2[j] - g.x2[j - 1]);
    if (r < 1.0) r = 1.0 / r;
    if (r > 1.15 + 1e-9)
      throw GridTooCoarse(
          "x2 grading ratio " + std::to_string(r) +
          " exceeds 1.15; increase n2 or reduce grading strength");
  }
  // Wall-resolution requirement: inside a sqrt(eps) collar of each wall the
  // spacing must not exceed sqrt(eps)/4, or the viscous sublayer is invisible
  // to the remainder solve.
  double se = std::sqrt(eps);
  for (int j = 0; j < n2; ++j) {
    double h = g.x2[j + 1] - g.x2[j];
    bool near = g.x2[j] < se || g.x2[j + 1] > 2.0 - se;
    if (near && h > se / 4.0 + 1e-12)
      throw GridTooCoarse("x2 spacing " + std::to_string(h) +
                          " near a wall exceeds sqrt(eps)/4 = " +
                          std::to_string(se / 4.0));
  }
  auto weights = [](const std::vector<double>& x, std::vector<double>& w) {
    int n = static_cast<int>(x.size()) - 1;
    w.assign(n + 1, 0.0);
    for (int j = 0; j < n; ++j) {
      double h = x[j + 1] - x[j];
      w[j] += h / 2.0;
      w[j + 1] += h / 2.0;
    }
  };
  weights(g.x1, g.w1);
  weights(g.x2, g.w2);
  return g;
}

}  // namespace ssflow
