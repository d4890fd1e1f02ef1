#pragma once

#include <cmath>
#include <vector>

#include "errors.hpp"
#include "grid.hpp"

namespace ssflow {

// Node-centered scalar field on a Grid.  Plain storage with quadrature-aware
// norms and nonuniform finite-difference helpers; all heavier operators are
// free functions in the solver headers.
struct Field {
  int n1 = 0, n2 = 0;
  std::vector<double> v;

  Field() = default;
  explicit Field(const Grid& g) : n1(g.n1), n2(g.n2), v(g.nodes(), 0.0) {}
  Field(int n1_, int n2_) : n1(n1_), n2(n2_), v((n1_ + 1) * (n2_ + 1), 0.0) {}

  double& operator()(int i, int j) { return v[i * (n2 + 1) + j]; }
  double operator()(int i, int j) const { return v[i * (n2 + 1) + j]; }
  bool same_shape(const Field& o) const { return n1 == o.n1 && n2 == o.n2; }

  Field& operator+=(const Field& o) {
    for (std::size_t k = 0; k < v.size(); ++k) v[k] += o.v[k];
    return *this;
  }
  Field& operator-=(const Field& o) {
    for (std::size_t k = 0; k < v.size(); ++k) v[k] -= o.v[k];
    return *this;
  }
  Field& operator*=(double s) {
    for (double& x : v) x *= s;
    return *this;
  }
};

inline void check_shape(const Field& a, const Grid& g, const char* what) {
  if (a.n1 != g.n1 || a.n2 != g.n2)
    throw GridMismatch(std::string(what) + ": field shape (" +
                       std::to_string(a.n1) + "," + std::to_string(a.n2) +
                       ") vs grid (" + std::to_string(g.n1) + "," +
                       std::to_string(g.n2) + ")");
}

inline double norm_inf(const Field& f) {
  double m = 0.0;
  for (double x : f.v) m = std::max(m, std::abs(x));
  return m;
}

inline double norm_l2(const Field& f, const Grid& g) {
  check_shape(f, g, "norm_l2");
  double s = 0.0;
  for (int i = 0; i <= g.n1; ++i)
    for (int j = 0; j <= g.n2; ++j) {
      double x = f(i, j);
      s += g.weight(i, j) * x * x;
    }
  return std::sqrt(s);
}

inline double norm_lp(const Field& f, const Grid& g, double p) {
  check_shape(f, g, "norm_lp");
  double s = 0.0;
  for (int i = 0; i <= g.n1; ++i)
    for (int j = 0; j <= g.n2; ++j)
      s += g.weight(i, j) * std::pow(std::abs(f(i, j)), p);
  return std::pow(s, 1.0 / p);
}

inline double integral(const Field& f, const Grid& g) {
  check_shape(f, g, "integral");
  double s = 0.0;
  for (int i = 0; i <= g.n1; ++i)
    for (int j = 0; j <= g.n2; ++j) s += g.weight(i, j) * f(i, j);
  return s;
}

// --- finite differences on the tensor grid -------------------------------
// Centered in the interior (exact weights for nonuniform spacing), one-sided
// second-order at the boundary nodes.

inline double ddx1(const Field& f, const Grid& g, int i, int j) {
  const std::vector<double>& x = g.x1;
  if (i == 0) {
    double h1 = x[1] - x[0], h2 = x[2] - x[1];
    double a = -(2.0 * h1 + h2) / (h1 * (h1 + h2)), b = (h1 + h2) / (h1 * h2),
           c = -h1 / (h2 * (h1 + h2));
    return a * f(0, j) + b * f(1, j) + c * f(2, j);
  }
  if (i == g.n1) {
    int n = g.n1;
    double h1 = x[n] - x[n - 1], h2 = x[n - 1] - x[n - 2];
    double a = (2.0 * h1 + h2) / (h1 * (h1 + h2)), b = -(h1 + h2) / (h1 * h2),
           c = h1 / (h2 * (h1 + h2));
    return a * f(n, j) + b * f(n - 1, j) + c * f(n - 2, j);
  }
  double hm = x[i] - x[i - 1], hp = x[i + 1] - x[i];
  return (f(i + 1, j) * hm * hm - f(i - 1, j) * hp * hp +
          f(i, j) * (hp * hp - hm * hm)) /
         (hm * hp * (hm + hp));
}

inline double ddx2(const Field& f, const Grid& g, int i, int j) {
  const std::vector<double>& x = g.x2;
  if (j == 0) {
    double h1 = x[1] - x[0], h2 = x[2] - x[1];
    double a = -(2.0 * h1 + h2) / (h1 * (h1 + h2)), b = (h1 + h2) / (h1 * h2),
           c = -h1 / (h2 * (h1 + h2));
    return a * f(i, 0) + b * f(i, 1) + c * f(i, 2);
  }
  if (j == g.n2) {
    int n = g.n2;
    double h1 = x[n] - x[n - 1], h2 = x[n - 1] - x[n - 2];
    double a = (2.0 * h1 + h2) / (h1 * (h1 + h2)), b = -(h1 + h2) / (h1 * h2),
           c = h1 / (h2 * (h1 + h2));
    return a * f(i, n) + b * f(i, n - 1) + c * f(i, n - 2);
  }
  double hm = x[j] - x[j - 1], hp = x[j + 1] - x[j];
  return (f(i, j + 1) * hm * hm - f(i, j - 1) * hp * hp +
          f(i, j) * (hp * hp - hm * hm)) /
         (hm * hp * (hm + hp));
}

inline double d2dx1(const Field& f, const Grid& g, int i, int j) {
  int ii = std::min(std::max(i, 1), g.n1 - 1);
  const std::vector<double>& x = g.x1;
  double hm = x[ii] - x[ii - 1], hp = x[ii + 1] - x[ii];
  return 2.0 * (f(ii - 1, j) * hp - f(ii, j) * (hm + hp) + f(ii + 1, j) * hm) /
         (hm * hp * (hm + hp));
}

inline double d2dx2(const Field& f, const Grid& g, int i, int j) {
  int jj = std::min(std::max(j, 1), g.n2 - 1);
  const std::vector<double>& x = g.x2;
  double hm = x[jj] - x[jj - 1], hp = x[jj + 1] - x[jj];
  return 2.0 * (f(i, jj - 1) * hp - f(i, jj) * (hm + hp) + f(i, jj + 1) * hm) /
         (hm * hp * (hm + hp));
}

inline double ddx1x2(const Field& f, const Grid& g, int i, int j) {
  // cross derivative: x2-difference of the x1-difference
  if (j == 0 || j == g.n2) {
    // one-sided in x2 using ddx1 rows
    int jj = (j == 0) ? 0 : g.n2;
    int s = (j == 0) ? 1 : -1;
    double d0 = ddx1(f, g, i, jj), d1 = ddx1(f, g, i, jj + s),
           d2 = ddx1(f, g, i, jj + 2 * s);
    double h1 = std::abs(g.x2[jj + s] - g.x2[jj]),
           h2 = std::abs(g.x2[jj + 2 * s] - g.x2[jj + s]);
    double a = -(2.0 * h1 + h2) / (h1 * (h1 + h2)), b = (h1 + h2) / (h1 * h2),
           c = -h1 / (h2 * (h1 + h2));
    return s * (a * d0 + b * d1 + c * d2);
  }
  double hm = g.x2[j] - g.x2[j - 1], hp = g.x2[j + 1] - g.x2[j];
  double dm = ddx1(f, g, i, j - 1), d0 = ddx1(f, g, i, j),
         dp = ddx1(f, g, i, j + 1);
  return (dp * hm * hm - dm * hp * hp + d0 * (hp * hp - hm * hm)) /
         (hm * hp * (hm + hp));
}

// L2 norm of the discrete gradient of a (u,v) pair.
inline double norm_grad_l2(const Field& u, const Field& v, const Grid& g) {
  double s = 0.0;
  for (int i = 0; i <= g.n1; ++i)
    for (int j = 0; j <= g.n2; ++j) {
      double a = ddx1(u, g, i, j), b = ddx2(u, g, i, j), c = ddx1(v, g, i, j),
             d = ddx2(v, g, i, j);
      s += g.weight(i, j) * (a * a + b * b + c * c + d * d);
    }
  return std::sqrt(s);
}

}  // namespace ssflow
