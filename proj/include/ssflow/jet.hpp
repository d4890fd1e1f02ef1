#pragma once

#include <array>
#include <cstddef>

#include "errors.hpp"

namespace ssflow {

// Truncated Taylor jet in one variable: value and derivatives up to order N
// stored as Taylor coefficients c[k] = f^{(k)}(x0)/k!.  Supports the ring
// operations plus division, which is all the corner-trace recursion needs.
template <int N>
struct Jet {
  std::array<double, N + 1> c{};

  Jet() = default;
  explicit Jet(double v) { c[0] = v; }

  static Jet constant(double v) { return Jet(v); }
  // The coordinate itself (x - x0).
  static Jet variable() {
    Jet j;
    if constexpr (N >= 1) j.c[1] = 1.0;
    return j;
  }

  double value() const { return c[0]; }
  // k-th derivative at the base point.
  double deriv(int k) const {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return c[static_cast<std::size_t>(k)] * f;
  }

  Jet operator+(const Jet& o) const {
    Jet r;
    for (int k = 0; k <= N; ++k) r.c[k] = c[k] + o.c[k];
    return r;
  }
  Jet operator-(const Jet& o) const {
    Jet r;
    for (int k = 0; k <= N; ++k) r.c[k] = c[k] - o.c[k];
    return r;
  }
  Jet operator-() const {
    Jet r;
    for (int k = 0; k <= N; ++k) r.c[k] = -c[k];
    return r;
  }
  Jet operator*(const Jet& o) const {
    Jet r;
    for (int i = 0; i <= N; ++i)
      for (int j = 0; i + j <= N; ++j) r.c[i + j] += c[i] * o.c[j];
    return r;
  }
  Jet operator*(double s) const {
    Jet r;
    for (int k = 0; k <= N; ++k) r.c[k] = c[k] * s;
    return r;
  }
  friend Jet operator*(double s, const Jet& j) { return j * s; }
  Jet operator/(const Jet& o) const {
    if (o.c[0] == 0.0) throw Error("JetDivide", "division by a zero-value jet");
    Jet r;
    for (int k = 0; k <= N; ++k) {
      double s = c[k];
      for (int j = 0; j < k; ++j) s -= r.c[j] * o.c[k - j];
      r.c[k] = s / o.c[0];
    }
    return r;
  }

  // d/dx: shifts coefficients down one order; the top coefficient is lost, so
  // the caller must track how many valid orders remain.
  Jet derivative() const {
    Jet r;
    for (int k = 0; k + 1 <= N; ++k) r.c[k] = (k + 1) * c[k + 1];
    return r;
  }
};

}  // namespace ssflow
