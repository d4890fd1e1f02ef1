#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "errors.hpp"
#include "jet.hpp"

namespace ssflow {

enum class ProfileKind { couette, quartic, tabulated };

// Background shear profile mu(x2) on [0,2].  Derivatives up to order 6 are
// needed by the corner-trace recursion; built-in profiles supply them in
// closed form, tabulated profiles via a natural cubic spline (exact to order
// 3 inside intervals, zero beyond -- flagged as a validation warning since
// the construction nominally wants C^6 data).
struct BaseFlow {
  ProfileKind kind = ProfileKind::couette;
  std::array<double, 5> poly{};            // c0..c4 of a polynomial profile
  std::vector<double> tx, ty, td2;         // spline knots, values, 2nd derivs

  static BaseFlow couette(double V0, double V1) {
    BaseFlow f;
    f.kind = ProfileKind::couette;
    f.poly = {V0, (V1 - V0) / 2.0, 0.0, 0.0, 0.0};
    return f;
  }
  // Linear ramp V0 -> V1 plus bump * x2^2 (2-x2)^2, which has nonzero
  // curvature mu'' = 8*bump at both walls (exercises the second-order corner
  // compatibility defect).
  static BaseFlow quartic(double V0, double V1, double bump) {
    BaseFlow f;
    f.kind = ProfileKind::quartic;
    // x2^2 (2-x2)^2 = 4 x2^2 - 4 x2^3 + x2^4
    f.poly = {V0, (V1 - V0) / 2.0, 4.0 * bump, -4.0 * bump, bump};
    return f;
  }
  static BaseFlow quartic_coeffs(const std::array<double, 5>& c) {
    BaseFlow f;
    f.kind = ProfileKind::quartic;
    f.poly = c;
    return f;
  }
  static BaseFlow tabulated(std::vector<double> x, std::vector<double> y) {
    if (x.size() != y.size() || x.size() < 3)
      throw ConfigError("tabulated profile needs >= 3 samples");
    for (std::size_t i = 1; i < x.size(); ++i)
      if (!(x[i] > x[i - 1]))
        throw ConfigError("tabulated profile abscissae must increase");
    BaseFlow f;
    f.kind = ProfileKind::tabulated;
    f.tx = std::move(x);
    f.ty = std::move(y);
    f.build_spline();
    return f;
  }

  void build_spline() {
    // Natural cubic spline second derivatives via the standard tridiagonal
    // sweep.
    const std::size_t n = tx.size();
    td2.assign(n, 0.0);
    std::vector<double> u(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      double sig = (tx[i] - tx[i - 1]) / (tx[i + 1] - tx[i - 1]);
      double p = sig * td2[i - 1] + 2.0;
      td2[i] = (sig - 1.0) / p;
      double d = (ty[i + 1] - ty[i]) / (tx[i + 1] - tx[i]) -
                 (ty[i] - ty[i - 1]) / (tx[i] - tx[i - 1]);
      u[i] = (6.0 * d / (tx[i + 1] - tx[i - 1]) - sig * u[i - 1]) / p;
    }
    for (std::size_t i = n - 1; i-- > 1;) td2[i] = td2[i] * td2[i + 1] + u[i];
    td2[0] = td2[n - 1] = 0.0;
  }

  double mu(double x2, int k = 0) const {
    if (kind != ProfileKind::tabulated) {
      // k-th derivative of the quartic polynomial
      double r = 0.0;
      double xp = 1.0;
      for (int j = k; j <= 4; ++j) {
        double f = 1.0;
        for (int i = 0; i < k; ++i) f *= (j - i);
        r += poly[static_cast<std::size_t>(j)] * f * xp;
        xp *= x2;
      }
      return r;
    }
    const std::size_t n = tx.size();
    double x = std::min(std::max(x2, tx.front()), tx.back());
    std::size_t lo = 0, hi = n - 1;
    while (hi - lo > 1) {
      std::size_t mid = (lo + hi) / 2;
      (tx[mid] > x ? hi : lo) = mid;
    }
    double h = tx[hi] - tx[lo];
    double A = (tx[hi] - x) / h, B = (x - tx[lo]) / h;
    switch (k) {
      case 0:
        return A * ty[lo] + B * ty[hi] +
               ((A * A * A - A) * td2[lo] + (B * B * B - B) * td2[hi]) *
                   (h * h) / 6.0;
      case 1:
        return (ty[hi] - ty[lo]) / h -
               (3.0 * A * A - 1.0) / 6.0 * h * td2[lo] +
               (3.0 * B * B - 1.0) / 6.0 * h * td2[hi];
      case 2: return A * td2[lo] + B * td2[hi];
      case 3: return (td2[hi] - td2[lo]) / h;
      default: return 0.0;  // spline is piecewise cubic
    }
  }

  double V0() const { return mu(0.0); }
  double V1() const { return mu(2.0); }

  // Taylor jet of the wall-local profile mu~(s) = mu(wall distance s):
  // wall = 0 gives mu(s), wall = 1 gives mu(2 - s) (derivatives alternate
  // sign).  Used by the corner-trace recursion, which works per wall in the
  // local coordinate.
  Jet<6> wall_jet(int wall) const {
    Jet<6> j;
    double x0 = (wall == 0) ? 0.0 : 2.0;
    double fact = 1.0;
    for (int k = 0; k <= 6; ++k) {
      if (k > 0) fact *= k;
      double s = (wall == 0) ? 1.0 : ((k % 2 == 0) ? 1.0 : -1.0);
      j.c[static_cast<std::size_t>(k)] = s * mu(x0, k) / fact;
    }
    return j;
  }
};

struct SupersonicReport {
  double min_mu = 0.0;
  double argmin_x2 = 0.0;
  double margin = 0.0;  // min_mu - c
  bool ok = false;
  std::vector<std::string> warnings;
};

// Check mu(x2) > c across the channel (dense sampling).  Throws
// SubsonicPoint naming the offending height when the profile dips to or
// below the sound speed; small margins produce a warning only.
inline SupersonicReport validate_supersonic(const BaseFlow& flow, double c,
                                            int samples = 4001) {
  SupersonicReport r;
  r.min_mu = flow.mu(0.0);
  r.argmin_x2 = 0.0;
  for (int i = 0; i <= samples; ++i) {
    double x2 = 2.0 * i / samples;
    double m = flow.mu(x2);
    if (m < r.min_mu) {
      r.min_mu = m;
      r.argmin_x2 = x2;
    }
  }
  r.margin = r.min_mu - c;
  if (r.margin <= 0.0)
    throw SubsonicPoint(r.argmin_x2,
                        "validate_supersonic: mu(" +
                            std::to_string(r.argmin_x2) + ") = " +
                            std::to_string(r.min_mu) +
                            " does not exceed the sound speed " +
                            std::to_string(c));
  if (r.margin < 0.1 * c)
    r.warnings.push_back("supersonic margin below 0.1 c at x2 = " +
                         std::to_string(r.argmin_x2));
  if (flow.kind == ProfileKind::tabulated)
    r.warnings.push_back(
        "tabulated profile: derivatives beyond order 3 are zero (spline)");
  r.ok = true;
  return r;
}

}  // namespace ssflow
