#pragma once

#include <cmath>

namespace ssflow {

// Quintic smoothstep S(s) = 10 s^3 - 15 s^4 + 6 s^5 on [0,1] (C^2 at the
// junctions, with bounded piecewise third/fourth derivatives).
inline double smoothstep5(double s, int k = 0) {
  if (s <= 0.0) return (k == 0) ? 0.0 : 0.0;
  if (s >= 1.0) return (k == 0) ? 1.0 : 0.0;
  switch (k) {
    case 0: return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
    case 1: return s * s * (30.0 + s * (-60.0 + 30.0 * s));
    case 2: return s * (60.0 + s * (-180.0 + 120.0 * s));
    case 3: return 60.0 + s * (-360.0 + 360.0 * s);
    case 4: return -360.0 + 720.0 * s;
    default: return 0.0;
  }
}

// Decreasing cutoff chi: 1 on [0,3/4], 0 on [1,inf), quintic blend between.
// chi(t,k) returns the k-th derivative, k <= 4.
inline double chi(double t, int k = 0) {
  if (t <= 0.75) return (k == 0) ? 1.0 : 0.0;
  if (t >= 1.0) return 0.0;
  double d = -smoothstep5(4.0 * t - 3.0, k);
  for (int i = 0; i < k; ++i) d *= 4.0;
  if (k == 0) d += 1.0;
  return d;
}

// Increasing far-field weight w: 0 on [0,3], 1 on [4,inf), quintic blend.
inline double far_weight(double y, int k = 0) {
  return smoothstep5(y - 3.0, k);
}

}  // namespace ssflow
