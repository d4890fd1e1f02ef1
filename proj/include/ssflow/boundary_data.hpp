#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "errors.hpp"
#include "params.hpp"

namespace ssflow {

// Inflow/outflow boundary perturbations, stored as deviations from the
// traces of the constructed approximate solution.  Velocity deviations are
// low-mode sine series in x2 (so they vanish at the four corners and no-slip
// at the walls is untouched); the inflow density deviation is a cosine
// series.  Everything is analytic, with derivatives available to any order,
// and the C^2 size is normalized before scaling by the admissible amplitude
// eps^{5/2 - 2/p + sigma} * coef.
struct BoundaryData {
  double amplitude = 0.0;            // actual scale multiplying the series
  double coef = 0.0;                 // user coefficient (<= cap)
  std::uint64_t seed = 0;
  std::vector<double> cu_in, cv_in, cu_out, cv_out;  // sin(k pi x2 / 2)
  std::vector<double> cr_in;                         // cos(k pi x2 / 2), k>=0

  static double eval_sin(const std::vector<double>& c, double amp, double x2,
                         int k) {
    double s = 0.0;
    for (std::size_t m = 0; m < c.size(); ++m) {
      double w = (m + 1) * M_PI / 2.0, ph = w * x2;
      double base;
      switch (k % 4) {
        case 0: base = std::sin(ph); break;
        case 1: base = std::cos(ph); break;
        case 2: base = -std::sin(ph); break;
        default: base = -std::cos(ph); break;
      }
      s += c[m] * std::pow(w, k) * base;
    }
    return amp * s;
  }
  static double eval_cos(const std::vector<double>& c, double amp, double x2,
                         int k) {
    double s = 0.0;
    for (std::size_t m = 0; m < c.size(); ++m) {
      double w = m * M_PI / 2.0, ph = w * x2;
      double base;
      switch (k % 4) {
        case 0: base = std::cos(ph); break;
        case 1: base = -std::sin(ph); break;
        case 2: base = -std::cos(ph); break;
        default: base = std::sin(ph); break;
      }
      s += c[m] * std::pow(w, k) * base;
    }
    return amp * s;
  }

  double du_in(double x2, int k = 0) const {
    return eval_sin(cu_in, amplitude, x2, k);
  }
  double dv_in(double x2, int k = 0) const {
    return eval_sin(cv_in, amplitude, x2, k);
  }
  double du_out(double x2, int k = 0) const {
    return eval_sin(cu_out, amplitude, x2, k);
  }
  double dv_out(double x2, int k = 0) const {
    return eval_sin(cv_out, amplitude, x2, k);
  }
  double drho_in(double x2, int k = 0) const {
    return eval_cos(cr_in, amplitude, x2, k);
  }
};

// Deterministic generator: mode coefficients ~ U(-1,1)/k^2, normalized so the
// C^2 bound of each series is 1 before the amplitude scale is applied.
inline BoundaryData make_boundary_data(const Params& pr, std::uint64_t seed,
                                       int modes = 3, double coef = 0.4,
                                       double cap = 1.0) {
  if (modes < 1 || modes > 16) throw ConfigError("boundary modes in [1,16]");
  if (coef < 0.0 || coef > cap + 1e-12)
    throw ConfigError("boundary amplitude coefficient exceeds the admissible "
                      "cap " +
                      std::to_string(cap));
  BoundaryData bd;
  bd.seed = seed;
  bd.coef = coef;
  bd.amplitude = coef * pr.amplitude_scale();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  auto series = [&](bool cosine) {
    std::vector<double> c(static_cast<std::size_t>(modes) + (cosine ? 1 : 0));
    double c2 = 0.0;
    for (std::size_t m = 0; m < c.size(); ++m) {
      double k = cosine ? static_cast<double>(m) : static_cast<double>(m + 1);
      c[m] = uni(rng) / ((k + 1.0) * (k + 1.0));
      double w = k * M_PI / 2.0;
      c2 += std::abs(c[m]) * std::max(1.0, w * w);
    }
    if (c2 > 0.0)
      for (double& x : c) x /= c2;
    return c;
  };
  bd.cu_in = series(false);
  bd.cv_in = series(false);
  bd.cu_out = series(false);
  bd.cv_out = series(false);
  bd.cr_in = series(true);
  return bd;
}

// Corner compatibility: velocity deviations must vanish at the four corners
// so the no-slip walls and the prescribed in/outflow agree.
inline void check_corner_compatibility(const BoundaryData& bd,
                                       double tol = 1e-12) {
  for (double x2 : {0.0, 2.0}) {
    for (double v : {bd.du_in(x2), bd.dv_in(x2), bd.du_out(x2),
                     bd.dv_out(x2)}) {
      if (std::abs(v) > tol)
        throw CompatibilityViolation(
            "boundary velocity deviation does not vanish at corner x2 = " +
            std::to_string(x2));
    }
  }
}

}  // namespace ssflow
