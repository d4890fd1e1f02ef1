#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "errors.hpp"

namespace ssflow {

// Least-squares power-law fit: log e = slope * log h + intercept (natural
// logs).  A sequence resting entirely on the zero floor is reported as
// exact (nothing to fit, the convergence statement holds trivially); a
// sequence mixing exact zeros with finite values, or containing negatives,
// cannot be fitted honestly and is rejected.
struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_dev = 0.0;  // worst |log e - fit| over the points
  bool exact = false;
};

inline SlopeFit fit_slope(const std::vector<double>& h,
                          const std::vector<double>& e) {
  if (h.size() != e.size())
    throw DegenerateFit("abscissa/value count mismatch: " +
                        std::to_string(h.size()) + " vs " +
                        std::to_string(e.size()));
  if (h.size() < 3)
    throw DegenerateFit("need at least 3 points, got " +
                        std::to_string(h.size()));
  for (double x : h)
    if (!(x > 0.0))
      throw DegenerateFit("nonpositive abscissa " + std::to_string(x));
  const double zero_floor = 1e-250;
  bool all_zero = true, any_zero = false;
  for (double x : e) {
    if (x < 0.0)
      throw DegenerateFit("negative value " + std::to_string(x));
    if (x <= zero_floor)
      any_zero = true;
    else
      all_zero = false;
  }
  SlopeFit sf;
  if (all_zero) {
    sf.exact = true;
    return sf;
  }
  if (any_zero)
    throw DegenerateFit(
        "sequence mixes exact zeros with finite values; no power law fits");
  double n = static_cast<double>(h.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < h.size(); ++k) {
    double x = std::log(h[k]), y = std::log(e[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double det = n * sxx - sx * sx;
  if (!(det > 1e-12 * (n * sxx + sx * sx + 1e-300)))
    throw DegenerateFit("abscissae do not separate; fit is singular");
  sf.slope = (n * sxy - sx * sy) / det;
  sf.intercept = (sy - sf.slope * sx) / n;
  for (std::size_t k = 0; k < h.size(); ++k) {
    double dev =
        std::abs(std::log(e[k]) - (sf.slope * std::log(h[k]) + sf.intercept));
    sf.max_dev = std::max(sf.max_dev, dev);
  }
  return sf;
}

}  // namespace ssflow
