#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "errors.hpp"

namespace ssflow {

// Physical and asymptotic parameters of a single case.
//
// The flow lives on (0,L) x (0,2) with pressure P(rho) = a rho^gamma and unit
// shear viscosity; lambda is the combined dilation viscosity (bulk + mu/3),
// eps = 1/Re the inverse Reynolds number.  p is the Lebesgue exponent used in
// the W^{1,p} / W^{2,p} bookkeeping, sigma the admissible-amplitude margin,
// p0 the exponent cap inherited from the corner-singularity constant (kept
// configurable; the constant itself is an external input).
struct Params {
  double eps = 0.1;        // inverse Reynolds number
  double a = 0.5;          // pressure coefficient
  double gamma = 2.0;      // adiabatic exponent
  double rho_star = 1.0;   // reference density
  double lambda = 1.0;     // dilation viscosity coefficient
  double L = 0.05;         // channel length
  double p = 2.5;          // integrability exponent, 2 < p < min(8/3, p0)
  double sigma = 0.05;     // amplitude margin exponent
  double p0 = 8.0 / 3.0;   // exponent cap (external corner constant)

  double sound_speed() const {
    return std::sqrt(a * gamma * std::pow(rho_star, gamma - 1.0));
  }
  // Scale eps^{5/2 - 2/p + sigma} of admissible boundary perturbations.
  double amplitude_scale() const {
    return std::pow(eps, 2.5 - 2.0 / p + sigma);
  }
  double p_prime(double rho) const {  // P'(rho)
    return a * gamma * std::pow(rho, gamma - 1.0);
  }
  double pressure(double rho) const { return a * std::pow(rho, gamma); }
};

// Validate ranges; returns a list of warnings (non-fatal), throws ConfigError
// on unusable values.
inline std::vector<std::string> validate_params(const Params& pr) {
  std::vector<std::string> warn;
  auto need = [](bool ok, const std::string& m) {
    if (!ok) throw ConfigError(m);
  };
  need(pr.eps > 0 && pr.eps < 1, "eps must lie in (0,1)");
  need(pr.a > 0, "pressure coefficient a must be positive");
  need(pr.gamma > 1, "gamma must exceed 1");
  need(pr.rho_star > 0, "rho_star must be positive");
  need(pr.lambda > 0, "lambda must be positive");
  need(pr.L > 0, "L must be positive");
  need(pr.p > 2, "p must exceed 2");
  need(pr.sigma > 0, "sigma must be positive");
  if (pr.p >= std::min(8.0 / 3.0, pr.p0))
    warn.push_back("p >= min(8/3, p0): outside the proven exponent range");
  if (pr.rho_star != 1.0)
    warn.push_back(
        "rho_star != 1: corrector systems assume a unit reference density; "
        "residual orders are not guaranteed");
  if (pr.L > 0.5)
    warn.push_back("L large: linear fixed point may need damping or fail");
  return warn;
}

}  // namespace ssflow
