#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "approx.hpp"
#include "base_flow.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "grid.hpp"
#include "nonlinear.hpp"
#include "params.hpp"

namespace ssflow {

// Everything one invocation needs, resolved from the INI config plus CLI
// overrides.  `params.eps` is the single-case value; `sweep_eps` drives the
// sweep and verify paths.
struct RunConfig {
  Params params;

  std::string profile = "quartic";  // quartic | couette
  double V0 = 2.0, V1 = 2.2, bump = 0.15;

  int n1 = 48, n2 = 96;
  std::string grading = "tanh";  // tanh | uniform
  double grading_strength = 1.5;

  ApproxConfig approx;

  double boundary_coef = 0.4;
  int boundary_modes = 3;
  std::uint64_t seed = 12345;

  PicardOptions picard;

  std::vector<double> sweep_eps = {0.2, 0.1, 0.05, 0.025};
  std::vector<std::string> suites = {"residual-orders", "contraction",
                                     "zero-viscosity",
                                     "solver-verification"};
  std::string outdir = "out";

  BaseFlow make_profile() const {
    if (profile == "quartic") return BaseFlow::quartic(V0, V1, bump);
    if (profile == "couette") return BaseFlow::couette(V0, V1);
    throw ConfigError("unknown profile kind: " + profile);
  }

  Grid make_grid() const {
    Grading gr;
    if (grading == "tanh")
      gr = Grading::tanh_walls;
    else if (grading == "uniform")
      gr = Grading::uniform;
    else
      throw ConfigError("unknown grading kind: " + grading);
    return build_grid(n1, n2, params.L, params.eps, gr, grading_strength);
  }
};

inline void validate_run_config(const RunConfig& rc);

inline RunConfig resolve_run_config(const Config& cfg) {
  RunConfig rc;
  Params& pr = rc.params;
  pr.eps = cfg.get_double("params", "eps", pr.eps);
  pr.a = cfg.get_double("params", "a", pr.a);
  pr.gamma = cfg.get_double("params", "gamma", pr.gamma);
  pr.rho_star = cfg.get_double("params", "rho_star", pr.rho_star);
  pr.lambda = cfg.get_double("params", "lambda", pr.lambda);
  pr.L = cfg.get_double("params", "L", pr.L);
  pr.p = cfg.get_double("params", "p", pr.p);
  pr.sigma = cfg.get_double("params", "sigma", pr.sigma);
  pr.p0 = cfg.get_double("params", "p0", pr.p0);

  rc.profile = cfg.get_str("profile", "kind", rc.profile);
  rc.V0 = cfg.get_double("profile", "V0", rc.V0);
  rc.V1 = cfg.get_double("profile", "V1", rc.V1);
  rc.bump = cfg.get_double("profile", "bump", rc.bump);

  rc.n1 = cfg.get_int("grid", "n1", rc.n1);
  rc.n2 = cfg.get_int("grid", "n2", rc.n2);
  rc.grading = cfg.get_str("grid", "grading", rc.grading);
  rc.grading_strength =
      cfg.get_double("grid", "strength", rc.grading_strength);

  rc.approx.a0 = cfg.get_double("layer", "a0", rc.approx.a0);
  rc.approx.b = cfg.get_double("layer", "b", rc.approx.b);
  rc.approx.Ymax = cfg.get_double("layer", "ymax", rc.approx.Ymax);
  rc.approx.layer_nY = cfg.get_int("layer", "ny", rc.approx.layer_nY);
  rc.approx.layer_beta = cfg.get_double("layer", "beta", rc.approx.layer_beta);
  rc.approx.layer_mult = cfg.get_int("layer", "mult", rc.approx.layer_mult);

  rc.boundary_coef = cfg.get_double("boundary", "coef", rc.boundary_coef);
  rc.boundary_modes = cfg.get_int("boundary", "modes", rc.boundary_modes);
  {
    int s = cfg.get_int("boundary", "seed", static_cast<int>(rc.seed));
    if (s < 0) throw ConfigError("[boundary] seed must be nonnegative");
    rc.seed = static_cast<std::uint64_t>(s);
  }

  PicardOptions& po = rc.picard;
  po.tol = cfg.get_double("solver", "tol", po.tol);
  po.max_outer = cfg.get_int("solver", "max_outer", po.max_outer);
  po.min_outer = cfg.get_int("solver", "min_outer", po.min_outer);
  po.theta = cfg.get_double("solver", "theta", po.theta);
  po.delta_cells = cfg.get_int("solver", "delta_cells", po.delta_cells);
  po.margin = cfg.get_double("solver", "margin", po.margin);
  po.lin_tol = cfg.get_double("solver", "lin_tol", po.lin_tol);
  po.max_sweeps = cfg.get_int("solver", "max_sweeps", po.max_sweeps);

  rc.sweep_eps = cfg.get_list("sweep", "eps", rc.sweep_eps);
  if (cfg.has("run", "suites")) {
    rc.suites.clear();
    std::stringstream ss(cfg.get_str("run", "suites", ""));
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = Config::trim(item);
      if (!item.empty()) rc.suites.push_back(item);
    }
    if (rc.suites.empty()) throw ConfigError("[run] suites: empty list");
  }
  rc.outdir = cfg.get_str("run", "out", rc.outdir);
  validate_run_config(rc);
  return rc;
}

inline void validate_run_config(const RunConfig& rc) {
  validate_params(rc.params);
  if (rc.sweep_eps.size() < 3)
    throw ConfigError("sweep needs at least 3 eps values for slope fits");
  for (std::size_t k = 0; k + 1 < rc.sweep_eps.size(); ++k)
    if (!(rc.sweep_eps[k] > rc.sweep_eps[k + 1]))
      throw ConfigError("sweep eps values must be strictly decreasing");
  for (double e : rc.sweep_eps)
    if (e <= 0.0 || e >= 1.0)
      throw ConfigError("sweep eps values must lie in (0,1)");
  static const std::vector<std::string> known = {
      "residual-orders", "contraction", "zero-viscosity",
      "solver-verification"};
  for (const auto& s : rc.suites) {
    bool ok = false;
    for (const auto& k : known) ok = ok || s == k;
    if (!ok) throw ConfigError("unknown acceptance suite: " + s);
  }
  if (rc.boundary_coef < 0.0)
    throw ConfigError("boundary coefficient must be nonnegative");
  if (rc.picard.tol <= 0.0 || rc.picard.lin_tol <= 0.0)
    throw ConfigError("solver tolerances must be positive");
  if (rc.picard.min_outer < 1 || rc.picard.max_outer < rc.picard.min_outer)
    throw ConfigError("solver outer-iteration bounds are inconsistent");
}

}  // namespace ssflow
