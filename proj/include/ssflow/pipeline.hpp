#pragma once
// Case orchestration: base profile -> corrector assembly -> boundary lift ->
// outer iteration, plus the epsilon-sweep driver, fitted convergence trends,
// and the CSV / JSON-lines artifact writers.

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <string>
#include <vector>

#include "ssflow/approx.hpp"
#include "ssflow/base_flow.hpp"
#include "ssflow/boundary_data.hpp"
#include "ssflow/characteristics.hpp"
#include "ssflow/field_ops.hpp"
#include "ssflow/grid.hpp"
#include "ssflow/homogenize.hpp"
#include "ssflow/mollify.hpp"
#include "ssflow/nonlinear.hpp"
#include "ssflow/params.hpp"
#include "ssflow/report.hpp"
#include "ssflow/run_config.hpp"
#include "ssflow/slope_fit.hpp"

namespace ssflow {

struct CaseResult {
  double eps = 0.0;
  Grid grid;
  BaseFlow flow;
  ApproxSolution ap;
  ForcingResiduals fr;
  BoundaryData bd;
  HomogenizedProblem hp;
  PicardResult pic;
  // recorded norms
  double g0s_l2 = 0.0, g0s_w1p = 0.0, gs_lp = 0.0, gs_linf = 0.0;
  double ccut_sup = 0.0, ccut_lp = 0.0, capp_sup = 0.0, capp_lp = 0.0;
  double dev_sup = 0.0;       // sup |u-mu| + sup |v| + sup |rho-rho*|
  double grad_dev_sup = 0.0;  // sup over nodes of the velocity-gradient
                              // deviation from the shear profile
  double q_max = 0.0, xnorm_max = 0.0, xnorm_final = 0.0;
  std::vector<std::string> warnings;
};

// Run one case end to end.  Throws the structured errors of the stages it
// drives; callers map those onto exit codes.
inline CaseResult run_case_core(const RunConfig& rc) {
  CaseResult cr;
  const Params& pr = rc.params;
  cr.eps = pr.eps;
  cr.warnings = validate_params(pr);
  cr.flow = rc.make_profile();
  double c = pr.sound_speed();
  SupersonicReport sr = validate_supersonic(cr.flow, c);
  for (const auto& w : sr.warnings) cr.warnings.push_back(w);
  cr.grid = rc.make_grid();
  cr.ap = assemble_approximation(pr, cr.grid, cr.flow, rc.approx);
  cr.fr = forcing_residuals(cr.ap, cr.grid, cr.flow, ResidualRoute::termwise);
  cr.bd = make_boundary_data(pr, rc.seed, rc.boundary_modes, rc.boundary_coef);
  check_corner_compatibility(cr.bd);
  cr.hp = homogenize(pr, cr.grid, cr.ap, cr.bd);
  if (auto w = mollify_width_warning(cr.grid, pr.eps, rc.picard.delta_cells))
    cr.warnings.push_back(*w);
  cr.pic = picard_iterate(pr, cr.grid, cr.ap, cr.hp, cr.fr, rc.picard);

  const Grid& g = cr.grid;
  cr.g0s_l2 = cr.fr.l2_g0;
  cr.gs_lp = cr.fr.lp_total;
  cr.gs_linf = std::max({norm_inf(cr.fr.g0), norm_inf(cr.fr.g1),
                         norm_inf(cr.fr.g2)});
  Field g0x1 = detail::dx1_field(cr.fr.g0, g);
  Field g0x2 = detail::dx2_field(cr.fr.g0, g);
  double p = pr.p;
  cr.g0s_w1p = std::pow(std::pow(norm_lp(cr.fr.g0, g, p), p) +
                            std::pow(norm_lp(g0x1, g, p), p) +
                            std::pow(norm_lp(g0x2, g, p), p),
                        1.0 / p);
  cr.ccut_sup = cr.ap.sup_Ccut;
  cr.ccut_lp = cr.ap.lp_Ccut;
  cr.capp_sup = cr.ap.sup_Capp;
  cr.capp_lp = cr.ap.lp_Capp;

  double du = 0.0, dv = 0.0, dr = 0.0, gd = 0.0;
  Field ux1 = detail::dx1_field(cr.pic.full.u, g);
  Field ux2 = detail::dx2_field(cr.pic.full.u, g);
  Field vx1 = detail::dx1_field(cr.pic.full.v, g);
  Field vx2 = detail::dx2_field(cr.pic.full.v, g);
  for (int i = 0; i <= g.n1; ++i)
    for (int j = 0; j <= g.n2; ++j) {
      double x2 = g.x2[j];
      du = std::max(du, std::abs(cr.pic.full.u(i, j) - cr.flow.mu(x2)));
      dv = std::max(dv, std::abs(cr.pic.full.v(i, j)));
      dr = std::max(dr, std::abs(cr.pic.full.rho(i, j) - pr.rho_star));
      double g1 = std::abs(ux1(i, j));
      double g2 = std::abs(ux2(i, j) - cr.flow.mu(x2, 1));
      double g3 = std::abs(vx1(i, j));
      double g4 = std::abs(vx2(i, j));
      gd = std::max({gd, g1, g2, g3, g4});
    }
  cr.dev_sup = du + dv + dr;
  cr.grad_dev_sup = gd;

  for (double q : cr.pic.q_history) cr.q_max = std::max(cr.q_max, q);
  for (double x : cr.pic.xnorm_history)
    cr.xnorm_max = std::max(cr.xnorm_max, x);
  if (!cr.pic.xnorm_history.empty())
    cr.xnorm_final = cr.pic.xnorm_history.back();
  return cr;
}

struct SweepResult {
  std::vector<CaseResult> cases;  // ordered as the configured eps list
};

// Worker pool over the eps list; results are merged single-threaded in the
// configured order, so output is independent of scheduling.
inline SweepResult run_sweep_core(const RunConfig& rc) {
  std::vector<std::future<CaseResult>> jobs;
  jobs.reserve(rc.sweep_eps.size());
  for (double e : rc.sweep_eps) {
    RunConfig rcc = rc;
    rcc.params.eps = e;
    jobs.push_back(std::async(std::launch::async,
                              [rcc]() { return run_case_core(rcc); }));
  }
  SweepResult sw;
  sw.cases.reserve(jobs.size());
  for (auto& j : jobs) sw.cases.push_back(j.get());
  return sw;
}

// One fitted decay rate over the sweep, with its acceptance threshold.
struct QuantityTrend {
  std::string name;
  std::vector<double> values;
  SlopeFit fit;
  double target = 0.0;
  bool pass = false;
};

inline QuantityTrend make_trend(const std::string& name,
                                const std::vector<double>& eps,
                                const std::vector<double>& values,
                                double target) {
  QuantityTrend t;
  t.name = name;
  t.values = values;
  t.fit = fit_slope(eps, values);
  t.target = target;
  t.pass = t.fit.exact || t.fit.slope >= target;
  return t;
}

inline std::vector<QuantityTrend> sweep_trends(const RunConfig& rc,
                                               const SweepResult& sw) {
  std::vector<double> eps;
  for (const auto& c : sw.cases) eps.push_back(c.eps);
  auto col = [&](double CaseResult::*m) {
    std::vector<double> v;
    for (const auto& c : sw.cases) v.push_back(c.*m);
    return v;
  };
  std::vector<double> cut_sup, cut_lp;
  for (const auto& c : sw.cases) {
    cut_sup.push_back(c.ccut_sup + c.capp_sup);
    cut_lp.push_back(c.ccut_lp + c.capp_lp);
  }
  double p = rc.params.p;
  std::vector<QuantityTrend> ts;
  ts.push_back(make_trend("mass_residual_l2", eps, col(&CaseResult::g0s_l2),
                          1.9));
  ts.push_back(make_trend("momentum_residual_lp", eps,
                          col(&CaseResult::gs_lp), 1.5 + 0.5 / p - 0.1));
  ts.push_back(make_trend("cutoff_commutator_sup", eps, cut_sup, 0.45));
  ts.push_back(make_trend("cutoff_commutator_lp", eps, cut_lp,
                          0.45 + 0.5 / p - 0.05));
  ts.push_back(make_trend("flow_deviation_sup", eps,
                          col(&CaseResult::dev_sup), 0.9));
  return ts;
}

// ---- artifact writers -----------------------------------------------------

inline CsvTable residuals_table(const SweepResult& sw) {
  CsvTable t;
  t.header = {"eps", "g0s_l2", "g0s_w1p", "gs_lp", "gs_linf"};
  for (const auto& c : sw.cases)
    t.add_row({fmt17(c.eps), fmt17(c.g0s_l2), fmt17(c.g0s_w1p),
               fmt17(c.gs_lp), fmt17(c.gs_linf)});
  return t;
}

inline CsvTable trends_table(const std::vector<QuantityTrend>& ts) {
  CsvTable t;
  t.header = {"quantity", "slope", "intercept", "target", "exact", "pass"};
  for (const auto& q : ts)
    t.add_row({q.name, fmt17(q.fit.slope), fmt17(q.fit.intercept),
               fmt17(q.target), q.fit.exact ? "1" : "0", q.pass ? "1" : "0"});
  return t;
}

inline CsvTable sweep_table(const RunConfig& rc, const SweepResult& sw) {
  CsvTable t;
  t.header = {"eps",        "n1",         "n2",
              "seed",       "coef",       "g0s_l2",
              "g0s_w1p",    "gs_lp",      "gs_linf",
              "ccut_sup",   "ccut_lp",    "capp_sup",
              "capp_lp",    "dev_sup",    "grad_dev_sup",
              "xnorm_final", "xnorm_max", "q_max",
              "outer_iters", "sweeps_total", "res0_l2",
              "res1_l2",    "res2_l2",    "tau0",
              "tau1",       "tau2",       "sos_min",
              "C_weighted", "C_flux",     "identity_mismatch",
              "identity_tau", "lame_gap", "map_jac_dev",
              "shift_max",  "amplitude"};
  for (const auto& c : sw.cases) {
    const PicardResult& p = c.pic;
    t.add_row({fmt17(c.eps), fmt17(rc.n1), fmt17(rc.n2),
               std::to_string(rc.seed), fmt17(rc.boundary_coef),
               fmt17(c.g0s_l2), fmt17(c.g0s_w1p), fmt17(c.gs_lp),
               fmt17(c.gs_linf), fmt17(c.ccut_sup), fmt17(c.ccut_lp),
               fmt17(c.capp_sup), fmt17(c.capp_lp), fmt17(c.dev_sup),
               fmt17(c.grad_dev_sup), fmt17(c.xnorm_final),
               fmt17(c.xnorm_max), fmt17(c.q_max), fmt17(p.outer_iters),
               fmt17(p.sweeps_total), fmt17(p.residual_l2[0]),
               fmt17(p.residual_l2[1]), fmt17(p.residual_l2[2]),
               fmt17(p.tau_static[0] + p.tau_lin[0]),
               fmt17(p.tau_static[1] + p.tau_lin[1]),
               fmt17(p.tau_static[2] + p.tau_lin[2]),
               fmt17(p.sos_min_all), fmt17(p.energy.C_weighted),
               fmt17(p.energy.C_flux), fmt17(p.identity.mismatch),
               fmt17(p.identity.tau), fmt17(p.lame_energy_gap),
               fmt17(p.map_jacobian_deviation), fmt17(c.hp.shift_max),
               fmt17(c.bd.amplitude)});
  }
  return t;
}

inline void append_case_records(JsonlWriter& out, const CaseResult& c) {
  const PicardResult& p = c.pic;
  for (std::size_t n = 0; n < p.delta_history.size(); ++n) {
    nlohmann::json rec;
    rec["type"] = "outer";
    rec["eps"] = c.eps;
    rec["iter"] = static_cast<int>(n + 1);
    rec["delta"] = p.delta_history[n];
    if (n < p.q_history.size() + 1 && n >= 1)
      rec["q"] = p.q_history[n - 1];
    rec["xnorm"] =
        n < p.xnorm_history.size() ? p.xnorm_history[n] : 0.0;
    out.add(rec);
  }
  {
    nlohmann::json rec;
    rec["type"] = "energy";
    rec["eps"] = c.eps;
    rec["delta"] = p.energy.delta_len;
    rec["iterations"] = p.sweeps_total;
    rec["lhs_weighted"] = p.energy.lhs_weighted;
    rec["rhs_weighted"] = p.energy.rhs_weighted;
    rec["C_weighted"] = p.energy.C_weighted;
    rec["lhs_flux"] = p.energy.lhs_flux;
    rec["rhs_flux"] = p.energy.rhs_flux;
    rec["C_flux"] = p.energy.C_flux;
    rec["sos_min"] = p.energy.sos_min;
    rec["sos_min_all"] = p.sos_min_all;
    rec["u_l2sq"] = p.energy.u_l2sq;
    rec["rho_l2sq"] = p.energy.rho_l2sq;
    rec["grad_l2sq"] = p.energy.grad_l2sq;
    rec["gradw_l2sq"] = p.energy.gradw_l2sq;
    rec["vx2_l2sq"] = p.energy.vx2_l2sq;
    rec["rho_out_l2sq"] = p.energy.rho_out_l2sq;
    rec["f0d_l2sq"] = p.energy.f0d_l2sq;
    rec["pair_weighted"] = p.energy.pair_weighted;
    rec["pair_plain"] = p.energy.pair_plain;
    out.add(rec);
  }
  {
    nlohmann::json rec;
    rec["type"] = "case";
    rec["eps"] = c.eps;
    rec["converged"] = p.converged;
    rec["outer_iters"] = p.outer_iters;
    rec["residual_l2"] = {p.residual_l2[0], p.residual_l2[1],
                          p.residual_l2[2]};
    rec["tau_static"] = {p.tau_static[0], p.tau_static[1], p.tau_static[2]};
    rec["tau_lin"] = {p.tau_lin[0], p.tau_lin[1], p.tau_lin[2]};
    rec["identity_ok"] = p.identity.ok;
    rec["warnings"] = c.warnings;
    out.add(rec);
  }
}

inline std::string summary_text(const RunConfig& rc, const SweepResult& sw,
                                const std::vector<QuantityTrend>& ts) {
  std::string s;
  s += "cases: " + std::to_string(sw.cases.size()) + " (grid " +
       std::to_string(rc.n1) + "x" + std::to_string(rc.n2) + ", seed " +
       std::to_string(rc.seed) + ", coef " + fmt17(rc.boundary_coef) + ")\n";
  for (const auto& c : sw.cases) {
    s += "eps " + fmt17(c.eps) + ": outer " +
         std::to_string(c.pic.outer_iters) +
         (c.pic.converged ? " converged" : " NOT converged") + ", q_max " +
         fmt17(c.q_max) + ", |g0s| " + fmt17(c.g0s_l2) + ", |gs|_p " +
         fmt17(c.gs_lp) + ", dev " + fmt17(c.dev_sup) + ", sos_min " +
         fmt17(c.pic.sos_min_all) + "\n";
    for (const auto& w : c.warnings) s += "  warning: " + w + "\n";
  }
  for (const auto& q : ts)
    s += "trend " + q.name + ": slope " + fmt17(q.fit.slope) +
         (q.fit.exact ? " (identically zero)" : "") + " target " +
         fmt17(q.target) + (q.pass ? " pass" : " FAIL") + "\n";
  return s;
}

inline void write_sweep_artifacts(const RunConfig& rc, const SweepResult& sw,
                                  const std::string& outdir) {
  ensure_outdir(outdir);
  residuals_table(sw).write(outdir + "/residuals.csv");
  sweep_table(rc, sw).write(outdir + "/sweep.csv");
  auto ts = sweep_trends(rc, sw);
  trends_table(ts).write(outdir + "/trends.csv");
  JsonlWriter jw;
  for (const auto& c : sw.cases) append_case_records(jw, c);
  jw.write(outdir + "/ledger.jsonl");
  write_text(outdir + "/summary.txt", summary_text(rc, sw, ts));
}

// Single-case variant of the sweep artifacts (no fitted trends: those need
// at least three eps values).
inline void write_case_artifacts(const RunConfig& rc, CaseResult cr,
                                 const std::string& outdir) {
  ensure_outdir(outdir);
  SweepResult one;
  one.cases.push_back(std::move(cr));
  residuals_table(one).write(outdir + "/residuals.csv");
  sweep_table(rc, one).write(outdir + "/sweep.csv");
  JsonlWriter jw;
  append_case_records(jw, one.cases.front());
  jw.write(outdir + "/ledger.jsonl");
  write_text(outdir + "/summary.txt", summary_text(rc, one, {}));
}

// Nodal state and forcing dumps for one case (gnuplot-friendly long format).
inline void write_case_fields(const std::string& outdir, const CaseResult& c) {
  ensure_outdir(outdir);
  dump_fields_csv(outdir + "/state.csv", c.grid,
                  {"u", "v", "rho", "u_rem", "v_rem", "rho_rem"},
                  {&c.pic.full.u, &c.pic.full.v, &c.pic.full.rho,
                   &c.pic.state.u, &c.pic.state.v, &c.pic.state.rho});
  dump_fields_csv(outdir + "/forcing.csv", c.grid,
                  {"g0s", "g1s", "g2s", "g0bar", "g1bar", "g2bar"},
                  {&c.fr.g0, &c.fr.g1, &c.fr.g2, &c.hp.g0bar, &c.hp.g1bar,
                   &c.hp.g2bar});
}

// Extra diagnostics for the dump subcommand: compressible-corrector stage
// fields with the characteristic-region label, sublayer profiles in wall
// coordinates, and the cutoff commutator bundles.
inline void write_dump_extras(const std::string& outdir, const RunConfig& rc,
                              const CaseResult& c) {
  ensure_outdir(outdir);
  const Grid& g = c.grid;
  double cs = rc.params.sound_speed();
  Partition part = partition_domain(g, c.flow, cs);
  Field region(g);
  for (int i = 0; i <= g.n1; ++i)
    for (int j = 0; j <= g.n2; ++j) {
      int ci = std::min(i, g.n1 - 1), cj = std::min(j, g.n2 - 1);
      region(i, j) = part.cell(ci, cj, g.n2);
    }
  dump_fields_csv(outdir + "/euler.csv", g,
                  {"u_e", "v_e", "rho_e", "region"},
                  {&c.ap.UE, &c.ap.VE, &c.ap.PE, &region});
  dump_fields_csv(outdir + "/cutoff.csv", g, {"c_cut", "c_app"},
                  {&c.ap.Ccut_bundle, &c.ap.Capp_bundle});
  auto layer_csv = [&](const LayerSolution& l1, const LayerSolution& l2,
                       const std::string& path) {
    CsvTable t;
    t.header = {"x1", "Y", "u1", "v1", "u2", "v2"};
    for (int r = 0; r < std::min(l1.nrows, l2.nrows); ++r) {
      double x1 = l1.x1_of_row(r);
      for (std::size_t k = 0; k < l1.lg.Y.size(); ++k)
        t.add_row({fmt17(x1), fmt17(l1.lg.Y[k]), fmt17(l1.u[r][k]),
                   fmt17(l1.v[r][k]), fmt17(l2.u[r][k]),
                   fmt17(l2.v[r][k])});
    }
    t.write(path);
  };
  layer_csv(c.ap.lay1_low, c.ap.lay2_low, outdir + "/layer_low.csv");
  layer_csv(c.ap.lay1_up, c.ap.lay2_up, outdir + "/layer_up.csv");
}

}  // namespace ssflow
