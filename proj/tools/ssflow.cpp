#include <cstdint>
#include <iostream>
#include <string>
#include <utility>

#include "CLI11.hpp"
#include "ssflow/ssflow.hpp"

namespace {

int exit_code_for(const ssflow::Error& e) {
  static const char* config_class[] = {"ConfigError",   "SubsonicPoint",
                                       "GridTooCoarse", "GridMismatch",
                                       "CompatibilityViolation",
                                       "CornerMismatch"};
  for (const char* t : config_class)
    if (e.tag == t) return 2;
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "steady supersonic channel flow: corrector assembly, remainder solve, "
      "acceptance checks"};
  app.require_subcommand(1);

  std::string config_path, out_cli;
  double eps = 0.0, coef = 0.0;
  int n1 = 0, n2 = 0;
  long long seed = 0;
  app.add_option("--config", config_path, "INI configuration file");
  app.add_option("--out", out_cli,
                 "output directory (beats SSFLOW_OUT and [run] out)");
  app.add_option("--eps", eps, "viscosity parameter for run / dump");
  app.add_option("--n1", n1, "streamwise cell count");
  app.add_option("--n2", n2, "vertical cell count");
  app.add_option("--coef", coef, "boundary perturbation coefficient");
  app.add_option("--seed", seed, "boundary series seed");

  CLI::App* crun = app.add_subcommand(
      "run", "solve one case and write the state / forcing tables");
  CLI::App* csweep = app.add_subcommand(
      "sweep", "solve every eps in the sweep list and write the sweep tables");
  CLI::App* cverify = app.add_subcommand(
      "verify", "run the acceptance checks and print one line per criterion");
  CLI::App* cdump = app.add_subcommand(
      "dump",
      "solve one case and write stage diagnostics (corrector stages, wall "
      "layers, cutoff commutators)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int r = app.exit(e);
    return r == 0 ? 0 : 2;
  }

  try {
    ssflow::Config cfg = config_path.empty()
                             ? ssflow::Config()
                             : ssflow::Config::load(config_path);
    ssflow::RunConfig rc = ssflow::resolve_run_config(cfg);
    if (app.count("--eps")) rc.params.eps = eps;
    if (app.count("--n1")) rc.n1 = n1;
    if (app.count("--n2")) rc.n2 = n2;
    if (app.count("--coef")) rc.boundary_coef = coef;
    if (app.count("--seed")) rc.seed = static_cast<std::uint64_t>(seed);
    ssflow::validate_run_config(rc);
    std::string outdir = ssflow::resolve_outdir(out_cli, cfg);

    if (cverify->parsed()) {
      ssflow::AcceptanceOutcome out = ssflow::evaluate_acceptance(rc, outdir);
      for (const auto& c : out.criteria)
        std::cout << ssflow::criterion_line(c) << "\n";
      std::cout << (out.all_pass ? "all criteria passed"
                                 : "some criteria FAILED")
                << "; artifacts in " << outdir << "\n";
      return out.all_pass ? 0 : 1;
    }

    if (csweep->parsed()) {
      ssflow::SweepResult sw = ssflow::run_sweep_core(rc);
      ssflow::write_sweep_artifacts(rc, sw, outdir);
      for (const auto& c : sw.cases)
        std::cout << "eps " << c.eps << ": outer " << c.pic.outer_iters
                  << (c.pic.converged ? " converged" : " NOT converged")
                  << ", q_max " << c.q_max << "\n";
      std::cout << "sweep artifacts in " << outdir << "\n";
      return 0;
    }

    // run / dump: one case at params.eps
    ssflow::CaseResult cr = ssflow::run_case_core(rc);
    ssflow::write_case_fields(outdir, cr);
    if (cdump->parsed()) ssflow::write_dump_extras(outdir, rc, cr);
    std::cout << "eps " << cr.eps << ": outer " << cr.pic.outer_iters
              << (cr.pic.converged ? " converged" : " NOT converged")
              << ", residual L2 (" << cr.pic.residual_l2[0] << ", "
              << cr.pic.residual_l2[1] << ", " << cr.pic.residual_l2[2]
              << ")\n";
    for (const auto& w : cr.warnings)
      std::cout << "warning: " << w << "\n";
    ssflow::write_case_artifacts(rc, std::move(cr), outdir);
    std::cout << ((crun->parsed() ? "case" : "dump")) << " artifacts in "
              << outdir << "\n";
    return 0;
  } catch (const ssflow::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
