#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "ssflow/pipeline.hpp"

using namespace ssflow;

namespace {
RunConfig trivial_sweep_config() {
  RunConfig rc;
  rc.profile = "couette";
  rc.boundary_coef = 0.0;
  rc.n1 = 16;
  rc.n2 = 48;
  rc.sweep_eps = {0.2, 0.1, 0.05};
  return rc;
}
std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  return std::string(std::istreambuf_iterator<char>(f),
                     std::istreambuf_iterator<char>());
}
}  // namespace

TEST_CASE("sweep returns its cases in the configured order") {
  RunConfig rc = trivial_sweep_config();
  SweepResult sw = run_sweep_core(rc);
  REQUIRE(sw.cases.size() == 3);
  for (std::size_t k = 0; k < sw.cases.size(); ++k) {
    CHECK(sw.cases[k].eps == rc.sweep_eps[k]);
    CHECK(sw.cases[k].pic.converged);
    // the shear case carries no forcing at any eps
    CHECK(sw.cases[k].g0s_l2 == 0.0);
    CHECK(sw.cases[k].dev_sup <= 1e-10);
  }
  // identically zero residuals: the fitted trends degenerate to exact
  std::vector<QuantityTrend> ts = sweep_trends(rc, sw);
  REQUIRE(ts.size() == 5);
  for (const auto& t : ts) {
    CHECK(t.fit.exact);
    CHECK(t.pass);
  }
}

TEST_CASE("trend targets follow the configured integrability exponent") {
  RunConfig rc;
  rc.params.p = 2.5;
  SweepResult sw;
  for (double e : {0.2, 0.1, 0.05}) {
    CaseResult c;
    c.eps = e;
    c.g0s_l2 = 3.0 * e * e;
    c.gs_lp = 2.0 * std::pow(e, 1.7);
    c.ccut_sup = std::pow(e, 0.8);
    c.capp_sup = 0.5 * std::pow(e, 0.8);
    c.ccut_lp = std::pow(e, 0.9);
    c.capp_lp = std::pow(e, 0.9);
    c.dev_sup = 4.0 * e;
    sw.cases.push_back(std::move(c));
  }
  std::vector<QuantityTrend> ts = sweep_trends(rc, sw);
  auto find = [&](const std::string& n) -> const QuantityTrend& {
    for (const auto& t : ts)
      if (t.name == n) return t;
    FAIL("missing trend " + n);
    return ts.front();
  };
  const QuantityTrend& mass = find("mass_residual_l2");
  CHECK(mass.fit.slope == Catch::Approx(2.0).margin(1e-12));
  CHECK(mass.target == 1.9);
  CHECK(mass.pass);
  const QuantityTrend& mom = find("momentum_residual_lp");
  CHECK(mom.fit.slope == Catch::Approx(1.7).margin(1e-12));
  CHECK(mom.target == Catch::Approx(1.5 + 0.5 / 2.5 - 0.1));
  CHECK(mom.pass);
  const QuantityTrend& cut = find("cutoff_commutator_sup");
  CHECK(cut.fit.slope == Catch::Approx(0.8).margin(1e-12));
  CHECK(cut.target == 0.45);
  const QuantityTrend& dev = find("flow_deviation_sup");
  CHECK(dev.fit.slope == Catch::Approx(1.0).margin(1e-12));
  CHECK(dev.pass);
  // a too-shallow decay fails its trend
  SweepResult bad = sw;
  for (auto& c : bad.cases) c.g0s_l2 = std::sqrt(c.eps);
  std::vector<QuantityTrend> tb = sweep_trends(rc, bad);
  for (const auto& t : tb)
    if (t.name == "mass_residual_l2") CHECK_FALSE(t.pass);
}

TEST_CASE("sweep artifacts land on disk with the pinned schemas") {
  RunConfig rc = trivial_sweep_config();
  SweepResult sw = run_sweep_core(rc);
  std::string out = "pipeline_test_out";
  write_sweep_artifacts(rc, sw, out);
  CsvTable t = sweep_table(rc, sw);
  CHECK(t.header.size() == 35);
  CHECK(t.rows.size() == 3);
  std::string sweep_csv = slurp(out + "/sweep.csv");
  CHECK(sweep_csv.rfind("eps,", 0) == 0);
  std::string trends_csv = slurp(out + "/trends.csv");
  CHECK(trends_csv.rfind("quantity,slope,intercept,target,exact,pass\n", 0) ==
        0);
  std::string residuals_csv = slurp(out + "/residuals.csv");
  CHECK(residuals_csv.rfind("eps,g0s_l2,g0s_w1p,gs_lp,gs_linf\n", 0) == 0);
  // each ledger line is one parseable record with a known type
  std::istringstream ledger(slurp(out + "/ledger.jsonl"));
  std::string line;
  int cases = 0, outers = 0, energies = 0;
  while (std::getline(ledger, line)) {
    nlohmann::json j = nlohmann::json::parse(line);
    std::string type = j.at("type");
    if (type == "case") {
      ++cases;
      CHECK(j.at("converged").get<bool>());
    } else if (type == "outer") {
      ++outers;
    } else if (type == "energy") {
      ++energies;
    }
  }
  CHECK(cases == 3);
  CHECK(energies == 3);
  CHECK(outers >= 9);  // at least min_outer records per case
  std::string summary = slurp(out + "/summary.txt");
  CHECK(summary.find("identically zero") != std::string::npos);
  std::filesystem::remove_all(out);
}

TEST_CASE("single-case artifacts skip the trends file") {
  RunConfig rc = trivial_sweep_config();
  rc.params.eps = 0.1;
  CaseResult cr = run_case_core(rc);
  std::string out = "pipeline_case_out";
  write_case_fields(out, cr);
  write_case_artifacts(rc, std::move(cr), out);
  CHECK(std::filesystem::exists(out + "/sweep.csv"));
  CHECK(std::filesystem::exists(out + "/residuals.csv"));
  CHECK(std::filesystem::exists(out + "/ledger.jsonl"));
  CHECK(std::filesystem::exists(out + "/summary.txt"));
  CHECK(std::filesystem::exists(out + "/state.csv"));
  CHECK(std::filesystem::exists(out + "/forcing.csv"));
  CHECK_FALSE(std::filesystem::exists(out + "/trends.csv"));
  std::string state = slurp(out + "/state.csv");
  CHECK(state.rfind("x1,x2,u,v,rho,u_rem,v_rem,rho_rem\n", 0) == 0);
  std::filesystem::remove_all(out);
}

TEST_CASE("rerunning a case reproduces every artifact byte") {
  RunConfig rc = trivial_sweep_config();
  rc.profile = "quartic";
  rc.boundary_coef = 0.4;
  rc.params.eps = 0.2;
  rc.n1 = 16;
  rc.n2 = 48;
  std::string oa = "pipeline_det_a", ob = "pipeline_det_b";
  {
    CaseResult cr = run_case_core(rc);
    write_case_fields(oa, cr);
  }
  {
    CaseResult cr = run_case_core(rc);
    write_case_fields(ob, cr);
  }
  CHECK(slurp(oa + "/state.csv") == slurp(ob + "/state.csv"));
  CHECK(slurp(oa + "/forcing.csv") == slurp(ob + "/forcing.csv"));
  std::filesystem::remove_all(oa);
  std::filesystem::remove_all(ob);
}
