#include <catch2/catch_amalgamated.hpp>
#include <array>
#include <cmath>

#include "ssflow/nonlinear.hpp"
#include "ssflow/pipeline.hpp"

using namespace ssflow;

namespace {
// Hand-built composite state for the pure shear 2 + 0.1 x2 at unit density:
// every stored derivative is exact, so algebraic identities hold to roundoff.
struct ShearState {
  Params pr;
  Grid g;
  ApproxSolution ap;
  ShearState(int n1 = 16, int n2 = 32) {
    g = build_grid(n1, n2, pr.L, pr.eps, Grading::tanh_walls, 1.5);
    for (Field* f : {&ap.us, &ap.vs, &ap.rhos, &ap.us_x1, &ap.us_x2,
                     &ap.vs_x1, &ap.vs_x2, &ap.rhos_x1, &ap.rhos_x2})
      *f = Field(g);
    for (int i = 0; i <= g.n1; ++i)
      for (int j = 0; j <= g.n2; ++j) {
        ap.us(i, j) = 2.0 + 0.1 * g.x2[j];
        ap.us_x2(i, j) = 0.1;
        ap.rhos(i, j) = 1.0;
      }
    ap.pr = pr;
  }
  RemainderState wave(double A) const {
    RemainderState w(g);
    for (int i = 0; i <= g.n1; ++i)
      for (int j = 0; j <= g.n2; ++j) {
        double s1 = std::sin(M_PI * g.x1[i] / g.L);
        double y = g.x2[j];
        w.u(i, j) = A * s1 * std::sin(M_PI * y / 2.0);
        w.v(i, j) = A * s1 * std::sin(M_PI * y);
        w.rho(i, j) = A * s1 * (1.0 - std::cos(M_PI * y));
      }
    return w;
  }
};

std::array<double, 3> norms3(const std::array<Field, 3>& f, const Grid& g) {
  return {norm_l2(f[0], g), norm_l2(f[1], g), norm_l2(f[2], g)};
}
}  // namespace

TEST_CASE("pure shear state has an identically zero equation residual") {
  // Zero up to stencil roundoff: the graded second-difference divides O(1)
  // values by h^2 ~ 5e-3, so cancellation leaves a few times 1e-11.
  ShearState s;
  std::array<Field, 3> N = ns_residual(s.pr, s.g, s.ap.us, s.ap.vs, s.ap.rhos);
  for (const Field& f : N) CHECK(norm_inf(f) <= 1e-10);
}

TEST_CASE("equation residual refuses a nonpositive density") {
  ShearState s;
  Field rho = s.ap.rhos;
  rho(3, 5) = 0.0;
  CHECK_THROWS_AS(ns_residual(s.pr, s.g, s.ap.us, s.ap.vs, rho),
                  DensityFloor);
  RemainderState w(s.g);
  w.rho(2, 2) = -2.0;
  CHECK_THROWS_AS(quadratic_forcing(s.pr, s.g, s.ap, w.u, w.v, w.rho),
                  DensityFloor);
}

TEST_CASE("remainder forcing vanishes identically at zero remainder") {
  ShearState s;
  RemainderState w(s.g);
  std::array<Field, 3> q = quadratic_forcing(s.pr, s.g, s.ap, w.u, w.v, w.rho);
  for (const Field& f : q) CHECK(norm_inf(f) == 0.0);
}

TEST_CASE("pressure bracket reduces to the closed form at gamma 2") {
  // P = a rho^gamma with a = 1/2, gamma = 2 gives P'(rho) = rho and c = 1,
  // so c^2 - P'(rho_s + r) = -r exactly; for a density-only remainder the
  // momentum forcing collapses to -r d(r).
  ShearState s;
  RemainderState w(s.g);
  for (int i = 0; i <= s.g.n1; ++i)
    for (int j = 0; j <= s.g.n2; ++j)
      w.rho(i, j) = 0.01 * std::sin(M_PI * s.g.x1[i] / s.g.L) *
                    std::cos(M_PI * s.g.x2[j] / 2.0);
  std::array<Field, 3> q = quadratic_forcing(s.pr, s.g, s.ap, w.u, w.v, w.rho);
  Field rx1 = detail::dx1_field(w.rho, s.g);
  Field rx2 = detail::dx2_field(w.rho, s.g);
  CHECK(norm_inf(q[0]) == 0.0);
  for (int i = 0; i <= s.g.n1; ++i)
    for (int j = 0; j <= s.g.n2; ++j) {
      CHECK(q[1](i, j) == Catch::Approx(-w.rho(i, j) * rx1(i, j))
                              .margin(1e-15));
      CHECK(q[2](i, j) == Catch::Approx(-w.rho(i, j) * rx2(i, j))
                              .margin(1e-15));
    }
}

TEST_CASE("remainder forcing equals the defect of the frozen linearization") {
  // The closed-form forcing must reproduce L(w) - [N(W(w)) - N(W(0))] with
  // the transport speed frozen at the reconstructed state; on the shear
  // composite all stored derivatives are exact, so the match is roundoff.
  ShearState s;
  BoundaryData bd = make_boundary_data(s.pr, 1, 3, 0.0);
  HomogenizedProblem hp = homogenize(s.pr, s.g, s.ap, bd);
  RemainderState w = s.wave(1e-2);
  FullState fs = reconstruct(s.ap, hp, w);
  FullState f0 = reconstruct(s.ap, hp, RemainderState(s.g));
  double c2 = s.pr.sound_speed() * s.pr.sound_speed();
  std::array<Field, 3> Nw = ns_residual(s.pr, s.g, fs.u, fs.v, fs.rho);
  std::array<Field, 3> N0 = ns_residual(s.pr, s.g, f0.u, f0.v, f0.rho);
  std::array<Field, 3> Lw =
      linear_lhs(s.g, s.ap.us, s.ap.us_x2, fs.u, fs.v, s.pr.eps, s.pr.lambda,
                 c2, w.u, w.v, w.rho);
  std::array<Field, 3> q =
      quadratic_forcing(s.pr, s.g, s.ap, w.u, w.v, w.rho);
  for (int k = 0; k < 3; ++k) {
    Field d = Lw[k];
    d -= Nw[k];
    d += N0[k];
    d -= q[k];
    CHECK(norm_l2(d, s.g) <= 1e-10);
  }
}

TEST_CASE("defect identity survives the assembled corrector state") {
  // Same identity on the full quartic assembly; the only gap is the stored
  // semi-analytic layer derivatives versus grid stencils of the composite.
  Params pr;
  BaseFlow flow = BaseFlow::quartic(2.0, 2.2, 0.15);
  Grid g = build_grid(48, 96, pr.L, pr.eps, Grading::tanh_walls, 1.5);
  ApproxSolution ap = assemble_approximation(pr, g, flow);
  BoundaryData bd = make_boundary_data(pr, 1, 3, 0.0);
  HomogenizedProblem hp = homogenize(pr, g, ap, bd);
  RemainderState w(g);
  double A = 1e-3;
  for (int i = 0; i <= g.n1; ++i)
    for (int j = 0; j <= g.n2; ++j) {
      double s1 = std::sin(M_PI * g.x1[i] / g.L);
      double y = g.x2[j];
      w.u(i, j) = A * s1 * std::sin(M_PI * y / 2.0);
      w.v(i, j) = A * s1 * std::sin(M_PI * y);
      w.rho(i, j) = A * s1 * (1.0 - std::cos(M_PI * y));
    }
  FullState fs = reconstruct(ap, hp, w);
  FullState f0 = reconstruct(ap, hp, RemainderState(g));
  double c2 = pr.sound_speed() * pr.sound_speed();
  std::array<Field, 3> Nw = ns_residual(pr, g, fs.u, fs.v, fs.rho);
  std::array<Field, 3> N0 = ns_residual(pr, g, f0.u, f0.v, f0.rho);
  std::array<Field, 3> Lw = linear_lhs(g, ap.us, ap.us_x2, fs.u, fs.v, pr.eps,
                                       pr.lambda, c2, w.u, w.v, w.rho);
  std::array<Field, 3> q = quadratic_forcing(pr, g, ap, w.u, w.v, w.rho);
  for (int k = 0; k < 3; ++k) {
    Field d = Lw[k];
    d -= Nw[k];
    d += N0[k];
    d -= q[k];
    double scale = norm_l2(q[k], g) + 1e-300;
    CHECK(norm_l2(d, g) / scale <= 0.12);
  }
}

TEST_CASE("beyond-linear part of the forcing scales quadratically") {
  ShearState s;
  auto beyond = [&](double A) {
    RemainderState w1 = s.wave(A), w2 = s.wave(2.0 * A);
    std::array<Field, 3> q1 =
        quadratic_forcing(s.pr, s.g, s.ap, w1.u, w1.v, w1.rho);
    std::array<Field, 3> q2 =
        quadratic_forcing(s.pr, s.g, s.ap, w2.u, w2.v, w2.rho);
    double n = 0.0;
    for (int k = 0; k < 3; ++k) {
      Field d = q2[k];
      Field t = q1[k];
      t *= 2.0;
      d -= t;
      n += norm_l2(d, s.g);
    }
    return n;
  };
  double bA = beyond(1e-3), bh = beyond(5e-4);
  CHECK(bA / bh == Catch::Approx(4.0).epsilon(0.05));
}

TEST_CASE("outer iteration solves the coarse channel case end to end") {
  RunConfig rc;
  rc.n1 = 16;
  rc.n2 = 32;
  rc.params.eps = 0.1;
  CaseResult cr = run_case_core(rc);
  const PicardResult& p = cr.pic;
  CHECK(p.converged);
  CHECK(p.outer_iters >= rc.picard.min_outer);
  CHECK_FALSE(p.q_history.empty());
  CHECK(cr.q_max < 1.0);
  CHECK(p.sos_min_all >= -1e-14);
  CHECK(std::isfinite(p.energy.C_weighted));
  CHECK(std::isfinite(p.energy.C_flux));
  CHECK(p.identity.ok);
  for (int k = 0; k < 3; ++k) {
    double budget =
        10.0 * (rc.picard.tol + p.tau_static[k] + p.tau_lin[k]);
    CHECK(p.residual_l2[k] <= budget);
    CHECK(p.tau_static[k] > 0.0);
  }
  CHECK(cr.xnorm_final < 1.0);
  CHECK(cr.dev_sup > 0.0);
}

TEST_CASE("shear profile with silent boundaries stays the exact solution") {
  RunConfig rc;
  rc.n1 = 16;
  rc.n2 = 32;
  rc.profile = "couette";
  rc.boundary_coef = 0.0;
  rc.params.eps = 0.1;
  CaseResult cr = run_case_core(rc);
  CHECK(norm_inf(cr.pic.state.u) <= 1e-10);
  CHECK(norm_inf(cr.pic.state.v) <= 1e-10);
  CHECK(norm_inf(cr.pic.state.rho) <= 1e-10);
  CHECK(cr.dev_sup <= 1e-10);
  for (int k = 0; k < 3; ++k) CHECK(cr.pic.residual_l2[k] <= 1e-10);
}
