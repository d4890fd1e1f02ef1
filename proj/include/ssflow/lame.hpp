#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "errors.hpp"
#include "field.hpp"
#include "grid.hpp"

namespace ssflow {

// Solver for the viscous block: find (u, v) vanishing on the whole boundary
// with
//
//   -eps (Delta u + lambda d_x1 div(u,v)) = f1,
//   -eps (Delta v + lambda d_x2 div(u,v)) = f2.
//
// Discretized with bilinear elements on the tensor grid, which keeps the
// operator symmetric positive definite for lambda > -1 and makes the energy
// identity  a(u,u) = (f, u)  hold to solver precision by construction
// (Galerkin orthogonality).  The system is solved matrix-free with
// Jacobi-preconditioned conjugate gradients; rerunning from a warm start is
// cheap, which the sweep relaxation relies on.

struct LameOptions {
  double rtol = 1e-12;
  int itmax = 50000;
};

struct LameSolution {
  Field u, v;
  int iters = 0;
  double rel_residual = 0.0;
  double energy_gap = 0.0;  // |a(u,u) - (f,u)| / max(|a(u,u)|, floor)
};

namespace detail {

struct LameOperator {
  const Grid* g;
  double eps, lam;
  int nI1, nI2, N;
  std::vector<double> diag;

  LameOperator(const Grid& g_, double eps_, double lam_)
      : g(&g_), eps(eps_), lam(lam_) {
    nI1 = g->n1 - 1;
    nI2 = g->n2 - 1;
    N = nI1 * nI2;
    build_diag();
  }

  int id(int i, int j) const {
    if (i < 1 || i > g->n1 - 1 || j < 1 || j > g->n2 - 1) return -1;
    return (i - 1) * nI2 + (j - 1);
  }

  static constexpr double Kc[2][2] = {{1.0, -1.0}, {-1.0, 1.0}};
  static constexpr double Mc[2][2] = {{1.0 / 3.0, 1.0 / 6.0},
                                      {1.0 / 6.0, 1.0 / 3.0}};
  static constexpr double Cc[2][2] = {{-0.5, -0.5}, {0.5, 0.5}};

  void build_diag() {
    diag.assign(2 * N, 0.0);
    for (int ci = 0; ci < g->n1; ++ci)
      for (int cj = 0; cj < g->n2; ++cj) {
        double hx = g->h1, hy = g->x2[cj + 1] - g->x2[cj];
        for (int a = 0; a < 4; ++a) {
          int ax = a & 1, ay = a >> 1;
          int k = id(ci + ax, cj + ay);
          if (k < 0) continue;
          double kxx = (hy / hx) * Kc[ax][ax] * Mc[ay][ay];
          double kyy = (hx / hy) * Mc[ax][ax] * Kc[ay][ay];
          diag[k] += eps * ((1.0 + lam) * kxx + kyy);
          diag[N + k] += eps * (kxx + (1.0 + lam) * kyy);
        }
      }
  }

  void apply(const std::vector<double>& x, std::vector<double>& y) const {
    y.assign(2 * N, 0.0);
    double u1[4], u2[4];
    int ids[4];
    for (int ci = 0; ci < g->n1; ++ci)
      for (int cj = 0; cj < g->n2; ++cj) {
        double hx = g->h1, hy = g->x2[cj + 1] - g->x2[cj];
        for (int a = 0; a < 4; ++a) {
          int k = id(ci + (a & 1), cj + (a >> 1));
          ids[a] = k;
          u1[a] = k < 0 ? 0.0 : x[k];
          u2[a] = k < 0 ? 0.0 : x[N + k];
        }
        for (int a = 0; a < 4; ++a) {
          int k = ids[a];
          if (k < 0) continue;
          int ax = a & 1, ay = a >> 1;
          double r1 = 0.0, r2 = 0.0;
          for (int b = 0; b < 4; ++b) {
            int bx = b & 1, by = b >> 1;
            double kxx = (hy / hx) * Kc[ax][bx] * Mc[ay][by];
            double kyy = (hx / hy) * Mc[ax][bx] * Kc[ay][by];
            double dab = Cc[ax][bx] * Cc[by][ay];  // (d_x1 phi_a, d_x2 phi_b)
            double dba = Cc[bx][ax] * Cc[ay][by];  // (d_x1 phi_b, d_x2 phi_a)
            r1 += eps * ((1.0 + lam) * kxx + kyy) * u1[b] +
                  eps * lam * dab * u2[b];
            r2 += eps * (kxx + (1.0 + lam) * kyy) * u2[b] +
                  eps * lam * dba * u1[b];
          }
          y[k] += r1;
          y[N + k] += r2;
        }
      }
  }

  std::vector<double> load(const Field& f1, const Field& f2) const {
    std::vector<double> b(2 * N, 0.0);
    for (int ci = 0; ci < g->n1; ++ci)
      for (int cj = 0; cj < g->n2; ++cj) {
        double hx = g->h1, hy = g->x2[cj + 1] - g->x2[cj];
        for (int a = 0; a < 4; ++a) {
          int k = id(ci + (a & 1), cj + (a >> 1));
          if (k < 0) continue;
          int ax = a & 1, ay = a >> 1;
          for (int bb = 0; bb < 4; ++bb) {
            int bx = bb & 1, by = bb >> 1;
            double m = hx * hy * Mc[ax][bx] * Mc[ay][by];
            b[k] += m * f1(ci + bx, cj + by);
            b[N + k] += m * f2(ci + bx, cj + by);
          }
        }
      }
    return b;
  }
};

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

}  // namespace detail

inline LameSolution solve_lame(const Grid& g, double eps, double lambda,
                               const Field& f1, const Field& f2,
                               const LameSolution* warm = nullptr,
                               const LameOptions& opt = {}) {
  check_shape(f1, g, "solve_lame f1");
  check_shape(f2, g, "solve_lame f2");
  if (eps <= 0.0) throw ConfigError("solve_lame: eps > 0");
  if (lambda <= -1.0) throw ConfigError("solve_lame: lambda > -1");
  detail::LameOperator op(g, eps, lambda);
  int N = op.N;
  std::vector<double> b = op.load(f1, f2);
  LameSolution sol;
  sol.u = Field(g);
  sol.v = Field(g);
  double bnorm = std::sqrt(detail::dot(b, b));
  std::vector<double> x(2 * N, 0.0);
  if (bnorm == 0.0) return sol;  // zero load: zero displacement, exactly
  if (warm != nullptr && warm->u.same_shape(f1)) {
    for (int i = 1; i <= g.n1 - 1; ++i)
      for (int j = 1; j <= g.n2 - 1; ++j) {
        x[op.id(i, j)] = warm->u(i, j);
        x[N + op.id(i, j)] = warm->v(i, j);
      }
  }
  std::vector<double> r(2 * N), z(2 * N), p(2 * N), Ap(2 * N);
  op.apply(x, Ap);
  for (int k = 0; k < 2 * N; ++k) r[k] = b[k] - Ap[k];
  for (int k = 0; k < 2 * N; ++k) z[k] = r[k] / op.diag[k];
  p = z;
  double rz = detail::dot(r, z);
  double rnorm = std::sqrt(detail::dot(r, r));
  int it = 0;
  while (rnorm > opt.rtol * bnorm && it < opt.itmax) {
    op.apply(p, Ap);
    double pAp = detail::dot(p, Ap);
    if (!(pAp > 0.0))
      throw SolverDiverged("elastic block lost positivity (pAp = " +
                           std::to_string(pAp) + ")");
    double alpha = rz / pAp;
    for (int k = 0; k < 2 * N; ++k) x[k] += alpha * p[k];
    for (int k = 0; k < 2 * N; ++k) r[k] -= alpha * Ap[k];
    rnorm = std::sqrt(detail::dot(r, r));
    if (!std::isfinite(rnorm))
      throw SolverDiverged("elastic block residual is not finite");
    for (int k = 0; k < 2 * N; ++k) z[k] = r[k] / op.diag[k];
    double rz2 = detail::dot(r, z);
    double beta = rz2 / rz;
    rz = rz2;
    for (int k = 0; k < 2 * N; ++k) p[k] = z[k] + beta * p[k];
    ++it;
  }
  if (rnorm > opt.rtol * bnorm)
    throw SolverDiverged("elastic block: no convergence in " +
                         std::to_string(opt.itmax) + " iterations (rel " +
                         std::to_string(rnorm / bnorm) + ")");
  sol.iters = it;
  sol.rel_residual = rnorm / bnorm;
  for (int i = 1; i <= g.n1 - 1; ++i)
    for (int j = 1; j <= g.n2 - 1; ++j) {
      sol.u(i, j) = x[op.id(i, j)];
      sol.v(i, j) = x[N + op.id(i, j)];
    }
  op.apply(x, Ap);
  double axx = detail::dot(x, Ap), lx = detail::dot(x, b);
  sol.energy_gap = std::abs(axx - lx) / std::max(std::abs(axx), 1e-300);
  return sol;
}

}  // namespace ssflow
