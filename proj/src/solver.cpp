// Copyright the fpbem contributors.
// SPDX-License-Identifier: Apache-2.0

#include "fpbem/solver.hpp"

#include <cmath>
#include <stdexcept>

namespace fpbem::solver {

namespace {

VecXc checked_apply(const ApplyFn& apply, const VecXc& v) {
  VecXc w = apply(v);
  if (!w.allFinite()) throw std::runtime_error("gmres: operator returned a non-finite value");
  return w;
}

}  // namespace

SolveReport gmres(const ApplyFn& apply, const VecXc& b, const GmresOptions& opts) {
  const Eigen::Index n = b.size();
  SolveReport report;
  report.solution = VecXc::Zero(n);

  auto apply_eff = [&](const VecXc& v) {
    VecXc w = checked_apply(apply, v);
    return opts.preconditioner ? checked_apply(opts.preconditioner, w) : w;
  };
  VecXc b_eff = opts.preconditioner ? checked_apply(opts.preconditioner, b) : b;

  double bnorm = b_eff.norm();
  if (bnorm == 0.0) {
    report.converged = true;
    return report;
  }

  const int m = std::max(1, opts.restart);
  MatXc basis(n, m + 1);
  MatXc hess = MatXc::Zero(m + 1, m);
  VecXc g(m + 1);
  std::vector<double> giv_c(m);
  std::vector<Complex> giv_s(m);

  VecXc x = VecXc::Zero(n);
  VecXc r = b_eff;
  double rnorm = bnorm;

  while (report.iterations < opts.max_iter) {
    basis.col(0) = r / rnorm;
    g.setZero();
    g(0) = rnorm;

    int j = 0;
    for (; j < m && report.iterations < opts.max_iter; ++j) {
      VecXc w = apply_eff(basis.col(j));
      double pre_norm = w.norm();
      for (int i = 0; i <= j; ++i) {
        Complex hij = basis.col(i).dot(w);  // conjugated inner product
        hess(i, j) = hij;
        w -= hij * basis.col(i);
      }
      if (w.norm() < 0.5 * pre_norm) {
        for (int i = 0; i <= j; ++i) {
          Complex corr = basis.col(i).dot(w);
          hess(i, j) += corr;
          w -= corr * basis.col(i);
        }
      }
      double hlast = w.norm();
      hess(j + 1, j) = hlast;
      if (hlast > 0.0) basis.col(j + 1) = w / hlast;

      // previously accumulated rotations, then a new one annihilating h(j+1,j)
      for (int i = 0; i < j; ++i) {
        Complex t = giv_c[i] * hess(i, j) + giv_s[i] * hess(i + 1, j);
        hess(i + 1, j) = -std::conj(giv_s[i]) * hess(i, j) + giv_c[i] * hess(i + 1, j);
        hess(i, j) = t;
      }
      Complex a = hess(j, j);
      double bb = std::abs(hess(j + 1, j));
      double denom = std::hypot(std::abs(a), bb);
      if (denom == 0.0) {
        giv_c[j] = 1.0;
        giv_s[j] = Complex{0.0, 0.0};
      } else if (std::abs(a) == 0.0) {
        giv_c[j] = 0.0;
        giv_s[j] = Complex{1.0, 0.0};
      } else {
        giv_c[j] = std::abs(a) / denom;
        giv_s[j] = (a / std::abs(a)) * std::conj(hess(j + 1, j)) / denom;
      }
      hess(j, j) = giv_c[j] * a + giv_s[j] * hess(j + 1, j);
      hess(j + 1, j) = Complex{0.0, 0.0};
      Complex gj = g(j);
      g(j) = giv_c[j] * gj;
      g(j + 1) = -std::conj(giv_s[j]) * gj;

      ++report.iterations;
      double est = std::abs(g(j + 1)) / bnorm;
      report.residual_history.push_back(est);
      if (est <= opts.tol || hlast == 0.0) {
        ++j;
        break;
      }
    }

    // assemble the cycle's minimizer
    VecXc y = hess.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(g.head(j));
    x += basis.leftCols(j) * y;
    r = b_eff - apply_eff(x);
    rnorm = r.norm();
    if (rnorm / bnorm <= opts.tol) {
      report.converged = true;
      break;
    }
  }

  report.solution = x;
  if (!report.residual_history.empty())
    report.converged = report.converged || rnorm / bnorm <= opts.tol;
  return report;
}

}  // namespace fpbem::solver
