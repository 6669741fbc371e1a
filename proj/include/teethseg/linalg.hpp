#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace teethseg {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct CgOptions {
  double tolerance = 1e-10;        // on ||b - A x||_inf
  std::size_t max_iterations = 0;  // 0 means 10 * system size
};

struct CgResult {
  Eigen::VectorXd x;
  std::size_t iterations = 0;
  double residual_inf = 0.0;
  bool converged = false;
};

/// Jacobi-preconditioned conjugate gradient for symmetric positive-definite
/// systems, started from the zero vector. Deterministic; single-threaded.
CgResult solve_cg(const SparseMatrix& a, const Eigen::VectorXd& b, const CgOptions& options = {});

}  // namespace teethseg
