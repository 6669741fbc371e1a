#include "teethseg/linalg.hpp"

namespace teethseg {

CgResult solve_cg(const SparseMatrix& a, const Eigen::VectorXd& b, const CgOptions& options) {
  const Eigen::Index n = b.size();
  CgResult result;
  result.x = Eigen::VectorXd::Zero(n);
  if (n == 0) {
    result.converged = true;
    return result;
  }
  const std::size_t max_iter = options.max_iterations ? options.max_iterations : 10 * static_cast<std::size_t>(n);

  Eigen::VectorXd inv_diag(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double d = a.coeff(i, i);
    inv_diag[i] = d > 0.0 ? 1.0 / d : 1.0;
  }

  Eigen::VectorXd r = b;
  result.residual_inf = r.lpNorm<Eigen::Infinity>();
  if (result.residual_inf <= options.tolerance) {
    result.converged = true;
    return result;
  }
  Eigen::VectorXd z = inv_diag.cwiseProduct(r);
  Eigen::VectorXd p = z;
  Eigen::VectorXd ap(n);
  double rz = r.dot(z);

  for (std::size_t it = 1; it <= max_iter; ++it) {
    ap.noalias() = a * p;
    double pap = p.dot(ap);
    if (!(pap > 0.0)) break;  // not positive definite along p
    double alpha = rz / pap;
    result.x.noalias() += alpha * p;
    r.noalias() -= alpha * ap;
    result.iterations = it;

    // Recompute the true residual periodically to avoid drift in the
    // recursively updated one.
    if (it % 50 == 0) r = b - a * result.x;
    result.residual_inf = r.lpNorm<Eigen::Infinity>();
    if (result.residual_inf <= options.tolerance) {
      Eigen::VectorXd true_r = b - a * result.x;
      result.residual_inf = true_r.lpNorm<Eigen::Infinity>();
      if (result.residual_inf <= options.tolerance) {
        result.converged = true;
        return result;
      }
      r = true_r;
    }
    z = inv_diag.cwiseProduct(r);
    double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  result.residual_inf = (b - a * result.x).lpNorm<Eigen::Infinity>();
  result.converged = result.residual_inf <= options.tolerance;
  return result;
}

}  // namespace teethseg
