#include "teethseg/postproc/arch.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <tuple>

#include "teethseg/error.hpp"

namespace teethseg::postproc {

double ArchCurve::foot_parameter(double px, double py) const {
  // Stationary points of the squared distance: a cubic in x.
  const double k = c - py;
  const double c3 = 2.0 * a * a;
  const double c2 = 3.0 * a * b;
  const double c1 = b * b + 2.0 * a * k + 1.0;
  const double c0 = b * k - px;
  std::vector<double> candidates;
  if (std::abs(c3) < 1e-15) {
    candidates.push_back(-c0 / c1);  // c1 = b^2 + 1 > 0 when a == 0
  } else {
    Eigen::Matrix3d companion = Eigen::Matrix3d::Zero();
    companion(0, 0) = -c2 / c3;
    companion(0, 1) = -c1 / c3;
    companion(0, 2) = -c0 / c3;
    companion(1, 0) = 1.0;
    companion(2, 1) = 1.0;
    Eigen::EigenSolver<Eigen::Matrix3d> solver(companion, false);
    for (const auto& root : solver.eigenvalues()) {
      if (std::abs(root.imag()) <= 1e-9 * std::max(1.0, std::abs(root.real()))) candidates.push_back(root.real());
    }
    if (candidates.empty()) candidates.push_back(px);
  }
  double best_x = candidates.front();
  double best_d = std::numeric_limits<double>::infinity();
  for (double x : candidates) {
    // One Newton polish step on the cubic.
    double f = ((c3 * x + c2) * x + c1) * x + c0;
    double df = (3.0 * c3 * x + 2.0 * c2) * x + c1;
    if (df != 0.0) x -= f / df;
    double dy = (*this)(x) - py;
    double d = (x - px) * (x - px) + dy * dy;
    if (d < best_d) {
      best_d = d;
      best_x = x;
    }
  }
  return best_x;
}

ArchCurve fit_arch_curve(const Points& centroids) {
  std::set<double> xs;
  for (const auto& p : centroids) xs.insert(p.x());
  if (xs.size() < 3) throw Error(ErrorCode::degenerate_fit, "arch fit needs at least 3 distinct x values");

  const auto n = static_cast<Eigen::Index>(centroids.size());
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double x = centroids[i].x();
    design.row(i) << x * x, x, 1.0;
    y[i] = centroids[i].y();
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < 3) throw Error(ErrorCode::degenerate_fit, "arch fit is rank deficient");
  Eigen::Vector3d coef = qr.solve(y);
  if (!coef.allFinite()) throw Error(ErrorCode::degenerate_fit, "arch fit produced non-finite coefficients");

  ArchCurve curve{coef[0], coef[1], coef[2], 0.0};
  curve.residual = (design * coef - y).squaredNorm();
  return curve;
}

namespace {

struct Alignment {
  int substitutions = std::numeric_limits<int>::max();
  int gaps = std::numeric_limits<int>::max();
  std::vector<int> slots;
};

// Exhaustive search over increasing slot assignments; at most C(16, 8)
// combinations, visited in lexicographic order so the first optimum is the
// lexicographically smallest one.
Alignment align(const std::vector<int>& observed, const std::vector<int>& expected) {
  const int n = static_cast<int>(observed.size());
  const int m = static_cast<int>(expected.size());
  Alignment best;
  std::vector<int> slots(n);
  std::iota(slots.begin(), slots.end(), 0);
  while (true) {
    int subs = 0;
    for (int i = 0; i < n; ++i) subs += observed[i] != expected[slots[i]];
    int gaps = n == 0 ? 0 : slots.back() - slots.front() - (n - 1);
    if (std::tie(subs, gaps) < std::tie(best.substitutions, best.gaps)) best = {subs, gaps, slots};
    int i = n - 1;
    while (i >= 0 && slots[i] == m - n + i) --i;
    if (i < 0) break;
    ++slots[i];
    for (int j = i + 1; j < n; ++j) slots[j] = slots[j - 1] + 1;
  }
  return best;
}

}  // namespace

std::vector<int> arch_label_correct(const std::vector<ArchTooth>& teeth, const ArchCurve& curve, Jaw jaw) {
  if (teeth.size() > 16) {
    throw Error(ErrorCode::too_many_teeth, std::to_string(teeth.size()) + " teeth exceed the 16 arch positions");
  }
  if (teeth.empty()) return {};
  const std::size_t n = teeth.size();

  std::vector<double> param(n);
  for (std::size_t i = 0; i < n; ++i) param[i] = curve.foot_parameter(teeth[i].centroid.x(), teeth[i].centroid.y());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return param[l] < param[r]; });

  std::vector<int> observed(n);
  for (std::size_t k = 0; k < n; ++k) observed[k] = teeth[order[k]].label;

  const std::vector<int> forward = fdi::arch_order(jaw);
  std::vector<int> backward(forward.rbegin(), forward.rend());
  Alignment fwd = align(observed, forward);
  Alignment bwd = align(observed, backward);
  bool use_backward = std::tie(bwd.substitutions, bwd.gaps) < std::tie(fwd.substitutions, fwd.gaps);
  const Alignment& chosen = use_backward ? bwd : fwd;
  const std::vector<int>& expected = use_backward ? backward : forward;

  std::vector<int> out(n);
  for (std::size_t k = 0; k < n; ++k) out[order[k]] = expected[chosen.slots[k]];
  return out;
}

}  // namespace teethseg::postproc
