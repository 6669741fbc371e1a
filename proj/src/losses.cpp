#include "teethseg/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "teethseg/error.hpp"

namespace teethseg {

namespace {

// Nearest and second-nearest target of p; equal distances go to the smaller index.
std::pair<std::size_t, std::size_t> two_nearest(const Vec3& p, const Points& targets) {
  std::size_t first = 0;
  std::size_t second = 1;
  double d_first = (p - targets[0]).squaredNorm();
  double d_second = (p - targets[1]).squaredNorm();
  if (d_second < d_first) {
    std::swap(first, second);
    std::swap(d_first, d_second);
  }
  for (std::size_t j = 2; j < targets.size(); ++j) {
    double d = (p - targets[j]).squaredNorm();
    if (d < d_first) {
      second = first;
      d_second = d_first;
      first = j;
      d_first = d;
    } else if (d < d_second) {
      second = j;
      d_second = d;
    }
  }
  return {first, second};
}

std::size_t nearest(const Vec3& p, const Points& set) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < set.size(); ++j) {
    double d = (p - set[j]).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = j;
    }
  }
  return best;
}

Vec3 smooth_l1_gradient(const Vec3& x) {
  Vec3 g;
  for (int a = 0; a < 3; ++a) g[a] = std::abs(x[a]) < 1.0 ? x[a] : (x[a] > 0.0 ? 1.0 : -1.0);
  return g;
}

// d/dq of |q - c1| / |q - c2|; zero where the numerator direction is undefined.
Vec3 ratio_gradient(const Vec3& d1, const Vec3& d2) {
  double n1 = d1.norm();
  double n2 = d2.norm();
  if (n1 == 0.0) return Vec3::Zero();
  return d1 / (n1 * n2) - n1 * d2 / (n2 * n2 * n2);
}

void require_targets(const Points& targets) {
  if (targets.size() < 2) {
    throw Error(ErrorCode::invalid_argument, "centroid loss needs at least two targets");
  }
}

}  // namespace

double smooth_l1(const Eigen::Ref<const Eigen::VectorXd>& x) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    double v = std::abs(x[i]);
    sum += v < 1.0 ? 0.5 * v * v : v - 0.5;
  }
  return sum;
}

double chamfer_distance(const Points& a, const Points& b, Points* grad_a) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::invalid_argument, "chamfer distance of an empty set");
  if (grad_a) grad_a->assign(a.size(), Vec3::Zero());
  double forward = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    Vec3 d = a[i] - b[nearest(a[i], b)];
    double n = d.norm();
    forward += n;
    if (grad_a && n > 0.0) (*grad_a)[i] += d / (n * static_cast<double>(a.size()));
  }
  double backward = 0.0;
  for (const auto& q : b) {
    std::size_t i = nearest(q, a);
    Vec3 d = a[i] - q;
    double n = d.norm();
    backward += n;
    if (grad_a && n > 0.0) (*grad_a)[i] += d / (n * static_cast<double>(b.size()));
  }
  return forward / static_cast<double>(a.size()) + backward / static_cast<double>(b.size());
}

LossValue igip_centroid_loss(const Points& predicted, const Points& targets, double lambda, Points* gradient) {
  require_targets(targets);
  if (predicted.empty()) throw Error(ErrorCode::invalid_argument, "centroid loss needs at least one prediction");
  LossValue out;
  const double m = static_cast<double>(predicted.size());
  Points chamfer_grad;
  double chamfer = chamfer_distance(predicted, targets, gradient ? &chamfer_grad : nullptr);
  if (gradient) gradient->assign(predicted.size(), Vec3::Zero());

  double sum = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    auto [j1, j2] = two_nearest(predicted[i], targets);
    Vec3 d1 = predicted[i] - targets[j1];
    Vec3 d2 = predicted[i] - targets[j2];
    sum += smooth_l1(d1);
    double n2 = d2.norm();
    if (n2 == 0.0) {
      out.diagnostics.add(Severity::warning, "zero-separation", "prediction coincides with its second-nearest target",
                          static_cast<std::int64_t>(i));
    } else {
      sum += lambda * d1.norm() / n2;
    }
    if (gradient) {
      Vec3 g = smooth_l1_gradient(d1);
      if (n2 > 0.0) g += lambda * ratio_gradient(d1, d2);
      (*gradient)[i] = g / m + chamfer_grad[i];
    }
  }
  out.value = sum / m + chamfer;
  return out;
}

LossValue champers_centroid_loss(const Points& points, const Points& offsets, const CentroidTargets& targets, int k,
                                 Points* gradient) {
  require_targets(targets.centroids);
  if (targets.radii.size() != targets.centroids.size()) {
    throw Error(ErrorCode::length_mismatch, "one radius per target centroid");
  }
  for (double r : targets.radii) {
    if (!(r > 0.0)) throw Error(ErrorCode::invalid_argument, "target radii must be positive");
  }
  if (offsets.size() != points.size()) throw Error(ErrorCode::length_mismatch, "one offset per point");
  if (k < 1) throw Error(ErrorCode::invalid_argument, "K must be >= 1");

  LossValue out;
  const double inv_k = 1.0 / static_cast<double>(k);
  if (gradient) gradient->assign(points.size(), Vec3::Zero());
  double euclid = 0.0;
  double separation = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto [j1, j2] = two_nearest(points[i], targets.centroids);
    const double r1 = targets.radii[j1];
    const double r2 = targets.radii[j2];
    Vec3 shifted = points[i] + offsets[i];
    Vec3 d1 = shifted - targets.centroids[j1];
    Vec3 d2 = shifted - targets.centroids[j2];
    euclid += d1.squaredNorm() / r1;
    double n2 = d2.norm();
    if (n2 == 0.0) {
      out.diagnostics.add(Severity::warning, "zero-separation", "shifted point coincides with its second-nearest target",
                          static_cast<std::int64_t>(i));
    } else {
      separation += (r2 / r1) * d1.norm() / n2;
    }
    if (gradient) {
      Vec3 g = 2.0 * d1 / r1;
      if (n2 > 0.0) g += (r2 / r1) * ratio_gradient(d1, d2);
      (*gradient)[i] = inv_k * g;
    }
  }
  out.value = inv_k * euclid + inv_k * separation;
  return out;
}

LossValue dice_ce_loss(const std::vector<std::vector<double>>& probabilities,
                       const std::vector<std::vector<double>>& targets, double w0, double w1, DiceVariant variant) {
  if (probabilities.size() != targets.size()) throw Error(ErrorCode::length_mismatch, "one target per sample");
  if (probabilities.empty()) throw Error(ErrorCode::invalid_argument, "empty batch");
  if (!(w0 >= 0.0) || !(w1 >= 0.0)) throw Error(ErrorCode::invalid_argument, "loss weights must be >= 0");

  LossValue out;
  double total = 0.0;
  for (std::size_t s = 0; s < probabilities.size(); ++s) {
    const auto& p = probabilities[s];
    const auto& y = targets[s];
    if (p.size() != y.size() || p.empty()) {
      throw Error(ErrorCode::length_mismatch, "sample " + std::to_string(s) + " has mismatched class counts");
    }
    double py = 0.0;
    double pp = 0.0;
    double ppyy = 0.0;
    double yy = 0.0;
    double y_sum = 0.0;
    double ce = 0.0;
    bool infinite = false;
    for (std::size_t c = 0; c < p.size(); ++c) {
      if (!(p[c] >= 0.0 && p[c] <= 1.0)) throw Error(ErrorCode::invalid_argument, "probabilities must lie in [0, 1]");
      if (y[c] != 0.0 && y[c] != 1.0) throw Error(ErrorCode::invalid_argument, "targets must be one-hot");
      py += p[c] * y[c];
      pp += p[c] * p[c];
      ppyy += p[c] * p[c] * y[c] * y[c];
      yy += y[c] * y[c];
      y_sum += y[c];
      if (y[c] == 1.0) {
        if (p[c] == 0.0) {
          infinite = true;
        } else {
          ce -= std::log(p[c]);
        }
      }
    }
    if (y_sum != 1.0) throw Error(ErrorCode::invalid_argument, "targets must be one-hot");

    double dice = 0.0;
    if (variant == DiceVariant::printed) {
      dice = pp + ppyy > 0.0 ? 2.0 * py / (pp + ppyy) : 0.0;
    } else {
      dice = 1.0 - 2.0 * py / (pp + yy);
    }
    if (infinite) {
      out.diagnostics.add(Severity::warning, "infinite-cross-entropy", "zero probability on the true class",
                          static_cast<std::int64_t>(s));
      if (w1 > 0.0) {
        total = std::numeric_limits<double>::infinity();
        continue;
      }
    }
    total += w0 * dice + (w1 > 0.0 ? w1 * ce : 0.0);
  }
  out.value = total / static_cast<double>(probabilities.size());
  return out;
}

double patch_distance_weight(const Vec3& sample, const Vec3& centroid) {
  return std::exp(-2.0 * (sample - centroid).norm());
}

std::vector<Index> periphery_filter(const Points& points, const std::vector<double>& predicted_distances,
                                    double threshold) {
  if (points.size() != predicted_distances.size()) {
    throw Error(ErrorCode::length_mismatch, "one predicted distance per point");
  }
  std::vector<Index> kept;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (predicted_distances[i] <= threshold) kept.push_back(static_cast<Index>(i));
  }
  return kept;
}

}  // namespace teethseg
