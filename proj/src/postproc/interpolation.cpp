#include "teethseg/postproc/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "teethseg/error.hpp"
#include "teethseg/spatial_index.hpp"

namespace teethseg::postproc {

namespace {

void check_knn(std::size_t labeled, std::size_t values, int k) {
  if (k < 1) throw Error(ErrorCode::invalid_argument, "k must be >= 1");
  if (labeled == 0) throw Error(ErrorCode::invalid_argument, "labelled point set is empty");
  if (values != labeled) throw Error(ErrorCode::length_mismatch, "one value per labelled point");
}

void check_proposal(const Proposal& p) {
  if (p.seg_logits.size() != p.indices.size()) {
    throw Error(ErrorCode::length_mismatch, "proposal needs one segmentation logit per index");
  }
}

std::vector<Index> foreground(const Proposal& p) {
  std::vector<Index> fg;
  for (std::size_t i = 0; i < p.indices.size(); ++i) {
    if (p.seg_logits[i] > 0.0) fg.push_back(p.indices[i]);
  }
  std::sort(fg.begin(), fg.end());
  return fg;
}

double iou_sorted(const std::vector<Index>& a, const std::vector<Index>& b) {
  std::size_t inter = 0;
  for (std::size_t i = 0, j = 0; i < a.size() && j < b.size();) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++inter;
      ++i;
      ++j;
    }
  }
  std::size_t uni = a.size() + b.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

Proposal combine(const std::vector<const Proposal*>& group) {
  std::map<Index, double> logits;
  Proposal out;
  for (const Proposal* p : group) {
    for (std::size_t i = 0; i < p->indices.size(); ++i) logits[p->indices[i]] += p->seg_logits[i];
    for (int c = 0; c < kProposalClasses; ++c) out.class_logits[c] += p->class_logits[c];
  }
  for (const auto& [index, value] : logits) {
    out.indices.push_back(index);
    out.seg_logits.push_back(value);
  }
  return out;
}

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

std::vector<int> knn_label_vote(const Points& labeled, const std::vector<int>& labels, const Points& queries, int k) {
  check_knn(labeled.size(), labels.size(), k);
  SpatialIndex index(labeled);
  std::vector<int> out(queries.size());
  std::map<int, int> votes;
  for (std::size_t q = 0; q < queries.size(); ++q) {
    votes.clear();
    for (const auto& nb : index.nearest(queries[q], static_cast<std::size_t>(k))) ++votes[labels[nb.index]];
    int best = -1;
    for (const auto& [label, count] : votes) {
      if (count > best) {
        best = count;
        out[q] = label;
      }
    }
  }
  return out;
}

std::vector<std::vector<double>> knn_logit_interpolate(const Points& labeled,
                                                       const std::vector<std::vector<double>>& logits,
                                                       const Points& queries, int k) {
  check_knn(labeled.size(), logits.size(), k);
  const std::size_t width = logits.front().size();
  for (const auto& row : logits) {
    if (row.size() != width) throw Error(ErrorCode::length_mismatch, "logit rows differ in width");
  }
  SpatialIndex index(labeled);
  std::vector<std::vector<double>> out(queries.size(), std::vector<double>(width, 0.0));
  for (std::size_t q = 0; q < queries.size(); ++q) {
    auto neighbors = index.nearest(queries[q], static_cast<std::size_t>(k));
    if (neighbors.front().distance == 0.0) {
      out[q] = logits[neighbors.front().index];
      continue;
    }
    double total = 0.0;
    for (const auto& nb : neighbors) {
      double w = 1.0 / nb.distance;
      total += w;
      for (std::size_t c = 0; c < width; ++c) out[q][c] += w * logits[nb.index][c];
    }
    for (double& v : out[q]) v /= total;
  }
  return out;
}

double foreground_iou(const Proposal& lhs, const Proposal& rhs) {
  check_proposal(lhs);
  check_proposal(rhs);
  return iou_sorted(foreground(lhs), foreground(rhs));
}

std::vector<Proposal> merge_proposals(const std::vector<Proposal>& proposals, double iou_threshold) {
  if (!(iou_threshold > 0.0 && iou_threshold <= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "IoU threshold must lie in (0, 1]");
  }
  for (const auto& p : proposals) check_proposal(p);

  std::vector<Proposal> current = proposals;
  while (true) {
    const std::size_t n = current.size();
    std::vector<std::vector<Index>> fg(n);
    for (std::size_t i = 0; i < n; ++i) fg[i] = foreground(current[i]);
    DisjointSets sets(n);
    bool merged = false;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (iou_sorted(fg[i], fg[j]) >= iou_threshold) {
          sets.unite(i, j);
          merged = true;
        }
      }
    }
    if (!merged) return current;

    // Roots are the smallest member, so groups come out in input order.
    std::vector<std::vector<const Proposal*>> groups;
    std::vector<int> slot(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t root = sets.find(i);
      if (slot[root] < 0) {
        slot[root] = static_cast<int>(groups.size());
        groups.emplace_back();
      }
      groups[slot[root]].push_back(&current[i]);
    }
    std::vector<Proposal> next;
    next.reserve(groups.size());
    for (const auto& group : groups) next.push_back(group.size() == 1 ? *group.front() : combine(group));
    current = std::move(next);
  }
}

}  // namespace teethseg::postproc
