#pragma once

#include <array>
#include <vector>

#include "teethseg/types.hpp"

namespace teethseg::postproc {

/// Majority label among the k nearest labelled points; ties go to the
/// smaller label.
std::vector<int> knn_label_vote(const Points& labeled, const std::vector<int>& labels, const Points& queries, int k);

/// Inverse-distance weighted mean of neighbour logit rows. A query that
/// coincides with a labelled point copies that point's row (the smallest
/// index if several coincide).
std::vector<std::vector<double>> knn_logit_interpolate(const Points& labeled,
                                                       const std::vector<std::vector<double>>& logits,
                                                       const Points& queries, int k);

inline constexpr int kProposalClasses = 7;
inline constexpr double kDefaultMergeIou = 0.35;

struct Proposal {
  std::vector<Index> indices;     // into the source cloud, unique
  std::vector<double> seg_logits;  // one per index
  std::array<double, kProposalClasses> class_logits{};
};

/// Foreground IoU of two proposals (foreground = positive segmentation logit).
double foreground_iou(const Proposal& lhs, const Proposal& rhs);

/// Merges proposals whose foregrounds overlap with IoU >= threshold,
/// transitively and repeatedly until no pair qualifies. Merged proposals hold
/// the union of indices (ascending), summed logits on shared points and
/// summed class logits. Output is ordered by each group's first input
/// proposal.
std::vector<Proposal> merge_proposals(const std::vector<Proposal>& proposals, double iou_threshold = kDefaultMergeIou);

}  // namespace teethseg::postproc
