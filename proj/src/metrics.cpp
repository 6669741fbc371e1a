#include "teethseg/metrics.hpp"

#include <cmath>
#include <string>
#include <unordered_map>

#include "teethseg/error.hpp"

namespace teethseg {

double f1_score(double precision, double recall) {
  double denom = precision + recall;
  if (!(denom > 0.0)) return 0.0;
  return 2.0 * precision * recall / denom;
}

double global_score(double exp_neg_tla, double tsa, double tir) { return (exp_neg_tla + tsa + tir) / 3.0; }

namespace {

std::vector<ToothInstance> scoreable(InstanceExtraction&& extraction, Diagnostics& diags, const char* role) {
  std::vector<ToothInstance> teeth;
  for (auto& t : extraction.teeth) {
    if (t.label == 0) {
      diags.add(Severity::warning, "unscored-instance",
                std::string(role) + " instance " + std::to_string(t.instance_id) +
                    " has no tooth label and is excluded",
                t.instance_id);
      continue;
    }
    teeth.push_back(std::move(t));
  }
  return teeth;
}

}  // namespace

ScanEvalPartial evaluate_scan(const TriMesh& gt_mesh, const ScanAnnotation& gt,
                              const std::optional<ScanAnnotation>& prediction, const EvalOptions& options,
                              const CentroidOverrides* centroid_overrides) {
  ScanEvalPartial partial;
  partial.scan_id = gt.patient_id + "_" + std::string(to_string(gt.jaw));

  auto gt_teeth = scoreable(extract_instances(gt_mesh, gt, options.size_definition), partial.diagnostics, "GT");
  partial.teeth.reserve(gt_teeth.size());
  for (const auto& t : gt_teeth) partial.teeth.push_back({t.instance_id, t.label, 0.0, 0.0, false});

  const std::size_t n = gt_mesh.vertices.size();
  bool missing = !prediction.has_value();
  if (prediction && (prediction->labels.size() != n || prediction->instances.size() != n)) {
    partial.diagnostics.add(Severity::error, "prediction-length",
                            "prediction has " + std::to_string(prediction->labels.size()) + " labels for " +
                                std::to_string(n) + " vertices; scored as missing");
    missing = true;
  }
  if (missing) {
    partial.missing_output = true;
    for (auto& s : partial.teeth) {
      s.normalized_distance = options.missing_penalty;
      s.f1 = 0.0;
      s.identified = false;
    }
    partial.diagnostics.sort();
    return partial;
  }

  auto pred_extraction = extract_instances(gt_mesh, *prediction, options.size_definition);
  auto pred_teeth = scoreable(std::move(pred_extraction), partial.diagnostics, "predicted");
  if (centroid_overrides) {
    for (auto& p : pred_teeth) {
      auto it = centroid_overrides->find(p.instance_id);
      if (it != centroid_overrides->end()) p.centroid = it->second;
    }
  }
  std::unordered_map<int, std::size_t> pred_slot;
  for (std::size_t k = 0; k < pred_teeth.size(); ++k) pred_slot[pred_teeth[k].instance_id] = k;

  // overlap[g][p] as sparse rows
  std::vector<std::unordered_map<std::size_t, std::size_t>> overlap(gt_teeth.size());
  for (std::size_t g = 0; g < gt_teeth.size(); ++g) {
    for (Index v : gt_teeth[g].vertex_ids) {
      auto it = pred_slot.find(prediction->instances[v]);
      if (it != pred_slot.end()) ++overlap[g][it->second];
    }
  }

  for (std::size_t g = 0; g < gt_teeth.size(); ++g) {
    const auto& gt_tooth = gt_teeth[g];
    auto& score = partial.teeth[g];

    if (pred_teeth.empty()) {
      score.normalized_distance = options.missing_penalty;
    } else {
      std::size_t nearest = 0;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < pred_teeth.size(); ++k) {  // ascending instance id
        double d = (gt_tooth.centroid - pred_teeth[k].centroid).norm();
        if (d < best) {
          best = d;
          nearest = k;
        }
      }
      score.normalized_distance = best / gt_tooth.size;
      score.identified = best < gt_tooth.size / 2.0 && pred_teeth[nearest].label == gt_tooth.label;
    }

    std::size_t best_overlap = 0;
    std::size_t matched = 0;
    for (const auto& [k, count] : overlap[g]) {
      if (count > best_overlap || (count == best_overlap && count > 0 && k < matched)) {
        best_overlap = count;
        matched = k;
      }
    }
    if (best_overlap > 0) {
      double precision = static_cast<double>(best_overlap) / static_cast<double>(pred_teeth[matched].vertex_ids.size());
      double recall = static_cast<double>(best_overlap) / static_cast<double>(gt_tooth.vertex_ids.size());
      score.f1 = f1_score(precision, recall);
    }
  }

  // Per predicted tooth: F1 against its best-overlapping GT tooth.
  partial.predicted_f1.assign(pred_teeth.size(), 0.0);
  std::vector<std::size_t> best_count(pred_teeth.size(), 0);
  std::vector<std::size_t> best_gt(pred_teeth.size(), 0);
  for (std::size_t g = 0; g < gt_teeth.size(); ++g) {  // ascending GT id: first max wins
    for (const auto& [k, count] : overlap[g]) {
      if (count > best_count[k]) {
        best_count[k] = count;
        best_gt[k] = g;
      }
    }
  }
  for (std::size_t k = 0; k < pred_teeth.size(); ++k) {
    if (best_count[k] == 0) continue;
    double precision = static_cast<double>(best_count[k]) / static_cast<double>(pred_teeth[k].vertex_ids.size());
    double recall = static_cast<double>(best_count[k]) / static_cast<double>(gt_teeth[best_gt[k]].vertex_ids.size());
    partial.predicted_f1[k] = f1_score(precision, recall);
  }
  partial.diagnostics.sort();
  return partial;
}

EvalReport aggregate(std::vector<ScanEvalPartial> partials, const EvalOptions& options) {
  if (partials.empty()) throw Error(ErrorCode::empty_evaluation, "no scans to aggregate");
  double distance_sum = 0.0;
  double f1_sum = 0.0;
  double predicted_f1_sum = 0.0;
  std::size_t predicted_count = 0;
  std::size_t identified = 0;
  std::size_t total = 0;
  for (const auto& p : partials) {
    for (const auto& t : p.teeth) {
      distance_sum += t.normalized_distance;
      f1_sum += t.f1;
      identified += t.identified ? 1 : 0;
      ++total;
    }
    for (double f : p.predicted_f1) predicted_f1_sum += f;
    predicted_count += p.predicted_f1.size();
  }
  if (total == 0) throw Error(ErrorCode::empty_evaluation, "no ground-truth teeth in the evaluated scans");

  EvalReport report;
  report.pooled_gt_teeth = total;
  report.tla = distance_sum / static_cast<double>(total);
  report.exp_neg_tla = std::exp(-report.tla);
  if (options.tsa_averaging == TsaAveraging::symmetric) {
    report.tsa = (f1_sum + predicted_f1_sum) / static_cast<double>(total + predicted_count);
  } else {
    report.tsa = f1_sum / static_cast<double>(total);
  }
  report.tir = static_cast<double>(identified) / static_cast<double>(total);
  report.score = global_score(report.exp_neg_tla, report.tsa, report.tir);
  report.per_scan = std::move(partials);
  return report;
}

}  // namespace teethseg
