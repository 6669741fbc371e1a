#pragma once
// Brute-force reference for the scan metrics. Deliberately naive: dense
// per-instance membership vectors, exhaustive centroid search and set
// intersection by std::set_intersection. Shares no code with the library.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "teethseg/annotation.hpp"
#include "teethseg/mesh.hpp"

namespace oracle {

struct BruteTooth {
  int id = 0;
  int label = 0;
  std::vector<int> members;  // sorted vertex ids
  teethseg::Vec3 centroid = teethseg::Vec3::Zero();
  double size = 0.0;
};

inline std::vector<BruteTooth> brute_teeth(const teethseg::TriMesh& mesh, const std::vector<int>& labels,
                                           const std::vector<int>& instances) {
  std::set<int> ids(instances.begin(), instances.end());
  ids.erase(0);
  std::vector<BruteTooth> out;
  for (int id : ids) {
    BruteTooth t;
    t.id = id;
    std::map<int, int> counts;
    for (int v = 0; v < static_cast<int>(instances.size()); ++v) {
      if (instances[v] != id) continue;
      t.members.push_back(v);
      if (labels[v] != 0) counts[labels[v]] += 1;
    }
    int best = 0;
    for (const auto& [label, count] : counts) {
      if (count > best) {
        best = count;
        t.label = label;
      }
    }
    if (t.label == 0) continue;  // gingiva-only instances are not scored
    teethseg::Vec3 sum = teethseg::Vec3::Zero();
    for (int v : t.members) sum += mesh.vertices[v];
    t.centroid = sum / static_cast<double>(t.members.size());
    double far = 0.0;
    for (int v : t.members) far = std::max(far, (mesh.vertices[v] - t.centroid).norm());
    t.size = 2.0 * far;
    out.push_back(std::move(t));
  }
  return out;
}

struct BruteRecord {
  double distance = 0.0;
  double f1 = 0.0;
  bool identified = false;
};

// Per GT tooth, in ascending GT instance id.
inline std::vector<BruteRecord> brute_scan(const teethseg::TriMesh& mesh, const teethseg::ScanAnnotation& gt,
                                           const std::optional<teethseg::ScanAnnotation>& pred,
                                           const std::map<int, teethseg::Vec3>& centroid_overrides = {}) {
  auto gt_teeth = brute_teeth(mesh, gt.labels, gt.instances);
  std::vector<BruteRecord> records(gt_teeth.size());
  if (!pred) {
    for (auto& r : records) r.distance = 5.0;
    return records;
  }
  auto pred_teeth = brute_teeth(mesh, pred->labels, pred->instances);
  for (auto& p : pred_teeth) {
    auto it = centroid_overrides.find(p.id);
    if (it != centroid_overrides.end()) p.centroid = it->second;
  }
  for (std::size_t g = 0; g < gt_teeth.size(); ++g) {
    const auto& t = gt_teeth[g];
    auto& r = records[g];
    if (pred_teeth.empty()) {
      r.distance = 5.0;
    } else {
      // Exhaustive: collect all distances, take the smallest, first on ties.
      std::vector<double> d;
      for (const auto& p : pred_teeth) d.push_back((t.centroid - p.centroid).norm());
      auto at = std::min_element(d.begin(), d.end()) - d.begin();
      r.distance = d[at] / t.size;
      r.identified = d[at] < t.size / 2.0 && pred_teeth[at].label == t.label;
    }
    std::size_t best = 0;
    const BruteTooth* match = nullptr;
    for (const auto& p : pred_teeth) {
      std::vector<int> common;
      std::set_intersection(t.members.begin(), t.members.end(), p.members.begin(), p.members.end(),
                            std::back_inserter(common));
      if (common.size() > best) {
        best = common.size();
        match = &p;
      }
    }
    if (match) {
      double precision = static_cast<double>(best) / static_cast<double>(match->members.size());
      double recall = static_cast<double>(best) / static_cast<double>(t.members.size());
      r.f1 = 2.0 * precision * recall / (precision + recall);
    }
  }
  return records;
}

struct BrutePooled {
  double tla = 0.0;
  double tsa = 0.0;
  double tir = 0.0;
};

inline BrutePooled brute_pool(const std::vector<std::vector<BruteRecord>>& scans) {
  double d = 0.0, f = 0.0, hit = 0.0, n = 0.0;
  for (const auto& scan : scans) {
    for (const auto& r : scan) {
      d += r.distance;
      f += r.f1;
      hit += r.identified ? 1.0 : 0.0;
      n += 1.0;
    }
  }
  return {d / n, f / n, hit / n};
}

}  // namespace oracle
