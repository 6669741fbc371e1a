#include "teethseg/instances.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "teethseg/error.hpp"

namespace teethseg {

double tooth_size(const TriMesh& mesh, const std::vector<Index>& vertex_ids, const Vec3& centroid,
                  SizeDefinition size_definition) {
  if (size_definition == SizeDefinition::bounding_box_diagonal) {
    Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 hi = -lo;
    for (Index v : vertex_ids) {
      lo = lo.cwiseMin(mesh.vertices[v]);
      hi = hi.cwiseMax(mesh.vertices[v]);
    }
    return (hi - lo).norm();
  }
  double r2 = 0.0;
  for (Index v : vertex_ids) r2 = std::max(r2, (mesh.vertices[v] - centroid).squaredNorm());
  return 2.0 * std::sqrt(r2);
}

InstanceExtraction extract_instances(const TriMesh& mesh, const ScanAnnotation& annotation,
                                     SizeDefinition size_definition) {
  const std::size_t n = mesh.vertices.size();
  if (annotation.labels.size() != n || annotation.instances.size() != n) {
    throw Error(ErrorCode::length_mismatch, "annotation length does not match mesh vertex count");
  }

  std::map<int, std::vector<Index>> members;
  for (std::size_t i = 0; i < n; ++i) {
    if (annotation.instances[i] != 0) members[annotation.instances[i]].push_back(static_cast<Index>(i));
  }

  InstanceExtraction out;
  out.teeth.reserve(members.size());
  for (auto& [id, verts] : members) {
    ToothInstance tooth;
    tooth.instance_id = id;
    tooth.vertex_ids = std::move(verts);

    std::map<int, std::size_t> votes;  // ordered: ties resolve to the smaller code
    std::set<int> distinct;
    for (Index v : tooth.vertex_ids) {
      int l = annotation.labels[v];
      distinct.insert(l);
      if (l != 0) ++votes[l];
    }
    std::size_t best = 0;
    for (const auto& [label, count] : votes) {
      if (count > best) {
        best = count;
        tooth.label = label;
      }
    }
    if (votes.empty()) {
      out.diagnostics.add(Severity::warning, "gingiva-instance",
                          "instance " + std::to_string(id) + " has only gingiva-labelled vertices",
                          id);
    } else if (distinct.size() > 1) {
      out.diagnostics.add(Severity::warning, "non-uniform-instance",
                          "instance " + std::to_string(id) + " spans " + std::to_string(distinct.size()) +
                              " labels; using " + std::to_string(tooth.label),
                          id);
    }

    Vec3 sum = Vec3::Zero();
    for (Index v : tooth.vertex_ids) sum += mesh.vertices[v];
    tooth.centroid = sum / static_cast<double>(tooth.vertex_ids.size());
    tooth.size = tooth_size(mesh, tooth.vertex_ids, tooth.centroid, size_definition);
    out.teeth.push_back(std::move(tooth));
  }
  out.diagnostics.sort();
  return out;
}

Diagnostics validate_scan(const TriMesh& mesh, const ScanAnnotation& annotation) {
  Diagnostics diags;
  const std::size_t n = mesh.vertices.size();
  const auto& labels = annotation.labels;
  const auto& instances = annotation.instances;

  if (labels.size() != n || instances.size() != n) {
    diags.add(Severity::error, "length-mismatch",
              "labels/instances have " + std::to_string(labels.size()) + "/" +
                  std::to_string(instances.size()) + " entries for " + std::to_string(n) + " vertices");
  }
  const std::size_t m = std::min({n, labels.size(), instances.size()});

  std::map<int, std::size_t> invalid;
  std::map<int, std::size_t> wrong_jaw;
  std::optional<std::size_t> gingiva_mismatch;
  std::size_t gingiva_mismatch_count = 0;
  std::map<int, std::set<int>> instance_labels;
  std::map<int, std::size_t> instance_first;
  for (std::size_t i = 0; i < m; ++i) {
    int l = labels[i];
    if (l != 0 && !fdi::is_valid(l)) {
      invalid.try_emplace(l, i);
    } else if (l != 0 && !fdi::matches_jaw(l, annotation.jaw)) {
      wrong_jaw.try_emplace(l, i);
    }
    if ((l == 0) != (instances[i] == 0)) {
      if (!gingiva_mismatch) gingiva_mismatch = i;
      ++gingiva_mismatch_count;
    }
    if (instances[i] < 0) {
      diags.add(Severity::error, "negative-instance", "negative instance id", static_cast<std::int64_t>(i));
    } else if (instances[i] != 0) {
      instance_labels[instances[i]].insert(l);
      instance_first.try_emplace(instances[i], i);
    }
  }
  for (const auto& [label, first] : invalid) {
    diags.add(Severity::error, "invalid-fdi", "label " + std::to_string(label) + " is not an FDI tooth code",
              static_cast<std::int64_t>(first));
  }
  for (const auto& [label, first] : wrong_jaw) {
    diags.add(Severity::warning, "quadrant-mismatch",
              "label " + std::to_string(label) + " does not belong to the " +
                  std::string(to_string(annotation.jaw)) + " jaw",
              static_cast<std::int64_t>(first));
  }
  if (gingiva_mismatch) {
    diags.add(Severity::warning, "gingiva-mismatch",
              std::to_string(gingiva_mismatch_count) + " vertices disagree on gingiva between label and instance",
              static_cast<std::int64_t>(*gingiva_mismatch));
  }
  for (const auto& [id, set] : instance_labels) {
    if (set.size() > 1) {
      diags.add(Severity::warning, "non-uniform-instance",
                "instance " + std::to_string(id) + " carries " + std::to_string(set.size()) + " distinct labels",
                static_cast<std::int64_t>(instance_first[id]));
    }
  }

  std::vector<char> referenced(n, 0);
  bool bad_face = false;
  for (const auto& f : mesh.faces) {
    for (Index v : f) {
      if (v < 0 || static_cast<std::size_t>(v) >= n) {
        bad_face = true;
      } else {
        referenced[v] = 1;
      }
    }
  }
  if (bad_face) diags.add(Severity::error, "face-index", "face references a missing vertex");
  std::size_t unreferenced = 0;
  std::optional<std::size_t> first_unreferenced;
  for (std::size_t i = 0; i < n; ++i) {
    if (!referenced[i]) {
      if (!first_unreferenced) first_unreferenced = i;
      ++unreferenced;
    }
  }
  if (unreferenced) {
    diags.add(Severity::warning, "unreferenced-vertex",
              std::to_string(unreferenced) + " vertices are not used by any face",
              static_cast<std::int64_t>(*first_unreferenced));
  }
  diags.sort();
  return diags;
}

}  // namespace teethseg
