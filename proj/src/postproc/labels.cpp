#include "teethseg/postproc/labels.hpp"

#include <algorithm>
#include <climits>
#include <map>
#include <string>

#include "teethseg/error.hpp"
#include "teethseg/spatial_index.hpp"
#include "teethseg/topology.hpp"

namespace teethseg::postproc {

namespace {

void check_field(const TriMesh& mesh, const LabeledFaceField& field) {
  if (field.size() != mesh.faces.size()) {
    throw Error(ErrorCode::length_mismatch, "label field has " + std::to_string(field.size()) +
                                                " entries for " + std::to_string(mesh.faces.size()) + " faces");
  }
}

Vec3 face_centroid(const TriMesh& mesh, const Face& f) {
  return (mesh.vertices[f[0]] + mesh.vertices[f[1]] + mesh.vertices[f[2]]) / 3.0;
}

}  // namespace

LabeledFaceField majority_vote_fusion(const std::vector<std::vector<FaceHit>>& face_hits) {
  LabeledFaceField out(face_hits.size(), kUnassigned);
  std::map<int, double> totals;
  for (std::size_t f = 0; f < face_hits.size(); ++f) {
    if (face_hits[f].empty()) continue;
    totals.clear();
    for (const auto& hit : face_hits[f]) {
      if (!(hit.weight >= 0.0)) throw Error(ErrorCode::invalid_argument, "vote weights must be >= 0");
      totals[hit.label] += hit.weight;
    }
    double best = -1.0;
    for (const auto& [label, weight] : totals) {  // ascending labels
      if (weight > best) {
        best = weight;
        out[f] = label;
      }
    }
  }
  return out;
}

LabeledFaceField island_removal(const TriMesh& mesh, const LabeledFaceField& field, std::size_t min_island_faces) {
  check_field(mesh, field);
  const std::size_t nf = field.size();
  if (std::none_of(field.begin(), field.end(), [](int l) { return l != kUnassigned; })) {
    throw Error(ErrorCode::no_anchor, "label field has no assigned face");
  }
  MeshTopology topo(mesh);
  LabeledFaceField out = field;

  if (min_island_faces > 0) {
    std::vector<char> seen(nf, 0);
    LabeledFaceField pruned = out;
    std::vector<Index> component;
    for (std::size_t s = 0; s < nf; ++s) {
      if (seen[s] || out[s] == kUnassigned) continue;
      component.assign(1, static_cast<Index>(s));
      seen[s] = 1;
      for (std::size_t head = 0; head < component.size(); ++head) {
        for (Index g : topo.face_neighbors(component[head])) {
          if (!seen[g] && out[g] == out[s]) {
            seen[g] = 1;
            component.push_back(g);
          }
        }
      }
      if (component.size() < min_island_faces) {
        for (Index f : component) pruned[f] = kUnassigned;
      }
    }
    if (std::any_of(pruned.begin(), pruned.end(), [](int l) { return l != kUnassigned; })) out = std::move(pruned);
  }

  std::vector<Index> frontier;
  for (std::size_t f = 0; f < nf; ++f) {
    if (out[f] != kUnassigned) frontier.push_back(static_cast<Index>(f));
  }
  std::vector<Index> next;
  std::map<Index, int> candidates;
  while (!frontier.empty()) {
    candidates.clear();
    for (Index f : frontier) {
      for (Index g : topo.face_neighbors(f)) {
        if (out[g] != kUnassigned) continue;
        auto [it, inserted] = candidates.try_emplace(g, out[f]);
        if (!inserted) it->second = std::min(it->second, out[f]);
      }
    }
    next.clear();
    for (const auto& [g, label] : candidates) {
      out[g] = label;
      next.push_back(g);
    }
    frontier.swap(next);
  }

  // Parts of the mesh with no labelled face at all.
  std::vector<Index> orphans;
  for (std::size_t f = 0; f < nf; ++f) {
    if (out[f] == kUnassigned) orphans.push_back(static_cast<Index>(f));
  }
  if (!orphans.empty()) {
    Points anchor_points;
    std::vector<int> anchor_labels;
    for (std::size_t f = 0; f < nf; ++f) {
      if (out[f] != kUnassigned) {
        anchor_points.push_back(face_centroid(mesh, mesh.faces[f]));
        anchor_labels.push_back(out[f]);
      }
    }
    SpatialIndex index(anchor_points);
    for (Index f : orphans) {
      Vec3 c = face_centroid(mesh, mesh.faces[f]);
      auto nn = index.nearest(c, 1);
      int label = INT_MAX;
      for (const auto& hit : index.radius(c, nn.front().distance)) label = std::min(label, anchor_labels[hit.index]);
      out[f] = label;
    }
  }
  return out;
}

LabeledFaceField label_closing(const TriMesh& mesh, const LabeledFaceField& field, int iterations) {
  check_field(mesh, field);
  if (iterations < 0) throw Error(ErrorCode::invalid_argument, "closing iterations must be >= 0");
  LabeledFaceField out = field;
  if (iterations == 0) return out;
  MeshTopology topo(mesh);
  const std::size_t nf = field.size();

  std::vector<int> labels;
  for (int l : field) {
    if (l > 0) labels.push_back(l);
  }
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

  std::vector<char> member(nf);
  std::vector<char> grown(nf);
  std::vector<Index> changed;
  for (int label : labels) {
    for (std::size_t f = 0; f < nf; ++f) member[f] = out[f] == label;
    std::fill(grown.begin(), grown.end(), 0);

    for (int step = 0; step < iterations; ++step) {
      changed.clear();
      for (std::size_t f = 0; f < nf; ++f) {
        if (member[f] || out[f] != 0) continue;
        for (Index g : topo.face_neighbors(f)) {
          if (member[g]) {
            changed.push_back(static_cast<Index>(f));
            break;
          }
        }
      }
      for (Index f : changed) member[f] = grown[f] = 1;
    }

    // A grown face survives an erosion step if every neighbour is inside the
    // set or belongs to another tooth.
    for (int step = 0; step < iterations; ++step) {
      changed.clear();
      for (std::size_t f = 0; f < nf; ++f) {
        if (!grown[f]) continue;
        for (Index g : topo.face_neighbors(f)) {
          bool solid = member[g] || (out[g] > 0 && out[g] != label);
          if (!solid) {
            changed.push_back(static_cast<Index>(f));
            break;
          }
        }
      }
      for (Index f : changed) member[f] = grown[f] = 0;
    }
    for (std::size_t f = 0; f < nf; ++f) {
      if (grown[f]) out[f] = label;
    }
  }
  return out;
}

}  // namespace teethseg::postproc
