#include "teethseg/topology.hpp"

#include <algorithm>

namespace teethseg {

MeshTopology::MeshTopology(const TriMesh& mesh) {
  const std::size_t nf = mesh.faces.size();
  struct Half {
    Edge edge;
    Index face;
    int slot;
  };
  std::vector<Half> halves;
  halves.reserve(nf * 3);
  for (std::size_t f = 0; f < nf; ++f) {
    const auto& face = mesh.faces[f];
    for (int k = 0; k < 3; ++k) {
      Index u = face[k];
      Index v = face[(k + 1) % 3];
      halves.push_back({{std::min(u, v), std::max(u, v)}, static_cast<Index>(f), k});
    }
  }
  std::sort(halves.begin(), halves.end(), [](const Half& x, const Half& y) {
    if (x.edge != y.edge) return x.edge < y.edge;
    return x.face < y.face;
  });

  face_edges_.assign(nf, {-1, -1, -1});
  for (std::size_t i = 0; i < halves.size(); ++i) {
    if (edges_.empty() || edges_.back() != halves[i].edge) {
      edges_.push_back(halves[i].edge);
      edge_faces_.emplace_back();
    }
    auto e = static_cast<Index>(edges_.size() - 1);
    auto& incident = edge_faces_.back();
    if (incident.empty() || incident.back() != halves[i].face) incident.push_back(halves[i].face);
    face_edges_[halves[i].face][halves[i].slot] = e;
  }

  face_neighbors_.assign(nf, {});
  for (const auto& incident : edge_faces_) {
    for (Index f : incident) {
      for (Index g : incident) {
        if (f != g) face_neighbors_[f].push_back(g);
      }
    }
  }
  for (auto& list : face_neighbors_) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }

  vertex_neighbors_.assign(mesh.vertices.size(), {});
  for (const auto& e : edges_) {
    if (e.a == e.b) continue;
    vertex_neighbors_[e.a].push_back(e.b);
    vertex_neighbors_[e.b].push_back(e.a);
  }
  for (auto& list : vertex_neighbors_) std::sort(list.begin(), list.end());
}

Index MeshTopology::find_edge(Index u, Index v) const {
  Edge key{std::min(u, v), std::max(u, v)};
  auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
  if (it == edges_.end() || *it != key) return -1;
  return static_cast<Index>(it - edges_.begin());
}

bool MeshTopology::is_manifold() const {
  return std::all_of(edge_faces_.begin(), edge_faces_.end(),
                     [](const std::vector<Index>& f) { return f.size() <= 2; });
}

std::vector<char> MeshTopology::boundary_vertices() const {
  std::vector<char> flags(vertex_neighbors_.size(), 0);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (edge_faces_[e].size() == 1) {
      flags[edges_[e].a] = 1;
      flags[edges_[e].b] = 1;
    }
  }
  return flags;
}

}  // namespace teethseg
