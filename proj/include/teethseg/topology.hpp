#pragma once

#include <array>
#include <utility>
#include <vector>

#include "teethseg/mesh.hpp"

namespace teethseg {

/// Undirected edge with `a < b`.
struct Edge {
  Index a = 0;
  Index b = 0;
  bool operator==(const Edge&) const = default;
  auto operator<=>(const Edge&) const = default;
};

/// Edge/face incidence for a triangle mesh. Edges are sorted lexicographically,
/// which fixes the indexing of per-edge fields (e.g. random-walker features).
class MeshTopology {
 public:
  explicit MeshTopology(const TriMesh& mesh);

  const std::vector<Edge>& edges() const { return edges_; }
  /// Faces incident to edge e (1 for boundary, 2 for manifold interior, more
  /// for non-manifold edges).
  const std::vector<Index>& edge_faces(std::size_t e) const { return edge_faces_[e]; }
  /// Indices into edges() of the three edges of face f, in the order
  /// (v0,v1), (v1,v2), (v2,v0).
  const std::array<Index, 3>& face_edges(std::size_t f) const { return face_edges_[f]; }
  /// Faces sharing an edge with f, ascending, without duplicates.
  const std::vector<Index>& face_neighbors(std::size_t f) const { return face_neighbors_[f]; }
  /// Vertices sharing an edge with v, ascending.
  const std::vector<Index>& vertex_neighbors(std::size_t v) const { return vertex_neighbors_[v]; }

  Index find_edge(Index u, Index v) const;  // -1 when absent
  bool is_boundary_edge(std::size_t e) const { return edge_faces_[e].size() == 1; }
  bool is_manifold() const;
  std::vector<char> boundary_vertices() const;

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<Index>> edge_faces_;
  std::vector<std::array<Index, 3>> face_edges_;
  std::vector<std::vector<Index>> face_neighbors_;
  std::vector<std::vector<Index>> vertex_neighbors_;
};

}  // namespace teethseg
