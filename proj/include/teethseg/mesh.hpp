#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "teethseg/types.hpp"

namespace teethseg {

/// Triangle mesh in scanner units (mm). `normals` is either empty or holds one
/// unit vector per vertex.
struct TriMesh {
  Points vertices;
  std::vector<Face> faces;
  Points normals;

  std::size_t vertex_count() const { return vertices.size(); }
  std::size_t face_count() const { return faces.size(); }
  bool has_normals() const { return !normals.empty(); }

  bool operator==(const TriMesh& other) const;
};

/// Throws Error(invalid_argument) when a face index is out of range or the
/// normal count does not match the vertex count.
void check_mesh(const TriMesh& mesh);

/// Parses the OBJ subset used by intra-oral scans: `v`, `vn` and `f` records.
/// Texture coordinates, groups, materials and comments are ignored. Polygons
/// are fan triangulated, negative indices are resolved relative to the
/// vertices read so far. `vn` records are kept as per-vertex normals only when
/// their count equals the vertex count.
TriMesh parse_obj(std::string_view text);

/// Writes `v`/`vn`/`f` records with shortest round-trip decimal coordinates,
/// so `parse_obj(write_obj(m)) == m` bit for bit.
std::string write_obj(const TriMesh& mesh);

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);
Vec3 face_normal(const TriMesh& mesh, const Face& face);  // unit, or zero if degenerate

}  // namespace teethseg
