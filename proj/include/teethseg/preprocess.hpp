#pragma once

#include <optional>
#include <vector>

#include "teethseg/annotation.hpp"
#include "teethseg/diagnostics.hpp"
#include "teethseg/mesh.hpp"

namespace teethseg {

/// Merge distance for duplicate vertices. Scanner accuracy is tens of
/// micrometres, so this only merges true duplicates.
inline constexpr double kDefaultMergeTolerance = 1e-6;

/// Faces below this area (mm^2) are degenerate.
inline constexpr double kDegenerateFaceArea = 1e-12;

struct CleanupReport {
  std::size_t removed_degenerate_faces = 0;
  std::size_t removed_duplicate_faces = 0;
  std::size_t merged_duplicate_vertices = 0;
  std::size_t removed_unreferenced_vertices = 0;
  std::vector<Index> index_map;  // old vertex -> new vertex, -1 when removed
};

struct CleanupResult {
  TriMesh mesh;
  std::optional<ScanAnnotation> annotation;
  CleanupReport report;
  Diagnostics diagnostics;
};

/// Removes degenerate faces, merges duplicate vertices onto their first
/// occurrence, removes faces made degenerate by the merge, removes duplicate
/// faces (same vertices up to cyclic rotation) and finally drops unreferenced
/// vertices. Annotation arrays follow the vertex remapping.
CleanupResult clean_mesh(const TriMesh& mesh, const std::optional<ScanAnnotation>& annotation = std::nullopt,
                         double vertex_merge_tolerance = kDefaultMergeTolerance);

struct RigidTransform {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
  RigidTransform inverse() const;
};

enum class PcaWeighting { vertices, face_area };

struct PoseResult {
  TriMesh mesh;
  RigidTransform transform;  // transform.apply(input vertex) == output vertex
  Vec3 variances = Vec3::Zero();  // along the output x, y, z axes
};

/// Centres the scan and rotates its principal axes onto x (largest variance),
/// y and z (smallest, the occlusal normal). Signs: crowns face +z (mean face
/// normal has z >= 0), the vertex with the largest |x| sits on +x, y = z × x.
PoseResult pose_normalize(const TriMesh& mesh, PcaWeighting weighting = PcaWeighting::vertices);

TriMesh transform_mesh(const TriMesh& mesh, const RigidTransform& transform);

}  // namespace teethseg
