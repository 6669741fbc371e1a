#pragma once

#include <vector>

#include "teethseg/annotation.hpp"
#include "teethseg/diagnostics.hpp"
#include "teethseg/mesh.hpp"

namespace teethseg {

/// How the "size" of a tooth is measured. The default is the diameter of the
/// centroid-centred bounding sphere of the member vertices.
enum class SizeDefinition { bounding_sphere_diameter, bounding_box_diagonal };

struct ToothInstance {
  int instance_id = 0;
  int label = 0;  // 0 when every member vertex is labelled gingiva
  std::vector<Index> vertex_ids;
  Vec3 centroid = Vec3::Zero();
  double size = 0.0;
};

struct InstanceExtraction {
  std::vector<ToothInstance> teeth;  // sorted by instance id
  Diagnostics diagnostics;
};

/// One ToothInstance per distinct nonzero instance id. The label is the most
/// frequent nonzero label of the members (ties go to the smaller code).
/// Instances whose members are all labelled 0 get label 0 and a diagnostic;
/// callers must skip them when scoring.
InstanceExtraction extract_instances(const TriMesh& mesh, const ScanAnnotation& annotation,
                                     SizeDefinition size_definition = SizeDefinition::bounding_sphere_diameter);

double tooth_size(const TriMesh& mesh, const std::vector<Index>& vertex_ids, const Vec3& centroid,
                  SizeDefinition size_definition);

/// Length, FDI validity, jaw/quadrant consistency, gingiva label/instance
/// agreement, per-instance label uniformity and unreferenced vertices.
Diagnostics validate_scan(const TriMesh& mesh, const ScanAnnotation& annotation);

}  // namespace teethseg
