#pragma once

#include <utility>
#include <vector>

#include "teethseg/mesh.hpp"

namespace teethseg::postproc {

inline constexpr int kUnassigned = -1;

/// Per-face labels; kUnassigned marks faces no view/vote reached.
using LabeledFaceField = std::vector<int>;

struct FaceHit {
  int label = 0;
  double weight = 0.0;
};

/// Per face, the label with the largest summed weight (ties: smaller label);
/// faces without hits are kUnassigned.
LabeledFaceField majority_vote_fusion(const std::vector<std::vector<FaceHit>>& face_hits);

/// Gives each unassigned face the label of the nearest labelled face by
/// breadth-first hops over edge-adjacent faces (ties: smaller label). Labelled
/// components with fewer than `min_island_faces` faces are first unassigned
/// and refilled the same way. Faces with no labelled face in their connected
/// part take the label of the Euclidean-nearest labelled face centroid.
LabeledFaceField island_removal(const TriMesh& mesh, const LabeledFaceField& field, std::size_t min_island_faces = 0);

/// Morphological closing per nonzero label (ascending): `iterations` steps of
/// growth into gingiva (0) faces, then as many erosion steps that only retract
/// grown faces. Faces of other tooth labels are never overwritten and count as
/// solid during erosion.
LabeledFaceField label_closing(const TriMesh& mesh, const LabeledFaceField& field, int iterations);

}  // namespace teethseg::postproc
