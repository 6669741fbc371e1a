#pragma once

#include <map>
#include <vector>

#include "teethseg/linalg.hpp"
#include "teethseg/mesh.hpp"

namespace teethseg::postproc {

struct RandomWalkerResult {
  std::vector<int> labels;                      // per vertex
  std::vector<int> label_set;                   // distinct seed labels, ascending
  std::vector<std::vector<double>> probability;  // [label_set position][vertex]
  double residual_inf = 0.0;                    // worst CG residual over labels
};

/// Combinatorial Dirichlet labelling on the mesh edge graph. Edge weights are
/// exp(-beta * edge_feature[e]) with `edge_feature` indexed like
/// MeshTopology::edges(). Every unseeded vertex must be connected to a seed.
RandomWalkerResult random_walker(const TriMesh& mesh, const std::map<Index, int>& seeds,
                                 const std::vector<double>& edge_feature, double beta,
                                 const CgOptions& solver = {});

/// Per-edge concavity: the angle between the two face normals for concave
/// interior edges, 0 for convex, flat, boundary and non-manifold edges.
std::vector<double> convexity_feature(const TriMesh& mesh);

}  // namespace teethseg::postproc
