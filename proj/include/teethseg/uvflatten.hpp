#pragma once

#include <span>
#include <vector>

#include "teethseg/diagnostics.hpp"
#include "teethseg/mesh.hpp"

namespace teethseg {

struct SubMesh {
  TriMesh mesh;
  std::vector<Index> parent_index_map;  // submesh vertex -> parent vertex
};

/// Keeps faces whose three vertices lie inside the sphere, then the largest
/// vertex-connected component (ties: the component holding the lowest face
/// index). Submesh vertices keep their parent order.
SubMesh crop_sphere(const TriMesh& mesh, const Vec3& center, double radius);

/// The boundary of a disk-topology mesh, oriented consistently with the face
/// winding (counter-clockwise seen from the front side) and starting at its
/// smallest vertex index. Throws Error(not_a_disk) unless the mesh is
/// edge-manifold with exactly one boundary loop and Euler characteristic 1.
std::vector<Index> boundary_loop(const TriMesh& mesh);
inline std::vector<Index> boundary_loop(const SubMesh& sub) { return boundary_loop(sub.mesh); }

enum class LaplacianWeights { cotangent, uniform };

struct FlattenOptions {
  LaplacianWeights weights = LaplacianWeights::cotangent;
  double tolerance = 1e-10;
  std::size_t max_iterations_per_vertex = 10;
};

struct UVChart {
  std::vector<Vec2> uv;
  std::vector<Index> boundary_loop;
  double residual_inf = 0.0;  // max interior Laplacian residual over u and v
  std::size_t iterations = 0;
};

/// Fixed-boundary harmonic parameterisation: the boundary goes to the unit
/// circle at angles proportional to cumulative arc length, interior vertices
/// solve the discrete Laplace equation (cotangent weights clamped at zero).
UVChart harmonic_flatten(const SubMesh& sub, const FlattenOptions& options = {});

/// Symmetric edge weights used by the flattening, indexed like
/// MeshTopology(mesh).edges().
std::vector<double> laplacian_edge_weights(const TriMesh& mesh, LaplacianWeights weights);

/// Max over interior vertices of |sum_j w_ij (uv_i - uv_j)| for both coordinates.
double harmonic_residual(const TriMesh& mesh, const std::vector<Vec2>& uv, LaplacianWeights weights);

struct CurvatureField {
  std::vector<double> values;  // 1/mm
  Diagnostics diagnostics;
};

/// Maximum absolute principal curvature per vertex from the cotangent mean
/// curvature and angle-defect Gaussian curvature over mixed Voronoi areas.
/// Boundary vertices copy the value of the nearest interior vertex.
CurvatureField max_curvature(const TriMesh& mesh);

/// Parent-mesh vertices whose uv lies inside the polygon (even-odd rule,
/// points on the outline count as inside), ascending.
std::vector<Index> backproject_polygon(std::span<const Index> parent_index_map, std::span<const Vec2> uv,
                                       std::span<const Vec2> polygon);
std::vector<Index> backproject_polygon(const SubMesh& sub, const UVChart& chart, std::span<const Vec2> polygon);

/// Throws Error(invalid_polygon) for fewer than 3 points, zero-length edges or
/// self-intersections.
void check_simple_polygon(std::span<const Vec2> polygon);

}  // namespace teethseg
