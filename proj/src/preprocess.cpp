#include "teethseg/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <unordered_map>

#include <Eigen/Eigenvalues>

#include "teethseg/error.hpp"

namespace teethseg {

namespace {

bool is_degenerate(const TriMesh& mesh, const Face& f) {
  if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) return true;
  return triangle_area(mesh.vertices[f[0]], mesh.vertices[f[1]], mesh.vertices[f[2]]) < kDegenerateFaceArea;
}

std::size_t drop_degenerate(const TriMesh& mesh, std::vector<Face>& faces) {
  auto before = faces.size();
  std::erase_if(faces, [&](const Face& f) { return is_degenerate(mesh, f); });
  return before - faces.size();
}

struct CellKey {
  std::int64_t x, y, z;
  bool operator==(const CellKey&) const = default;
};

struct CellHash {
  std::size_t operator()(const CellKey& k) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(k.x) * 0x9E3779B97F4A7C15ULL;
    h ^= static_cast<std::uint64_t>(k.y) + 0x632BE59BD9B4E019ULL + (h << 6) + (h >> 2);
    h ^= static_cast<std::uint64_t>(k.z) + 0x85EBCA77C2B2AE63ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

/// rep[i] = index of the earliest kept vertex within `tolerance` of i (or i).
std::vector<Index> find_representatives(const Points& vertices, double tolerance) {
  const std::size_t n = vertices.size();
  std::vector<Index> rep(n);
  const double cell = std::max(tolerance, 1e-9);
  std::unordered_map<CellKey, std::vector<Index>, CellHash> grid;
  grid.reserve(n);
  auto key_of = [&](const Vec3& p) {
    return CellKey{static_cast<std::int64_t>(std::floor(p.x() / cell)),
                   static_cast<std::int64_t>(std::floor(p.y() / cell)),
                   static_cast<std::int64_t>(std::floor(p.z() / cell))};
  };
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& p = vertices[i];
    CellKey k = key_of(p);
    Index best = -1;
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        for (std::int64_t dz = -1; dz <= 1; ++dz) {
          auto it = grid.find({k.x + dx, k.y + dy, k.z + dz});
          if (it == grid.end()) continue;
          for (Index r : it->second) {
            if ((best < 0 || r < best) && (vertices[r] - p).norm() <= tolerance) best = r;
          }
        }
      }
    }
    if (best >= 0) {
      rep[i] = best;
    } else {
      rep[i] = static_cast<Index>(i);
      grid[k].push_back(static_cast<Index>(i));
    }
  }
  return rep;
}

Face canonical_rotation(const Face& f) {
  int k = 0;
  if (f[1] < f[k]) k = 1;
  if (f[2] < f[k]) k = 2;
  return {f[k], f[(k + 1) % 3], f[(k + 2) % 3]};
}

}  // namespace

CleanupResult clean_mesh(const TriMesh& mesh, const std::optional<ScanAnnotation>& annotation,
                         double vertex_merge_tolerance) {
  if (!(vertex_merge_tolerance >= 0.0)) {
    throw Error(ErrorCode::invalid_argument, "vertex merge tolerance must be >= 0");
  }
  check_mesh(mesh);
  const std::size_t n = mesh.vertices.size();
  if (annotation && (annotation->labels.size() != n || annotation->instances.size() != n)) {
    throw Error(ErrorCode::length_mismatch, "annotation length does not match mesh vertex count");
  }

  CleanupResult result;
  auto& report = result.report;
  std::vector<Face> faces = mesh.faces;

  report.removed_degenerate_faces = drop_degenerate(mesh, faces);

  std::vector<Index> rep = find_representatives(mesh.vertices, vertex_merge_tolerance);
  for (std::size_t i = 0; i < n; ++i) {
    if (rep[i] == static_cast<Index>(i)) continue;
    ++report.merged_duplicate_vertices;
    if (annotation && annotation->instances[i] != annotation->instances[rep[i]]) {
      result.diagnostics.add(Severity::warning, "merge-conflict",
                             "merged vertex disagrees on instance with vertex " + std::to_string(rep[i]) +
                                 "; keeping the first occurrence",
                             static_cast<std::int64_t>(i));
    }
  }
  for (auto& f : faces) {
    for (auto& v : f) v = rep[v];
  }

  report.removed_degenerate_faces += drop_degenerate(mesh, faces);

  std::set<Face> seen;
  std::vector<Face> unique_faces;
  unique_faces.reserve(faces.size());
  for (const auto& f : faces) {
    if (seen.insert(canonical_rotation(f)).second) unique_faces.push_back(f);
  }
  report.removed_duplicate_faces = faces.size() - unique_faces.size();

  std::vector<char> used(n, 0);
  for (const auto& f : unique_faces) {
    for (Index v : f) used[v] = 1;
  }
  std::vector<Index> compact(n, -1);
  Index next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (used[i]) compact[i] = next++;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (rep[i] == static_cast<Index>(i) && !used[i]) ++report.removed_unreferenced_vertices;
  }

  report.index_map.resize(n);
  for (std::size_t i = 0; i < n; ++i) report.index_map[i] = compact[rep[i]];

  auto& out = result.mesh;
  out.vertices.reserve(next);
  for (std::size_t i = 0; i < n; ++i) {
    if (compact[i] >= 0) {
      out.vertices.push_back(mesh.vertices[i]);
      if (mesh.has_normals()) out.normals.push_back(mesh.normals[i]);
    }
  }
  out.faces.reserve(unique_faces.size());
  for (const auto& f : unique_faces) out.faces.push_back({compact[f[0]], compact[f[1]], compact[f[2]]});

  if (annotation) {
    ScanAnnotation ann;
    ann.patient_id = annotation->patient_id;
    ann.jaw = annotation->jaw;
    for (std::size_t i = 0; i < n; ++i) {
      if (compact[i] >= 0) {
        ann.labels.push_back(annotation->labels[i]);
        ann.instances.push_back(annotation->instances[i]);
      }
    }
    result.annotation = std::move(ann);
  }
  result.diagnostics.sort();
  return result;
}

RigidTransform RigidTransform::inverse() const {
  RigidTransform inv;
  inv.rotation = rotation.transpose();
  inv.translation = -(inv.rotation * translation);
  return inv;
}

TriMesh transform_mesh(const TriMesh& mesh, const RigidTransform& transform) {
  TriMesh out = mesh;
  for (auto& v : out.vertices) v = transform.apply(v);
  for (auto& nrm : out.normals) nrm = transform.rotation * nrm;
  return out;
}

PoseResult pose_normalize(const TriMesh& mesh, PcaWeighting weighting) {
  check_mesh(mesh);
  const std::size_t n = mesh.vertices.size();
  if (n < 3) throw Error(ErrorCode::degenerate_geometry, "pose normalisation needs at least 3 vertices");

  // Weighted samples: vertices (unit weight) or face centroids weighted by area.
  Vec3 mean = Vec3::Zero();
  Mat3 cov = Mat3::Zero();
  if (weighting == PcaWeighting::face_area) {
    double total = 0.0;
    for (const auto& f : mesh.faces) {
      double a = triangle_area(mesh.vertices[f[0]], mesh.vertices[f[1]], mesh.vertices[f[2]]);
      mean += a * (mesh.vertices[f[0]] + mesh.vertices[f[1]] + mesh.vertices[f[2]]) / 3.0;
      total += a;
    }
    if (!(total > 0.0)) throw Error(ErrorCode::degenerate_geometry, "mesh has zero surface area");
    mean /= total;
    for (const auto& f : mesh.faces) {
      double a = triangle_area(mesh.vertices[f[0]], mesh.vertices[f[1]], mesh.vertices[f[2]]);
      Vec3 c = (mesh.vertices[f[0]] + mesh.vertices[f[1]] + mesh.vertices[f[2]]) / 3.0 - mean;
      cov += (a / total) * c * c.transpose();
    }
  } else {
    for (const auto& v : mesh.vertices) mean += v;
    mean /= static_cast<double>(n);
    for (const auto& v : mesh.vertices) {
      Vec3 c = v - mean;
      cov += c * c.transpose();
    }
    cov /= static_cast<double>(n);
  }

  Eigen::SelfAdjointEigenSolver<Mat3> eig(cov);
  Vec3 values = eig.eigenvalues();  // ascending
  Mat3 vectors = eig.eigenvectors();
  if (!(values[2] > 0.0) || values[1] <= 1e-12 * values[2]) {
    throw Error(ErrorCode::degenerate_geometry, "vertices are collinear or coincident");
  }

  Vec3 x_axis = vectors.col(2);
  Vec3 z_axis = vectors.col(0);

  Vec3 normal_sum = Vec3::Zero();
  for (const auto& f : mesh.faces) normal_sum += face_normal(mesh, f);
  double z_score = normal_sum.dot(z_axis);
  if (z_score == 0.0) {
    // No usable faces: fall back to the third moment along the axis.
    for (const auto& v : mesh.vertices) z_score += std::pow((v - mean).dot(z_axis), 3);
  }
  if (z_score < 0.0) z_axis = -z_axis;

  Index extreme = 0;
  double extreme_abs = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    double ax = std::abs((mesh.vertices[i] - mean).dot(x_axis));
    if (ax > extreme_abs) {
      extreme_abs = ax;
      extreme = static_cast<Index>(i);
    }
  }
  if ((mesh.vertices[extreme] - mean).dot(x_axis) < 0.0) x_axis = -x_axis;

  // Re-orthogonalise before building the frame.
  x_axis = (x_axis - x_axis.dot(z_axis) * z_axis).normalized();
  Vec3 y_axis = z_axis.cross(x_axis);

  PoseResult result;
  result.transform.rotation.row(0) = x_axis.transpose();
  result.transform.rotation.row(1) = y_axis.transpose();
  result.transform.rotation.row(2) = z_axis.transpose();
  result.transform.translation = -(result.transform.rotation * mean);
  result.mesh = transform_mesh(mesh, result.transform);
  result.variances = Vec3(values[2], values[1], values[0]);
  return result;
}

}  // namespace teethseg
