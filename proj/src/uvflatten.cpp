#include "teethseg/uvflatten.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <string>

#include "teethseg/error.hpp"
#include "teethseg/linalg.hpp"
#include "teethseg/topology.hpp"

namespace teethseg {

namespace {

struct UnionFind {
  std::vector<Index> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<Index>(i);
  }
  Index find(Index x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(Index a, Index b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent[b] = a;
  }
};

double cotangent(const Vec3& apex, const Vec3& p, const Vec3& q) {
  Vec3 u = p - apex;
  Vec3 v = q - apex;
  double cross = u.cross(v).norm();
  if (!(cross > 0.0)) return 0.0;
  return u.dot(v) / cross;
}

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double orient(const Vec2& a, const Vec2& b, const Vec2& c) { return cross2(b - a, c - a); }

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p, double eps) {
  Vec2 ab = b - a;
  double len2 = ab.squaredNorm();
  double t = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (a + t * ab - p).norm() <= eps;
}

bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  double d1 = orient(c, d, a);
  double d2 = orient(c, d, b);
  double d3 = orient(a, b, c);
  double d4 = orient(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
  if (d1 == 0 && on_segment(c, d, a, 0.0)) return true;
  if (d2 == 0 && on_segment(c, d, b, 0.0)) return true;
  if (d3 == 0 && on_segment(a, b, c, 0.0)) return true;
  if (d4 == 0 && on_segment(a, b, d, 0.0)) return true;
  return false;
}

}  // namespace

SubMesh crop_sphere(const TriMesh& mesh, const Vec3& center, double radius) {
  if (!(radius > 0.0)) throw Error(ErrorCode::invalid_argument, "crop radius must be positive");
  check_mesh(mesh);
  const std::size_t n = mesh.vertices.size();
  std::vector<char> inside(n, 0);
  for (std::size_t i = 0; i < n; ++i) inside[i] = (mesh.vertices[i] - center).norm() <= radius;

  std::vector<Index> selected;
  UnionFind uf(n);
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const auto& face = mesh.faces[f];
    if (inside[face[0]] && inside[face[1]] && inside[face[2]]) {
      selected.push_back(static_cast<Index>(f));
      uf.unite(face[0], face[1]);
      uf.unite(face[1], face[2]);
    }
  }
  if (selected.empty()) throw Error(ErrorCode::empty_selection, "no face lies inside the crop sphere");

  std::vector<std::size_t> comp_faces(n, 0);
  for (Index f : selected) ++comp_faces[uf.find(mesh.faces[f][0])];
  Index best_root = -1;
  for (Index f : selected) {  // ascending faces: first max wins ties
    Index root = uf.find(mesh.faces[f][0]);
    if (best_root < 0 || comp_faces[root] > comp_faces[best_root]) best_root = root;
  }

  std::vector<Index> local(n, -1);
  std::vector<char> keep_vertex(n, 0);
  for (Index f : selected) {
    if (uf.find(mesh.faces[f][0]) != best_root) continue;
    for (Index v : mesh.faces[f]) keep_vertex[v] = 1;
  }
  SubMesh sub;
  for (std::size_t i = 0; i < n; ++i) {
    if (!keep_vertex[i]) continue;
    local[i] = static_cast<Index>(sub.parent_index_map.size());
    sub.parent_index_map.push_back(static_cast<Index>(i));
    sub.mesh.vertices.push_back(mesh.vertices[i]);
    if (mesh.has_normals()) sub.mesh.normals.push_back(mesh.normals[i]);
  }
  for (Index f : selected) {
    const auto& face = mesh.faces[f];
    if (uf.find(face[0]) != best_root) continue;
    sub.mesh.faces.push_back({local[face[0]], local[face[1]], local[face[2]]});
  }
  return sub;
}

std::vector<Index> boundary_loop(const TriMesh& mesh) {
  MeshTopology topo(mesh);
  if (!topo.is_manifold()) throw Error(ErrorCode::not_a_disk, "mesh has non-manifold edges");

  const std::size_t n = mesh.vertices.size();
  std::vector<Index> next(n, -1);
  std::size_t boundary_edges = 0;
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const auto& face = mesh.faces[f];
    for (int k = 0; k < 3; ++k) {
      Index e = topo.face_edges(f)[k];
      if (!topo.is_boundary_edge(e)) continue;
      Index u = face[k];
      Index v = face[(k + 1) % 3];
      if (next[u] >= 0) throw Error(ErrorCode::not_a_disk, "boundary touches itself at vertex " + std::to_string(u));
      next[u] = v;
      ++boundary_edges;
    }
  }
  if (boundary_edges == 0) throw Error(ErrorCode::not_a_disk, "mesh has no boundary");

  std::vector<char> visited(n, 0);
  std::vector<Index> loop;
  std::size_t loops = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (next[s] < 0 || visited[s]) continue;
    ++loops;
    Index v = static_cast<Index>(s);
    std::vector<Index> current;
    while (!visited[v]) {
      visited[v] = 1;
      current.push_back(v);
      v = next[v];
      if (v < 0) throw Error(ErrorCode::not_a_disk, "open boundary chain");
    }
    if (v != static_cast<Index>(s)) throw Error(ErrorCode::not_a_disk, "boundary chain does not close");
    if (loops == 1) loop = std::move(current);
  }
  if (loops != 1) throw Error(ErrorCode::not_a_disk, "mesh has " + std::to_string(loops) + " boundary loops");

  const auto chi = static_cast<long long>(n) - static_cast<long long>(topo.edges().size()) +
                   static_cast<long long>(mesh.faces.size());
  if (chi != 1) throw Error(ErrorCode::not_a_disk, "Euler characteristic is " + std::to_string(chi));
  // Loops are discovered from their smallest vertex, so `loop` already starts there.
  return loop;
}

std::vector<double> laplacian_edge_weights(const TriMesh& mesh, LaplacianWeights weights) {
  MeshTopology topo(mesh);
  const auto& edges = topo.edges();
  std::vector<double> w(edges.size(), weights == LaplacianWeights::uniform ? 1.0 : 0.0);
  if (weights == LaplacianWeights::uniform) return w;

  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const auto& face = mesh.faces[f];
    for (int k = 0; k < 3; ++k) {
      // edge (k, k+1) is opposite corner k+2
      Index e = topo.face_edges(f)[k];
      const Vec3& apex = mesh.vertices[face[(k + 2) % 3]];
      w[e] += 0.5 * cotangent(apex, mesh.vertices[face[k]], mesh.vertices[face[(k + 1) % 3]]);
    }
  }
  for (auto& x : w) x = std::max(0.0, x);

  // A vertex whose incident weights all clamped to zero would make the system
  // singular; give its edges unit weight instead.
  std::vector<double> vertex_sum(mesh.vertices.size(), 0.0);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    vertex_sum[edges[e].a] += w[e];
    vertex_sum[edges[e].b] += w[e];
  }
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (vertex_sum[edges[e].a] == 0.0 || vertex_sum[edges[e].b] == 0.0) w[e] = std::max(w[e], 1.0);
  }
  return w;
}

double harmonic_residual(const TriMesh& mesh, const std::vector<Vec2>& uv, LaplacianWeights weights) {
  MeshTopology topo(mesh);
  auto w = laplacian_edge_weights(mesh, weights);
  auto boundary = topo.boundary_vertices();
  std::vector<Vec2> acc(mesh.vertices.size(), Vec2::Zero());
  const auto& edges = topo.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    Vec2 d = w[e] * (uv[edges[e].a] - uv[edges[e].b]);
    acc[edges[e].a] += d;
    acc[edges[e].b] -= d;
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < acc.size(); ++i) {
    if (!boundary[i]) worst = std::max(worst, acc[i].lpNorm<Eigen::Infinity>());
  }
  return worst;
}

UVChart harmonic_flatten(const SubMesh& sub, const FlattenOptions& options) {
  const TriMesh& mesh = sub.mesh;
  UVChart chart;
  chart.boundary_loop = boundary_loop(mesh);
  const std::size_t n = mesh.vertices.size();
  chart.uv.assign(n, Vec2::Zero());

  const auto& loop = chart.boundary_loop;
  std::vector<double> cumulative(loop.size(), 0.0);
  for (std::size_t k = 1; k < loop.size(); ++k) {
    cumulative[k] = cumulative[k - 1] + (mesh.vertices[loop[k]] - mesh.vertices[loop[k - 1]]).norm();
  }
  const double total = cumulative.back() + (mesh.vertices[loop.front()] - mesh.vertices[loop.back()]).norm();
  if (!(total > 0.0)) throw Error(ErrorCode::degenerate_geometry, "boundary has zero length");
  std::vector<char> on_boundary(n, 0);
  for (std::size_t k = 0; k < loop.size(); ++k) {
    double theta = 2.0 * std::numbers::pi * cumulative[k] / total;
    chart.uv[loop[k]] = Vec2(std::cos(theta), std::sin(theta));
    on_boundary[loop[k]] = 1;
  }

  std::vector<Index> interior_id(n, -1);
  Index m = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!on_boundary[i]) interior_id[i] = m++;
  }
  if (m == 0) return chart;

  MeshTopology topo(mesh);
  const auto w = laplacian_edge_weights(mesh, options.weights);
  const auto& edges = topo.edges();

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(edges.size() * 4);
  Eigen::VectorXd bu = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd bv = Eigen::VectorXd::Zero(m);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    Index a = edges[e].a;
    Index b = edges[e].b;
    double we = w[e];
    if (we == 0.0) continue;
    Index ia = interior_id[a];
    Index ib = interior_id[b];
    if (ia >= 0) triplets.emplace_back(ia, ia, we);
    if (ib >= 0) triplets.emplace_back(ib, ib, we);
    if (ia >= 0 && ib >= 0) {
      triplets.emplace_back(ia, ib, -we);
      triplets.emplace_back(ib, ia, -we);
    } else if (ia >= 0) {
      bu[ia] += we * chart.uv[b].x();
      bv[ia] += we * chart.uv[b].y();
    } else if (ib >= 0) {
      bu[ib] += we * chart.uv[a].x();
      bv[ib] += we * chart.uv[a].y();
    }
  }
  SparseMatrix a(m, m);
  a.setFromTriplets(triplets.begin(), triplets.end());

  CgOptions cg;
  cg.tolerance = options.tolerance;
  cg.max_iterations = options.max_iterations_per_vertex * n;
  auto ru = solve_cg(a, bu, cg);
  auto rv = solve_cg(a, bv, cg);
  chart.iterations = ru.iterations + rv.iterations;
  for (std::size_t i = 0; i < n; ++i) {
    if (interior_id[i] >= 0) chart.uv[i] = Vec2(ru.x[interior_id[i]], rv.x[interior_id[i]]);
  }

  chart.residual_inf = harmonic_residual(mesh, chart.uv, options.weights);
  if (!ru.converged || !rv.converged || chart.residual_inf > options.tolerance) {
    throw Error(ErrorCode::numerical_failure,
                "harmonic solve did not converge: residual " + std::to_string(chart.residual_inf));
  }
  return chart;
}

CurvatureField max_curvature(const TriMesh& mesh) {
  check_mesh(mesh);
  const std::size_t n = mesh.vertices.size();
  MeshTopology topo(mesh);
  const auto boundary = topo.boundary_vertices();

  std::vector<double> area(n, 0.0);
  std::vector<double> angle_sum(n, 0.0);
  std::vector<Vec3> laplace(n, Vec3::Zero());

  for (const auto& face : mesh.faces) {
    const Vec3* p[3] = {&mesh.vertices[face[0]], &mesh.vertices[face[1]], &mesh.vertices[face[2]]};
    double face_area = triangle_area(*p[0], *p[1], *p[2]);
    if (!(face_area > 0.0)) continue;
    double angle[3];
    double cot[3];
    for (int k = 0; k < 3; ++k) {
      Vec3 u = *p[(k + 1) % 3] - *p[k];
      Vec3 v = *p[(k + 2) % 3] - *p[k];
      angle[k] = std::atan2(u.cross(v).norm(), u.dot(v));
      cot[k] = u.dot(v) / u.cross(v).norm();
    }
    int obtuse = -1;
    for (int k = 0; k < 3; ++k) {
      if (angle[k] > std::numbers::pi / 2) obtuse = k;
    }
    for (int k = 0; k < 3; ++k) {
      Index vi = face[k];
      int k1 = (k + 1) % 3;
      int k2 = (k + 2) % 3;
      angle_sum[vi] += angle[k];
      // edge (k, k1) is opposite corner k2, edge (k, k2) opposite corner k1
      Vec3 e1 = *p[k1] - *p[k];
      Vec3 e2 = *p[k2] - *p[k];
      laplace[vi] += cot[k2] * (*p[k] - *p[k1]) + cot[k1] * (*p[k] - *p[k2]);
      if (obtuse < 0) {
        area[vi] += (e1.squaredNorm() * cot[k2] + e2.squaredNorm() * cot[k1]) / 8.0;
      } else if (obtuse == k) {
        area[vi] += face_area / 2.0;
      } else {
        area[vi] += face_area / 4.0;
      }
    }
  }

  CurvatureField field;
  field.values.assign(n, 0.0);
  std::vector<char> have(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (boundary[i]) continue;
    if (!(area[i] > 0.0)) {
      field.diagnostics.add(Severity::warning, "zero-area", "vertex neighbourhood has zero area",
                            static_cast<std::int64_t>(i));
      have[i] = 1;
      continue;
    }
    double mean = laplace[i].norm() / (4.0 * area[i]);
    double defect = 2.0 * std::numbers::pi - angle_sum[i];
    if (std::abs(defect) < 1e-12) defect = 0.0;  // rounding noise of a flat fan
    double gauss = defect / area[i];
    field.values[i] = std::abs(mean) + std::sqrt(std::max(0.0, mean * mean - gauss));
    have[i] = 1;
  }

  // Boundary vertices: value of the nearest interior vertex along mesh edges.
  using Item = std::pair<double, Index>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::vector<Index> source(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (have[i]) {
      dist[i] = 0.0;
      source[i] = static_cast<Index>(i);
      queue.push({0.0, static_cast<Index>(i)});
    }
  }
  while (!queue.empty()) {
    auto [d, v] = queue.top();
    queue.pop();
    if (d > dist[v]) continue;
    for (Index u : topo.vertex_neighbors(v)) {
      double nd = d + (mesh.vertices[u] - mesh.vertices[v]).norm();
      if (nd < dist[u] || (nd == dist[u] && source[v] < source[u])) {
        dist[u] = nd;
        source[u] = source[v];
        queue.push({nd, u});
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (have[i]) continue;
    if (source[i] >= 0) {
      field.values[i] = field.values[source[i]];
    } else {
      field.diagnostics.add(Severity::warning, "no-interior", "no interior vertex reachable",
                            static_cast<std::int64_t>(i));
    }
  }
  field.diagnostics.sort();
  return field;
}

void check_simple_polygon(std::span<const Vec2> polygon) {
  const std::size_t n = polygon.size();
  if (n < 3) throw Error(ErrorCode::invalid_polygon, "polygon needs at least 3 points");
  double area2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = polygon[i];
    const Vec2& b = polygon[(i + 1) % n];
    if (!a.allFinite()) throw Error(ErrorCode::invalid_polygon, "polygon point is not finite");
    if (a == b) throw Error(ErrorCode::invalid_polygon, "polygon has a zero-length edge");
    area2 += cross2(a, b);
  }
  if (area2 == 0.0) throw Error(ErrorCode::invalid_polygon, "polygon has zero area");
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = polygon[i];
    const Vec2& b = polygon[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      const Vec2& c = polygon[j];
      const Vec2& d = polygon[(j + 1) % n];
      bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) {
        // Shared endpoint only; reject folding back along the same line.
        const Vec2& shared = j == i + 1 ? b : a;
        const Vec2& p = j == i + 1 ? a : b;
        const Vec2& q = j == i + 1 ? d : c;
        if (orient(shared, p, q) == 0.0 && (p - shared).dot(q - shared) > 0.0) {
          throw Error(ErrorCode::invalid_polygon, "polygon edges " + std::to_string(i) + " and " +
                                                      std::to_string(j) + " overlap");
        }
        continue;
      }
      if (segments_intersect(a, b, c, d)) {
        throw Error(ErrorCode::invalid_polygon,
                    "polygon edges " + std::to_string(i) + " and " + std::to_string(j) + " intersect");
      }
    }
  }
}

std::vector<Index> backproject_polygon(std::span<const Index> parent_index_map, std::span<const Vec2> uv,
                                       std::span<const Vec2> polygon) {
  check_simple_polygon(polygon);
  if (parent_index_map.size() != uv.size()) {
    throw Error(ErrorCode::length_mismatch, "chart uv count differs from parent index map");
  }
  const std::size_t n = polygon.size();
  std::vector<Index> out;
  for (std::size_t i = 0; i < uv.size(); ++i) {
    const Vec2& p = uv[i];
    bool inside = false;
    bool on_edge = false;
    for (std::size_t k = 0, j = n - 1; k < n; j = k++) {
      const Vec2& a = polygon[j];
      const Vec2& b = polygon[k];
      if (on_segment(a, b, p, 1e-12)) {
        on_edge = true;
        break;
      }
      if ((a.y() > p.y()) != (b.y() > p.y())) {
        double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
        if (p.x() < x) inside = !inside;
      }
    }
    if (inside || on_edge) out.push_back(parent_index_map[i]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Index> backproject_polygon(const SubMesh& sub, const UVChart& chart, std::span<const Vec2> polygon) {
  return backproject_polygon(sub.parent_index_map, chart.uv, polygon);
}

}  // namespace teethseg
