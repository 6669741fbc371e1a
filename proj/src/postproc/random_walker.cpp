#include "teethseg/postproc/random_walker.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "teethseg/error.hpp"
#include "teethseg/topology.hpp"

namespace teethseg::postproc {

RandomWalkerResult random_walker(const TriMesh& mesh, const std::map<Index, int>& seeds,
                                 const std::vector<double>& edge_feature, double beta, const CgOptions& solver) {
  check_mesh(mesh);
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw Error(ErrorCode::invalid_argument, "beta must be finite and >= 0");
  if (seeds.empty()) throw Error(ErrorCode::invalid_argument, "random walker needs at least one seed");
  MeshTopology topo(mesh);
  const auto& edges = topo.edges();
  if (edge_feature.size() != edges.size()) {
    throw Error(ErrorCode::length_mismatch, "edge feature has " + std::to_string(edge_feature.size()) +
                                                " entries for " + std::to_string(edges.size()) + " edges");
  }
  const std::size_t nv = mesh.vertices.size();
  for (const auto& [v, label] : seeds) {
    if (v < 0 || static_cast<std::size_t>(v) >= nv) throw Error(ErrorCode::invalid_index, "seed vertex out of range");
  }
  for (double f : edge_feature) {
    if (!(f >= 0.0) || !std::isfinite(f)) throw Error(ErrorCode::invalid_argument, "edge feature must be finite and >= 0");
  }

  RandomWalkerResult result;
  for (const auto& [v, label] : seeds) result.label_set.push_back(label);
  std::sort(result.label_set.begin(), result.label_set.end());
  result.label_set.erase(std::unique(result.label_set.begin(), result.label_set.end()), result.label_set.end());
  const std::size_t nl = result.label_set.size();

  // Unseeded vertices get consecutive unknown ids.
  std::vector<Index> unknown(nv, -1);
  std::vector<Index> free_vertices;
  for (std::size_t v = 0; v < nv; ++v) {
    if (!seeds.count(static_cast<Index>(v))) {
      unknown[v] = static_cast<Index>(free_vertices.size());
      free_vertices.push_back(static_cast<Index>(v));
    }
  }

  // Every unseeded vertex must reach a seed through the edge graph.
  {
    std::vector<char> reached(nv, 0);
    std::vector<Index> queue;
    for (const auto& [v, label] : seeds) {
      reached[v] = 1;
      queue.push_back(v);
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (Index u : topo.vertex_neighbors(queue[head])) {
        if (!reached[u]) {
          reached[u] = 1;
          queue.push_back(u);
        }
      }
    }
    for (Index v : free_vertices) {
      if (!reached[v]) {
        throw Error(ErrorCode::unreachable_region, "vertex " + std::to_string(v) + " is not connected to any seed");
      }
    }
  }

  std::vector<double> weight(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) weight[e] = std::exp(-beta * edge_feature[e]);

  result.probability.assign(nl, std::vector<double>(nv, 0.0));
  for (const auto& [v, label] : seeds) {
    auto pos = std::lower_bound(result.label_set.begin(), result.label_set.end(), label) - result.label_set.begin();
    result.probability[pos][v] = 1.0;
  }

  const auto m = static_cast<Eigen::Index>(free_vertices.size());
  if (m > 0) {
    std::vector<Eigen::Triplet<double>> triplets;
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(m);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(m, static_cast<Eigen::Index>(nl));
    for (std::size_t e = 0; e < edges.size(); ++e) {
      Index a = edges[e].a;
      Index b = edges[e].b;
      double w = weight[e];
      Index ua = unknown[a];
      Index ub = unknown[b];
      if (ua >= 0) diag[ua] += w;
      if (ub >= 0) diag[ub] += w;
      if (ua >= 0 && ub >= 0) {
        triplets.emplace_back(ua, ub, -w);
        triplets.emplace_back(ub, ua, -w);
      } else if (ua >= 0) {
        for (std::size_t l = 0; l < nl; ++l) rhs(ua, static_cast<Eigen::Index>(l)) += w * result.probability[l][b];
      } else if (ub >= 0) {
        for (std::size_t l = 0; l < nl; ++l) rhs(ub, static_cast<Eigen::Index>(l)) += w * result.probability[l][a];
      }
    }
    for (Eigen::Index i = 0; i < m; ++i) triplets.emplace_back(i, i, diag[i]);
    SparseMatrix laplacian(m, m);
    laplacian.setFromTriplets(triplets.begin(), triplets.end());

    for (std::size_t l = 0; l < nl; ++l) {
      CgResult solved = solve_cg(laplacian, rhs.col(static_cast<Eigen::Index>(l)), solver);
      if (!solved.converged) {
        throw Error(ErrorCode::numerical_failure,
                    "random walker solve did not converge (residual " + std::to_string(solved.residual_inf) + ")");
      }
      result.residual_inf = std::max(result.residual_inf, solved.residual_inf);
      for (Eigen::Index i = 0; i < m; ++i) result.probability[l][free_vertices[i]] = solved.x[i];
    }
  }

  result.labels.assign(nv, 0);
  for (std::size_t v = 0; v < nv; ++v) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < nl; ++l) {
      if (result.probability[l][v] > best) {
        best = result.probability[l][v];
        result.labels[v] = result.label_set[l];
      }
    }
  }
  return result;
}

std::vector<double> convexity_feature(const TriMesh& mesh) {
  check_mesh(mesh);
  MeshTopology topo(mesh);
  const auto& edges = topo.edges();
  std::vector<double> feature(edges.size(), 0.0);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto& incident = topo.edge_faces(e);
    if (incident.size() != 2) continue;
    const Face& f1 = mesh.faces[incident[0]];
    const Face& f2 = mesh.faces[incident[1]];
    Vec3 n1 = face_normal(mesh, f1);
    Vec3 n2 = face_normal(mesh, f2);
    if (n1.squaredNorm() == 0.0 || n2.squaredNorm() == 0.0) continue;
    Index opposite = -1;
    for (Index v : f2) {
      if (v != edges[e].a && v != edges[e].b) opposite = v;
    }
    // f2 bends towards f1's front side: a valley.
    double side = n1.dot(mesh.vertices[opposite] - mesh.vertices[edges[e].a]);
    double scale = (mesh.vertices[edges[e].b] - mesh.vertices[edges[e].a]).norm();
    if (side <= 1e-12 * scale) continue;
    feature[e] = std::atan2(n1.cross(n2).norm(), n1.dot(n2));
  }
  return feature;
}

}  // namespace teethseg::postproc
