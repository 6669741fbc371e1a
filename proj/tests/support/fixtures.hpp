#pragma once
// Small hand-built meshes and randomized scan builders shared by the unit
// and acceptance suites.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "teethseg/mesh.hpp"
#include "teethseg/synthgen.hpp"

namespace fixtures {

using teethseg::Face;
using teethseg::TriMesh;
using teethseg::Vec3;

inline TriMesh single_triangle() {
  TriMesh m;
  m.vertices = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};
  m.faces = {Face{0, 1, 2}};
  return m;
}

inline TriMesh tetrahedron() {
  TriMesh m;
  m.vertices = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};
  m.faces = {Face{0, 2, 1}, Face{0, 1, 3}, Face{1, 2, 3}, Face{0, 3, 2}};
  return m;
}

// Planar ring between radius 1 and 2, `segments` quads split in two.
inline TriMesh annulus(int segments = 12) {
  TriMesh m;
  for (int r = 1; r <= 2; ++r) {
    for (int s = 0; s < segments; ++s) {
      double t = 2.0 * std::numbers::pi * s / segments;
      m.vertices.emplace_back(r * std::cos(t), r * std::sin(t), 0.0);
    }
  }
  for (int s = 0; s < segments; ++s) {
    int a = s, b = (s + 1) % segments, c = segments + s, d = segments + (s + 1) % segments;
    m.faces.push_back({a, c, d});
    m.faces.push_back({a, d, b});
  }
  return m;
}

// Regular n-gon on the unit circle with one centre vertex (index n).
inline TriMesh polygon_fan(int n) {
  TriMesh m;
  for (int s = 0; s < n; ++s) {
    double t = 2.0 * std::numbers::pi * s / n;
    m.vertices.emplace_back(std::cos(t), std::sin(t), 0.0);
  }
  m.vertices.emplace_back(0.0, 0.0, 0.0);
  for (int s = 0; s < n; ++s) m.faces.push_back({n, s, (s + 1) % n});
  return m;
}

// Triangulated unit disk: concentric rings with jittered interior vertices.
inline TriMesh unit_disk(int rings, std::uint64_t seed = 0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.15, 0.15);
  TriMesh m;
  m.vertices.emplace_back(0.0, 0.0, 0.0);
  std::vector<int> start{0};
  for (int r = 1; r <= rings; ++r) {
    start.push_back(static_cast<int>(m.vertices.size()));
    int count = 6 * r;
    for (int s = 0; s < count; ++s) {
      double t = 2.0 * std::numbers::pi * s / count;
      double rad = static_cast<double>(r) / rings;
      if (r < rings) {
        t += jitter(rng) / count;
        rad += jitter(rng) / (3.0 * rings);
      }
      m.vertices.emplace_back(rad * std::cos(t), rad * std::sin(t), 0.0);
    }
  }
  for (int s = 0; s < 6; ++s) m.faces.push_back({0, start[1] + s, start[1] + (s + 1) % 6});
  // Stitch ring r-1 (inner) to ring r (outer) by walking both in angle order.
  for (int r = 2; r <= rings; ++r) {
    const int inner_n = 6 * (r - 1);
    const int outer_n = 6 * r;
    auto inner = [&](int k) { return start[r - 1] + (k % inner_n); };
    auto outer = [&](int k) { return start[r] + (k % outer_n); };
    int i = 0, o = 0;
    while (i < inner_n || o < outer_n) {
      double ti = static_cast<double>(i + 1) / inner_n;
      double to = static_cast<double>(o + 1) / outer_n;
      if (o < outer_n && (to <= ti || i >= inner_n)) {
        m.faces.push_back({inner(i), outer(o), outer(o + 1)});
        ++o;
      } else {
        m.faces.push_back({inner(i), outer(o), inner(i + 1)});
        ++i;
      }
    }
  }
  return m;
}

// Vertices 0..4 on a line: triangles (0,1,2), (1,2,3), (2,3,4). The skip
// edges 0-2, 1-3, 2-4 can be switched off through their edge feature.
inline TriMesh path_strip() {
  TriMesh m;
  for (int i = 0; i < 5; ++i) m.vertices.emplace_back(i, i % 2 == 0 ? 0.0 : 1.0, 0.0);
  m.faces = {Face{0, 1, 2}, Face{2, 1, 3}, Face{2, 3, 4}};
  return m;
}

// A small synthetic jaw with a bounded vertex count.
inline teethseg::SynthScan small_jaw(std::uint64_t seed, int max_teeth = 8, std::size_t max_vertices = 500) {
  std::mt19937_64 rng(seed);
  teethseg::SynthConfig cfg;
  cfg.patient_id = "small" + std::to_string(seed);
  cfg.jaw = rng() % 2 ? teethseg::Jaw::upper : teethseg::Jaw::lower;
  cfg.tooth_count = 4 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_teeth - 3));
  cfg.seed = rng();
  cfg.grid_spacing = 1.5;
  for (;;) {
    auto scan = teethseg::generate_jaw(cfg);
    if (scan.mesh.vertex_count() <= max_vertices) return scan;
    cfg.grid_spacing *= 1.15;
  }
}

}  // namespace fixtures
