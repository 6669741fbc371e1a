#include <doctest.h>

#include <algorithm>
#include <numbers>
#include <random>

#include "support/fixtures.hpp"
#include "teethseg/error.hpp"
#include "teethseg/instances.hpp"
#include "teethseg/topology.hpp"
#include "teethseg/uvflatten.hpp"

using namespace teethseg;

namespace {

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::io_error;
}

SubMesh whole(const TriMesh& m) {
  SubMesh s{m, {}};
  for (std::size_t i = 0; i < m.vertex_count(); ++i) s.parent_index_map.push_back(static_cast<Index>(i));
  return s;
}

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * ((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
}

// Polar grid with n vertices on every ring, all rings aligned: n-fold
// symmetric, so each ring flattens onto a circle.
TriMesh polar_disk(int rings, int n) {
  TriMesh m;
  m.vertices.emplace_back(0, 0, 0);
  for (int r = 1; r <= rings; ++r) {
    for (int s = 0; s < n; ++s) {
      double t = 2.0 * std::numbers::pi * s / n;
      m.vertices.emplace_back(r * std::cos(t), r * std::sin(t), 0.1 * r * r);
    }
  }
  auto at = [&](int r, int s) { return static_cast<Index>(1 + (r - 1) * n + ((s % n) + n) % n); };
  for (int s = 0; s < n; ++s) m.faces.push_back({0, at(1, s), at(1, s + 1)});
  for (int r = 2; r <= rings; ++r) {
    for (int s = 0; s < n; ++s) {
      m.faces.push_back({at(r - 1, s), at(r, s), at(r, s + 1)});
      m.faces.push_back({at(r - 1, s), at(r, s + 1), at(r - 1, s + 1)});
    }
  }
  return m;
}

std::vector<Vec2> circle_polygon(double radius, int sides) {
  std::vector<Vec2> poly;
  for (int k = 0; k < sides; ++k) {
    double t = 2.0 * std::numbers::pi * k / sides;
    poly.emplace_back(radius * std::cos(t), radius * std::sin(t));
  }
  return poly;
}

}  // namespace

TEST_SUITE("uvflatten") {

TEST_CASE("crop containing everything is the identity") {
  TriMesh m = fixtures::unit_disk(4);
  SubMesh s = crop_sphere(m, Vec3::Zero(), 10.0);
  CHECK(s.mesh == m);
  for (std::size_t i = 0; i < s.parent_index_map.size(); ++i) CHECK(s.parent_index_map[i] == static_cast<Index>(i));
}

TEST_CASE("crop errors") {
  TriMesh m = fixtures::unit_disk(2);
  CHECK(code_of([&] { crop_sphere(m, Vec3(100, 0, 0), 0.001); }) == ErrorCode::empty_selection);
  CHECK(code_of([&] { crop_sphere(m, Vec3::Zero(), 0.0); }) == ErrorCode::invalid_argument);
}

TEST_CASE("crop keeps the largest component and an injective index map") {
  TriMesh two = fixtures::unit_disk(3);
  TriMesh small = fixtures::single_triangle();
  const Index offset = static_cast<Index>(two.vertex_count());
  for (auto p : small.vertices) two.vertices.push_back(p + Vec3(0, 0, 0.5));
  two.faces.push_back({offset, offset + 1, offset + 2});
  SubMesh s = crop_sphere(two, Vec3::Zero(), 5.0);
  CHECK(s.mesh.face_count() == two.face_count() - 1);
  auto sorted = s.parent_index_map;
  std::sort(sorted.begin(), sorted.end());
  CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
}

TEST_CASE("tooth crop at 1.5 sizes contains the whole tooth") {
  SynthConfig cfg;
  cfg.tooth_count = 6;
  cfg.grid_spacing = 0.7;
  auto scan = generate_jaw(cfg);
  auto ex = extract_instances(scan.mesh, scan.annotation);
  for (const auto& t : ex.teeth) {
    SubMesh s = crop_sphere(scan.mesh, t.centroid, 1.5 * t.size);
    std::vector<Index> parents = s.parent_index_map;
    std::sort(parents.begin(), parents.end());
    for (Index v : t.vertex_ids) CHECK(std::binary_search(parents.begin(), parents.end(), v));
  }
}

TEST_CASE("boundary loops") {
  auto tri = boundary_loop(fixtures::single_triangle());
  CHECK(tri.size() == 3);
  CHECK(code_of([] { boundary_loop(fixtures::tetrahedron()); }) == ErrorCode::not_a_disk);
  CHECK(code_of([] { boundary_loop(fixtures::annulus()); }) == ErrorCode::not_a_disk);

  // Counter-clockwise seen from +z on an upward-facing disk.
  TriMesh disk = fixtures::unit_disk(3);
  auto loop = boundary_loop(disk);
  CHECK(loop.size() == 18);
  double area = 0.0;
  for (std::size_t k = 0; k < loop.size(); ++k) {
    const Vec3& a = disk.vertices[loop[k]];
    const Vec3& b = disk.vertices[loop[(k + 1) % loop.size()]];
    area += a.x() * b.y() - a.y() * b.x();
  }
  CHECK(area > 0.0);
}

TEST_CASE("centre of a regular fan maps to the origin") {
  for (int n : {3, 5, 8, 12}) {
    UVChart chart = harmonic_flatten(whole(fixtures::polygon_fan(n)));
    CHECK(chart.uv[n].norm() < 1e-12);
  }
}

TEST_CASE("disk flattening: boundary on circle, interior harmonic, no flips") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    TriMesh disk = fixtures::unit_disk(6, seed);
    for (auto& p : disk.vertices) p.z() = 0.3 * p.squaredNorm();  // a shallow bowl
    for (auto weights : {LaplacianWeights::cotangent, LaplacianWeights::uniform}) {
      FlattenOptions opt;
      opt.weights = weights;
      UVChart chart = harmonic_flatten(whole(disk), opt);
      REQUIRE(chart.uv.size() == disk.vertex_count());
      CHECK(chart.residual_inf <= 1e-10);
      CHECK(harmonic_residual(disk, chart.uv, weights) <= 1e-10);
      std::vector<char> boundary(disk.vertex_count(), 0);
      for (Index b : chart.boundary_loop) {
        boundary[b] = 1;
        CHECK(std::abs(chart.uv[b].norm() - 1.0) <= 1e-9);
      }
      for (std::size_t v = 0; v < disk.vertex_count(); ++v) {
        if (!boundary[v]) CHECK(chart.uv[v].norm() < 1.0);
      }
      for (const auto& f : disk.faces) CHECK(signed_area(chart.uv[f[0]], chart.uv[f[1]], chart.uv[f[2]]) > 0.0);
    }
  }
}

TEST_CASE("boundary angles follow arc length") {
  TriMesh m = fixtures::polygon_fan(4);
  m.vertices[1] = Vec3(0.0, 2.0, 0.0);  // stretch one side
  UVChart chart = harmonic_flatten(whole(m));
  const auto& loop = chart.boundary_loop;
  double total = 0.0;
  std::vector<double> len;
  for (std::size_t k = 0; k < loop.size(); ++k) {
    len.push_back((m.vertices[loop[(k + 1) % loop.size()]] - m.vertices[loop[k]]).norm());
    total += len.back();
  }
  for (std::size_t k = 0; k + 1 < loop.size(); ++k) {
    Vec2 a = chart.uv[loop[k]], b = chart.uv[loop[k + 1]];
    double turn = std::atan2(a.x() * b.y() - a.y() * b.x(), a.dot(b));
    CHECK(turn == doctest::Approx(2.0 * std::numbers::pi * len[k] / total).epsilon(1e-12));
  }
}

TEST_CASE("flattening is invariant to rigid motion") {
  TriMesh disk = fixtures::unit_disk(5, 3);
  for (auto& p : disk.vertices) p.z() = 0.2 * p.x() * p.y();
  UVChart a = harmonic_flatten(whole(disk));
  TriMesh moved = disk;
  Mat3 rot = Eigen::AngleAxisd(1.1, Vec3(0.3, -0.5, 0.8).normalized()).toRotationMatrix();
  for (auto& p : moved.vertices) p = rot * p + Vec3(4, -3, 12);
  UVChart b = harmonic_flatten(whole(moved));
  REQUIRE(a.boundary_loop == b.boundary_loop);
  for (std::size_t v = 0; v < a.uv.size(); ++v) CHECK((a.uv[v] - b.uv[v]).norm() < 1e-9);
}

TEST_CASE("curvature: sphere, flat grid, cylinder") {
  for (double r : {1.0, 7.5}) {
    auto field = max_curvature(make_icosphere(4, r));
    auto v = field.values;
    std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
    CHECK(std::abs(v[v.size() / 2] - 1.0 / r) <= 0.1 / r);
  }
  TriMesh grid = make_grid(12, 9, 0.5);
  MeshTopology topo(grid);
  auto boundary = topo.boundary_vertices();
  auto flat = max_curvature(grid);
  for (std::size_t i = 0; i < grid.vertex_count(); ++i) {
    if (!boundary[i]) CHECK(std::abs(flat.values[i]) <= 1e-9);
  }
  const double r = 2.0;
  TriMesh tube = make_cylinder(64, 40, r, 8.0);
  auto curved = max_curvature(tube);
  MeshTopology tube_topo(tube);
  auto rim = tube_topo.boundary_vertices();
  std::vector<double> inner;
  for (std::size_t i = 0; i < tube.vertex_count(); ++i) {
    if (!rim[i]) inner.push_back(curved.values[i]);
  }
  std::nth_element(inner.begin(), inner.begin() + inner.size() / 2, inner.end());
  CHECK(std::abs(inner[inner.size() / 2] - 1.0 / r) <= 0.1 / r);
}

TEST_CASE("curvature of a zero-area neighbourhood is zero with a warning") {
  // A closed tetrahedron collapsed to a point: no boundary, no area anywhere.
  TriMesh m = fixtures::tetrahedron();
  for (auto& p : m.vertices) p = Vec3(0.5, 0.5, 0.0);
  auto field = max_curvature(m);
  for (double k : field.values) CHECK(k == 0.0);
  CHECK(field.diagnostics.contains("zero-area"));
}

TEST_CASE("back-projection") {
  TriMesh fan = fixtures::polygon_fan(8);
  SubMesh sub = whole(fan);
  UVChart chart = harmonic_flatten(sub);

  auto all = backproject_polygon(sub, chart, circle_polygon(1.5, 32));
  CHECK(all.size() == fan.vertex_count());

  std::vector<Vec2> two{Vec2(0, 0), Vec2(1, 0)};
  CHECK(code_of([&] { backproject_polygon(sub, chart, two); }) == ErrorCode::invalid_polygon);
  std::vector<Vec2> bowtie{Vec2(0, 0), Vec2(1, 1), Vec2(1, 0), Vec2(0, 1)};
  CHECK(code_of([&] { backproject_polygon(sub, chart, bowtie); }) == ErrorCode::invalid_polygon);

  std::vector<Vec2> half{Vec2(0, -2), Vec2(2, -2), Vec2(2, 2), Vec2(0, 2)};
  std::vector<Index> expect;
  for (std::size_t v = 0; v < chart.uv.size(); ++v) {
    if (chart.uv[v].x() >= -1e-12) expect.push_back(sub.parent_index_map[v]);
  }
  std::sort(expect.begin(), expect.end());
  auto got = backproject_polygon(sub, chart, half);
  std::sort(got.begin(), got.end());
  CHECK(got == expect);
  CHECK(std::find(got.begin(), got.end(), 8) != got.end());  // centre sits on the polygon edge
}

TEST_CASE("flatten then back-project a uv circle recovers the inner rings") {
  const int rings = 6, n = 24, keep = 3;
  TriMesh m = polar_disk(rings, n);
  SubMesh sub = whole(m);
  UVChart chart = harmonic_flatten(sub);
  // Radii of ring `keep` and the next one in uv.
  double inner = chart.uv[1 + (keep - 1) * n].norm();
  double outer = chart.uv[1 + keep * n].norm();
  for (int s = 0; s < n; ++s) CHECK(std::abs(chart.uv[1 + (keep - 1) * n + s].norm() - inner) < 1e-9);
  auto got = backproject_polygon(sub, chart, circle_polygon(0.5 * (inner + outer), 256));
  std::sort(got.begin(), got.end());
  std::vector<Index> expect;
  for (int v = 0; v <= keep * n; ++v) expect.push_back(v);
  CHECK(got == expect);
}

}  // TEST_SUITE
