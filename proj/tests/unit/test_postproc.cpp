#include <doctest.h>

#include <map>
#include <numbers>
#include <random>
#include <set>

#include "oracles/clustering_oracle.hpp"
#include "support/fixtures.hpp"
#include "teethseg/error.hpp"
#include "teethseg/postproc/arch.hpp"
#include "teethseg/postproc/clustering.hpp"
#include "teethseg/postproc/interpolation.hpp"
#include "teethseg/postproc/labels.hpp"
#include "teethseg/postproc/random_walker.hpp"
#include "teethseg/postproc/sampling.hpp"
#include "teethseg/topology.hpp"

using namespace teethseg;
using namespace teethseg::postproc;

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

// Five triangles whose edge adjacency is a path.
TriMesh face_path() {
  TriMesh m;
  for (int i = 0; i < 7; ++i) m.vertices.emplace_back(i, i % 2, 0.0);
  m.faces = {Face{0, 1, 2}, Face{1, 3, 2}, Face{2, 3, 4}, Face{3, 5, 4}, Face{4, 5, 6}};
  return m;
}

Points random_cloud(std::mt19937_64& rng, int n, int blobs) {
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::normal_distribution<double> g(0.0, 0.6);
  Points centers;
  for (int b = 0; b < blobs; ++b) centers.emplace_back(u(rng), u(rng), u(rng) * 0.3);
  Points pts;
  for (int i = 0; i < n; ++i) {
    if (rng() % 5 == 0) {
      pts.emplace_back(u(rng), u(rng), u(rng) * 0.3);
    } else {
      pts.push_back(centers[rng() % blobs] + Vec3(g(rng), g(rng), g(rng)));
    }
  }
  return pts;
}

// Two planar strips meeting along the y axis; the right strip is lifted by
// `fold` radians (positive: valley, negative: ridge).
TriMesh creased(double fold) {
  TriMesh m;
  const Vec3 out(std::cos(fold), 0.0, std::sin(fold));
  m.vertices = {Vec3(-1, 0, 0), Vec3(-1, 1, 0), Vec3(0, 0, 0), Vec3(0, 1, 0), out, out + Vec3(0, 1, 0)};
  m.faces = {Face{0, 2, 3}, Face{0, 3, 1}, Face{2, 4, 5}, Face{2, 5, 3}};
  return m;
}

}  // namespace

TEST_SUITE("postproc") {

TEST_CASE("majority vote") {
  auto out = majority_vote_fusion({{{4, 2.0}, {5, 1.0}}, {}, {{4, 1.0}, {5, 1.0}}, {{5, 0.5}, {4, 0.25}, {4, 0.5}}});
  CHECK(out == LabeledFaceField{4, kUnassigned, 4, 4});
  CHECK_THROWS_AS(majority_vote_fusion({{{4, -1.0}}}), Error);
}

TEST_CASE("island removal on a path resolves by hops then label") {
  TriMesh m = face_path();
  CHECK(island_removal(m, {3, 3, -1, -1, 5}) == LabeledFaceField{3, 3, 3, 5, 5});
  CHECK(island_removal(m, {3, -1, 5, 5, 5}) == LabeledFaceField{3, 3, 5, 5, 5});
  CHECK(island_removal(m, {7, 7, 7, 7, 7}) == LabeledFaceField{7, 7, 7, 7, 7});
  CHECK(island_removal(m, {9, -1, 2, 2, 2}) == LabeledFaceField{9, 2, 2, 2, 2});  // equal hops: smaller label
  CHECK(code_of([&] { island_removal(m, {-1, -1, -1, -1, -1}); }) == ErrorCode::no_anchor);
  CHECK(code_of([&] { island_removal(m, {1, 2}); }) == ErrorCode::length_mismatch);
}

TEST_CASE("island removal: a hole surrounded by one label, small islands, idempotence") {
  TriMesh grid = make_grid(6, 6, 1.0);
  LabeledFaceField field(grid.face_count(), 7);
  field[27] = kUnassigned;
  auto filled = island_removal(grid, field);
  CHECK(filled == LabeledFaceField(grid.face_count(), 7));

  LabeledFaceField speck(grid.face_count(), 7);
  speck[27] = 3;
  CHECK(island_removal(grid, speck, 2) == LabeledFaceField(grid.face_count(), 7));
  CHECK(island_removal(grid, speck, 0) == speck);

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    LabeledFaceField noisy(grid.face_count());
    for (auto& l : noisy) l = rng() % 4 == 0 ? kUnassigned : static_cast<int>(rng() % 3) + 1;
    auto once = island_removal(grid, noisy, 3);
    CHECK(island_removal(grid, once, 3) == once);
    std::set<int> before(noisy.begin(), noisy.end()), after(once.begin(), once.end());
    before.erase(kUnassigned);
    for (int l : after) CHECK(before.count(l) == 1);
  }
}

TEST_CASE("label closing") {
  TriMesh grid = make_grid(8, 8, 1.0);
  LabeledFaceField solid(grid.face_count(), 11);
  CHECK(label_closing(grid, solid, 2) == solid);

  LabeledFaceField notch = solid;
  notch[40] = 0;
  CHECK(label_closing(grid, notch, 0) == notch);
  CHECK(label_closing(grid, notch, 1) == solid);

  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    LabeledFaceField field(grid.face_count());
    for (auto& l : field) l = rng() % 3 == 0 ? 0 : (rng() % 2 ? 11 : 12);
    auto once = label_closing(grid, field, 1);
    CHECK(label_closing(grid, once, 1) == once);
    for (std::size_t f = 0; f < field.size(); ++f) {
      if (field[f] != 0) CHECK(once[f] == field[f]);  // other labels are never overwritten
    }
  }
}

TEST_CASE("dbscan examples") {
  Points two;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 0.05);
  for (int i = 0; i < 10; ++i) two.emplace_back(u(rng), u(rng), u(rng));
  for (int i = 0; i < 10; ++i) two.emplace_back(10 + u(rng), u(rng), u(rng));
  auto ids = dbscan(two, 0.5, 3);
  CHECK(std::set<int>(ids.begin(), ids.end()) == std::set<int>{0, 1});
  CHECK(ids.front() == 0);
  CHECK(ids.back() == 1);

  Points sparse{Vec3(0, 0, 0), Vec3(5, 0, 0), Vec3(0, 5, 0)};
  CHECK(dbscan(sparse, 1.0, 2) == std::vector<int>{-1, -1, -1});
  CHECK(dbscan({Vec3(1, 2, 3)}, 1.0, 1) == std::vector<int>{0});
  CHECK_THROWS_AS(dbscan(sparse, 0.0, 2), Error);
}

TEST_CASE("dbscan and density peaks agree with brute force") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 15; ++trial) {
    Points pts = random_cloud(rng, 40 + static_cast<int>(rng() % 120), 3);
    double eps = 0.4 + 0.1 * static_cast<double>(rng() % 8);
    std::size_t min_pts = 2 + rng() % 5;
    CHECK(dbscan(pts, eps, min_pts) == oracle::brute_dbscan(pts, eps, min_pts));
    int k = 1 + static_cast<int>(rng() % 4);
    auto got = density_peaks(pts, 1.0, k);
    auto ref = oracle::brute_density_peaks(pts, 1.0, k);
    CHECK(got.centers == std::vector<Index>(ref.centers.begin(), ref.centers.end()));
    CHECK(got.assignment == ref.assignment);
  }
}

TEST_CASE("dbscan partitions are invariant to input order") {
  std::mt19937_64 rng(5);
  Points pts = random_cloud(rng, 150, 4);
  std::vector<int> perm(pts.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Points shuffled;
  for (int p : perm) shuffled.push_back(pts[p]);
  auto a = dbscan(pts, 0.7, 4);
  auto b = dbscan(shuffled, 0.7, 4);
  // Compare co-membership of core-reachable pairs; border points may switch
  // clusters when equidistant, so restrict to noise flags and cores.
  std::map<int, int> rename;
  std::size_t noise_a = 0, noise_b = 0;
  for (int x : a) noise_a += x < 0;
  for (int x : b) noise_b += x < 0;
  CHECK(noise_a == noise_b);
  std::set<int> ca(a.begin(), a.end()), cb(b.begin(), b.end());
  CHECK(ca.size() == cb.size());
}

TEST_CASE("density peaks: blobs, k = n, duplicates") {
  Points blobs;
  for (int i = 0; i < 6; ++i) blobs.emplace_back(0.01 * i, 0, 0);
  for (int i = 0; i < 6; ++i) blobs.emplace_back(20 + 0.01 * i, 0, 0);
  auto r = density_peaks(blobs, 1.0, 2);
  std::set<bool> sides{r.centers[0] < 6, r.centers[1] < 6};
  CHECK(sides.size() == 2);
  for (int i = 0; i < 12; ++i) CHECK((blobs[r.centers[r.assignment[i]]].x() < 10) == (i < 6));

  auto all = density_peaks(blobs, 1.0, 12);
  std::set<Index> uniq(all.centers.begin(), all.centers.end());
  CHECK(uniq.size() == 12);
  for (int i = 0; i < 12; ++i) CHECK(all.centers[all.assignment[i]] == i);

  Points dup{Vec3(0, 0, 0), Vec3(0, 0, 0), Vec3(0, 0, 0)};
  auto d = density_peaks(dup, 1.0, 1);
  CHECK(d.centers == std::vector<Index>{0});
  CHECK(code_of([&] { density_peaks(dup, 1.0, 0); }) == ErrorCode::invalid_argument);
}

TEST_CASE("offset clustering recovers synthetic teeth") {
  auto scan = fixtures::small_jaw(6);
  std::vector<char> gum(scan.mesh.vertex_count());
  for (std::size_t v = 0; v < gum.size(); ++v) gum[v] = scan.annotation.instances[v] == 0;
  auto ids = offset_shift_cluster(scan.mesh.vertices, scan.extras.offsets, gum, 0.5, 1);
  std::map<int, int> mapping;
  for (std::size_t v = 0; v < ids.size(); ++v) {
    int truth = scan.annotation.instances[v];
    CHECK((ids[v] == 0) == (truth == 0));
    if (truth == 0) continue;
    auto [it, fresh] = mapping.emplace(truth, ids[v]);
    CHECK(it->second == ids[v]);
  }
  std::set<int> images;
  for (const auto& [t, i] : mapping) images.insert(i);
  CHECK(images.size() == mapping.size());

  std::vector<char> all(gum.size(), 1);
  auto none = offset_shift_cluster(scan.mesh.vertices, scan.extras.offsets, all, 0.5, 1);
  CHECK(std::all_of(none.begin(), none.end(), [](int x) { return x == 0; }));

  // Zero offsets: two teeth whose gap (at least 3.5 mm) exceeds eps.
  SynthConfig cfg;
  cfg.tooth_count = 4;
  cfg.radius_min = 3.0;
  cfg.radius_max = 3.0;
  auto pair = generate_jaw(cfg);
  Points two_teeth;
  for (std::size_t v = 0; v < pair.mesh.vertex_count(); ++v) {
    int id = pair.annotation.instances[v];
    if (id == 1 || id == 2) two_teeth.push_back(pair.mesh.vertices[v]);
  }
  auto separated = offset_shift_cluster(two_teeth, Points(two_teeth.size(), Vec3::Zero()),
                                        std::vector<char>(two_teeth.size(), 0), 2.0, 1);
  CHECK(std::set<int>(separated.begin(), separated.end()) == std::set<int>{1, 2});
}

TEST_CASE("farthest point sampling") {
  Points square{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 1, 0), Vec3(0, 1, 0), Vec3(0.5, 0.5, 0)};
  auto corners = farthest_point_sampling(square, 4, 0);
  CHECK(std::set<Index>(corners.begin(), corners.end()) == std::set<Index>{0, 1, 2, 3});
  CHECK(corners.front() == 0);
  CHECK(farthest_point_sampling(square, 1, 3) == std::vector<Index>{3});
  auto all = farthest_point_sampling(square, 5, 2);
  CHECK(std::set<Index>(all.begin(), all.end()).size() == 5);
  CHECK(code_of([&] { farthest_point_sampling(square, 0, 0); }) == ErrorCode::invalid_argument);
}

TEST_CASE("boundary-aware sampling") {
  Points line;
  std::vector<int> one;
  for (int i = 0; i < 20; ++i) {
    line.emplace_back(i, 0, 0);
    one.push_back(4);
  }
  CHECK(boundary_aware_sample(line, one, 4, 10, 0).empty());

  SynthConfig cfg;
  cfg.tooth_count = 4;
  cfg.grid_spacing = 0.5;
  cfg.radius_min = 4.5;
  cfg.radius_max = 4.6;
  cfg.tooth_spacing = 9.4;
  auto scan = generate_jaw(cfg);
  const auto& pts = scan.mesh.vertices;
  const auto& ids = scan.annotation.instances;
  const int k = 8;
  auto picked = boundary_aware_sample(pts, ids, k, 40, 0);
  CHECK(picked.size() == 40);
  // Every sample sits in the band where instance ids change: within three
  // grid steps (in plan view) of a vertex carrying another id.
  for (Index p : picked) {
    double nearest_other = 1e9;
    for (std::size_t q = 0; q < pts.size(); ++q) {
      if (ids[q] != ids[p]) nearest_other = std::min(nearest_other, (pts[q] - pts[p]).head<2>().norm());
    }
    CHECK(nearest_other <= 3.0 * cfg.grid_spacing);
  }
  auto everything = boundary_aware_sample(pts, ids, k, 1000000, 0);
  CHECK(everything.size() < pts.size());
  CHECK(std::set<Index>(everything.begin(), everything.end()).size() == everything.size());
  CHECK(code_of([&] { boundary_aware_sample(pts, ids, 1, 5, 0); }) == ErrorCode::invalid_argument);
}

TEST_CASE("grid subsampling") {
  Points cell{Vec3(0.1, 0.1, 0.1), Vec3(0.2, 0.3, 0.4), Vec3(0.45, 0.45, 0.45)};
  CHECK(grid_subsample(cell, 1.0).size() == 1);
  CHECK(grid_subsample(cell, 1.0).front() == 2);  // nearest (0.5, 0.5, 0.5)
  Points ints;
  for (int i = 0; i < 27; ++i) ints.emplace_back(i % 3, (i / 3) % 3, i / 9);
  CHECK(grid_subsample(ints, 0.5).size() == 27);

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  Points cloud;
  for (int i = 0; i < 2000; ++i) cloud.emplace_back(u(rng), u(rng), u(rng));
  auto kept = grid_subsample(cloud, 0.7);
  std::map<std::array<long, 3>, int> bins, occupied;
  auto key = [](const Vec3& p) {
    return std::array<long, 3>{static_cast<long>(std::floor(p.x() / 0.7)), static_cast<long>(std::floor(p.y() / 0.7)),
                               static_cast<long>(std::floor(p.z() / 0.7))};
  };
  for (Index i : kept) bins[key(cloud[i])] += 1;
  for (const auto& p : cloud) occupied[key(p)] = 1;
  for (const auto& [c, n] : bins) CHECK(n == 1);
  CHECK(bins.size() == occupied.size());
}

TEST_CASE("arch fit") {
  Points exact;
  for (double x : {-3.0, -1.0, 0.5, 2.0, 4.0}) exact.emplace_back(x, 2 * x * x - x + 3, 0.7);
  ArchCurve c = fit_arch_curve(exact);
  CHECK(std::abs(c.a - 2) < 1e-9);
  CHECK(std::abs(c.b + 1) < 1e-9);
  CHECK(std::abs(c.c - 3) < 1e-9);
  CHECK(code_of([] { fit_arch_curve({Vec3(0, 0, 0), Vec3(1, 1, 0)}); }) == ErrorCode::degenerate_fit);
  CHECK(code_of([] { fit_arch_curve({Vec3(1, 0, 0), Vec3(1, 1, 0), Vec3(1, 2, 0)}); }) == ErrorCode::degenerate_fit);

  // Noisy arches: the residual follows sigma^2 chi^2(n - 3), far below 3 n sigma^2.
  std::mt19937_64 rng(4);
  std::normal_distribution<double> noise(0.0, 0.1);
  for (int trial = 0; trial < 20; ++trial) {
    Points noisy;
    for (int k = 0; k < 14; ++k) {
      double x = -30.0 + 4.5 * k;
      noisy.emplace_back(x, -0.048 * x * x + 0.1 * x + 2.0 + noise(rng), 0.0);
    }
    CHECK(fit_arch_curve(noisy).residual <= 3.0 * static_cast<double>(noisy.size()) * 0.01);
  }
}

TEST_CASE("arch foot parameter") {
  ArchCurve c;
  c.a = -0.05;
  for (double x : {-20.0, -3.0, 0.0, 7.5, 19.0}) {
    CHECK(c.foot_parameter(x, c(x)) == doctest::Approx(x).epsilon(1e-9));
    // A point off the curve along the normal keeps the foot.
    Vec2 normal(-2 * c.a * x, 1.0);
    normal.normalize();
    CHECK(c.foot_parameter(x + 1.5 * normal.x(), c(x) + 1.5 * normal.y()) == doctest::Approx(x).epsilon(1e-9));
  }
}

TEST_CASE("arch label correction") {
  ArchCurve curve;
  curve.a = -0.05;
  auto teeth_at = [&](std::vector<int> labels) {
    std::vector<ArchTooth> teeth;
    for (std::size_t k = 0; k < labels.size(); ++k) {
      double x = -30.0 + 9.0 * static_cast<double>(k);
      teeth.push_back({Vec3(x, curve(x), 0.0), labels[k]});
    }
    return teeth;
  };
  auto sorted = fdi::arch_labels(Jaw::upper, 14);
  CHECK(arch_label_correct(teeth_at(sorted), curve, Jaw::upper) == sorted);

  // Duplicate 21 flanking 22: the mesial one keeps 21, the distal one moves on.
  CHECK(arch_label_correct(teeth_at({21, 22, 21}), curve, Jaw::upper) == std::vector<int>{21, 22, 23});

  // Swapped pair with neighbours on both sides.
  CHECK(arch_label_correct(teeth_at({14, 13, 11, 12, 21, 22}), curve, Jaw::upper) ==
        std::vector<int>{14, 13, 12, 11, 21, 22});

  // Input order does not matter; labels come back in input order.
  auto shuffled = teeth_at({14, 13, 11, 12, 21, 22});
  std::swap(shuffled[0], shuffled[4]);
  auto fixed = arch_label_correct(shuffled, curve, Jaw::upper);
  CHECK(fixed == std::vector<int>{21, 13, 12, 11, 14, 22});

  // Lower jaw, reversed direction of the observed sequence.
  auto lower = fdi::arch_labels(Jaw::lower, 6);
  std::vector<int> reversed(lower.rbegin(), lower.rend());
  CHECK(arch_label_correct(teeth_at(reversed), curve, Jaw::lower) == reversed);

  auto out = arch_label_correct(teeth_at({31, 31, 31, 31}), curve, Jaw::lower);
  CHECK(std::set<int>(out.begin(), out.end()).size() == 4);
  CHECK(arch_label_correct(teeth_at(out), curve, Jaw::lower) == out);

  std::vector<int> seventeen(17, 11);
  CHECK(code_of([&] { arch_label_correct(teeth_at(seventeen), curve, Jaw::upper); }) == ErrorCode::too_many_teeth);
}

TEST_CASE("kNN interpolation") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Points labeled, queries;
  std::vector<int> labels;
  for (int i = 0; i < 300; ++i) {
    labeled.emplace_back(u(rng), u(rng), u(rng));
    labels.push_back(static_cast<int>(rng() % 5));
  }
  for (int i = 0; i < 100; ++i) queries.emplace_back(u(rng), u(rng), u(rng));
  auto nn = knn_label_vote(labeled, labels, queries, 1);
  for (int q = 0; q < 100; ++q) {
    int best = 0;
    for (int i = 1; i < 300; ++i) {
      if ((labeled[i] - queries[q]).norm() < (labeled[best] - queries[q]).norm()) best = i;
    }
    CHECK(nn[q] == labels[best]);
  }
  CHECK(knn_label_vote(labeled, labels, {labeled[17]}, 1).front() == labels[17]);

  Points pair{Vec3(-1, 0, 0), Vec3(1, 0, 0)};
  auto mid = knn_logit_interpolate(pair, {{0.0}, {1.0}}, {Vec3(0, 0, 0)}, 2);
  CHECK(mid[0][0] == doctest::Approx(0.5));
  auto exact = knn_logit_interpolate(pair, {{0.0, 3.0}, {1.0, 4.0}}, {Vec3(1, 0, 0)}, 2);
  CHECK(exact[0] == std::vector<double>{1.0, 4.0});
  CHECK(knn_label_vote(pair, {7, 3}, {Vec3(0, 0, 0)}, 2).front() == 3);  // tie: smaller label
}

TEST_CASE("proposal merging") {
  auto make = [](std::vector<Index> idx, double logit, double cls) {
    Proposal p;
    p.indices = std::move(idx);
    p.seg_logits.assign(p.indices.size(), logit);
    p.class_logits.fill(cls);
    return p;
  };
  auto same = merge_proposals({make({1, 2, 3}, 1.0, 0.5), make({1, 2, 3}, 1.0, 0.5)});
  REQUIRE(same.size() == 1);
  CHECK(same[0].seg_logits == std::vector<double>{2.0, 2.0, 2.0});
  CHECK(same[0].class_logits[3] == 1.0);

  auto apart = merge_proposals({make({1, 2}, 1.0, 0), make({5, 6}, 1.0, 0)});
  CHECK(apart.size() == 2);

  Proposal a = make({0, 1, 2, 3, 4}, 1.0, 1), b = make({2, 3, 4, 5, 6, 7}, 1.0, 2), c = make({5, 6, 7, 8, 9}, 1.0, 3);
  CHECK(foreground_iou(a, b) == doctest::Approx(0.375));
  CHECK(foreground_iou(a, c) == 0.0);
  for (auto order : {std::vector<Proposal>{a, b, c}, std::vector<Proposal>{c, a, b}, std::vector<Proposal>{b, c, a}}) {
    auto chain = merge_proposals(order);
    REQUIRE(chain.size() == 1);
    CHECK(chain[0].indices == std::vector<Index>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
    CHECK(chain[0].seg_logits[3] == 2.0);
    CHECK(chain[0].seg_logits[0] == 1.0);
    CHECK(chain[0].class_logits[0] == 6.0);
  }
  // Background points (logit <= 0) do not count toward overlap.
  Proposal bg = make({0, 1, 2, 3, 4}, -1.0, 0);
  CHECK(merge_proposals({a, bg}).size() == 2);
  CHECK_THROWS_AS(merge_proposals({a}, 0.0), Error);
}

TEST_CASE("random walker on a path graph") {
  TriMesh strip = fixtures::path_strip();
  MeshTopology topo(strip);
  std::vector<double> feature(topo.edges().size(), 0.0);
  for (std::size_t e = 0; e < feature.size(); ++e) {
    if (topo.edges()[e].b - topo.edges()[e].a == 2) feature[e] = 1e4;  // switch off skip edges
  }
  auto r = random_walker(strip, {{0, 1}, {4, 2}}, feature, 1.0);
  const double expect[] = {1.0, 0.75, 0.5, 0.25, 0.0};
  REQUIRE(r.label_set == std::vector<int>{1, 2});
  for (int v = 0; v < 5; ++v) {
    CHECK(std::abs(r.probability[0][v] - expect[v]) <= 1e-10);
    CHECK(std::abs(r.probability[0][v] + r.probability[1][v] - 1.0) <= 1e-8);
  }
  CHECK(r.labels == std::vector<int>{1, 1, 1, 2, 2});  // the midpoint tie goes to the smaller label

  auto seeded = random_walker(strip, {{0, 1}, {1, 2}, {2, 1}, {3, 3}, {4, 2}}, feature, 1.0);
  CHECK(seeded.labels == std::vector<int>{1, 2, 1, 3, 2});
}

TEST_CASE("random walker splits at a strong cut") {
  TriMesh grid = make_grid(10, 4, 1.0);
  MeshTopology topo(grid);
  std::vector<double> feature(topo.edges().size(), 0.0);
  const double mid = 4.5;
  for (std::size_t e = 0; e < feature.size(); ++e) {
    double xa = grid.vertices[topo.edges()[e].a].x(), xb = grid.vertices[topo.edges()[e].b].x();
    if ((xa < mid) != (xb < mid)) feature[e] = 1.0;
  }
  std::map<Index, int> seeds;
  for (std::size_t v = 0; v < grid.vertex_count(); ++v) {
    if (grid.vertices[v].x() == 0.0) seeds[static_cast<Index>(v)] = 1;
    if (grid.vertices[v].x() == 9.0) seeds[static_cast<Index>(v)] = 2;
  }
  auto r = random_walker(grid, seeds, feature, 50.0);
  for (std::size_t v = 0; v < grid.vertex_count(); ++v) CHECK(r.labels[v] == (grid.vertices[v].x() < mid ? 1 : 2));
}

TEST_CASE("random walker errors") {
  TriMesh two = fixtures::single_triangle();
  for (const auto& p : fixtures::single_triangle().vertices) two.vertices.push_back(p + Vec3(5, 0, 0));
  two.faces.push_back({3, 4, 5});
  std::vector<double> feature(MeshTopology(two).edges().size(), 0.0);
  CHECK(code_of([&] { random_walker(two, {{0, 1}, {1, 2}}, feature, 1.0); }) == ErrorCode::unreachable_region);
  CHECK(code_of([&] { random_walker(two, {}, feature, 1.0); }) == ErrorCode::invalid_argument);
  CHECK(code_of([&] { random_walker(two, {{0, 1}}, {1.0}, 1.0); }) == ErrorCode::length_mismatch);
}

TEST_CASE("convexity feature") {
  TriMesh grid = make_grid(5, 5, 1.0);
  for (double f : convexity_feature(grid)) CHECK(f == 0.0);

  for (double fold : {0.3, 0.9, 1.4}) {
    TriMesh valley = creased(fold);
    MeshTopology topo(valley);
    auto feature = convexity_feature(valley);
    const double theta = std::numbers::pi - fold;  // interior dihedral angle
    for (std::size_t e = 0; e < feature.size(); ++e) {
      bool crease = topo.edges()[e] == Edge{2, 3};
      CHECK(std::abs(feature[e] - (crease ? std::numbers::pi - theta : 0.0)) < 1e-12);
    }
    for (double f : convexity_feature(creased(-fold))) CHECK(f == 0.0);
  }
  for (double f : convexity_feature(make_icosphere(3, 2.0))) CHECK(std::abs(f) <= 1e-9);
}

}  // TEST_SUITE
