#include "teethseg/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <string>

#include "teethseg/error.hpp"
#include "teethseg/format.hpp"
#include "teethseg/instances.hpp"
#include "teethseg/postproc/arch.hpp"

namespace teethseg {

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
  // SplitMix64 finaliser over a golden-ratio stride.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double uniform01(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

namespace {

struct Arch {
  double a, b, c;
  double x0;

  double y(double x) const { return (a * x + b) * x + c; }
  double slope(double x) const { return 2.0 * a * x + b; }

  // Arc length from the apex (or from x = 0 for a straight line).
  double arc(double x) const {
    if (a == 0.0) return (x - x0) * std::sqrt(1.0 + b * b);
    double u = slope(x);
    return (u * std::sqrt(1.0 + u * u) + std::asinh(u)) / (4.0 * a);
  }

  double x_at_arc(double s) const {
    double x = x0 + s;
    for (int it = 0; it < 100; ++it) {
      double step = (arc(x) - s) / std::sqrt(1.0 + slope(x) * slope(x));
      x -= step;
      if (std::abs(step) < 1e-13 * std::max(1.0, std::abs(x))) break;
    }
    return x;
  }
};

void check_config(const SynthConfig& cfg) {
  auto bad = [](const std::string& what) { throw Error(ErrorCode::invalid_argument, "synth config: " + what); };
  if (cfg.tooth_count < 4 || cfg.tooth_count > 16) bad("tooth_count must be within 4..16");
  if (!(cfg.radius_min > 0.0) || !(cfg.radius_max >= cfg.radius_min)) bad("radius range must satisfy 0 < min <= max");
  if (!(cfg.grid_spacing > 0.0) || cfg.grid_spacing > cfg.radius_min) bad("grid_spacing must lie in (0, radius_min]");
  if (!(cfg.tooth_spacing > 0.0)) bad("tooth_spacing must be positive");
  if (!(cfg.flatten_fraction > 0.0 && cfg.flatten_fraction <= 1.0)) bad("flatten_fraction must lie in (0, 1]");
  for (double v : {cfg.arch_a, cfg.arch_b, cfg.arch_c, cfg.gum_band_width}) {
    if (!std::isfinite(v)) bad("non-finite arch or band parameter");
  }
  if (!(cfg.radius_max < cfg.gum_band_width / 2.0)) {
    throw Error(ErrorCode::overlap_validation, "tooth radius does not fit inside the gum band");
  }
}

}  // namespace

SynthScan generate_jaw(const SynthConfig& cfg) {
  check_config(cfg);
  const int n = cfg.tooth_count;
  Arch arch{cfg.arch_a, cfg.arch_b, cfg.arch_c, cfg.arch_a != 0.0 ? -cfg.arch_b / (2.0 * cfg.arch_a) : 0.0};
  const postproc::ArchCurve curve{cfg.arch_a, cfg.arch_b, cfg.arch_c, 0.0};

  SynthScan scan;
  auto& ex = scan.extras;
  ex.labels = fdi::arch_labels(cfg.jaw, n);

  std::vector<Vec2> centers(n);
  for (int k = 0; k < n; ++k) {
    double s = (k - (n - 1) / 2.0) * cfg.tooth_spacing;
    double x = arch.x_at_arc(s);
    centers[k] = Vec2(x, arch.y(x));
    std::mt19937_64 stream(split_seed(cfg.seed, static_cast<std::uint64_t>(ex.labels[k])));
    ex.radii.push_back(cfg.radius_min + (cfg.radius_max - cfg.radius_min) * uniform01(stream()));
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double gap = (centers[i] - centers[j]).norm();
      if (!(gap > ex.radii[i] + ex.radii[j])) {
        throw Error(ErrorCode::overlap_validation, "teeth " + std::to_string(ex.labels[i]) + " and " +
                                                       std::to_string(ex.labels[j]) + " overlap");
      }
    }
  }

  // Height-field grid restricted to the band around the arch.
  const double half_band = cfg.gum_band_width / 2.0;
  const double s_lo = -(n - 1) / 2.0 * cfg.tooth_spacing - half_band;
  const double s_hi = -s_lo;
  const double x_lo = arch.x_at_arc(s_lo) - half_band;
  const double x_hi = arch.x_at_arc(s_hi) + half_band;
  double y_lo = std::numeric_limits<double>::infinity();
  double y_hi = -y_lo;
  for (int k = 0; k <= 256; ++k) {
    double y = arch.y(arch.x_at_arc(s_lo + (s_hi - s_lo) * k / 256.0));
    y_lo = std::min(y_lo, y);
    y_hi = std::max(y_hi, y);
  }
  y_lo -= half_band;
  y_hi += half_band;

  const double h = cfg.grid_spacing;
  const auto i0 = static_cast<long>(std::floor(x_lo / h));
  const auto i1 = static_cast<long>(std::ceil(x_hi / h));
  const auto j0 = static_cast<long>(std::floor(y_lo / h));
  const auto j1 = static_cast<long>(std::ceil(y_hi / h));
  const long nx = i1 - i0 + 1;
  const long ny = j1 - j0 + 1;

  std::vector<Index> grid_id(static_cast<std::size_t>(nx * ny), -1);
  std::vector<Vec3> grid_pos(grid_id.size());
  std::vector<int> grid_tooth(grid_id.size(), -1);
  for (long j = 0; j < ny; ++j) {
    for (long i = 0; i < nx; ++i) {
      const double x = static_cast<double>(i0 + i) * h;
      const double y = static_cast<double>(j0 + j) * h;
      const double t = curve.foot_parameter(x, y);
      const double s = arch.arc(t);
      const double dist = std::hypot(x - t, y - arch.y(t));
      const std::size_t g = static_cast<std::size_t>(j * nx + i);
      if (dist > half_band || s < s_lo || s > s_hi) continue;
      double z = 0.0;
      for (int k = 0; k < n; ++k) {
        double rho = std::hypot(x - centers[k].x(), y - centers[k].y());
        if (rho < ex.radii[k]) {
          z = std::min(std::sqrt(ex.radii[k] * ex.radii[k] - rho * rho), cfg.flatten_fraction * ex.radii[k]);
          grid_tooth[g] = k;
          break;
        }
      }
      grid_pos[g] = Vec3(x, y, z);
      grid_id[g] = 0;  // kept; renumbered below
    }
  }

  std::vector<Face> faces;
  for (long j = 0; j + 1 < ny; ++j) {
    for (long i = 0; i + 1 < nx; ++i) {
      auto at = [&](long di, long dj) { return static_cast<Index>((j + dj) * nx + (i + di)); };
      Index v00 = at(0, 0), v10 = at(1, 0), v01 = at(0, 1), v11 = at(1, 1);
      for (const Face& f : {Face{v00, v10, v11}, Face{v00, v11, v01}}) {
        if (grid_id[f[0]] >= 0 && grid_id[f[1]] >= 0 && grid_id[f[2]] >= 0) faces.push_back(f);
      }
    }
  }
  std::vector<char> used(grid_id.size(), 0);
  for (const Face& f : faces) {
    for (Index v : f) used[v] = 1;
  }
  auto& mesh = scan.mesh;
  auto& ann = scan.annotation;
  ann.patient_id = cfg.patient_id;
  ann.jaw = cfg.jaw;
  for (std::size_t g = 0; g < grid_id.size(); ++g) {
    if (!used[g]) {
      grid_id[g] = -1;
      continue;
    }
    grid_id[g] = static_cast<Index>(mesh.vertices.size());
    mesh.vertices.push_back(grid_pos[g]);
    int k = grid_tooth[g];
    ann.labels.push_back(k >= 0 ? ex.labels[k] : 0);
    ann.instances.push_back(k >= 0 ? k + 1 : 0);
  }
  for (Face& f : faces) {
    for (Index& v : f) v = grid_id[v];
  }
  mesh.faces = std::move(faces);

  auto extraction = extract_instances(mesh, ann);
  if (static_cast<int>(extraction.teeth.size()) != n) {
    throw Error(ErrorCode::overlap_validation, "a tooth cap received no grid vertex");
  }
  for (const auto& t : extraction.teeth) {
    ex.centroids.push_back(t.centroid);
    ex.sizes.push_back(t.size);
  }
  ex.offsets.assign(mesh.vertices.size(), Vec3::Zero());
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    if (ann.instances[v] > 0) ex.offsets[v] = ex.centroids[ann.instances[v] - 1] - mesh.vertices[v];
  }
  return scan;
}

std::string extras_to_json(const GroundTruthExtras& extras) {
  // Numbers go through the shortest round-trip formatter for stable bytes.
  auto vec = [](const Vec3& p) {
    return "[" + format_double(p.x()) + ", " + format_double(p.y()) + ", " + format_double(p.z()) + "]";
  };
  std::string out = "{\n    \"teeth\": [\n";
  for (std::size_t k = 0; k < extras.labels.size(); ++k) {
    out += "        {\"instance\": " + std::to_string(k + 1) + ", \"label\": " + std::to_string(extras.labels[k]) +
           ", \"centroid\": " + vec(extras.centroids[k]) + ", \"size\": " + format_double(extras.sizes[k]) +
           ", \"radius\": " + format_double(extras.radii[k]) + "}";
    out += k + 1 < extras.labels.size() ? ",\n" : "\n";
  }
  out += "    ],\n    \"offsets\": [";
  for (std::size_t v = 0; v < extras.offsets.size(); ++v) {
    if (v) out += ", ";
    out += vec(extras.offsets[v]);
  }
  out += "]\n}\n";
  return out;
}

namespace {

struct PredTooth {
  int label = 0;
  std::vector<Index> members;
};

Vec3 vertex_mean(const TriMesh& mesh, const std::vector<Index>& ids) {
  Vec3 sum = Vec3::Zero();
  for (Index v : ids) sum += mesh.vertices[v];
  return sum / static_cast<double>(ids.size());
}

}  // namespace

PerturbedScan perturb(const SynthScan& scan, const PerturbSpec& spec, std::uint64_t seed) {
  const auto& mesh = scan.mesh;
  const auto& gt = scan.annotation;
  const int n = static_cast<int>(scan.extras.labels.size());

  std::map<int, PredTooth> teeth;
  for (std::size_t v = 0; v < gt.instances.size(); ++v) {
    if (gt.instances[v] > 0) teeth[gt.instances[v]].members.push_back(static_cast<Index>(v));
  }
  for (auto& [id, t] : teeth) t.label = gt.labels[t.members.front()];

  PerturbedScan out;
  auto tooth = [&](int id) -> PredTooth& {
    auto it = teeth.find(id);
    if (it == teeth.end() || it->second.members.empty()) {
      throw Error(ErrorCode::invalid_index, "perturbation references missing instance " + std::to_string(id));
    }
    return it->second;
  };

  std::uint64_t op_index = 0;
  for (const auto& op : spec.operations) {
    ++op_index;
    if (auto* swap = std::get_if<perturb_op::SwapLabels>(&op)) {
      std::swap(tooth(swap->a).label, tooth(swap->b).label);
    } else if (auto* drop = std::get_if<perturb_op::DropTooth>(&op)) {
      tooth(drop->instance).members.clear();
      out.centroids.erase(drop->instance);
    } else if (auto* jitter = std::get_if<perturb_op::JitterInstance>(&op)) {
      PredTooth& t = tooth(jitter->instance);
      std::mt19937_64 stream(split_seed(seed, op_index));
      // Uniform direction on the sphere.
      double z = 2.0 * uniform01(stream()) - 1.0;
      double phi = 2.0 * std::numbers::pi * uniform01(stream());
      double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      Vec3 dir(r * std::cos(phi), r * std::sin(phi), z);
      out.centroids[jitter->instance] = vertex_mean(mesh, t.members) + jitter->displacement * dir;
    } else if (auto* erode = std::get_if<perturb_op::ErodeInstance>(&op)) {
      if (!(erode->fraction >= 0.0 && erode->fraction < 1.0)) {
        throw Error(ErrorCode::invalid_argument, "erosion fraction must lie in [0, 1)");
      }
      PredTooth& t = tooth(erode->instance);
      Vec3 c = vertex_mean(mesh, t.members);
      auto removed = static_cast<std::size_t>(std::floor(erode->fraction * static_cast<double>(t.members.size())));
      std::vector<Index> ranked = t.members;
      std::stable_sort(ranked.begin(), ranked.end(), [&](Index l, Index r) {
        return (mesh.vertices[l] - c).norm() > (mesh.vertices[r] - c).norm();
      });
      ranked.erase(ranked.begin() + static_cast<std::ptrdiff_t>(removed), ranked.end());
      std::sort(ranked.begin(), ranked.end());
      std::vector<Index> kept;
      std::set_difference(t.members.begin(), t.members.end(), ranked.begin(), ranked.end(), std::back_inserter(kept));
      t.members = std::move(kept);
    } else if (auto* relabel = std::get_if<perturb_op::Relabel>(&op)) {
      if (!fdi::is_valid(relabel->label)) {
        throw Error(ErrorCode::invalid_argument, "relabel target " + std::to_string(relabel->label) + " is not FDI");
      }
      tooth(relabel->instance).label = relabel->label;
    }
  }

  auto& pred = out.prediction;
  pred.patient_id = gt.patient_id;
  pred.jaw = gt.jaw;
  pred.labels.assign(gt.labels.size(), 0);
  pred.instances.assign(gt.instances.size(), 0);
  for (const auto& [id, t] : teeth) {
    for (Index v : t.members) {
      pred.labels[v] = t.label;
      pred.instances[v] = id;
    }
  }

  // Expected scores straight from the perturbation: every predicted instance
  // is a subset of its own GT instance, so it is the only overlap candidate.
  std::vector<std::pair<int, Vec3>> alive;
  for (const auto& [id, t] : teeth) {
    if (t.members.empty()) continue;
    auto it = out.centroids.find(id);
    alive.emplace_back(id, it != out.centroids.end() ? it->second : vertex_mean(mesh, t.members));
  }
  auto& exp = out.expected;
  for (int k = 0; k < n; ++k) {
    const int id = k + 1;
    ToothScore s{id, scan.extras.labels[k], kMissingPenalty, 0.0, false};
    const double size = scan.extras.sizes[k];
    if (!alive.empty()) {
      double best = std::numeric_limits<double>::infinity();
      int nearest = 0;
      for (const auto& [pid, c] : alive) {
        double d = (scan.extras.centroids[k] - c).norm();
        if (d < best) {
          best = d;
          nearest = pid;
        }
      }
      s.normalized_distance = best / size;
      s.identified = best < size / 2.0 && teeth[nearest].label == s.gt_label;
    }
    const auto& members = teeth[id].members;
    if (!members.empty()) {
      auto gt_count = static_cast<double>(std::count(gt.instances.begin(), gt.instances.end(), id));
      auto p = static_cast<double>(members.size());
      s.f1 = 2.0 * p / (p + gt_count);
    }
    exp.distance_delta += s.normalized_distance;
    exp.f1_delta += s.f1 - 1.0;
    exp.identified_delta += (s.identified ? 1 : 0) - 1;
    exp.teeth.push_back(s);
  }
  return out;
}

TriMesh make_icosphere(int subdivisions, double radius) {
  if (subdivisions < 0 || !(radius > 0.0)) throw Error(ErrorCode::invalid_argument, "bad icosphere parameters");
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  TriMesh mesh;
  for (const auto& p : {Vec3(-1, t, 0), Vec3(1, t, 0), Vec3(-1, -t, 0), Vec3(1, -t, 0), Vec3(0, -1, t), Vec3(0, 1, t),
                        Vec3(0, -1, -t), Vec3(0, 1, -t), Vec3(t, 0, -1), Vec3(t, 0, 1), Vec3(-t, 0, -1),
                        Vec3(-t, 0, 1)}) {
    mesh.vertices.push_back(p.normalized());
  }
  mesh.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                {11, 10, 2}, {10, 7, 6}, {7, 1, 8},   {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (int level = 0; level < subdivisions; ++level) {
    std::map<std::pair<Index, Index>, Index> midpoint;
    auto mid = [&](Index a, Index b) {
      auto key = std::minmax(a, b);
      auto [it, inserted] = midpoint.try_emplace({key.first, key.second}, 0);
      if (inserted) {
        it->second = static_cast<Index>(mesh.vertices.size());
        mesh.vertices.push_back((mesh.vertices[a] + mesh.vertices[b]).normalized());
      }
      return it->second;
    };
    std::vector<Face> next;
    next.reserve(mesh.faces.size() * 4);
    for (const Face& f : mesh.faces) {
      Index ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    mesh.faces = std::move(next);
  }
  for (auto& v : mesh.vertices) v *= radius;
  return mesh;
}

TriMesh make_grid(int nx, int ny, double spacing) {
  if (nx < 2 || ny < 2 || !(spacing > 0.0)) throw Error(ErrorCode::invalid_argument, "bad grid parameters");
  TriMesh mesh;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) mesh.vertices.emplace_back(i * spacing, j * spacing, 0.0);
  }
  for (int j = 0; j + 1 < ny; ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      Index v00 = j * nx + i, v10 = v00 + 1, v01 = v00 + nx, v11 = v01 + 1;
      mesh.faces.push_back({v00, v10, v11});
      mesh.faces.push_back({v00, v11, v01});
    }
  }
  return mesh;
}

TriMesh make_cylinder(int segments, int rings, double radius, double height) {
  if (segments < 3 || rings < 2 || !(radius > 0.0) || !(height > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "bad cylinder parameters");
  }
  TriMesh mesh;
  for (int r = 0; r < rings; ++r) {
    double z = height * r / (rings - 1);
    for (int s = 0; s < segments; ++s) {
      double phi = 2.0 * std::numbers::pi * s / segments;
      mesh.vertices.emplace_back(radius * std::cos(phi), radius * std::sin(phi), z);
    }
  }
  for (int r = 0; r + 1 < rings; ++r) {
    for (int s = 0; s < segments; ++s) {
      Index a = r * segments + s, b = r * segments + (s + 1) % segments;
      Index c = a + segments, d = b + segments;
      mesh.faces.push_back({a, b, d});
      mesh.faces.push_back({a, d, c});
    }
  }
  return mesh;
}

}  // namespace teethseg
