#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "teethseg/annotation.hpp"
#include "teethseg/mesh.hpp"
#include "teethseg/metrics.hpp"

namespace teethseg {

/// Synthetic jaw: a height-field gum band along y = a x^2 + b x + c with one
/// flattened spherical cap per tooth, centred at equal arc-length steps.
struct SynthConfig {
  std::string patient_id = "synth";
  Jaw jaw = Jaw::lower;
  int tooth_count = 14;
  double arch_a = -0.048;
  double arch_b = 0.0;
  double arch_c = 0.0;
  double radius_min = 3.0;
  double radius_max = 4.5;
  double tooth_spacing = 9.5;    // arc length between neighbouring centres
  double grid_spacing = 0.5;
  double gum_band_width = 14.0;  // full width across the arch
  double flatten_fraction = 0.8; // cap height as a fraction of the radius
  std::uint64_t seed = 0;
};

struct GroundTruthExtras {
  std::vector<int> labels;        // per tooth, arch order
  std::vector<Vec3> centroids;    // vertex means
  std::vector<double> sizes;      // bounding-sphere diameters
  std::vector<double> radii;      // cap radii
  Points offsets;                 // per vertex, centroid - vertex (zero on gum)
};

struct SynthScan {
  TriMesh mesh;
  ScanAnnotation annotation;
  GroundTruthExtras extras;
};

/// Deterministic for a given config. Throws overlap_validation when two
/// neighbouring caps would touch or a cap leaves the gum band, and
/// invalid_argument for out-of-range fields.
SynthScan generate_jaw(const SynthConfig& config);

std::string extras_to_json(const GroundTruthExtras& extras);

namespace perturb_op {
struct SwapLabels { int a; int b; };                 // instance ids
struct DropTooth { int instance; };
struct JitterInstance { int instance; double displacement; };
struct ErodeInstance { int instance; double fraction; };
struct Relabel { int instance; int label; };
}  // namespace perturb_op

using PerturbOp = std::variant<perturb_op::SwapLabels, perturb_op::DropTooth, perturb_op::JitterInstance,
                               perturb_op::ErodeInstance, perturb_op::Relabel>;

struct PerturbSpec {
  std::vector<PerturbOp> operations;
};

/// Expected per-tooth scores (GT instance order) and their change relative
/// to a perfect prediction, derived from the perturbation itself.
struct ExpectedScores {
  std::vector<ToothScore> teeth;
  double distance_delta = 0.0;    // sum of normalised distances (0 when perfect)
  double f1_delta = 0.0;          // sum of (F1 - 1)
  int identified_delta = 0;       // minus the number of teeth no longer identified
};

struct PerturbedScan {
  ScanAnnotation prediction;
  CentroidOverrides centroids;  // jittered instances only
  ExpectedScores expected;
};

/// Applies the operations in order to a copy of the ground truth. Jitter
/// moves the predicted centroid by `displacement` in a direction drawn from
/// `seed`. Throws invalid_index for unknown instances.
PerturbedScan perturb(const SynthScan& scan, const PerturbSpec& spec, std::uint64_t seed);

/// Test primitives.
TriMesh make_icosphere(int subdivisions, double radius);
TriMesh make_grid(int nx, int ny, double spacing);
TriMesh make_cylinder(int segments, int rings, double radius, double height);

/// Portable stream derivation and uniform draws (independent of the
/// standard library's distribution implementations).
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream);
double uniform01(std::uint64_t bits);

}  // namespace teethseg
