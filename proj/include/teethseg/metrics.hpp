#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "teethseg/annotation.hpp"
#include "teethseg/diagnostics.hpp"
#include "teethseg/instances.hpp"
#include "teethseg/mesh.hpp"

namespace teethseg {

/// Normalised distance charged per GT tooth when a scan has no prediction.
inline constexpr double kMissingPenalty = 5.0;

/// How TSA averages per-instance F1 scores.
enum class TsaAveraging {
  gt_only,    // mean over GT teeth; spurious predictions only hurt via precision
  symmetric,  // mean over GT teeth and predicted teeth (unmatched predictions score 0)
};

struct EvalOptions {
  SizeDefinition size_definition = SizeDefinition::bounding_sphere_diameter;
  TsaAveraging tsa_averaging = TsaAveraging::gt_only;
  double missing_penalty = kMissingPenalty;
};

struct ToothScore {
  int gt_instance_id = 0;
  int gt_label = 0;
  double normalized_distance = 0.0;
  double f1 = 0.0;
  bool identified = false;
};

struct ScanEvalPartial {
  std::string scan_id;
  std::vector<ToothScore> teeth;
  std::vector<double> predicted_f1;  // per predicted tooth, used by symmetric TSA
  bool missing_output = false;
  std::size_t gt_tooth_count() const { return teeth.size(); }
  Diagnostics diagnostics;
};

struct EvalReport {
  double tla = 0.0;
  double exp_neg_tla = 1.0;
  double tsa = 0.0;
  double tir = 0.0;
  double score = 0.0;
  std::size_t pooled_gt_teeth = 0;
  std::vector<ScanEvalPartial> per_scan;
};

/// Explicit predicted centroids keyed by predicted instance id; replaces the
/// vertex-mean centroid of those instances.
using CentroidOverrides = std::map<int, Vec3>;

/// Scores one scan. `prediction == nullopt` is the missing-output path: every
/// GT tooth gets the penalty distance, F1 0 and no identification. A
/// prediction whose arrays do not match the mesh is scored the same way, with
/// a diagnostic.
ScanEvalPartial evaluate_scan(const TriMesh& gt_mesh, const ScanAnnotation& gt,
                              const std::optional<ScanAnnotation>& prediction, const EvalOptions& options = {},
                              const CentroidOverrides* centroid_overrides = nullptr);

/// Pools every GT tooth of every scan (not a mean of per-scan means).
EvalReport aggregate(std::vector<ScanEvalPartial> partials, const EvalOptions& options = {});

double f1_score(double precision, double recall);
double global_score(double exp_neg_tla, double tsa, double tir);

}  // namespace teethseg
