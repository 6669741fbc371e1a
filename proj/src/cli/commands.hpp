#pragma once

#include <array>
#include <ostream>
#include <string>
#include <vector>

#include "run_config.hpp"
#include "teethseg/annotation.hpp"
#include "teethseg/diagnostics.hpp"
#include "teethseg/mesh.hpp"

namespace teethseg::cli {

struct Context {
  RunConfig config;
  std::ostream& out;
  std::ostream& err;

  bool json() const { return config.boolean("json"); }
};

// File helpers; failures throw Error(io_error) or Error(parse_error).
std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);
TriMesh load_mesh(const std::string& path);
ordered_json load_json(const std::string& path);

/// One JSON object per diagnostic, one per line.
void emit_diagnostics(std::ostream& err, const Diagnostics& diagnostics, const std::string& scan = {});
ordered_json diagnostics_json(const Diagnostics& diagnostics);

ordered_json point_json(const Vec3& p);
Points points_from_json(const ordered_json& j, const char* what);
Vec3 point_from_json(const ordered_json& j, const char* what);

struct ValidateArgs {
  std::string mesh, labels;
};
struct CleanArgs {
  std::string mesh, labels, out, labels_out;
};
struct NormalizeArgs {
  std::string mesh, out;
};
struct FlattenArgs {
  std::string mesh, out;
  std::vector<double> center;
  double radius = 0.0;
};
struct BackprojectArgs {
  std::string chart, polygon;
};
struct EvaluateArgs {
  std::string gt_dir, pred_dir, pairs, report;
};
struct SynthArgs {
  std::string out;
};
struct PostprocArgs {
  std::string op, mesh, input;
};
struct LossArgs {
  std::string name, input;
};

int cmd_validate(Context& ctx, const ValidateArgs& args);
int cmd_clean(Context& ctx, const CleanArgs& args);
int cmd_normalize(Context& ctx, const NormalizeArgs& args);
int cmd_flatten(Context& ctx, const FlattenArgs& args);
int cmd_backproject(Context& ctx, const BackprojectArgs& args);
int cmd_evaluate(Context& ctx, const EvaluateArgs& args);
int cmd_synth(Context& ctx, const SynthArgs& args);
int cmd_postproc(Context& ctx, const PostprocArgs& args);
int cmd_losses(Context& ctx, const LossArgs& args);

inline const std::vector<std::string>& postproc_ops() {
  static const std::vector<std::string> ops = {
      "island-removal", "label-closing",  "majority-vote", "dbscan",        "density-peaks",
      "offset-cluster", "fps",            "boundary-sample", "grid-subsample", "arch-fit",
      "arch-correct",   "knn",            "merge-proposals", "random-walker", "convexity"};
  return ops;
}

inline const std::vector<std::string>& loss_names() {
  static const std::vector<std::string> names = {"smooth-l1", "chamfer", "igip", "champers",
                                                 "dice-ce",   "patch-weight", "periphery"};
  return names;
}

}  // namespace teethseg::cli
