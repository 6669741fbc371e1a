#include "teethseg/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <map>
#include <sstream>

#include "commands.hpp"
#include "teethseg/error.hpp"

namespace teethseg::cli {

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot read " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::io_error, "failed reading " + path);
  return buffer.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path);
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::io_error, "failed writing " + path);
}

TriMesh load_mesh(const std::string& path) { return parse_obj(read_text(path)); }

ordered_json load_json(const std::string& path) {
  std::string text = read_text(path);
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse_error, path + ": " + e.what());
  }
}

ordered_json diagnostics_json(const Diagnostics& diagnostics) {
  ordered_json arr = ordered_json::array();
  for (const auto& d : diagnostics) {
    ordered_json item;
    item["severity"] = d.severity == Severity::error ? "error" : "warning";
    item["code"] = d.code;
    item["index"] = d.index ? ordered_json(*d.index) : ordered_json(nullptr);
    item["message"] = d.message;
    arr.push_back(std::move(item));
  }
  return arr;
}

void emit_diagnostics(std::ostream& err, const Diagnostics& diagnostics, const std::string& scan) {
  for (auto item : diagnostics_json(diagnostics)) {
    if (!scan.empty()) item["scan"] = scan;
    err << item.dump() << '\n';
  }
}

ordered_json point_json(const Vec3& p) { return ordered_json::array({p.x(), p.y(), p.z()}); }

Vec3 point_from_json(const ordered_json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorCode::parse_error, std::string(what) + ": expected [x, y, z]");
  Vec3 p;
  for (int a = 0; a < 3; ++a) {
    if (!j[a].is_number()) throw Error(ErrorCode::parse_error, std::string(what) + ": coordinates must be numbers");
    p[a] = j[a].get<double>();
  }
  return p;
}

Points points_from_json(const ordered_json& j, const char* what) {
  if (!j.is_array()) throw Error(ErrorCode::parse_error, std::string(what) + ": expected an array of points");
  Points out;
  out.reserve(j.size());
  for (const auto& p : j) out.push_back(point_from_json(p, what));
  return out;
}

namespace {

void report_error(std::ostream& err, const std::string& code, const std::string& message) {
  ordered_json item;
  item["severity"] = "error";
  item["code"] = code;
  item["index"] = nullptr;
  item["message"] = message;
  err << item.dump() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tooth segmentation evaluation and geometry toolkit", "teethseg"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::string config_path;
  app.add_option("--config", config_path, "JSON run config (flags and TEETHSEG_* variables override it)")
      ->envname("TEETHSEG_CONFIG");

  std::map<std::string, CLI::App*> scopes;
  auto sub = [&](const std::string& name, const std::string& help) {
    CLI::App* s = app.add_subcommand(name, help);
    s->fallthrough();
    scopes[name] = s;
    return s;
  };

  ValidateArgs validate;
  auto* validate_cmd = sub("validate", "Check a mesh/annotation pair");
  validate_cmd->add_option("--mesh", validate.mesh, "OBJ mesh")->required();
  validate_cmd->add_option("--labels", validate.labels, "annotation JSON")->required();

  CleanArgs clean;
  auto* clean_cmd = sub("clean", "Merge duplicate vertices and drop degenerate faces");
  clean_cmd->add_option("--mesh", clean.mesh, "input OBJ")->required();
  clean_cmd->add_option("--labels", clean.labels, "annotation to remap");
  clean_cmd->add_option("--out", clean.out, "output OBJ")->required();
  clean_cmd->add_option("--labels-out", clean.labels_out, "remapped annotation");

  NormalizeArgs normalize;
  auto* normalize_cmd = sub("normalize", "PCA pose normalisation");
  normalize_cmd->add_option("--mesh", normalize.mesh, "input OBJ")->required();
  normalize_cmd->add_option("--out", normalize.out, "output OBJ")->required();

  FlattenArgs flatten;
  auto* flatten_cmd = sub("flatten", "Crop a sphere and flatten it to the unit disk");
  flatten_cmd->add_option("--mesh", flatten.mesh, "input OBJ")->required();
  flatten_cmd->add_option("--center", flatten.center, "crop centre x y z")->required()->expected(3);
  flatten_cmd->add_option("--radius", flatten.radius, "crop radius (mm)")->required();
  flatten_cmd->add_option("--out", flatten.out, "chart JSON")->required();

  BackprojectArgs backproject;
  auto* backproject_cmd = sub("backproject", "Map a UV polygon back to mesh vertices");
  backproject_cmd->add_option("--chart", backproject.chart, "chart JSON from flatten")->required();
  backproject_cmd->add_option("--polygon", backproject.polygon, "polygon JSON")->required();

  EvaluateArgs evaluate;
  auto* evaluate_cmd = sub("evaluate", "Score predictions against ground truth");
  evaluate_cmd->add_option("--gt-dir", evaluate.gt_dir, "directory of {stem}.obj + {stem}.json");
  evaluate_cmd->add_option("--pred-dir", evaluate.pred_dir, "directory of predicted {stem}.json");
  evaluate_cmd->add_option("--pairs", evaluate.pairs, "manifest CSV: stem,gt_mesh,gt_labels,prediction[,centroids]");
  evaluate_cmd->add_option("--report", evaluate.report, "also write the JSON report here");

  SynthArgs synth;
  auto* synth_cmd = sub("synth", "Generate a synthetic jaw scan");
  synth_cmd->add_option("--out", synth.out, "output directory")->required();

  PostprocArgs postproc;
  auto* postproc_cmd = sub("postproc", "Post-processing algorithms");
  postproc_cmd->require_subcommand(1);
  for (const auto& op : postproc_ops()) {
    auto* op_cmd = postproc_cmd->add_subcommand(op, op);
    op_cmd->fallthrough();
    op_cmd->add_option("--mesh", postproc.mesh, "OBJ mesh");
    op_cmd->add_option("--input", postproc.input, "JSON input");
    op_cmd->callback([&postproc, op] { postproc.op = op; });
  }

  LossArgs loss;
  auto* losses_cmd = sub("losses", "Evaluate a loss on JSON input");
  auto* eval_cmd = losses_cmd->add_subcommand("eval", "Evaluate one loss");
  losses_cmd->require_subcommand(1);
  eval_cmd->fallthrough();
  eval_cmd->add_option("name", loss.name, "loss name")->required()->check(CLI::IsMember(loss_names()));
  eval_cmd->add_option("--input", loss.input, "JSON input")->required();

  // Tunables: one flag and one environment variable per config key.
  std::map<std::string, std::string> raw;
  std::map<std::string, bool> raw_flags;
  std::map<std::string, CLI::Option*> options;
  for (const auto& s : all_settings()) {
    CLI::App* target = s.scope == "global" ? &app : scopes.at(s.scope);
    CLI::Option* opt = nullptr;
    if (s.kind == SettingKind::boolean) {
      opt = target->add_flag(flag_name(s.key), raw_flags[s.key], s.help);
    } else {
      opt = target->add_option(flag_name(s.key), raw[s.key], s.help);
      if (!s.choices.empty()) opt->check(CLI::IsMember(s.choices));
    }
    opt->envname(env_name(s.key));
    options[s.key] = opt;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  Context ctx{RunConfig{}, out, err};
  try {
    if (!config_path.empty()) ctx.config.merge_file(config_path);
    for (const auto& [key, opt] : options) {
      if (opt->count() == 0) continue;
      auto flag = raw_flags.find(key);
      ctx.config.set_text(key, flag != raw_flags.end() ? (flag->second ? "true" : "false") : raw.at(key));
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(ctx, validate);
    if (clean_cmd->parsed()) return cmd_clean(ctx, clean);
    if (normalize_cmd->parsed()) return cmd_normalize(ctx, normalize);
    if (flatten_cmd->parsed()) return cmd_flatten(ctx, flatten);
    if (backproject_cmd->parsed()) return cmd_backproject(ctx, backproject);
    if (evaluate_cmd->parsed()) return cmd_evaluate(ctx, evaluate);
    if (synth_cmd->parsed()) return cmd_synth(ctx, synth);
    if (postproc_cmd->parsed()) return cmd_postproc(ctx, postproc);
    if (losses_cmd->parsed()) return cmd_losses(ctx, loss);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    report_error(err, std::string(to_string(e.code())), e.what());
    return kExitDomainError;
  } catch (const nlohmann::json::exception& e) {
    report_error(err, "parse-error", e.what());
    return kExitDomainError;
  } catch (const std::exception& e) {
    report_error(err, "internal-error", e.what());
    return kExitDomainError;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace teethseg::cli
