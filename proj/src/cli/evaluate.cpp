#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <optional>
#include <sstream>
#include <thread>

#include "commands.hpp"
#include "teethseg/error.hpp"
#include "teethseg/format.hpp"
#include "teethseg/metrics.hpp"

namespace teethseg::cli {

namespace {

namespace fs = std::filesystem;

struct ScanPair {
  std::string stem;
  std::string gt_mesh;
  std::string gt_labels;
  std::string prediction;
  std::string centroids;  // optional {"instance id": [x, y, z]} overrides
};

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    auto begin = field.find_first_not_of(" \t\r");
    auto end = field.find_last_not_of(" \t\r");
    fields.push_back(begin == std::string::npos ? std::string() : field.substr(begin, end - begin + 1));
  }
  return fields;
}

std::vector<ScanPair> pairs_from_manifest(const std::string& path) {
  const fs::path base = fs::path(path).parent_path();
  auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? p : (base / p).string(); };
  std::istringstream in(read_text(path));
  std::vector<ScanPair> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = split_csv_line(line);
    if (fields.empty() || (fields.size() == 1 && fields[0].empty())) continue;
    if (line_no == 1 && fields[0] == "stem") continue;
    if (fields.size() != 4 && fields.size() != 5) {
      throw Error(ErrorCode::parse_error, path + ":" + std::to_string(line_no) + ": expected 4 or 5 fields");
    }
    std::string centroids = fields.size() == 5 && !fields[4].empty() ? resolve(fields[4]) : std::string();
    pairs.push_back({fields[0], resolve(fields[1]), resolve(fields[2]), resolve(fields[3]), centroids});
  }
  return pairs;
}

std::vector<ScanPair> pairs_from_dirs(const std::string& gt_dir, const std::string& pred_dir) {
  std::error_code ec;
  fs::directory_iterator it(gt_dir, ec);
  if (ec) throw Error(ErrorCode::io_error, "cannot list " + gt_dir + ": " + ec.message());
  std::vector<std::string> stems;
  for (const auto& entry : it) {
    if (entry.path().extension() == ".obj") stems.push_back(entry.path().stem().string());
  }
  std::sort(stems.begin(), stems.end());
  std::vector<ScanPair> pairs;
  for (const auto& stem : stems) {
    fs::path centroids = fs::path(pred_dir) / (stem + ".centroids.json");
    pairs.push_back({stem, (fs::path(gt_dir) / (stem + ".obj")).string(),
                     (fs::path(gt_dir) / (stem + ".json")).string(), (fs::path(pred_dir) / (stem + ".json")).string(),
                     fs::exists(centroids) ? centroids.string() : std::string()});
  }
  return pairs;
}

CentroidOverrides load_centroids(const std::string& path) {
  ordered_json doc = load_json(path);
  if (!doc.is_object()) throw Error(ErrorCode::parse_error, path + ": expected an object keyed by instance id");
  CentroidOverrides out;
  for (const auto& [key, value] : doc.items()) {
    int id = 0;
    try {
      std::size_t used = 0;
      id = std::stoi(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw Error(ErrorCode::parse_error, path + ": '" + key + "' is not an instance id");
    }
    out[id] = point_from_json(value, "centroid");
  }
  return out;
}

ScanEvalPartial evaluate_pair(const ScanPair& pair, const EvalOptions& options) {
  TriMesh mesh = load_mesh(pair.gt_mesh);
  ParsedAnnotation gt = parse_annotation(read_text(pair.gt_labels), mesh.vertex_count());

  std::optional<ScanAnnotation> prediction;
  Diagnostics pred_diags;
  try {
    ParsedAnnotation parsed = parse_annotation(read_text(pair.prediction));
    prediction = std::move(parsed.annotation);
    pred_diags = std::move(parsed.diagnostics);
  } catch (const Error& e) {
    pred_diags.add(Severity::warning, "missing-prediction",
                   "prediction " + pair.prediction + " unusable (" + e.what() + "); scored with the penalty");
  }
  std::optional<CentroidOverrides> centroids;
  if (prediction && !pair.centroids.empty()) centroids = load_centroids(pair.centroids);
  ScanEvalPartial partial =
      evaluate_scan(mesh, gt.annotation, prediction, options, centroids ? &*centroids : nullptr);
  partial.scan_id = pair.stem;
  partial.diagnostics.append(gt.diagnostics);
  partial.diagnostics.append(pred_diags);
  partial.diagnostics.sort();
  return partial;
}

}  // namespace

int cmd_evaluate(Context& ctx, const EvaluateArgs& args) {
  std::vector<ScanPair> pairs;
  if (!args.pairs.empty()) {
    pairs = pairs_from_manifest(args.pairs);
  } else if (!args.gt_dir.empty() && !args.pred_dir.empty()) {
    pairs = pairs_from_dirs(args.gt_dir, args.pred_dir);
  } else {
    throw UsageError("evaluate needs --pairs or both --gt-dir and --pred-dir");
  }

  EvalOptions options;
  options.size_definition = ctx.config.text("size_definition") == "bounding_box_diagonal"
                                ? SizeDefinition::bounding_box_diagonal
                                : SizeDefinition::bounding_sphere_diameter;
  options.tsa_averaging =
      ctx.config.text("tsa_averaging") == "symmetric" ? TsaAveraging::symmetric : TsaAveraging::gt_only;
  options.missing_penalty = ctx.config.real("missing_penalty");

  // Scans are independent; results land in input order so the pooled sums,
  // and hence the report bytes, do not depend on the pool size.
  std::size_t workers = static_cast<std::size_t>(std::max(0LL, ctx.config.integer("workers")));
  if (workers == 0) workers = std::max(1U, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(1, pairs.size()));

  std::vector<std::optional<ScanEvalPartial>> results(pairs.size());
  std::vector<std::exception_ptr> failures(pairs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < pairs.size(); i = next++) {
      try {
        results[i] = evaluate_pair(pairs[i], options);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  std::vector<ScanEvalPartial> partials;
  partials.reserve(results.size());
  for (auto& r : results) partials.push_back(std::move(*r));
  for (const auto& p : partials) emit_diagnostics(ctx.err, p.diagnostics, p.scan_id);
  EvalReport report = aggregate(std::move(partials), options);

  const std::string team = ctx.config.text("team");
  const std::string csv_header = "team,expTLA,TSA,TIR,score";
  const std::string csv_row = team + "," + format_fixed(report.exp_neg_tla, 4) + "," + format_fixed(report.tsa, 4) +
                              "," + format_fixed(report.tir, 4) + "," + format_fixed(report.score, 4);

  ordered_json doc;
  doc["config"] = ctx.config.echo("evaluate");
  doc["scans"] = report.per_scan.size();
  doc["pooled_gt_teeth"] = report.pooled_gt_teeth;
  doc["metrics"] = {{"tla", report.tla},
                    {"exp_neg_tla", report.exp_neg_tla},
                    {"tsa", report.tsa},
                    {"tir", report.tir},
                    {"score", report.score}};
  ordered_json scans = ordered_json::array();
  for (const auto& p : report.per_scan) {
    ordered_json s;
    s["scan"] = p.scan_id;
    s["missing_output"] = p.missing_output;
    ordered_json teeth = ordered_json::array();
    for (const auto& t : p.teeth) {
      teeth.push_back({{"instance", t.gt_instance_id},
                       {"label", t.gt_label},
                       {"normalized_distance", t.normalized_distance},
                       {"f1", t.f1},
                       {"identified", t.identified}});
    }
    s["teeth"] = std::move(teeth);
    s["diagnostics"] = diagnostics_json(p.diagnostics);
    scans.push_back(std::move(s));
  }
  doc["per_scan"] = std::move(scans);
  doc["leaderboard"] = {{"header", csv_header}, {"row", csv_row}};
  const std::string json_text = doc.dump(4) + "\n";
  if (!args.report.empty()) write_text(args.report, json_text);

  if (ctx.json()) {
    ctx.out << json_text;
  } else {
    ctx.out << "scans: " << report.per_scan.size() << "\n"
            << "GT teeth: " << report.pooled_gt_teeth << "\n"
            << "TLA: " << format_double(report.tla) << "\n"
            << "Exp(-TLA): " << format_double(report.exp_neg_tla) << "\n"
            << "TSA: " << format_double(report.tsa) << "\n"
            << "TIR: " << format_double(report.tir) << "\n"
            << "score: " << format_double(report.score) << "\n"
            << csv_header << "\n"
            << csv_row << "\n";
  }
  return 0;
}

}  // namespace teethseg::cli
