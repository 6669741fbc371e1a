#include "commands.hpp"

#include <filesystem>
#include <sstream>

#include "teethseg/error.hpp"
#include "teethseg/instances.hpp"
#include "teethseg/preprocess.hpp"
#include "teethseg/synthgen.hpp"
#include "teethseg/uvflatten.hpp"

namespace teethseg::cli {

namespace {

void print(Context& ctx, const ordered_json& doc, const std::string& human) {
  if (ctx.json()) {
    ctx.out << doc.dump(4) << '\n';
  } else {
    ctx.out << human;
  }
}

std::vector<Vec2> uv_from_json(const ordered_json& j, const char* what) {
  if (!j.is_array()) throw Error(ErrorCode::parse_error, std::string(what) + ": expected an array of [u, v]");
  std::vector<Vec2> out;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      throw Error(ErrorCode::parse_error, std::string(what) + ": expected [u, v] pairs");
    }
    out.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  return out;
}

}  // namespace

int cmd_validate(Context& ctx, const ValidateArgs& args) {
  TriMesh mesh = load_mesh(args.mesh);
  ParsedAnnotation parsed = parse_annotation(read_text(args.labels));
  Diagnostics diags = validate_scan(mesh, parsed.annotation);
  ordered_json doc;
  doc["mesh"] = args.mesh;
  doc["labels"] = args.labels;
  doc["vertices"] = mesh.vertex_count();
  doc["faces"] = mesh.face_count();
  doc["valid"] = !diags.has_errors();
  doc["diagnostics"] = diagnostics_json(diags);
  std::string human = args.mesh + ": " + std::to_string(mesh.vertex_count()) + " vertices, " +
                      std::to_string(mesh.face_count()) + " faces, " + std::to_string(diags.size()) +
                      " finding(s)\n" + diags.to_text();
  print(ctx, doc, human);
  if (diags.has_errors()) {
    Diagnostics errors;
    for (const auto& d : diags) {
      if (d.severity == Severity::error) errors.add(d.severity, d.code, d.message, d.index);
    }
    emit_diagnostics(ctx.err, errors);
    return 1;
  }
  return 0;
}

int cmd_clean(Context& ctx, const CleanArgs& args) {
  TriMesh mesh = load_mesh(args.mesh);
  std::optional<ScanAnnotation> annotation;
  if (!args.labels.empty()) annotation = parse_annotation(read_text(args.labels), mesh.vertex_count()).annotation;
  CleanupResult result = clean_mesh(mesh, annotation, ctx.config.real("merge_tolerance"));
  write_text(args.out, write_obj(result.mesh));
  if (result.annotation && !args.labels_out.empty()) write_text(args.labels_out, write_annotation(*result.annotation));
  emit_diagnostics(ctx.err, result.diagnostics);

  const auto& r = result.report;
  ordered_json doc;
  doc["config"] = ctx.config.echo("clean");
  doc["vertices"] = result.mesh.vertex_count();
  doc["faces"] = result.mesh.face_count();
  doc["removed_degenerate_faces"] = r.removed_degenerate_faces;
  doc["removed_duplicate_faces"] = r.removed_duplicate_faces;
  doc["merged_duplicate_vertices"] = r.merged_duplicate_vertices;
  doc["removed_unreferenced_vertices"] = r.removed_unreferenced_vertices;
  doc["diagnostics"] = diagnostics_json(result.diagnostics);
  std::string human = "wrote " + args.out + " (" + std::to_string(result.mesh.vertex_count()) + " vertices, " +
                      std::to_string(result.mesh.face_count()) + " faces)\n" +
                      "merged vertices: " + std::to_string(r.merged_duplicate_vertices) + "\n" +
                      "degenerate faces: " + std::to_string(r.removed_degenerate_faces) + "\n" +
                      "duplicate faces: " + std::to_string(r.removed_duplicate_faces) + "\n" +
                      "unreferenced vertices: " + std::to_string(r.removed_unreferenced_vertices) + "\n";
  print(ctx, doc, human);
  return 0;
}

int cmd_normalize(Context& ctx, const NormalizeArgs& args) {
  TriMesh mesh = load_mesh(args.mesh);
  auto weighting = ctx.config.text("pca_weighting") == "face_area" ? PcaWeighting::face_area : PcaWeighting::vertices;
  PoseResult pose = pose_normalize(mesh, weighting);
  write_text(args.out, write_obj(pose.mesh));

  ordered_json doc;
  doc["config"] = ctx.config.echo("normalize");
  ordered_json rows = ordered_json::array();
  for (int r = 0; r < 3; ++r) rows.push_back(point_json(pose.transform.rotation.row(r).transpose()));
  doc["rotation"] = rows;
  doc["translation"] = point_json(pose.transform.translation);
  doc["variances"] = point_json(pose.variances);
  std::ostringstream human;
  human << "wrote " << args.out << "\nrotation:\n" << pose.transform.rotation << "\ntranslation: "
        << pose.transform.translation.transpose() << "\nvariances: " << pose.variances.transpose() << '\n';
  print(ctx, doc, human.str());
  return 0;
}

int cmd_flatten(Context& ctx, const FlattenArgs& args) {
  TriMesh mesh = load_mesh(args.mesh);
  SubMesh crop = crop_sphere(mesh, Vec3(args.center[0], args.center[1], args.center[2]), args.radius);
  FlattenOptions options;
  options.weights =
      ctx.config.text("laplacian_weights") == "uniform" ? LaplacianWeights::uniform : LaplacianWeights::cotangent;
  options.tolerance = ctx.config.real("cg_tolerance");
  options.max_iterations_per_vertex = static_cast<std::size_t>(ctx.config.integer("max_iterations_per_vertex"));
  UVChart chart = harmonic_flatten(crop, options);

  ordered_json doc;
  doc["config"] = ctx.config.echo("flatten");
  doc["parent_index_map"] = crop.parent_index_map;
  ordered_json uv = ordered_json::array();
  for (const auto& p : chart.uv) uv.push_back(ordered_json::array({p.x(), p.y()}));
  doc["uv"] = std::move(uv);
  ordered_json faces = ordered_json::array();
  for (const auto& f : crop.mesh.faces) faces.push_back(ordered_json::array({f[0], f[1], f[2]}));
  doc["faces"] = std::move(faces);
  doc["boundary_loop"] = chart.boundary_loop;
  CurvatureField curvature = max_curvature(crop.mesh);
  doc["curvature"] = curvature.values;
  emit_diagnostics(ctx.err, curvature.diagnostics);
  doc["residual_inf"] = chart.residual_inf;
  doc["iterations"] = chart.iterations;
  write_text(args.out, doc.dump(4) + "\n");

  ordered_json summary;
  summary["chart"] = args.out;
  summary["vertices"] = crop.mesh.vertex_count();
  summary["boundary_vertices"] = chart.boundary_loop.size();
  summary["residual_inf"] = chart.residual_inf;
  summary["iterations"] = chart.iterations;
  std::ostringstream human;
  human << "wrote " << args.out << ": " << crop.mesh.vertex_count() << " vertices, " << chart.boundary_loop.size()
        << " on the boundary, residual " << chart.residual_inf << " after " << chart.iterations << " iterations\n";
  print(ctx, summary, human.str());
  return 0;
}

int cmd_backproject(Context& ctx, const BackprojectArgs& args) {
  ordered_json chart = load_json(args.chart);
  if (!chart.contains("parent_index_map") || !chart.contains("uv")) {
    throw Error(ErrorCode::parse_error, args.chart + ": chart needs parent_index_map and uv");
  }
  auto parent = chart["parent_index_map"].get<std::vector<Index>>();
  auto uv = uv_from_json(chart["uv"], "uv");
  if (parent.size() != uv.size()) throw Error(ErrorCode::length_mismatch, "chart uv and index map differ in length");
  ordered_json poly_doc = load_json(args.polygon);
  const ordered_json& poly_json = poly_doc.is_object() ? poly_doc.at("polygon") : poly_doc;
  auto polygon = uv_from_json(poly_json, "polygon");
  auto selected = backproject_polygon(parent, uv, polygon);

  ordered_json doc;
  doc["vertices"] = selected;
  std::string human;
  for (Index v : selected) human += std::to_string(v) + "\n";
  print(ctx, doc, human);
  return 0;
}

int cmd_synth(Context& ctx, const SynthArgs& args) {
  const auto& c = ctx.config;
  SynthConfig cfg;
  cfg.patient_id = c.text("patient_id");
  cfg.jaw = parse_jaw(c.text("jaw"));
  cfg.tooth_count = static_cast<int>(c.integer("tooth_count"));
  cfg.arch_a = c.real("arch_a");
  cfg.arch_b = c.real("arch_b");
  cfg.arch_c = c.real("arch_c");
  cfg.radius_min = c.real("radius_min");
  cfg.radius_max = c.real("radius_max");
  cfg.tooth_spacing = c.real("tooth_spacing");
  cfg.grid_spacing = c.real("grid_spacing");
  cfg.gum_band_width = c.real("gum_band_width");
  cfg.flatten_fraction = c.real("flatten_fraction");
  cfg.seed = static_cast<std::uint64_t>(c.integer("seed"));
  SynthScan scan = generate_jaw(cfg);

  std::error_code ec;
  std::filesystem::create_directories(args.out, ec);
  if (ec) throw Error(ErrorCode::io_error, "cannot create " + args.out + ": " + ec.message());
  const std::string stem = cfg.patient_id + "_" + std::string(to_string(cfg.jaw));
  const auto dir = std::filesystem::path(args.out);
  write_text((dir / (stem + ".obj")).string(), write_obj(scan.mesh));
  write_text((dir / (stem + ".json")).string(), write_annotation(scan.annotation));
  write_text((dir / "extras.json").string(), extras_to_json(scan.extras));

  ordered_json doc;
  doc["config"] = c.echo("synth");
  doc["stem"] = stem;
  doc["vertices"] = scan.mesh.vertex_count();
  doc["faces"] = scan.mesh.face_count();
  doc["labels"] = scan.extras.labels;
  std::string human = "wrote " + (dir / stem).string() + ".obj/.json and extras.json (" +
                      std::to_string(scan.mesh.vertex_count()) + " vertices, " +
                      std::to_string(scan.extras.labels.size()) + " teeth)\n";
  print(ctx, doc, human);
  return 0;
}

}  // namespace teethseg::cli
