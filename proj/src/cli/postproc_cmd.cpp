#include <sstream>

#include "commands.hpp"
#include "teethseg/error.hpp"
#include "teethseg/postproc/arch.hpp"
#include "teethseg/postproc/clustering.hpp"
#include "teethseg/postproc/interpolation.hpp"
#include "teethseg/postproc/labels.hpp"
#include "teethseg/postproc/random_walker.hpp"
#include "teethseg/postproc/sampling.hpp"
#include "teethseg/topology.hpp"

namespace teethseg::cli {

namespace {

using namespace teethseg::postproc;

const ordered_json& field(const ordered_json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw Error(ErrorCode::parse_error, std::string("input is missing '") + key + "'");
  }
  return doc.at(key);
}

template <typename T>
T as(const ordered_json& doc, const char* key) {
  try {
    return field(doc, key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("input field '") + key + "': " + e.what());
  }
}

int int_setting(const Context& ctx, const char* key) { return static_cast<int>(ctx.config.integer(key)); }

template <typename T>
std::string join(const std::vector<T>& values) {
  std::ostringstream s;
  for (std::size_t i = 0; i < values.size(); ++i) s << (i ? " " : "") << values[i];
  return s.str();
}

}  // namespace

int cmd_postproc(Context& ctx, const PostprocArgs& args) {
  const std::string& op = args.op;
  const bool needs_mesh = op == "island-removal" || op == "label-closing" || op == "random-walker" || op == "convexity";
  if (needs_mesh && args.mesh.empty()) throw UsageError("postproc " + op + " needs --mesh");
  if (op != "convexity" && args.input.empty()) throw UsageError("postproc " + op + " needs --input");
  TriMesh mesh;
  if (needs_mesh) mesh = load_mesh(args.mesh);
  ordered_json in = args.input.empty() ? ordered_json::object() : load_json(args.input);

  ordered_json doc;
  doc["config"] = ctx.config.echo("postproc");
  doc["op"] = op;
  std::string human;

  if (op == "island-removal" || op == "label-closing") {
    auto labels = as<std::vector<int>>(in, "labels");
    LabeledFaceField out =
        op == "island-removal"
            ? island_removal(mesh, labels, static_cast<std::size_t>(std::max(0, int_setting(ctx, "min_island_faces"))))
            : label_closing(mesh, labels, int_setting(ctx, "closing_iterations"));
    doc["labels"] = out;
    human = join(out) + "\n";
  } else if (op == "majority-vote") {
    std::vector<std::vector<FaceHit>> hits;
    for (const auto& face : field(in, "faces")) {
      auto& row = hits.emplace_back();
      for (const auto& hit : face) row.push_back({hit.at(0).get<int>(), hit.at(1).get<double>()});
    }
    auto out = majority_vote_fusion(hits);
    doc["labels"] = out;
    human = join(out) + "\n";
  } else if (op == "dbscan") {
    auto ids = dbscan(points_from_json(field(in, "points"), "points"), ctx.config.real("eps"),
                      static_cast<std::size_t>(std::max(1, int_setting(ctx, "min_pts"))));
    doc["clusters"] = ids;
    human = join(ids) + "\n";
  } else if (op == "density-peaks") {
    auto r = density_peaks(points_from_json(field(in, "points"), "points"), ctx.config.real("cutoff"),
                           int_setting(ctx, "clusters"));
    doc["centers"] = r.centers;
    doc["assignment"] = r.assignment;
    doc["rho"] = r.rho;
    doc["delta"] = r.delta;
    human = "centers: " + join(r.centers) + "\nassignment: " + join(r.assignment) + "\n";
  } else if (op == "offset-cluster") {
    auto mask_ints = as<std::vector<int>>(in, "gingiva_mask");
    std::vector<char> mask(mask_ints.begin(), mask_ints.end());
    auto ids = offset_shift_cluster(points_from_json(field(in, "points"), "points"),
                                    points_from_json(field(in, "offsets"), "offsets"), mask, ctx.config.real("eps"),
                                    static_cast<std::size_t>(std::max(1, int_setting(ctx, "min_pts"))));
    doc["instances"] = ids;
    human = join(ids) + "\n";
  } else if (op == "fps") {
    auto picked = farthest_point_sampling(points_from_json(field(in, "points"), "points"), int_setting(ctx, "samples"),
                                          int_setting(ctx, "seed_index"));
    doc["indices"] = picked;
    human = join(picked) + "\n";
  } else if (op == "boundary-sample") {
    auto picked = boundary_aware_sample(points_from_json(field(in, "points"), "points"),
                                        as<std::vector<int>>(in, "instance_ids"), int_setting(ctx, "neighbors"),
                                        int_setting(ctx, "extra_samples"), int_setting(ctx, "seed_index"));
    doc["indices"] = picked;
    human = join(picked) + "\n";
  } else if (op == "grid-subsample") {
    auto picked = grid_subsample(points_from_json(field(in, "points"), "points"), ctx.config.real("cell_size"));
    doc["indices"] = picked;
    human = join(picked) + "\n";
  } else if (op == "arch-fit") {
    ArchCurve curve = fit_arch_curve(points_from_json(field(in, "centroids"), "centroids"));
    doc["a"] = curve.a;
    doc["b"] = curve.b;
    doc["c"] = curve.c;
    doc["residual"] = curve.residual;
    std::ostringstream s;
    s.precision(17);
    s << "a " << curve.a << "\nb " << curve.b << "\nc " << curve.c << "\nresidual " << curve.residual << '\n';
    human = s.str();
  } else if (op == "arch-correct") {
    Jaw jaw = parse_jaw(as<std::string>(in, "jaw"));
    std::vector<ArchTooth> teeth;
    Points centroids;
    for (const auto& t : field(in, "teeth")) {
      teeth.push_back({point_from_json(t.at("centroid"), "centroid"), t.at("label").get<int>()});
      centroids.push_back(teeth.back().centroid);
    }
    ArchCurve curve = fit_arch_curve(centroids);
    auto labels = arch_label_correct(teeth, curve, jaw);
    doc["labels"] = labels;
    human = join(labels) + "\n";
  } else if (op == "knn") {
    Points labeled = points_from_json(field(in, "labeled"), "labeled");
    Points queries = points_from_json(field(in, "queries"), "queries");
    const int k = int_setting(ctx, "neighbors");
    if (ctx.config.text("knn_mode") == "vote") {
      auto labels = knn_label_vote(labeled, as<std::vector<int>>(in, "labels"), queries, k);
      doc["labels"] = labels;
      human = join(labels) + "\n";
    } else {
      auto logits = knn_logit_interpolate(labeled, as<std::vector<std::vector<double>>>(in, "logits"), queries, k);
      doc["logits"] = logits;
      for (const auto& row : logits) human += join(row) + "\n";
    }
  } else if (op == "merge-proposals") {
    std::vector<Proposal> proposals;
    for (const auto& p : field(in, "proposals")) {
      Proposal prop;
      prop.indices = as<std::vector<Index>>(p, "indices");
      prop.seg_logits = as<std::vector<double>>(p, "seg_logits");
      auto cls = as<std::vector<double>>(p, "class_logits");
      if (cls.size() != kProposalClasses) throw Error(ErrorCode::length_mismatch, "class_logits needs 7 entries");
      std::copy(cls.begin(), cls.end(), prop.class_logits.begin());
      proposals.push_back(std::move(prop));
    }
    auto merged = merge_proposals(proposals, ctx.config.real("iou_threshold"));
    ordered_json arr = ordered_json::array();
    for (const auto& p : merged) {
      arr.push_back({{"indices", p.indices},
                     {"seg_logits", p.seg_logits},
                     {"class_logits", std::vector<double>(p.class_logits.begin(), p.class_logits.end())}});
      human += join(p.indices) + "\n";
    }
    doc["proposals"] = std::move(arr);
  } else if (op == "random-walker") {
    std::map<Index, int> seeds;
    for (const auto& s : field(in, "seeds")) seeds[s.at(0).get<Index>()] = s.at(1).get<int>();
    std::vector<double> feature =
        in.contains("edge_feature") ? as<std::vector<double>>(in, "edge_feature") : convexity_feature(mesh);
    auto result = random_walker(mesh, seeds, feature, ctx.config.real("beta"));
    doc["labels"] = result.labels;
    doc["label_set"] = result.label_set;
    doc["probability"] = result.probability;
    human = join(result.labels) + "\n";
  } else if (op == "convexity") {
    MeshTopology topo(mesh);
    auto feature = convexity_feature(mesh);
    ordered_json edges = ordered_json::array();
    for (const auto& e : topo.edges()) edges.push_back(ordered_json::array({e.a, e.b}));
    doc["edges"] = std::move(edges);
    doc["feature"] = feature;
    for (std::size_t e = 0; e < feature.size(); ++e) {
      human += std::to_string(topo.edges()[e].a) + " " + std::to_string(topo.edges()[e].b) + " " +
               std::to_string(feature[e]) + "\n";
    }
  } else {
    throw UsageError("unknown postproc operation " + op);
  }

  if (ctx.json()) {
    ctx.out << doc.dump(4) << '\n';
  } else {
    ctx.out << human;
  }
  return 0;
}

}  // namespace teethseg::cli
