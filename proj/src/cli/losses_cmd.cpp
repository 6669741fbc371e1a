#include <cmath>
#include <cstdio>
#include <string>

#include "commands.hpp"
#include "teethseg/error.hpp"
#include "teethseg/losses.hpp"

namespace teethseg::cli {

namespace {

const ordered_json& field(const ordered_json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw Error(ErrorCode::parse_error, std::string("input is missing '") + key + "'");
  }
  return doc.at(key);
}

std::string g12(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

}  // namespace

int cmd_losses(Context& ctx, const LossArgs& args) {
  ordered_json in = load_json(args.input);
  const std::string& name = args.name;
  double value = 0.0;
  Diagnostics diags;
  std::vector<Index> indices;

  if (name == "smooth-l1") {
    auto x = field(in, "x").get<std::vector<double>>();
    value = smooth_l1(Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size())));
  } else if (name == "chamfer") {
    value = chamfer_distance(points_from_json(field(in, "a"), "a"), points_from_json(field(in, "b"), "b"));
  } else if (name == "igip") {
    double lambda = in.contains("lambda") ? in["lambda"].get<double>() : ctx.config.real("lambda");
    auto r = igip_centroid_loss(points_from_json(field(in, "predicted"), "predicted"),
                                points_from_json(field(in, "targets"), "targets"), lambda);
    value = r.value;
    diags = std::move(r.diagnostics);
  } else if (name == "champers") {
    CentroidTargets targets{points_from_json(field(in, "centroids"), "centroids"),
                            field(in, "radii").get<std::vector<double>>()};
    auto r = champers_centroid_loss(points_from_json(field(in, "points"), "points"),
                                    points_from_json(field(in, "offsets"), "offsets"), targets,
                                    field(in, "k").get<int>());
    value = r.value;
    diags = std::move(r.diagnostics);
  } else if (name == "dice-ce") {
    auto variant = ctx.config.text("dice_variant") == "standard" ? DiceVariant::standard : DiceVariant::printed;
    auto r = dice_ce_loss(field(in, "probabilities").get<std::vector<std::vector<double>>>(),
                          field(in, "targets").get<std::vector<std::vector<double>>>(), field(in, "w0").get<double>(),
                          field(in, "w1").get<double>(), variant);
    value = r.value;
    diags = std::move(r.diagnostics);
  } else if (name == "patch-weight") {
    value = patch_distance_weight(point_from_json(field(in, "sample"), "sample"),
                                  point_from_json(field(in, "centroid"), "centroid"));
  } else if (name == "periphery") {
    indices = periphery_filter(points_from_json(field(in, "points"), "points"),
                               field(in, "distances").get<std::vector<double>>(), field(in, "threshold").get<double>());
  } else {
    throw UsageError("unknown loss " + name);
  }
  emit_diagnostics(ctx.err, diags);

  if (ctx.json()) {
    ordered_json doc;
    doc["config"] = ctx.config.echo("losses");
    doc["loss"] = name;
    if (name == "periphery") {
      doc["indices"] = indices;
    } else {
      doc["value"] = std::isfinite(value) ? ordered_json(std::stod(g12(value))) : ordered_json(g12(value));
    }
    doc["diagnostics"] = diagnostics_json(diags);
    ctx.out << doc.dump(4) << '\n';
  } else if (name == "periphery") {
    for (Index i : indices) ctx.out << i << '\n';
  } else {
    ctx.out << g12(value) << '\n';
  }
  return 0;
}

}  // namespace teethseg::cli
