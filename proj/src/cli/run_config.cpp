#include "run_config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace teethseg::cli {

const std::vector<Setting>& all_settings() {
  using K = SettingKind;
  static const std::vector<Setting> settings = {
      {"json", "global", K::boolean, false, "machine-readable output"},
      {"workers", "global", K::integer, 0, "worker threads for batch commands (0 = logical cores)", {}, false},

      {"merge_tolerance", "clean", K::real, 1e-6, "vertex merge distance (mm)"},

      {"pca_weighting", "normalize", K::text, "vertices", "PCA sample weighting", {"vertices", "face_area"}},

      {"laplacian_weights", "flatten", K::text, "cotangent", "Laplacian edge weights", {"cotangent", "uniform"}},
      {"cg_tolerance", "flatten", K::real, 1e-10, "CG residual tolerance (max norm)"},
      {"max_iterations_per_vertex", "flatten", K::integer, 10, "CG iteration budget per unknown"},

      {"team", "evaluate", K::text, "submission", "team name in the leaderboard row"},
      {"size_definition", "evaluate", K::text, "bounding_sphere_diameter", "tooth size used to normalise distances",
       {"bounding_sphere_diameter", "bounding_box_diagonal"}},
      {"tsa_averaging", "evaluate", K::text, "gt_only", "TSA averaging", {"gt_only", "symmetric"}},
      {"missing_penalty", "evaluate", K::real, 5.0, "normalised distance charged per GT tooth of a missing scan"},

      {"patient_id", "synth", K::text, "synth", "patient id of the generated scan"},
      {"jaw", "synth", K::text, "lower", "jaw", {"upper", "lower"}},
      {"tooth_count", "synth", K::integer, 14, "number of teeth (4..16)"},
      {"arch_a", "synth", K::real, -0.048, "arch coefficient a (y = a x^2 + b x + c)"},
      {"arch_b", "synth", K::real, 0.0, "arch coefficient b"},
      {"arch_c", "synth", K::real, 0.0, "arch coefficient c"},
      {"radius_min", "synth", K::real, 3.0, "smallest tooth radius (mm)"},
      {"radius_max", "synth", K::real, 4.5, "largest tooth radius (mm)"},
      {"tooth_spacing", "synth", K::real, 9.5, "arc length between tooth centres (mm)"},
      {"grid_spacing", "synth", K::real, 0.5, "height-field grid step (mm)"},
      {"gum_band_width", "synth", K::real, 14.0, "gum band width (mm)"},
      {"flatten_fraction", "synth", K::real, 0.8, "cap height as a fraction of the radius"},
      {"seed", "synth", K::integer, 0, "generator seed"},

      {"min_island_faces", "postproc", K::integer, 0, "island removal: relabel components smaller than this"},
      {"closing_iterations", "postproc", K::integer, 1, "label closing steps"},
      {"eps", "postproc", K::real, 1.0, "DBSCAN radius"},
      {"min_pts", "postproc", K::integer, 3, "DBSCAN core threshold (point itself included)"},
      {"cutoff", "postproc", K::real, 1.0, "density peaks cutoff distance"},
      {"clusters", "postproc", K::integer, 2, "density peaks centre count"},
      {"samples", "postproc", K::integer, 1, "farthest-point sample count"},
      {"seed_index", "postproc", K::integer, 0, "farthest-point start index"},
      {"neighbors", "postproc", K::integer, 3, "k for kNN based operations"},
      {"extra_samples", "postproc", K::integer, 64, "boundary-aware extra samples"},
      {"cell_size", "postproc", K::real, 1.0, "grid subsampling cell (mm)"},
      {"knn_mode", "postproc", K::text, "vote", "kNN interpolation mode", {"vote", "logit"}},
      {"iou_threshold", "postproc", K::real, 0.35, "proposal merge IoU"},
      {"beta", "postproc", K::real, 10.0, "random walker weight exp(-beta * feature)"},

      {"lambda", "losses", K::real, 0.2, "separation weight of the centroid loss"},
      {"dice_variant", "losses", K::text, "printed", "Dice term", {"printed", "standard"}},
  };
  return settings;
}

std::string flag_name(const std::string& key) {
  std::string out = "--" + key;
  std::replace(out.begin(), out.end(), '_', '-');
  return out;
}

std::string env_name(const std::string& key) {
  std::string out = "TEETHSEG_" + key;
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

RunConfig::RunConfig() {
  for (const auto& s : all_settings()) values_[s.key] = s.fallback;
}

const Setting& RunConfig::find(const std::string& key) const {
  const auto& settings = all_settings();
  auto it = std::find_if(settings.begin(), settings.end(), [&](const Setting& s) { return s.key == key; });
  if (it == settings.end()) throw UsageError("unknown config key '" + key + "'");
  return *it;
}

void RunConfig::assign(const Setting& setting, const ordered_json& value) {
  bool ok = false;
  switch (setting.kind) {
    case SettingKind::integer: ok = value.is_number_integer(); break;
    case SettingKind::real: ok = value.is_number(); break;
    case SettingKind::text: ok = value.is_string(); break;
    case SettingKind::boolean: ok = value.is_boolean(); break;
  }
  if (!ok) throw UsageError("config key '" + setting.key + "' has the wrong type");
  if (setting.kind == SettingKind::text && !setting.choices.empty()) {
    const auto& v = value.get_ref<const std::string&>();
    if (std::find(setting.choices.begin(), setting.choices.end(), v) == setting.choices.end()) {
      throw UsageError("config key '" + setting.key + "' does not accept '" + v + "'");
    }
  }
  values_[setting.key] = setting.kind == SettingKind::real ? ordered_json(value.get<double>()) : value;
}

void RunConfig::merge_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  ordered_json doc;
  try {
    doc = ordered_json::parse(buffer.str());
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config file " + path + " is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) throw UsageError("config file must hold a JSON object");
  for (const auto& [key, value] : doc.items()) assign(find(key), value);
}

void RunConfig::set_text(const std::string& key, const std::string& text) {
  const Setting& s = find(key);
  auto fail = [&] { throw UsageError(flag_name(key) + ": invalid value '" + text + "'"); };
  switch (s.kind) {
    case SettingKind::integer: {
      long long v = 0;
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (ec != std::errc() || ptr != text.data() + text.size()) fail();
      assign(s, v);
      break;
    }
    case SettingKind::real: {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (ec != std::errc() || ptr != text.data() + text.size()) fail();
      assign(s, v);
      break;
    }
    case SettingKind::text:
      assign(s, text);
      break;
    case SettingKind::boolean: {
      std::string lower = text;
      for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      if (lower == "1" || lower == "true" || lower == "yes" || lower == "on") {
        assign(s, true);
      } else if (lower == "0" || lower == "false" || lower == "no" || lower == "off") {
        assign(s, false);
      } else {
        fail();
      }
      break;
    }
  }
}

long long RunConfig::integer(const std::string& key) const { return values_.at(find(key).key).get<long long>(); }
double RunConfig::real(const std::string& key) const { return values_.at(find(key).key).get<double>(); }
const std::string& RunConfig::text(const std::string& key) const {
  return values_.at(find(key).key).get_ref<const std::string&>();
}
bool RunConfig::boolean(const std::string& key) const { return values_.at(find(key).key).get<bool>(); }

ordered_json RunConfig::echo(const std::string& scope) const {
  ordered_json out = ordered_json::object();
  for (const auto& s : all_settings()) {
    if (s.echoed && (s.scope == scope || (s.scope == "global" && s.key != "json"))) out[s.key] = values_.at(s.key);
  }
  return out;
}

}  // namespace teethseg::cli
