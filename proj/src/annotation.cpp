#include "teethseg/annotation.hpp"

#include <map>
#include <string>

#include <json.hpp>

#include "teethseg/error.hpp"

namespace teethseg {

using nlohmann::json;

std::string_view to_string(Jaw jaw) { return jaw == Jaw::upper ? "upper" : "lower"; }

Jaw parse_jaw(std::string_view text) {
  if (text == "upper") return Jaw::upper;
  if (text == "lower") return Jaw::lower;
  throw Error(ErrorCode::parse_error, "jaw must be 'upper' or 'lower', got '" + std::string(text) + "'");
}

namespace {

std::vector<int> int_array(const json& doc, const char* key) {
  const auto& arr = doc.at(key);
  if (!arr.is_array()) throw Error(ErrorCode::parse_error, std::string("'") + key + "' is not an array");
  std::vector<int> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& v = arr[i];
    if (!v.is_number_integer()) {
      throw Error(ErrorCode::parse_error,
                  std::string("'") + key + "[" + std::to_string(i) + "]' is not an integer");
    }
    auto wide = v.get<long long>();
    if (wide < INT32_MIN || wide > INT32_MAX) {
      throw Error(ErrorCode::parse_error,
                  std::string("'") + key + "[" + std::to_string(i) + "]' out of range");
    }
    out.push_back(static_cast<int>(wide));
  }
  return out;
}

void append_int_array(std::string& out, const std::vector<int>& values) {
  out += '[';
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(values[i]);
  }
  out += ']';
}

}  // namespace

ParsedAnnotation parse_annotation(std::string_view text, std::optional<std::size_t> vertex_count) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::parse_error, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::parse_error, "annotation must be a JSON object");
  for (const char* key : {"id_patient", "jaw", "labels", "instances"}) {
    if (!doc.contains(key)) throw Error(ErrorCode::parse_error, std::string("missing key '") + key + "'");
  }

  ParsedAnnotation result;
  auto& ann = result.annotation;
  if (!doc["id_patient"].is_string()) throw Error(ErrorCode::parse_error, "'id_patient' is not a string");
  if (!doc["jaw"].is_string()) throw Error(ErrorCode::parse_error, "'jaw' is not a string");
  ann.patient_id = doc["id_patient"].get<std::string>();
  ann.jaw = parse_jaw(doc["jaw"].get<std::string>());
  ann.labels = int_array(doc, "labels");
  ann.instances = int_array(doc, "instances");

  if (ann.labels.size() != ann.instances.size()) {
    throw Error(ErrorCode::length_mismatch,
                "labels has " + std::to_string(ann.labels.size()) + " entries, instances has " +
                    std::to_string(ann.instances.size()));
  }
  if (vertex_count && ann.labels.size() != *vertex_count) {
    throw Error(ErrorCode::length_mismatch,
                "annotation has " + std::to_string(ann.labels.size()) + " entries, mesh has " +
                    std::to_string(*vertex_count) + " vertices");
  }
  for (std::size_t i = 0; i < ann.instances.size(); ++i) {
    if (ann.instances[i] < 0) {
      throw Error(ErrorCode::parse_error, "negative instance id at vertex " + std::to_string(i));
    }
  }

  std::map<int, std::size_t> invalid;  // label -> first vertex
  for (std::size_t i = 0; i < ann.labels.size(); ++i) {
    int l = ann.labels[i];
    if (l != 0 && !fdi::is_valid(l)) invalid.try_emplace(l, i);
  }
  for (const auto& [label, first] : invalid) {
    result.diagnostics.add(Severity::error, "invalid-fdi",
                           "label " + std::to_string(label) + " is not an FDI tooth code",
                           static_cast<std::int64_t>(first));
  }
  result.diagnostics.sort();
  return result;
}

std::string write_annotation(const ScanAnnotation& annotation) {
  std::string out = "{\n    \"id_patient\": ";
  out += json(annotation.patient_id).dump();
  out += ",\n    \"jaw\": \"";
  out += to_string(annotation.jaw);
  out += "\",\n    \"labels\": ";
  append_int_array(out, annotation.labels);
  out += ",\n    \"instances\": ";
  append_int_array(out, annotation.instances);
  out += "\n}\n";
  return out;
}

namespace fdi {

bool is_valid(int code) {
  int q = code / 10;
  int p = code % 10;
  return code > 0 && q >= 1 && q <= 4 && p >= 1 && p <= 8;
}

int quadrant(int code) { return code / 10; }
int position(int code) { return code % 10; }
int make(int q, int p) { return 10 * q + p; }

bool matches_jaw(int code, Jaw jaw) {
  int q = quadrant(code);
  return jaw == Jaw::upper ? (q == 1 || q == 2) : (q == 3 || q == 4);
}

std::vector<int> arch_order(Jaw jaw) {
  const int right = jaw == Jaw::upper ? 1 : 4;
  const int left = jaw == Jaw::upper ? 2 : 3;
  std::vector<int> codes;
  for (int p = 8; p >= 1; --p) codes.push_back(make(right, p));
  for (int p = 1; p <= 8; ++p) codes.push_back(make(left, p));
  return codes;
}

std::vector<int> arch_labels(Jaw jaw, int count) {
  if (count < 1 || count > 16) throw Error(ErrorCode::invalid_argument, "tooth count must be 1..16");
  const int right_count = (count + 1) / 2;
  const int left_count = count / 2;
  const int right = jaw == Jaw::upper ? 1 : 4;
  const int left = jaw == Jaw::upper ? 2 : 3;
  std::vector<int> codes;
  for (int p = right_count; p >= 1; --p) codes.push_back(make(right, p));
  for (int p = 1; p <= left_count; ++p) codes.push_back(make(left, p));
  return codes;
}

int from_position(Jaw jaw, bool patient_left, int position) {
  if (position < 1 || position > 8) throw Error(ErrorCode::invalid_argument, "tooth position must be 1..8");
  int q = jaw == Jaw::upper ? (patient_left ? 2 : 1) : (patient_left ? 3 : 4);
  return make(q, position);
}

}  // namespace fdi

}  // namespace teethseg
