#include "teethseg/diagnostics.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "teethseg/error.hpp"

namespace teethseg {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::length_mismatch: return "length-mismatch";
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::degenerate_geometry: return "degenerate-geometry";
    case ErrorCode::empty_selection: return "empty-selection";
    case ErrorCode::not_a_disk: return "not-a-disk";
    case ErrorCode::numerical_failure: return "numerical-failure";
    case ErrorCode::invalid_polygon: return "invalid-polygon";
    case ErrorCode::no_anchor: return "no-anchor";
    case ErrorCode::unreachable_region: return "unreachable-region";
    case ErrorCode::degenerate_fit: return "degenerate-fit";
    case ErrorCode::too_many_teeth: return "too-many-teeth";
    case ErrorCode::empty_evaluation: return "empty-evaluation";
    case ErrorCode::overlap_validation: return "overlap-validation";
    case ErrorCode::invalid_index: return "invalid-index";
    case ErrorCode::io_error: return "io-error";
  }
  return "unknown";
}

void Diagnostics::add(Severity severity, std::string code, std::string message,
                      std::optional<std::int64_t> index) {
  items_.push_back({severity, std::move(code), std::move(message), index});
}

void Diagnostics::append(const Diagnostics& other) {
  items_.insert(items_.end(), other.items_.begin(), other.items_.end());
}

void Diagnostics::sort() {
  std::stable_sort(items_.begin(), items_.end(), [](const Diagnostic& a, const Diagnostic& b) {
    if (a.code != b.code) return a.code < b.code;
    return a.index < b.index;  // nullopt < any value
  });
}

bool Diagnostics::has_errors() const {
  return std::any_of(items_.begin(), items_.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::error; });
}

bool Diagnostics::contains(const std::string& code) const {
  return std::any_of(items_.begin(), items_.end(),
                     [&](const Diagnostic& d) { return d.code == code; });
}

std::string Diagnostics::to_text() const {
  std::ostringstream out;
  for (const auto& d : items_) {
    out << (d.severity == Severity::error ? "ERROR" : "WARNING") << ' ' << d.code << ' ';
    if (d.index) {
      out << *d.index;
    } else {
      out << '-';
    }
    out << ": " << d.message << '\n';
  }
  return out.str();
}

std::string Diagnostics::to_json() const {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& d : items_) {
    nlohmann::ordered_json j;
    j["severity"] = d.severity == Severity::error ? "error" : "warning";
    j["code"] = d.code;
    j["index"] = d.index ? nlohmann::ordered_json(*d.index) : nlohmann::ordered_json(nullptr);
    j["message"] = d.message;
    arr.push_back(std::move(j));
  }
  return arr.dump();
}

}  // namespace teethseg
