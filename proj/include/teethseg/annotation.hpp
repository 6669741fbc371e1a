#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "teethseg/diagnostics.hpp"

namespace teethseg {

enum class Jaw { upper, lower };

std::string_view to_string(Jaw jaw);
Jaw parse_jaw(std::string_view text);  // throws Error(parse_error)

/// Per-vertex labels as shipped with the challenge data. Label and instance 0
/// are gingiva; nonzero labels are FDI codes.
struct ScanAnnotation {
  std::string patient_id;
  Jaw jaw = Jaw::upper;
  std::vector<int> labels;
  std::vector<int> instances;

  bool operator==(const ScanAnnotation&) const = default;
};

struct ParsedAnnotation {
  ScanAnnotation annotation;
  Diagnostics diagnostics;
};

/// Parses `{id_patient, jaw, labels, instances}`. Structural problems (missing
/// key, wrong types, negative instance ids, length mismatch against
/// `vertex_count`) throw; invalid FDI codes are reported as diagnostics.
ParsedAnnotation parse_annotation(std::string_view text,
                                  std::optional<std::size_t> vertex_count = std::nullopt);

/// Key order id_patient, jaw, labels, instances; one array per line.
std::string write_annotation(const ScanAnnotation& annotation);

namespace fdi {

/// Tens digit 1..4, units digit 1..8.
bool is_valid(int code);
int quadrant(int code);
int position(int code);
int make(int quadrant, int position);

/// True when the code's quadrant belongs to `jaw` (1,2 upper; 3,4 lower).
bool matches_jaw(int code, Jaw jaw);

/// The 16 codes of a jaw ordered along the arch from the patient's right to
/// left: upper 18..11,21..28, lower 48..41,31..38.
std::vector<int> arch_order(Jaw jaw);

/// Codes for `count` teeth centred on the midline, in arch order. The right
/// side receives the extra tooth when `count` is odd.
std::vector<int> arch_labels(Jaw jaw, int count);

/// Maps a side-agnostic tooth position (1 = central incisor .. 8 = third
/// molar) back to an FDI code given the jaw and side.
int from_position(Jaw jaw, bool patient_left, int position);

}  // namespace fdi

}  // namespace teethseg
