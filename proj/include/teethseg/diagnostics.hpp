#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace teethseg {

enum class Severity { warning, error };

struct Diagnostic {
  Severity severity = Severity::warning;
  std::string code;
  std::string message;
  std::optional<std::int64_t> index;

  bool operator==(const Diagnostic&) const = default;
};

/// Ordered collection of findings. `sort()` puts entries in the canonical
/// (code, index) order; entries without an index sort first within a code.
class Diagnostics {
 public:
  void add(Severity severity, std::string code, std::string message,
           std::optional<std::int64_t> index = std::nullopt);
  void append(const Diagnostics& other);
  void sort();

  bool empty() const { return items_.empty(); }
  std::size_t size() const { return items_.size(); }
  bool has_errors() const;
  bool contains(const std::string& code) const;

  const std::vector<Diagnostic>& items() const { return items_; }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

  /// `SEVERITY CODE index: message`, one line per entry; `-` when no index.
  std::string to_text() const;
  std::string to_json() const;

 private:
  std::vector<Diagnostic> items_;
};

}  // namespace teethseg
