#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace teethseg::cli {

using ordered_json = nlohmann::ordered_json;

/// Bad flags, bad config files: exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SettingKind { integer, real, text, boolean };

struct Setting {
  std::string key;    // snake_case config key; flag is --kebab-case, env TEETHSEG_UPPER_CASE
  std::string scope;  // "global" or the subcommand that reads it
  SettingKind kind;
  ordered_json fallback;
  std::string help;
  std::vector<std::string> choices;  // text settings only; empty = free text
  bool echoed = true;                // execution-only settings stay out of reports
};

const std::vector<Setting>& all_settings();
std::string flag_name(const std::string& key);
std::string env_name(const std::string& key);

/// Effective configuration: defaults, then the config file, then
/// environment/flags.
class RunConfig {
 public:
  RunConfig();

  /// Reads a JSON object of settings; unknown keys and wrong types throw
  /// UsageError.
  void merge_file(const std::string& path);
  void set_text(const std::string& key, const std::string& text);

  long long integer(const std::string& key) const;
  double real(const std::string& key) const;
  const std::string& text(const std::string& key) const;
  bool boolean(const std::string& key) const;

  /// Settings of `scope` and the global scope, for report headers.
  ordered_json echo(const std::string& scope) const;

 private:
  const Setting& find(const std::string& key) const;
  void assign(const Setting& setting, const ordered_json& value);

  std::map<std::string, ordered_json> values_;
};

}  // namespace teethseg::cli
