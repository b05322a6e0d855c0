#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace cli {

using json = nlohmann::ordered_json;

/// Bad configuration: unknown key or experiment, invalid grid, unwritable path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat key=value settings. Getters record every value they hand out, with
/// defaults filled in, so the report shows the configuration actually used.
class Config {
 public:
  static const std::vector<std::string>& known_keys();

  void set(const std::string& key, const std::string& value);
  /// Lines "key = value"; '#' starts a comment. Throws ConfigError.
  void load_file(const std::filesystem::path& path);
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  /// Value as given, not recorded in used().
  std::optional<std::string> raw(const std::string& key) const {
    auto it = values_.find(key);
    return it == values_.end() ? std::nullopt : std::optional<std::string>(it->second);
  }

  double real(const std::string& key, double fallback);
  long integer(const std::string& key, long fallback);
  std::string text(const std::string& key, const std::string& fallback);
  std::uint64_t seed() { return static_cast<std::uint64_t>(integer("seed", 7)); }
  /// Strictly positive real.
  double positive(const std::string& key, double fallback);

  const json& used() const { return used_; }
  /// Values set explicitly, from the file or the command line.
  json given() const;
  std::optional<std::filesystem::path> csv_dir() const;

 private:
  std::map<std::string, std::string> values_;
  json used_ = json::object();
};

struct Assertion {
  std::string id;
  std::string description;
  double value = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  json config = json::object();
  std::vector<Assertion> assertions;
  json details = json::object();

  void at_most(std::string id, std::string description, double value, double bound);
  void at_least(std::string id, std::string description, double value, double bound);
  bool pass() const;
  json to_json(bool with_timestamp = true) const;
};

/// Opens dir/name for writing; throws ConfigError if that fails.
std::ofstream open_output(const std::filesystem::path& dir, const std::string& name);

/// Creates the directory if needed; throws ConfigError if it is not writable.
void ensure_writable_dir(const std::filesystem::path& dir);
void ensure_writable_file(const std::filesystem::path& file);

}  // namespace cli
