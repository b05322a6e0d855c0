#include "report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

namespace cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// JSON has no infinities; keep the report parseable.
json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

const std::vector<std::string>& Config::known_keys() {
  static const std::vector<std::string> keys = {
      "seed", "delta", "window", "blocks", "neg-blocks", "trials", "tol", "csv", "json",
      "group", "dim", "rep", "signals", "sets", "alpha"};
  return keys;
}

void Config::set(const std::string& key, const std::string& value) {
  const auto& k = known_keys();
  if (std::find(k.begin(), k.end(), key) == k.end()) throw ConfigError("unknown config key: " + key);
  values_[key] = value;
}

void Config::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
    set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

double Config::real(const std::string& key, double fallback) {
  double v = fallback;
  if (auto it = values_.find(key); it != values_.end()) {
    std::size_t used = 0;
    try {
      v = std::stod(it->second, &used);
    } catch (const std::exception&) {
      throw ConfigError("not a number: " + key + "=" + it->second);
    }
    if (used != it->second.size() || !std::isfinite(v)) throw ConfigError("not a number: " + key + "=" + it->second);
  }
  used_[key] = v;
  return v;
}

long Config::integer(const std::string& key, long fallback) {
  long v = fallback;
  if (auto it = values_.find(key); it != values_.end()) {
    std::size_t used = 0;
    try {
      v = std::stol(it->second, &used);
    } catch (const std::exception&) {
      throw ConfigError("not an integer: " + key + "=" + it->second);
    }
    if (used != it->second.size()) throw ConfigError("not an integer: " + key + "=" + it->second);
  }
  used_[key] = v;
  return v;
}

std::string Config::text(const std::string& key, const std::string& fallback) {
  auto it = values_.find(key);
  const std::string v = it == values_.end() ? fallback : it->second;
  used_[key] = v;
  return v;
}

double Config::positive(const std::string& key, double fallback) {
  const double v = real(key, fallback);
  if (!(v > 0.0)) throw ConfigError(key + " must be positive");
  return v;
}

json Config::given() const {
  json j = json::object();
  for (const auto& [k, v] : values_) j[k] = v;
  return j;
}

std::optional<std::filesystem::path> Config::csv_dir() const {
  auto it = values_.find("csv");
  if (it == values_.end() || it->second.empty()) return std::nullopt;
  return std::filesystem::path(it->second);
}

void SuiteReport::at_most(std::string id, std::string description, double value, double bound) {
  assertions.push_back({std::move(id), std::move(description), value, bound, value <= bound});
}

void SuiteReport::at_least(std::string id, std::string description, double value, double bound) {
  assertions.push_back({std::move(id), std::move(description), value, bound, value >= bound});
}

bool SuiteReport::pass() const {
  return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.pass; });
}

json SuiteReport::to_json(bool with_timestamp) const {
  json j;
  j["suite"] = suite;
  j["seed"] = seed;
  j["config"] = config;
  json list = json::array();
  for (const auto& a : assertions) {
    json e;
    e["id"] = a.id;
    e["description"] = a.description;
    e["value"] = number(a.value);
    e["bound"] = number(a.bound);
    e["pass"] = a.pass;
    list.push_back(std::move(e));
  }
  j["assertions"] = std::move(list);
  j["pass"] = pass();
  if (!details.empty()) j["details"] = details;
  if (with_timestamp) j["timestamp"] = utc_now();
  return j;
}

std::ofstream open_output(const std::filesystem::path& dir, const std::string& name) {
  std::ofstream out(dir / name);
  if (!out) throw ConfigError("cannot write " + (dir / name).string());
  return out;
}

void ensure_writable_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw ConfigError("cannot create csv directory " + dir.string());
  const auto probe = dir / ".write_probe";
  {
    std::ofstream out(probe);
    if (!out) throw ConfigError("csv directory not writable: " + dir.string());
  }
  std::filesystem::remove(probe, ec);
}

void ensure_writable_file(const std::filesystem::path& file) {
  const bool existed = std::filesystem::exists(file);
  {
    std::ofstream out(file, std::ios::app);
    if (!out) throw ConfigError("cannot write report " + file.string());
  }
  if (!existed) {
    std::error_code ec;
    std::filesystem::remove(file, ec);
  }
}

}  // namespace cli
