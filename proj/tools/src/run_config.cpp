#include "run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace hamcarl::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

}  // namespace

double parse_real(const std::string& text, const std::string& what) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ConfigError(what + ": expected a finite number, got '" + text + "'");
  }
  return v;
}

int parse_int(const std::string& text, const std::string& what) {
  int v = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError(what + ": expected an integer, got '" + text + "'");
  return v;
}

RunConfig::RunConfig(std::map<std::string, std::string> defaults) : values_(std::move(defaults)) {}

void RunConfig::load(std::istream& in, const std::string& origin) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = origin + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw ConfigError(where + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    if (!has(key)) throw ConfigError(where + ": unknown key '" + key + "'");
    values_[key] = trim(line.substr(eq + 1));
  }
}

void RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  load(in, path);
}

void RunConfig::set(const std::string& key, const std::string& value) {
  if (!has(key)) throw ConfigError("unknown key '" + key + "'");
  values_[key] = value;
}

const std::string& RunConfig::raw(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing key '" + key + "'");
  return it->second;
}

std::string RunConfig::text(const std::string& key) const { return raw(key); }

double RunConfig::real(const std::string& key) const { return parse_real(raw(key), key); }

double RunConfig::tolerance(const std::string& key) const {
  const double v = real(key);
  if (!(v > 0.0)) throw ConfigError(key + ": tolerances must be > 0");
  return v;
}

int RunConfig::integer(const std::string& key) const { return parse_int(raw(key), key); }

bool RunConfig::boolean(const std::string& key) const {
  const std::string& v = raw(key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::vector<int> RunConfig::integers(const std::string& key) const {
  std::vector<int> out;
  for (const auto& item : split(raw(key), ',')) out.push_back(parse_int(item, key));
  return out;
}

std::vector<std::pair<int, int>> RunConfig::int_pairs(const std::string& key) const {
  std::vector<std::pair<int, int>> out;
  for (const auto& item : split(raw(key), ',')) {
    const auto parts = split(item, ':');
    if (parts.size() != 2) throw ConfigError(key + ": expected a:b entries, got '" + item + "'");
    out.emplace_back(parse_int(parts[0], key), parse_int(parts[1], key));
  }
  return out;
}

}  // namespace hamcarl::cli
