#pragma once

#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hamcarl::cli {

// Bad flags, config files or values; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kOutputDirEnv = "HAMCARL_OUTPUT_DIR";

// String-valued settings of one run. Layers, lowest first: built-in defaults,
// config file, the output-directory environment variable, command-line flags.
// Only keys present in the defaults are accepted.
class RunConfig {
 public:
  explicit RunConfig(std::map<std::string, std::string> defaults);

  // key=value lines; blank lines and '#' comments are skipped.
  void load(std::istream& in, const std::string& origin);
  void load_file(const std::string& path);
  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const { return values_.count(key) != 0; }

  const std::map<std::string, std::string>& values() const { return values_; }

  std::string text(const std::string& key) const;
  double real(const std::string& key) const;
  // real(key) that must be > 0.
  double tolerance(const std::string& key) const;
  int integer(const std::string& key) const;
  bool boolean(const std::string& key) const;
  // "4,8,16"
  std::vector<int> integers(const std::string& key) const;
  // "8:8,16:10"
  std::vector<std::pair<int, int>> int_pairs(const std::string& key) const;

 private:
  const std::string& raw(const std::string& key) const;
  std::map<std::string, std::string> values_;
};

double parse_real(const std::string& text, const std::string& what);
int parse_int(const std::string& text, const std::string& what);

}  // namespace hamcarl::cli
