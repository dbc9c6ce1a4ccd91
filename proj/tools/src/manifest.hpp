#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace hamcarl::cli {

enum class CheckStatus { Pass, Fail, Skipped };

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  // How value is compared with threshold: "<", "<=", ">" or "==".
  std::string relation = "<";
  CheckStatus status = CheckStatus::Fail;
  std::string note;
};

// Compares value against threshold; NaN never passes.
Check make_check(std::string name, double value, const std::string& relation, double threshold);
Check skipped_check(std::string name, std::string note);

// Record of one run: resolved config, version, timing and the checks, each
// by a distinct name.
class RunManifest {
 public:
  RunManifest(std::string command, std::map<std::string, std::string> config);

  // Throws std::logic_error when a check of the same name was already added.
  void add(Check check);
  void add_output(const std::string& file) { outputs_.push_back(file); }
  void set_note(const std::string& note) { note_ = note; }

  const std::vector<Check>& checks() const { return checks_; }
  // Skipped checks count as passing.
  bool all_pass() const;

  nlohmann::json to_json(int exit_code, double wall_seconds) const;
  void write(const std::filesystem::path& path, int exit_code, double wall_seconds) const;

 private:
  std::string command_;
  std::map<std::string, std::string> config_;
  std::string started_utc_;
  std::vector<Check> checks_;
  std::vector<std::string> outputs_;
  std::string note_;
};

}  // namespace hamcarl::cli
