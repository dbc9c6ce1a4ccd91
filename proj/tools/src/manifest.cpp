#include "manifest.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <stdexcept>

#include "hamcarl/version.hpp"

namespace hamcarl::cli {

namespace {

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

const char* status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass:
      return "pass";
    case CheckStatus::Fail:
      return "fail";
    case CheckStatus::Skipped:
      return "skipped";
  }
  return "fail";
}

}  // namespace

Check make_check(std::string name, double value, const std::string& relation, double threshold) {
  bool ok = false;
  if (relation == "<") {
    ok = value < threshold;
  } else if (relation == "<=") {
    ok = value <= threshold;
  } else if (relation == ">") {
    ok = value > threshold;
  } else if (relation == "==") {
    ok = value == threshold;
  } else {
    throw std::logic_error("unknown check relation " + relation);
  }
  return Check{std::move(name), value, threshold, relation, ok ? CheckStatus::Pass : CheckStatus::Fail, ""};
}

Check skipped_check(std::string name, std::string note) {
  Check c;
  c.name = std::move(name);
  c.value = std::nan("");
  c.threshold = std::nan("");
  c.relation = "";
  c.status = CheckStatus::Skipped;
  c.note = std::move(note);
  return c;
}

RunManifest::RunManifest(std::string command, std::map<std::string, std::string> config)
    : command_(std::move(command)), config_(std::move(config)), started_utc_(utc_now()) {}

void RunManifest::add(Check check) {
  for (const auto& c : checks_) {
    if (c.name == check.name) throw std::logic_error("check '" + check.name + "' recorded twice");
  }
  checks_.push_back(std::move(check));
}

bool RunManifest::all_pass() const {
  for (const auto& c : checks_) {
    if (c.status == CheckStatus::Fail) return false;
  }
  return true;
}

nlohmann::json RunManifest::to_json(int exit_code, double wall_seconds) const {
  nlohmann::json j;
  j["tool"] = "hamcarl";
  j["version"] = kVersion;
  j["command"] = command_;
  j["config"] = config_;
  j["started_utc"] = started_utc_;
  j["wall_seconds"] = wall_seconds;
  j["exit_code"] = exit_code;
  j["outputs"] = outputs_;
  if (!note_.empty()) j["note"] = note_;
  auto& checks = j["checks"] = nlohmann::json::array();
  for (const auto& c : checks_) {
    nlohmann::json e{{"name", c.name}, {"status", status_name(c.status)}};
    // JSON has no NaN; absent measurements are written as null.
    e["value"] = std::isfinite(c.value) ? nlohmann::json(c.value) : nlohmann::json(nullptr);
    e["threshold"] = std::isfinite(c.threshold) ? nlohmann::json(c.threshold) : nlohmann::json(nullptr);
    if (!c.relation.empty()) e["relation"] = c.relation;
    if (!c.note.empty()) e["note"] = c.note;
    checks.push_back(std::move(e));
  }
  return j;
}

void RunManifest::write(const std::filesystem::path& path, int exit_code, double wall_seconds) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << to_json(exit_code, wall_seconds).dump(2) << '\n';
}

}  // namespace hamcarl::cli
