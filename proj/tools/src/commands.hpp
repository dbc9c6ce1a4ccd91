#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "run_config.hpp"

namespace hamcarl::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitUsage = 2,
  kExitBlowUp = 3,
  kExitFitRejected = 4,
};

struct ConfigKey {
  std::string name;
  std::string default_value;
  std::string help;
  bool is_flag = false;  // set to true by a bare --name
};

struct Command {
  std::string name;
  std::string summary;
  std::vector<ConfigKey> keys;
  // Returns the exit code; files go to the directory named by "out".
  std::function<int(const RunConfig&, std::ostream& log)> run;
};

// Keys shared by every command: out, parallel, timings, plot.
std::vector<ConfigKey> common_keys();
const std::vector<Command>& commands();
RunConfig default_config(const Command& command);

int cmd_orbit_check(const RunConfig& config, std::ostream& log);
int cmd_waring(const RunConfig& config, std::ostream& log);
int cmd_converge(const RunConfig& config, std::ostream& log);
int cmd_carleman(const RunConfig& config, std::ostream& log);
int cmd_induct(const RunConfig& config, std::ostream& log);

// Full command line without the program name. Errors go to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hamcarl::cli
