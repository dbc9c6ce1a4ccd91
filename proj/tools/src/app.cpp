#include <CLI11.hpp>

#include <cstdlib>
#include <map>

#include "commands.hpp"
#include "hamcarl/errors.hpp"
#include "hamcarl/version.hpp"

namespace hamcarl::cli {

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hamiltonian shear flows, splitting convergence and Carleman steps", "hamcarl"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  struct Parsed {
    std::string config_file;
    std::map<std::string, std::string> values;
    std::map<std::string, bool> flags;
    std::map<std::string, CLI::Option*> options;
  };
  std::map<std::string, Parsed> parsed;
  std::map<std::string, CLI::App*> subs;
  for (const auto& cmd : commands()) {
    auto* sub = app.add_subcommand(cmd.name, cmd.summary);
    auto& p = parsed[cmd.name];
    sub->add_option("--config", p.config_file, "key=value file; flags override it");
    std::vector<ConfigKey> keys = common_keys();
    keys.insert(keys.end(), cmd.keys.begin(), cmd.keys.end());
    for (const auto& k : keys) {
      const std::string help = k.default_value.empty() ? k.help : k.help + " [" + k.default_value + "]";
      if (k.is_flag) {
        p.options[k.name] = sub->add_flag("--" + k.name, p.flags[k.name], help);
      } else {
        p.options[k.name] = sub->add_option("--" + k.name, p.values[k.name], help);
      }
    }
    subs[cmd.name] = sub;
  }

  std::vector<const char*> argv{"hamcarl"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  for (const auto& cmd : commands()) {
    if (!subs[cmd.name]->parsed()) continue;
    const auto& p = parsed[cmd.name];
    try {
      RunConfig config = default_config(cmd);
      if (!p.config_file.empty()) config.load_file(p.config_file);
      const char* env = std::getenv(kOutputDirEnv);
      if (env != nullptr && *env != '\0') config.set("out", env);
      for (const auto& [key, opt] : p.options) {
        if (opt->count() == 0) continue;
        const auto flag = p.flags.find(key);
        config.set(key, flag != p.flags.end() ? (flag->second ? "true" : "false") : p.values.at(key));
      }
      return cmd.run(config, out);
    } catch (const ConfigError& e) {
      err << "hamcarl " << cmd.name << ": " << e.what() << '\n';
      return kExitUsage;
    } catch (const StructuralError& e) {
      err << "hamcarl " << cmd.name << ": " << e.what() << '\n';
      return kExitUsage;
    } catch (const FitRejectedError& e) {
      err << "hamcarl " << cmd.name << ": " << e.what() << '\n';
      return kExitFitRejected;
    } catch (const BlowUpError& e) {
      err << "hamcarl " << cmd.name << ": " << e.what() << '\n';
      return kExitBlowUp;
    } catch (const std::exception& e) {
      err << "hamcarl " << cmd.name << ": " << e.what() << '\n';
      return kExitCheckFailed;
    }
  }
  return kExitUsage;
}

}  // namespace hamcarl::cli
