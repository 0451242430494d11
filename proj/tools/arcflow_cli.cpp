// Command-line front end. Settings are applied in order: defaults, the
// --config file, --seed, then each --set in the order given.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "arcflow/arcflow.h"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitIo = 4;

int exit_for(arcf_status s) {
  switch (s) {
    case ARCF_CONFIG:
    case ARCF_INVALID_ARGUMENT:
      return kExitConfig;
    case ARCF_IO:
      return kExitIo;
    default:
      return kExitRuntime;
  }
}

int report_error(arcf_status s) {
  std::cerr << "arcflow: " << arcf_status_name(s) << ": " << arcf_last_error() << "\n";
  return exit_for(s);
}

struct Options {
  std::string config_path;
  std::string out_dir = "out";
  std::vector<std::string> sets;
  long long seed = -1;
};

int run(const std::string& command, const Options& opt) {
  arcf_config* cfg = nullptr;
  arcf_status s;
  if (opt.config_path.empty()) {
    s = arcf_config_create(&cfg);
  } else {
    std::ifstream in(opt.config_path);
    if (!in) {
      std::cerr << "arcflow: cannot read config file " << opt.config_path << "\n";
      return kExitIo;
    }
    std::ostringstream text;
    text << in.rdbuf();
    s = arcf_config_parse(text.str().c_str(), &cfg);
  }
  if (s != ARCF_OK) return report_error(s);

  if (s == ARCF_OK && opt.seed >= 0)
    s = arcf_config_set(cfg, "solver.seed", std::to_string(opt.seed).c_str());
  for (const auto& kv : opt.sets) {
    if (s != ARCF_OK) break;
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::cerr << "arcflow: --set expects section.key=value, got '" << kv << "'\n";
      arcf_config_destroy(cfg);
      return kExitConfig;
    }
    s = arcf_config_set(cfg, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
  }
  if (s == ARCF_OK) s = arcf_config_validate(cfg);
  if (s != ARCF_OK) {
    arcf_config_destroy(cfg);
    return report_error(s);
  }

  arcf_report* rep = nullptr;
  s = arcf_run_experiment(command.c_str(), cfg, opt.out_dir.c_str(), &rep);
  arcf_config_destroy(cfg);
  if (s != ARCF_OK) return report_error(s);
  std::cout << arcf_report_summary(rep);
  const int code = arcf_report_exit_code(rep);
  arcf_report_destroy(rep);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral solver for the arctangent transport equation on the circle"};
  app.set_version_flag("--version", std::string(arcf_version()));
  app.require_subcommand(1);

  Options opt;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"solve", "Integrate one run and check the maximum principle, energy and mass"},
      {"sweep-delta", "Solve for a decreasing sequence of delta and compare members"},
      {"smoothing", "Fit the decay of a high Sobolev norm on log-spaced snapshots"},
      {"stability", "Compare runs from perturbed initial data"},
      {"roots-compare", "Compare polynomial root flow with the density solution"},
      {"check-operators", "Run the spectral operator battery"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config_path, "Configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out_dir, "Output directory")->capture_default_str();
    sub->add_option("--set", opt.sets, "Override, section.key=value (repeatable)")
        ->expected(1)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    sub->add_option("--seed", opt.seed, "Random seed")->check(CLI::NonNegativeNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  return run(app.get_subcommands().front()->get_name(), opt);
}
