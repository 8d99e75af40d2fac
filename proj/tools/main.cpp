#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nsmab/driver.hpp"

// Command line front end:
//   nsmab run <config>          run one experiment from a config file
//   nsmab panel <name> <dir>    run a built-in experiment panel (or "all")
//   nsmab verify <suite>        run a verification suite
// Exit codes: 0 ok, 1 check failed, 2 config or I/O error.
// NSMAB_THREADS overrides the trial-level thread count.

int main(int argc, char** argv) {
  CLI::App app{"non-stationary rested bandit simulator"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "run an experiment from a config file");
  run->add_option("config", config_path, "path to a key=value config file")->required();

  std::string panel_name;
  std::string panel_dir;
  auto* panel = app.add_subcommand("panel", "run a built-in panel with the default parameters");
  panel->add_option("name", panel_name,
                    "one of: iid, rarely_changing, rotting, drifting, known_trend, periodic, all")
      ->required();
  panel->add_option("dir", panel_dir, "output directory for the CSV files")->required();

  std::string suite;
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite, "one of: concentration, log-growth, discrepancy-zero")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return nsmab::kExitConfigOrIo;
  }

  if (*run) {
    return nsmab::run_config_file(config_path, std::cout, std::cerr);
  }
  if (*panel) {
    const auto& names = nsmab::panel_names();
    if (panel_name != "all" &&
        std::find(names.begin(), names.end(), panel_name) == names.end()) {
      std::cerr << "unknown panel '" << panel_name << "'\n";
      return nsmab::kExitConfigOrIo;
    }
    return nsmab::run_panel(panel_name, panel_dir, nsmab::PanelParams{}, std::cout, std::cerr);
  }
  if (*verify) {
    if (suite == "concentration") return nsmab::verify_concentration(std::cout);
    if (suite == "discrepancy-zero") return nsmab::verify_discrepancy_zero(std::cout);
    if (suite == "log-growth") return nsmab::verify_log_growth(std::cout);
    std::cerr << "unknown verify suite '" << suite << "'\n";
    return nsmab::kExitConfigOrIo;
  }
  return nsmab::kExitConfigOrIo;
}
