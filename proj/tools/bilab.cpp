// Command-line front end: pick a config file, apply overrides, run.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bi/config.hpp"
#include "bi/kernels.hpp"
#include "bi/run.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string output_dir;
  std::vector<std::string> overrides;
  bool verbose = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("config", args.config_path, "run configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("-o,--output", args.output_dir, "override the output directory");
  cmd->add_option("-s,--set", args.overrides,
                  "override a config value (section.key=value); repeatable");
  cmd->add_flag("-v,--verbose", args.verbose, "per-iteration solver logging");
}

int execute(const std::string& command, const CommonArgs& args) {
  bi::RunConfig cfg;
  try {
    cfg = bi::parse_config_file(args.config_path);
    for (const auto& o : args.overrides) bi::apply_override(cfg, o);
  } catch (const bi::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return bi::kExitConfigError;
  }
  if (!args.output_dir.empty()) cfg.output.directory = args.output_dir;
  if (args.verbose) cfg.solver.verbose = true;
  if (cfg.solver.verbose)
    std::cerr << "kernel backend: " << bi::kernels::active_backend() << "\n";
  return bi::run_command(command, cfg, std::cout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Born-Infeld electrostatics laboratory"};
  app.require_subcommand(1);

  CommonArgs solve_args, radial_args, verify_args, sweep_args;
  add_common(app.add_subcommand("solve", "solve the configured problem and audit"),
             solve_args);
  add_common(app.add_subcommand("radial", "emit the semi-analytic radial profile"),
             radial_args);
  add_common(app.add_subcommand("verify", "run audits on an existing field dump"),
             verify_args);
  add_common(app.add_subcommand("sweep", "grid-refinement study against the oracle"),
             sweep_args);

  CLI11_PARSE(app, argc, argv);

  if (app.got_subcommand("solve")) return execute("solve", solve_args);
  if (app.got_subcommand("radial")) return execute("radial", radial_args);
  if (app.got_subcommand("verify")) return execute("verify", verify_args);
  return execute("sweep", sweep_args);
}
