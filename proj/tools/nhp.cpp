// nhp: batch driver for system construction, approximant solves, convergence
// sweeps, and the invariant verification suite. See README.md for the config
// format.

#include <iostream>

#include "CLI11.hpp"
#include "runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"nhp - Nikishin / Hermite-Pade numerical laboratory"};
  app.require_subcommand(1);

  std::string config_path, outdir_override;
  int threads_override = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("-c,--config", config_path, "JSON run configuration")->required();
    cmd->add_option("-o,--output", outdir_override, "output directory (overrides config)");
    cmd->add_option("--threads", threads_override, "worker threads (overrides config)");
  };

  CLI::App* solve = app.add_subcommand("solve", "solve the configured multi-indices");
  CLI::App* sweep = app.add_subcommand("sweep", "run a convergence sweep");
  CLI::App* verify = app.add_subcommand("verify", "run the invariant suite");
  add_common(solve);
  add_common(sweep);
  add_common(verify);

  CLI11_PARSE(app, argc, argv);

  try {
    nhp::RunConfig cfg = nhp::parse_config_file(config_path);
    nhp::apply_precision_env(cfg);
    if (threads_override > 0) cfg.threads = threads_override;
    std::string outdir = outdir_override.empty() ? cfg.output : outdir_override;

    if (solve->parsed()) return nhp::run_solve(cfg, outdir, std::cout);
    if (sweep->parsed()) return nhp::run_sweep(cfg, outdir, std::cout);
    return nhp::run_verify(cfg, outdir, std::cout);
  } catch (const nhp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return nhp::kExitConfig;
  } catch (const nhp::AtomBudgetError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return nhp::kExitConfig;
  } catch (const nhp::DegeneracyError& e) {
    std::cerr << "degeneracy: " << e.what() << "\n";
    return nhp::kExitDegenerate;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return nhp::kExitDegenerate;
  }
}
