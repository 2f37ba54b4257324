#include <CLI11.hpp>

#include <iostream>

#include "vil/runner.hpp"

namespace {

vil::ExperimentConfig make_config(const std::string& config_path, const std::string& out_dir,
                                  int threads) {
  vil::ExperimentConfig cfg =
      config_path.empty() ? vil::ExperimentConfig{} : vil::load_config(config_path);
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (threads > 0) cfg.threads = threads;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vil: a deterministic laboratory for 2D vorticity transport, Lagrangian "
               "deformation tracking and norm-growth experiments"};
  app.require_subcommand(1);

  std::string config_path, out_dir, check = "all", input_snapshot, traj_dir;
  int threads = 0;
  app.add_option("--config", config_path, "JSON experiment config")->capture_default_str();
  app.add_option("--out", out_dir, "output directory (overrides config)");
  app.add_option("--threads", threads, "worker threads (overrides config)");

  CLI::App* synth = app.add_subcommand("synth", "emit initial-data snapshots");
  CLI::App* evolve = app.add_subcommand("evolve", "advance the vorticity equation");
  evolve->add_option("--input", input_snapshot, "VIL1 scalar snapshot to start from");
  CLI::App* flow = app.add_subcommand("flow", "advect a particle ensemble through a trajectory");
  flow->add_option("--traj", traj_dir, "directory of omega_*.vil snapshots")->required();
  CLI::App* verify = app.add_subcommand("verify", "run named checks and report verdicts");
  verify->add_option("--check", check, "check name or 'all'")->capture_default_str();
  CLI::App* sweep = app.add_subcommand("sweep", "run the configured checks over sweep axes");

  CLI11_PARSE(app, argc, argv);

  try {
    const vil::ExperimentConfig cfg = make_config(config_path, out_dir, threads);
    if (synth->parsed()) return vil::run_synth(cfg);
    if (evolve->parsed())
      return vil::run_evolve(cfg, input_snapshot.empty()
                                      ? std::nullopt
                                      : std::optional<std::filesystem::path>(input_snapshot));
    if (flow->parsed()) return vil::run_flow(cfg, traj_dir);
    if (verify->parsed()) return vil::run_verify(cfg, {check});
    if (sweep->parsed()) return vil::run_sweep(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
