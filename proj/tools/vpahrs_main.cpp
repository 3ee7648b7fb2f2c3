// Command-line front end: simulate, estimate, run, oracle.
#include "vpa/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
};

vpa::RunConfig load_config(const CommonOpts& o) {
  vpa::RunConfig cfg = vpa::parse_config_file(o.config_path);
  if (o.seed) cfg.err.seed = *o.seed;
  if (o.mode) {
    if (*o.mode == "feedback") cfg.mode = vpa::RunMode::Feedback;
    else if (*o.mode == "blackbox") cfg.mode = vpa::RunMode::BlackBox;
    else throw vpa::Error("--mode must be feedback|blackbox");
  }
  return cfg;
}

void add_common(CLI::App* cmd, CommonOpts& o, bool with_out = true) {
  cmd->add_option("--config", o.config_path, "run configuration file")
      ->required();
  if (with_out) cmd->add_option("--out-dir", o.out_dir, "output directory");
  cmd->add_option("--seed", o.seed, "override err.seed");
  cmd->add_option("--mode", o.mode, "feedback|blackbox");
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw vpa::Error("cannot write " + path.string());
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"virtual-platform AHRS and inertial bias estimation toolkit"};
  app.require_subcommand(1);

  CommonOpts sim_o, est_o, run_o, ora_o;
  auto* sim_cmd =
      app.add_subcommand("simulate", "generate truth and sensor CSV streams");
  add_common(sim_cmd, sim_o);
  auto* est_cmd = app.add_subcommand(
      "estimate", "run the estimator over imu.csv/aid.csv in --out-dir");
  add_common(est_cmd, est_o);
  auto* run_cmd =
      app.add_subcommand("run", "end-to-end simulation, estimation, metrics");
  add_common(run_cmd, run_o);
  auto* ora_cmd = app.add_subcommand(
      "oracle", "print steady-state predictions for a configuration");
  add_common(ora_cmd, ora_o, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim_cmd) {
      const auto cfg = load_config(sim_o);
      fs::create_directories(sim_o.out_dir);
      const auto truth = vpa::build_trajectory(cfg.traj, cfg.ahrs.g);
      const auto imu = vpa::synth_imu(truth, cfg.err, cfg.traj.imu_rate);
      const auto vel =
          vpa::synth_aid(truth, cfg.err, cfg.traj.aid_rate, cfg.traj.imu_rate);
      const fs::path dir(sim_o.out_dir);
      vpa::write_truth_csv((dir / "truth.csv").string(), truth, cfg.err);
      vpa::write_imu_csv((dir / "imu.csv").string(), imu);
      vpa::write_aid_csv((dir / "aid.csv").string(), vel);
      write_text(dir / "config_effective.cfg", vpa::config_to_text(cfg));
    } else if (*est_cmd) {
      const auto cfg = load_config(est_o);
      const fs::path dir(est_o.out_dir);
      const auto imu = vpa::read_imu_csv((dir / "imu.csv").string());
      const auto vel = vpa::read_aid_csv((dir / "aid.csv").string());
      const auto rows = vpa::run_estimation(imu, vel, cfg);
      vpa::write_est_csv((dir / "est.csv").string(), rows);
    } else if (*run_cmd) {
      const auto cfg = load_config(run_o);
      fs::create_directories(run_o.out_dir);
      const auto result = vpa::run_pipeline(cfg);
      const fs::path dir(run_o.out_dir);
      vpa::write_truth_csv((dir / "truth.csv").string(), result.truth,
                           cfg.err);
      vpa::write_imu_csv((dir / "imu.csv").string(), result.imu);
      vpa::write_aid_csv((dir / "aid.csv").string(), result.vel);
      vpa::write_est_csv((dir / "est.csv").string(), result.est);
      std::string report = vpa::metrics_report(result.metrics);
      report += vpa::oracle_report(cfg);
      write_text(dir / "metrics.txt", report);
      write_text(dir / "config_effective.cfg", vpa::config_to_text(cfg));
      std::cout << report;
    } else if (*ora_cmd) {
      const auto cfg = load_config(ora_o);
      std::cout << vpa::oracle_report(cfg);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
