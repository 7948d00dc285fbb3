#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "pushopt/checks/verification.hpp"
#include "pushopt/config_file.hpp"
#include "pushopt/io.hpp"
#include "pushopt/report.hpp"
#include "pushopt/sweep.hpp"

namespace pushopt {

namespace {

namespace fs = std::filesystem;

int cmd_run(const std::string& config_path, const fs::path& out_dir) {
  const ScenarioConfig config = load_scenario_config(config_path);
  auto [report, traj] = run_scenario(config);
  write_report_json(out_dir / "report.json", report);
  write_trajectory_csv(out_dir / "trajectory.csv", traj);
  write_trace_csv(out_dir / "trace.csv", report.result.trace);
  if (config.model.variant == ContactVariant::Vscm && !traj.k_schedule.empty())
    write_stiffness_csv(out_dir / "stiffness.csv", traj.k_schedule);
  std::printf("%s: status=%s f=%.6g pos_err=%.4f m yaw_err=%.4f rad inacc=%.4f N.s (%.1f s)\n",
              config.label().c_str(), report.metrics.status.c_str(), report.breakdown.total,
              report.metrics.final_position_error, report.metrics.final_orientation_error,
              report.metrics.physical_inaccuracy, report.metrics.wall_time);
  const bool ok = report.result.status == SolveStatus::Converged ||
                  report.result.status == SolveStatus::IterLimit ||
                  report.result.status == SolveStatus::TimeLimit;
  return ok ? 0 : 1;
}

int cmd_sweep(const std::string& config_path, const fs::path& out_dir, int workers_override) {
  SweepConfig sweep = load_sweep_config(config_path);
  if (workers_override > 0) sweep.workers = workers_override;
  const auto cells = compare_models(sweep, out_dir);
  bool any_failed = false;
  for (const auto& cell : cells) {
    std::printf("%-14s status=%-18s inacc=%-10.4f pos_err=%-8.4f yaw_err=%-8.4f (%.1f s)\n",
                cell.config.label().c_str(), cell.metrics.status.c_str(),
                cell.metrics.physical_inaccuracy, cell.metrics.final_position_error,
                cell.metrics.final_orientation_error, cell.metrics.wall_time);
    if (cell.failed || cell.metrics.status == to_string(SolveStatus::NumericalFailure))
      any_failed = true;
  }
  std::printf("metrics: %s\n", (out_dir / "metrics.csv").string().c_str());
  return any_failed ? 1 : 0;
}

int cmd_replay(const std::string& report_path, const fs::path& out_dir) {
  const SolveReport report = read_report_json(report_path);
  const Trajectory traj = replay_decision(report.config, report.result.decision);
  write_trajectory_csv(out_dir / "trajectory.csv", traj);

  MetricsRow row;
  row.model = to_string(report.config.model.variant);
  row.phi0 = report.config.initial_distance;
  row.physical_inaccuracy = physical_inaccuracy(traj, report.config.t_c);
  const TaskGoal goal = make_task_goal(report.config);
  const auto [pos_err, yaw_err] = final_errors(traj, goal);
  row.final_position_error = pos_err;
  row.final_orientation_error = yaw_err;
  row.status = report.metrics.status;
  row.wall_time = 0.0;
  write_metrics_csv(out_dir / "metrics.csv", {row});

  const bool match = row.physical_inaccuracy == report.metrics.physical_inaccuracy &&
                     row.final_position_error == report.metrics.final_position_error &&
                     row.final_orientation_error == report.metrics.final_orientation_error;
  std::printf("replay %s: inacc=%.17g pos_err=%.17g yaw_err=%.17g -> %s\n",
              report.config.label().c_str(), row.physical_inaccuracy, row.final_position_error,
              row.final_orientation_error,
              match ? "matches persisted metrics" : "MISMATCH vs persisted metrics");
  return match ? 0 : 1;
}

int cmd_check(bool fast) {
  const auto results = checks::run_verification_suite(fast);
  bool all = true;
  for (const auto& r : results) {
    std::printf("%-32s %s  (%s)\n", r.name.c_str(), r.pass ? "PASS" : "FAIL", r.detail.c_str());
    all = all && r.pass;
  }
  return all ? 0 : 1;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Contact-implicit trajectory optimization for planar pushing"};
  app.require_subcommand(1);

  std::string config_path, report_path, out_dir = "results";
  int workers = 0;
  bool fast = false;

  CLI::App* run = app.add_subcommand("run", "Solve a single scenario from a config file");
  run->add_option("--config", config_path, "scenario config file")->required();
  run->add_option("--out", out_dir, "output directory");

  CLI::App* sweep = app.add_subcommand("sweep", "Run the model x distance grid");
  sweep->add_option("--config", config_path, "sweep config file")->required();
  sweep->add_option("--out", out_dir, "output directory");
  sweep->add_option("--workers", workers, "concurrent cells (overrides config)");

  CLI::App* replay =
      app.add_subcommand("replay", "Re-simulate a saved decision vector and re-emit outputs");
  replay->add_option("--report", report_path, "report.json of a previous run")->required();
  replay->add_option("--out", out_dir, "output directory");

  CLI::App* check = app.add_subcommand("check", "Run the oracle/property verification suite");
  check->add_flag("--fast", fast, "reduced sample counts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (run->parsed()) return cmd_run(config_path, out_dir);
    if (sweep->parsed()) return cmd_sweep(config_path, out_dir, workers);
    if (replay->parsed()) return cmd_replay(report_path, out_dir);
    if (check->parsed()) return cmd_check(fast);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const UnreachableDistanceError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace pushopt
