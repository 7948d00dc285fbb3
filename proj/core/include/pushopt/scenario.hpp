#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "pushopt/solver.hpp"
#include "pushopt/transcription.hpp"

namespace pushopt {

/// One pushing scenario: initial distance, goal, model, weights, solver
/// options and the simulation setup. The box starts at a fixed home pose;
/// the arm is posed by inverse kinematics so the end-effector contact point
/// sits at `initial_distance` from the box's near face, at face-center
/// height, everything at rest.
struct ScenarioConfig {
  std::string name;                 // label for output files; derived if empty
  double initial_distance = 0.11;   // phi_0 [m]
  double goal_displacement = 0.25;  // box target offset along +x [m]
  double horizon = 1.0;             // [s]
  double t_c = 0.05;                // control period [s]
  ContactModelSpec model;
  CostWeights weights = CostWeights::smooth_defaults();
  SolverOptions solver;
  ArmModel arm;
  BoxModel box;
  SimParams sim;
  double dt = 1e-3;
  std::uint64_t rng_seed = 0;  // reserved; the pipeline is deterministic

  int steps() const;  // N = horizon / t_c
  std::string label() const;

  /// Checks invariants (horizon = N * t_c for integer N, positive distance,
  /// sub-model validity). Throws std::invalid_argument.
  void validate() const;
};

/// Fixed world pose of the box at scenario start.
Eigen::Vector2d box_home_position();

/// Places the box at its home pose and solves planar inverse kinematics
/// (damped least squares from an elbow-up seed) for the arm.
/// Throws UnreachableDistanceError when the IK residual exceeds 1e-6 m.
WorldState build_initial_state(const ScenarioConfig& config);

TaskGoal make_task_goal(const ScenarioConfig& config);

/// t_c * sum of gamma_l over steps with phi_l > 0: the integral of virtual
/// force acting from distance. Steps in actual contact (phi <= 0) do not
/// count.
double physical_inaccuracy(const Trajectory& traj, double t_c);

/// (||p_final - p_target||, |wrapped yaw error|).
std::pair<double, double> final_errors(const Trajectory& traj, const TaskGoal& goal);

struct MetricsRow {
  std::string model;
  double phi0 = 0.0;
  double physical_inaccuracy = 0.0;
  double final_position_error = 0.0;
  double final_orientation_error = 0.0;
  double wall_time = 0.0;  // [s]; reported in report.json / timings.csv only
  std::string status;
};

struct SolveReport {
  ScenarioConfig config;
  TaskGoal goal;
  SolveResult result;
  ObjectiveBreakdown breakdown;
  MetricsRow metrics;
};

/// Builds the initial state, solves the model-appropriate NLP from the zero
/// torque initial guess, replays the converged decision and computes the
/// metrics row. Solver failures land in the status field; only configuration
/// errors (e.g. an unreachable initial distance) throw.
std::pair<SolveReport, Trajectory> run_scenario(const ScenarioConfig& config);

/// Re-simulates a decision vector under a report's configuration.
Trajectory replay_decision(const ScenarioConfig& config, const Eigen::VectorXd& decision);

}  // namespace pushopt
