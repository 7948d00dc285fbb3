#include "pushopt/scenario.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace pushopt {

int ScenarioConfig::steps() const { return static_cast<int>(std::llround(horizon / t_c)); }

std::string ScenarioConfig::label() const {
  if (!name.empty()) return name;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_phi%.2f", to_string(model.variant).c_str(),
                initial_distance);
  return buf;
}

void ScenarioConfig::validate() const {
  if (!(initial_distance > 0.0)) throw std::invalid_argument("initial_distance must be > 0");
  if (!(goal_displacement > 0.0)) throw std::invalid_argument("goal_displacement must be > 0");
  if (!(t_c > 0.0) || !(horizon > 0.0)) throw std::invalid_argument("horizon and t_c must be > 0");
  const double n = horizon / t_c;
  if (std::abs(n - std::llround(n)) > 1e-9 * n || std::llround(n) < 1)
    throw std::invalid_argument("horizon must be an integer multiple of t_c");
  const double sub = t_c / dt;
  if (std::abs(sub - std::llround(sub)) > 1e-9 * sub || std::llround(sub) < 1)
    throw std::invalid_argument("t_c must be an integer multiple of dt");
  if (weights.N != steps() || std::abs(weights.t_c - t_c) > 1e-12)
    throw std::invalid_argument("weights (N, t_c) must match the scenario horizon");
  model.validate();
  weights.validate();
  solver.validate();
  arm.validate();
  box.validate();
  sim.validate();
}

Eigen::Vector2d box_home_position() { return {0.45, 0.0}; }

WorldState build_initial_state(const ScenarioConfig& config) {
  config.arm.validate();
  config.box.validate();
  const Eigen::Vector2d home = box_home_position();
  const Eigen::Vector2d target(home.x() - config.box.half_extent - config.initial_distance,
                               home.y());

  // Damped least squares from a fixed elbow-up seed; deterministic branch.
  Eigen::Vector3d q(M_PI / 3.0, -2.0 * M_PI / 3.0, M_PI / 6.0);
  constexpr double kDamping2 = 1e-4;
  constexpr int kMaxIters = 300;
  for (int it = 0; it < kMaxIters; ++it) {
    const EeKinematics ee = ee_kinematics(config.arm, q, Eigen::Vector3d::Zero());
    const Eigen::Vector2d r = target - ee.position;
    if (r.norm() < 1e-12) break;
    const Eigen::Matrix2d A =
        ee.jacobian * ee.jacobian.transpose() + kDamping2 * Eigen::Matrix2d::Identity();
    q += ee.jacobian.transpose() * A.ldlt().solve(r);
  }
  const EeKinematics ee = ee_kinematics(config.arm, q, Eigen::Vector3d::Zero());
  if ((target - ee.position).norm() > 1e-6)
    throw UnreachableDistanceError("initial distance " + std::to_string(config.initial_distance) +
                                   " m is not reachable by the arm");

  WorldState st;
  st.q = q;
  st.qdot.setZero();
  st.box_pose << home.x(), home.y(), 0.0;
  st.box_vel.setZero();
  st.t = 0.0;
  return st;
}

TaskGoal make_task_goal(const ScenarioConfig& config) {
  TaskGoal goal;
  goal.target_pos = box_home_position() + Eigen::Vector2d(config.goal_displacement, 0.0);
  goal.target_yaw = 0.0;  // push without rotating
  goal.initial_pos_error_norm = config.goal_displacement;
  return goal;
}

double physical_inaccuracy(const Trajectory& traj, double t_c) {
  double sum = 0.0;
  for (const auto& rec : traj.records)
    if (rec.phi > 0.0) sum += rec.gamma;
  return t_c * sum;
}

std::pair<double, double> final_errors(const Trajectory& traj, const TaskGoal& goal) {
  if (traj.records.empty()) throw std::invalid_argument("trajectory is empty");
  const WorldState& fin = traj.records.back().state;
  const double pos = (fin.box_pose.head<2>() - goal.target_pos).norm();
  const double yaw = std::abs(wrap_angle(fin.box_pose.z() - goal.target_yaw));
  return {pos, yaw};
}

namespace {

SimContext make_context(const ScenarioConfig& config, const WorldState& initial) {
  return SimContext{config.arm, config.box, initial, config.sim, config.dt, config.t_c};
}

}  // namespace

Trajectory replay_decision(const ScenarioConfig& config, const Eigen::VectorXd& decision) {
  const WorldState initial = build_initial_state(config);
  const DecisionSchema schema =
      decision_schema(config.model, config.steps(), 3, config.arm.torque_limits);
  return rollout_decision(config.model, schema, decision, make_context(config, initial));
}

std::pair<SolveReport, Trajectory> run_scenario(const ScenarioConfig& config) {
  config.validate();
  const WorldState initial = build_initial_state(config);
  const TaskGoal goal = make_task_goal(config);
  const SimContext ctx = make_context(config, initial);
  const DecisionSchema schema =
      decision_schema(config.model, config.steps(), 3, config.arm.torque_limits);

  SolveReport report;
  report.config = config;
  report.goal = goal;

  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (config.model.variant == ContactVariant::Cccm) {
      // Constraints in solver convention g <= 0: [-phi_l; comp_l].
      auto fg = [&](const Eigen::VectorXd& x) {
        const ConstrainedObjective eval =
            evaluate_constrained(config.model, config.weights, goal, schema, x, ctx);
        ConstrainedEval out;
        out.f = eval.objective.total;
        out.g.resize(eval.constraints.size());
        for (int l = 0; l < schema.steps; ++l) {
          out.g[2 * l] = -eval.constraints[2 * l];
          out.g[2 * l + 1] = eval.constraints[2 * l + 1];
        }
        return out;
      };
      report.result = solve_augmented_lagrangian(fg, schema.initial_values(),
                                                 schema.lower_bounds(), schema.upper_bounds(),
                                                 config.solver);
    } else {
      auto f = [&](const Eigen::VectorXd& x) {
        return evaluate_objective(config.model, config.weights, goal, schema, x, ctx).total;
      };
      report.result = solve_box_qn(f, schema.initial_values(), schema.lower_bounds(),
                                   schema.upper_bounds(), config.solver);
    }
  } catch (const std::exception&) {
    report.result.status = SolveStatus::NumericalFailure;
    if (report.result.decision.size() != schema.total())
      report.result.decision = schema.initial_values();
  }
  report.result.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  Trajectory traj;
  report.breakdown = evaluate_objective(config.model, config.weights, goal, schema,
                                        report.result.decision, ctx, &traj);
  report.result.objective.c_final = report.breakdown.c_final;
  report.result.objective.c_integrated = report.breakdown.c_integrated;
  report.result.objective.c_slack = report.breakdown.c_slack;
  report.result.objective.total = report.breakdown.total;

  MetricsRow& row = report.metrics;
  row.model = to_string(config.model.variant);
  row.phi0 = config.initial_distance;
  if (report.breakdown.non_finite || traj.records.empty()) {
    // Blown-up final decision: report the unmoved-box errors.
    row.physical_inaccuracy = 0.0;
    row.final_position_error = config.goal_displacement;
    row.final_orientation_error = 0.0;
    row.status = to_string(SolveStatus::NumericalFailure);
  } else {
    row.physical_inaccuracy = physical_inaccuracy(traj, config.t_c);
    const auto [pos_err, yaw_err] = final_errors(traj, goal);
    row.final_position_error = pos_err;
    row.final_orientation_error = yaw_err;
    row.status = to_string(report.result.status);
  }
  row.wall_time = report.result.wall_time;
  return {std::move(report), std::move(traj)};
}

}  // namespace pushopt
