#pragma once

#include <Eigen/Core>

#include "pushopt/contact_models.hpp"
#include "pushopt/simulation.hpp"

namespace pushopt {

/// Cost weights of the shooting objective. Defaults follow the smooth-model
/// problem; cccm_defaults() switches to the constrained problem's weights.
struct CostWeights {
  double w1 = 1e3;   // final position (normalized)
  double w2 = 1e3;   // final yaw
  double w3 = 0.2;   // end-effector velocity
  double w4 = 0.02;  // virtual force
  double w5 = 0.0;   // slack penalty (CCCM)
  double t_c = 0.05; // control period [s]
  int N = 20;        // control steps

  static CostWeights smooth_defaults() { return {}; }
  static CostWeights cccm_defaults() {
    CostWeights w;
    w.w1 = 1e4; w.w2 = 1e4; w.w3 = 0.2; w.w4 = 0.2; w.w5 = 1e3;
    return w;
  }
  void validate() const;
};

struct TaskGoal {
  Eigen::Vector2d target_pos{0, 0};   // desired box CoM position [m]
  double target_yaw = 0.0;            // desired box yaw [rad]
  double initial_pos_error_norm = 1;  // cached at problem build, > 0
};

struct ObjectiveBreakdown {
  double c_final = 0.0;
  double c_integrated = 0.0;
  double c_slack = 0.0;
  double total = 0.0;
  bool non_finite = false;  // rollout blew up; total is the penalty value
};

/// Everything a rollout needs besides the decision vector.
struct SimContext {
  ArmModel arm;
  BoxModel box;
  WorldState initial;
  SimParams sim;
  double dt = 1e-3;
  double t_c = 0.05;  // control period; must match CostWeights::t_c
};

/// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

/// Final cost: w1 * ||(p - p_target) / initial_error||^2 + w2 * wrap(yaw err)^2.
double final_cost(const CostWeights& weights, const TaskGoal& goal,
                  const WorldState& final_state);

/// Integrated cost: (t_c / N) * sum_l (w3 ||xdot_l||^2 + w4 gamma_l^2), using
/// the recorded end-effector velocity and virtual force of each control step.
double integrated_cost(const CostWeights& weights, const Trajectory& traj);

/// Penalty returned (flagged) when a candidate rollout blows up.
inline constexpr double kNonFiniteObjectivePenalty = 1e10;

/// Runs the rollout for `decision` and assembles the objective. CCCM adds
/// w5 * sum s_l^2. A non-finite rollout yields the flagged penalty value
/// instead of propagating, so line searches survive wild probes.
/// When `out_traj` is non-null the rollout (with k_schedule for VSCM) is
/// stored there on success.
ObjectiveBreakdown evaluate_objective(const ContactModelSpec& spec, const CostWeights& weights,
                                      const TaskGoal& goal, const DecisionSchema& schema,
                                      const Eigen::VectorXd& decision, const SimContext& ctx,
                                      Trajectory* out_traj = nullptr);

/// CCCM constraint vector, 2 * N * n_c entries ordered step-major:
/// [phi_1, comp_1, phi_2, comp_2, ...] with phi_l >= 0 and comp_l <= 0
/// feasible. Entry signs follow the residual definitions; callers that need a
/// uniform g(x) <= 0 convention must negate the phi entries.
Eigen::VectorXd evaluate_constraints(const ContactModelSpec& spec, const DecisionSchema& schema,
                                     const Eigen::VectorXd& decision, const SimContext& ctx,
                                     Trajectory* out_traj = nullptr);

/// One-rollout combined evaluation for the constrained (CCCM) solve.
struct ConstrainedObjective {
  ObjectiveBreakdown objective;
  Eigen::VectorXd constraints;  // as evaluate_constraints
};
ConstrainedObjective evaluate_constrained(const ContactModelSpec& spec,
                                          const CostWeights& weights, const TaskGoal& goal,
                                          const DecisionSchema& schema,
                                          const Eigen::VectorXd& decision,
                                          const SimContext& ctx,
                                          Trajectory* out_traj = nullptr);

/// Runs the rollout a decision vector describes (shared by objective paths,
/// replay and metrics). Fills k_schedule for VSCM decisions.
Trajectory rollout_decision(const ContactModelSpec& spec, const DecisionSchema& schema,
                            const Eigen::VectorXd& decision, const SimContext& ctx);

}  // namespace pushopt
