#include "pushopt/transcription.hpp"

#include <cmath>
#include <stdexcept>

namespace pushopt {

void CostWeights::validate() const {
  if (w1 < 0 || w2 < 0 || w3 < 0 || w4 < 0 || w5 < 0)
    throw std::invalid_argument("cost weights must be >= 0");
  if (!(t_c > 0.0)) throw std::invalid_argument("t_c must be > 0");
  if (N < 1) throw std::invalid_argument("N must be >= 1");
}

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * M_PI);  // [-pi, pi]
  if (a <= -M_PI) a += 2.0 * M_PI;
  return a;
}

double final_cost(const CostWeights& weights, const TaskGoal& goal,
                  const WorldState& final_state) {
  if (!(goal.initial_pos_error_norm > 0.0))
    throw std::invalid_argument("goal.initial_pos_error_norm must be > 0");
  const Eigen::Vector2d p_err =
      (final_state.box_pose.head<2>() - goal.target_pos) / goal.initial_pos_error_norm;
  const double yaw_err = wrap_angle(final_state.box_pose.z() - goal.target_yaw);
  return weights.w1 * p_err.squaredNorm() + weights.w2 * yaw_err * yaw_err;
}

double integrated_cost(const CostWeights& weights, const Trajectory& traj) {
  if (traj.steps() != weights.N)
    throw std::invalid_argument("trajectory step count does not match weights.N");
  double acc = 0.0;
  for (const auto& rec : traj.records)
    acc += weights.w3 * rec.ee_velocity.squaredNorm() + weights.w4 * rec.gamma * rec.gamma;
  return weights.t_c / weights.N * acc;
}

namespace {

std::vector<Eigen::Vector3d> torque_schedule(const DecisionSchema& schema,
                                             const Eigen::VectorXd& decision) {
  const auto& u = schema.block("u");
  std::vector<Eigen::Vector3d> torques(schema.steps, Eigen::Vector3d::Zero());
  for (int l = 0; l < schema.steps; ++l)
    for (int j = 0; j < schema.n_controls; ++j)
      torques[l][j] = decision[u.offset + l * schema.n_controls + j];
  return torques;
}

VirtualForceFn make_gamma_fn(const ContactModelSpec& spec, const DecisionSchema& schema,
                             const Eigen::VectorXd& decision) {
  switch (spec.variant) {
    case ContactVariant::Cccm: {
      const int off = schema.block("gamma").offset;
      return [&decision, off](int l, double) { return decision[off + l]; };
    }
    case ContactVariant::Scm:
      return [spec](int, double phi) { return scm_force(spec, phi); };
    case ContactVariant::Vscm: {
      const int off = schema.block("k").offset;
      return [spec, &decision, off](int l, double phi) {
        return vscm_force(spec, decision[off + l], phi);
      };
    }
  }
  return {};
}

void attach_k_schedule(const ContactModelSpec& spec, const DecisionSchema& schema,
                       const Eigen::VectorXd& decision, Trajectory& traj) {
  if (spec.variant != ContactVariant::Vscm) return;
  const auto& kb = schema.block("k");
  traj.k_schedule.assign(decision.data() + kb.offset, decision.data() + kb.offset + kb.size);
}

}  // namespace

Trajectory rollout_decision(const ContactModelSpec& spec, const DecisionSchema& schema,
                            const Eigen::VectorXd& decision, const SimContext& ctx) {
  schema.check(decision);
  const auto torques = torque_schedule(schema, decision);
  Trajectory traj = rollout(ctx.arm, ctx.box, ctx.initial, torques,
                            make_gamma_fn(spec, schema, decision), ctx.t_c, ctx.dt, ctx.sim);
  attach_k_schedule(spec, schema, decision, traj);
  return traj;
}

ObjectiveBreakdown evaluate_objective(const ContactModelSpec& spec, const CostWeights& weights,
                                      const TaskGoal& goal, const DecisionSchema& schema,
                                      const Eigen::VectorXd& decision, const SimContext& ctx,
                                      Trajectory* out_traj) {
  if (std::abs(weights.t_c - ctx.t_c) > 1e-12 || weights.N != schema.steps)
    throw std::invalid_argument("weights (t_c, N) must match the sim context and schema");
  ObjectiveBreakdown out;
  Trajectory traj;
  try {
    traj = rollout_decision(spec, schema, decision, ctx);
  } catch (const NonFiniteStateError&) {
    out.non_finite = true;
    out.c_final = kNonFiniteObjectivePenalty;
    out.total = kNonFiniteObjectivePenalty;
    return out;
  }
  out.c_final = final_cost(weights, goal, traj.records.back().state);
  out.c_integrated = integrated_cost(weights, traj);
  if (spec.variant == ContactVariant::Cccm) {
    const auto& sb = schema.block("s");
    out.c_slack = weights.w5 * decision.segment(sb.offset, sb.size).squaredNorm();
  }
  out.total = out.c_final + out.c_integrated + out.c_slack;
  if (out_traj) *out_traj = std::move(traj);
  return out;
}

namespace {

Eigen::VectorXd constraints_from(const DecisionSchema& schema, const Eigen::VectorXd& decision,
                                 const Trajectory& traj) {
  const auto& gb = schema.block("gamma");
  const auto& sb = schema.block("s");
  Eigen::VectorXd g(2 * schema.steps * schema.n_contacts);
  for (int l = 0; l < schema.steps; ++l) {
    const ConstraintResiduals r = cccm_residuals(
        decision[gb.offset + l], traj.records[l].phi, decision[sb.offset + l]);
    g[2 * l] = r.phi_lb;
    g[2 * l + 1] = r.comp;
  }
  return g;
}

}  // namespace

Eigen::VectorXd evaluate_constraints(const ContactModelSpec& spec, const DecisionSchema& schema,
                                     const Eigen::VectorXd& decision, const SimContext& ctx,
                                     Trajectory* out_traj) {
  if (spec.variant != ContactVariant::Cccm)
    throw SchemaMismatchError("evaluate_constraints requires the CCCM variant");
  Trajectory traj = rollout_decision(spec, schema, decision, ctx);
  Eigen::VectorXd g = constraints_from(schema, decision, traj);
  if (out_traj) *out_traj = std::move(traj);
  return g;
}

ConstrainedObjective evaluate_constrained(const ContactModelSpec& spec,
                                          const CostWeights& weights, const TaskGoal& goal,
                                          const DecisionSchema& schema,
                                          const Eigen::VectorXd& decision,
                                          const SimContext& ctx, Trajectory* out_traj) {
  if (spec.variant != ContactVariant::Cccm)
    throw SchemaMismatchError("evaluate_constrained requires the CCCM variant");
  ConstrainedObjective out;
  Trajectory traj;
  out.objective = evaluate_objective(spec, weights, goal, schema, decision, ctx, &traj);
  if (out.objective.non_finite) {
    // Constraints of a blown-up rollout are reported as heavily violated so
    // the augmented Lagrangian also steers away from the region.
    out.constraints = Eigen::VectorXd::Zero(2 * schema.steps * schema.n_contacts);
    for (int l = 0; l < schema.steps; ++l) {
      out.constraints[2 * l] = -1.0;  // phi "violated"
      out.constraints[2 * l + 1] = 1.0;
    }
    return out;
  }
  out.constraints = constraints_from(schema, decision, traj);
  if (out_traj) *out_traj = std::move(traj);
  return out;
}

}  // namespace pushopt
