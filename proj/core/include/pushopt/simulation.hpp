#pragma once

#include <Eigen/Core>

#include <functional>
#include <span>
#include <vector>

#include "pushopt/contact_geometry.hpp"
#include "pushopt/errors.hpp"

namespace pushopt {

struct SimParams {
  ContactParams contact;
  double gravity = 9.81;        // [m/s^2], sets the box's table normal load
  bool compensate_bias = true;  // feedforward Chat = C (perfect estimate)

  void validate() const;
};

/// One record per control step, sampled at the end of the step.
struct TrajectoryRecord {
  WorldState state;                 // end-of-step state
  double phi = 0.0;                 // signed distance at `state`
  double gamma = 0.0;               // virtual force magnitude held during the step
  Eigen::Vector2d f_actual{0, 0};   // ground-truth contact force on box at `state`
  double f_actual_n = 0.0;          // its compressive normal component
  Eigen::Vector2d ee_velocity{0, 0};
  Eigen::Vector3d u{Eigen::Vector3d::Zero()};  // torques held during the step
};

struct Trajectory {
  WorldState initial_state;
  double phi0 = 0.0;    // signed distance at the initial state
  double t_c = 0.0;     // control period [s]
  std::vector<TrajectoryRecord> records;       // N entries
  std::vector<double> k_schedule;              // per-step stiffness, VSCM only

  int steps() const { return static_cast<int>(records.size()); }
};

/// Virtual force magnitude for control step `l`, given the signed distance at
/// the start of the step. Must be pure; called once per control step.
using VirtualForceFn = std::function<double(int l, double phi_start)>;

/// Advances the world by `dt` under a zero-order-hold input.
///
/// Torques are clamped to the model limits. The control decomposition applies
/// tau = u + Chat(q,qd) - Jc^T lambda_c with Chat = C, so the bias terms and
/// the virtual-force reaction cancel exactly on the arm; the virtual force
/// gamma * (-normal) acts on the box at the witness point. The ground-truth
/// contact force acts on the box and reacts on the arm through the contact
/// Jacobian. Regularized Coulomb friction terms (table and contact tangential)
/// are integrated implicitly, which keeps the scheme stable at v_reg = 1e-3
/// with dt = 1e-3.
///
/// Throws NonFiniteStateError when the output state has a non-finite entry.
WorldState step(const ArmModel& model, const BoxModel& box, const WorldState& state,
                const StepInput& input, double dt, const SimParams& params = {});

/// Single-shooting rollout: N control steps of period t_c, each simulated with
/// t_c/dt substeps of `step`. `torques` has one entry per control step;
/// `gamma_fn` supplies the per-step virtual force from the start-of-step
/// signed distance. Deterministic: identical inputs give bit-identical output.
Trajectory rollout(const ArmModel& model, const BoxModel& box, const WorldState& initial,
                   std::span<const Eigen::Vector3d> torques, const VirtualForceFn& gamma_fn,
                   double t_c, double dt, const SimParams& params = {});

}  // namespace pushopt
