#pragma once

#include <Eigen/Core>

#include "pushopt/arm.hpp"
#include "pushopt/box.hpp"
#include "pushopt/state.hpp"

namespace pushopt {

/// Closest-feature query between the end-effector contact point and the box.
/// phi is the Euclidean signed distance to the box boundary (negative inside);
/// normal is the outward normal of the closest box face in the world frame.
struct ContactQuery {
  double phi = 0.0;                // [m]
  Eigen::Vector2d normal{1, 0};    // unit, box-outward (closest face)
  Eigen::Vector2d witness_ee{0, 0};
  Eigen::Vector2d witness_box{0, 0};
};

/// Ground-truth contact law parameters (stand-in for a physics engine's
/// contact solver): penalty normal spring + regularized Coulomb friction.
struct ContactParams {
  double k_pen = 1e4;    // [N/m]
  double d_pen = 100.0;  // [N s/m]
  double v_reg = 1e-3;   // [m/s] friction regularization velocity
};

/// Signed distance from the end-effector contact point to the box boundary.
/// Corner ties prefer the face whose outward normal has the larger dot
/// product with (ee - box center), then the +x face.
ContactQuery signed_distance(const ArmModel& model, const BoxModel& box,
                             const WorldState& state);

/// Point-to-box query against an explicit point (used by signed_distance and
/// by tests that place the probe directly).
ContactQuery point_box_distance(const Eigen::Vector2d& point,
                                const Eigen::Vector2d& box_center, double yaw,
                                double half_extent);

/// Ground-truth ("actual") contact force on the box. Zero when separated.
/// When penetrating: normal penalty force k_pen*(-phi) - d_pen*phidot clamped
/// >= 0 along -normal, plus a tangential Coulomb term bounded by
/// mu_contact * f_n, regularized with tanh(|v_t| / v_reg).
/// `ee_vel_rel` is the end-effector velocity relative to the box material
/// point at the witness location.
Eigen::Vector2d resolve_actual_contact(const BoxModel& box, const ContactQuery& query,
                                       const Eigen::Vector2d& ee_vel_rel,
                                       const ContactParams& params = {});

}  // namespace pushopt
