#pragma once

#include <Eigen/Core>

#include <array>

namespace pushopt {

/// 3-link planar arm moving in the horizontal plane (gravity orthogonal to
/// motion). Link frames: joint i at the base of link i, absolute link angle
/// theta_i = q_1 + ... + q_i. The end-effector contact point sits at the tip
/// of link 3 plus `ee_offset` expressed in the link-3 frame.
struct ArmModel {
  std::array<double, 3> link_lengths{0.30, 0.30, 0.15};   // [m]
  std::array<double, 3> link_masses{2.0, 1.5, 0.5};       // [kg]
  std::array<double, 3> link_inertias{
      2.0 * 0.30 * 0.30 / 12.0,                           // uniform rods, about CoM
      1.5 * 0.30 * 0.30 / 12.0,
      0.5 * 0.15 * 0.15 / 12.0};                          // [kg m^2]
  std::array<double, 3> joint_damping{0.1, 0.1, 0.1};     // [N m s/rad]
  std::array<double, 3> torque_limits{20.0, 20.0, 20.0};  // [N m]
  Eigen::Vector2d ee_offset{0.0, 0.0};                    // [m], link-3 frame, from tip

  double reach() const { return link_lengths[0] + link_lengths[1] + link_lengths[2]; }

  /// Throws std::invalid_argument when a positivity invariant is violated.
  void validate() const;
};

struct EeKinematics {
  Eigen::Vector2d position;
  Eigen::Vector2d velocity;
  Eigen::Matrix<double, 2, 3> jacobian;
};

/// Joint-space inertia matrix M(q); symmetric positive definite.
Eigen::Matrix3d mass_matrix(const ArmModel& model, const Eigen::Vector3d& q);

/// Velocity-product (Coriolis/centrifugal) terms plus viscous joint damping.
/// Gravity contributes nothing in the horizontal plane. Satisfies
/// M(q) qdd + bias(q, qd) = tau for the unforced arm.
Eigen::Vector3d bias_forces(const ArmModel& model, const Eigen::Vector3d& q,
                            const Eigen::Vector3d& qdot);

/// End-effector contact point position, velocity and 2x3 Jacobian.
/// velocity == jacobian * qdot holds exactly.
EeKinematics ee_kinematics(const ArmModel& model, const Eigen::Vector3d& q,
                           const Eigen::Vector3d& qdot);

}  // namespace pushopt
