#include "pushopt/arm.hpp"

#include <cmath>
#include <stdexcept>

namespace pushopt {

void ArmModel::validate() const {
  for (int i = 0; i < 3; ++i) {
    if (!(link_lengths[i] > 0.0)) throw std::invalid_argument("link length must be > 0");
    if (!(link_masses[i] > 0.0)) throw std::invalid_argument("link mass must be > 0");
    if (!(link_inertias[i] > 0.0)) throw std::invalid_argument("link inertia must be > 0");
    if (!(torque_limits[i] > 0.0)) throw std::invalid_argument("torque limit must be > 0");
    if (joint_damping[i] < 0.0) throw std::invalid_argument("joint damping must be >= 0");
  }
}

namespace {

struct ChainFrames {
  double theta[3];        // absolute link angles
  double c[3], s[3];      // cos/sin of theta
  Eigen::Vector2d joint[4];  // joint i position; joint[3] = link-3 tip
  Eigen::Vector2d com[3];
};

ChainFrames chain_frames(const ArmModel& m, const Eigen::Vector3d& q) {
  ChainFrames f;
  double acc = 0.0;
  f.joint[0].setZero();
  for (int i = 0; i < 3; ++i) {
    acc += q[i];
    f.theta[i] = acc;
    f.c[i] = std::cos(acc);
    f.s[i] = std::sin(acc);
    const Eigen::Vector2d axis(f.c[i], f.s[i]);
    f.joint[i + 1] = f.joint[i] + m.link_lengths[i] * axis;
    f.com[i] = f.joint[i] + 0.5 * m.link_lengths[i] * axis;
  }
  return f;
}

}  // namespace

Eigen::Matrix3d mass_matrix(const ArmModel& model, const Eigen::Vector3d& q) {
  const ChainFrames f = chain_frames(model, q);
  Eigen::Matrix3d M = Eigen::Matrix3d::Zero();
  for (int i = 0; i < 3; ++i) {
    // CoM translational Jacobian: column j is z x (com_i - joint_j) for j <= i
    Eigen::Matrix<double, 2, 3> Jv = Eigen::Matrix<double, 2, 3>::Zero();
    for (int j = 0; j <= i; ++j) {
      const Eigen::Vector2d r = f.com[i] - f.joint[j];
      Jv(0, j) = -r.y();
      Jv(1, j) = r.x();
    }
    M.noalias() += model.link_masses[i] * (Jv.transpose() * Jv);
    for (int j = 0; j <= i; ++j)
      for (int k = 0; k <= i; ++k) M(j, k) += model.link_inertias[i];
  }
  return M;
}

Eigen::Vector3d bias_forces(const ArmModel& model, const Eigen::Vector3d& q,
                            const Eigen::Vector3d& qdot) {
  // Planar recursive Newton-Euler with qddot = 0 and no gravity: the joint
  // torques that remain are exactly the velocity-product terms.
  const ChainFrames f = chain_frames(model, q);
  double w = 0.0;
  Eigen::Vector2d joint_acc[4];
  joint_acc[0].setZero();
  double omega[3];
  Eigen::Vector2d com_acc[3];
  for (int i = 0; i < 3; ++i) {
    w += qdot[i];
    omega[i] = w;
    const Eigen::Vector2d axis(f.c[i], f.s[i]);
    joint_acc[i + 1] = joint_acc[i] - model.link_lengths[i] * w * w * axis;
    com_acc[i] = joint_acc[i] - 0.5 * model.link_lengths[i] * w * w * axis;
  }
  (void)omega;
  Eigen::Vector2d fnext = Eigen::Vector2d::Zero();
  double nnext = 0.0;
  Eigen::Vector3d tau;
  for (int i = 2; i >= 0; --i) {
    const Eigen::Vector2d fi = model.link_masses[i] * com_acc[i] + fnext;
    const Eigen::Vector2d r_joint = f.joint[i] - f.com[i];
    const Eigen::Vector2d r_tip = f.joint[i + 1] - f.com[i];
    // I * alpha_i = 0 here (alpha = 0): torque balance about the CoM
    const double ni = nnext - (r_joint.x() * fi.y() - r_joint.y() * fi.x()) +
                      (r_tip.x() * fnext.y() - r_tip.y() * fnext.x());
    tau[i] = ni;
    fnext = fi;
    nnext = ni;
  }
  for (int i = 0; i < 3; ++i) tau[i] += model.joint_damping[i] * qdot[i];
  return tau;
}

EeKinematics ee_kinematics(const ArmModel& model, const Eigen::Vector3d& q,
                           const Eigen::Vector3d& qdot) {
  const ChainFrames f = chain_frames(model, q);
  const Eigen::Matrix2d R3{{f.c[2], -f.s[2]}, {f.s[2], f.c[2]}};
  EeKinematics out;
  out.position = f.joint[3] + R3 * model.ee_offset;
  for (int j = 0; j < 3; ++j) {
    const Eigen::Vector2d r = out.position - f.joint[j];
    out.jacobian(0, j) = -r.y();
    out.jacobian(1, j) = r.x();
  }
  out.velocity = out.jacobian * qdot;
  return out;
}

}  // namespace pushopt
