#pragma once

namespace pushopt {

/// Square box sliding on a frictional table, planar pose (x, y, yaw).
struct BoxModel {
  double half_extent = 0.08;   // [m]
  double mass = 0.4;           // [kg]
  double yaw_inertia = 2.0 / 3.0 * 0.4 * 0.08 * 0.08;  // solid cube about z [kg m^2]
  double mu_table = 0.5;       // box-table Coulomb coefficient
  double mu_contact = 0.3;     // arm-box Coulomb coefficient

  void validate() const;
};

}  // namespace pushopt
