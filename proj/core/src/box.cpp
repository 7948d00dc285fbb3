#include "pushopt/box.hpp"

#include <stdexcept>

namespace pushopt {

void BoxModel::validate() const {
  if (!(half_extent > 0.0)) throw std::invalid_argument("box half_extent must be > 0");
  if (!(mass > 0.0)) throw std::invalid_argument("box mass must be > 0");
  if (!(yaw_inertia > 0.0)) throw std::invalid_argument("box yaw_inertia must be > 0");
  if (mu_table < 0.0 || mu_contact < 0.0)
    throw std::invalid_argument("friction coefficients must be >= 0");
}

}  // namespace pushopt
