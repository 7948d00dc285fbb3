#pragma once

#include <stdexcept>
#include <string>

namespace pushopt {

/// Integrator produced a non-finite state entry (blow-up).
class NonFiniteStateError : public std::runtime_error {
 public:
  explicit NonFiniteStateError(int step_index)
      : std::runtime_error("non-finite state at step " + std::to_string(step_index)),
        step_index_(step_index) {}
  int step_index() const { return step_index_; }

 private:
  int step_index_;
};

/// Decision vector layout does not match the schema it is evaluated against.
class SchemaMismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested initial distance cannot be reached by the arm.
class UnreachableDistanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Configuration file parse/validation failure, with file/line context.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pushopt
