#pragma once

#include <Eigen/Core>

#include <chrono>
#include <functional>
#include <optional>
#include <vector>

namespace pushopt {

struct SolverOptions {
  int max_outer_iters = 15;       // augmented-Lagrangian outer iterations
  int max_inner_iters = 200;      // quasi-Newton iterations per (outer) solve
  double fd_step = 1e-6;          // relative forward-difference perturbation
  double grad_tol = 1e-3;         // projected-gradient infinity-norm tolerance
  double feas_tol = 1e-4;         // constraint violation tolerance
  double al_mu0 = 10.0;           // initial penalty
  double al_mu_growth = 10.0;     // penalty growth factor
  double wall_clock_limit = 600;  // [s]
  int fd_workers = 0;             // probe threads; 0 = hardware concurrency (capped at 8)

  void validate() const;
};

enum class SolveStatus { Converged, IterLimit, TimeLimit, NumericalFailure };
std::string to_string(SolveStatus s);
SolveStatus solve_status_from_string(const std::string& s);

struct TraceRow {
  int outer = 0;
  int inner = 0;
  double objective = 0.0;
  double violation = 0.0;
  double step_norm = 0.0;
  double proj_grad_norm = 0.0;
};

/// Objective breakdown slot of a SolveResult. Generic solves only fill
/// `total`; the scenario layer re-evaluates the converged decision to fill
/// the task-specific parts.
struct ObjectiveParts {
  double c_final = 0.0;
  double c_integrated = 0.0;
  double c_slack = 0.0;
  double total = 0.0;
};

struct SolveResult {
  Eigen::VectorXd decision;
  ObjectiveParts objective;
  SolveStatus status = SolveStatus::IterLimit;
  int outer_iters = 0;
  long inner_iters = 0;
  long function_evals = 0;
  double wall_time = 0.0;               // [s]
  double max_constraint_violation = 0;  // constrained solves only
  double proj_grad_norm = 0.0;          // at the returned decision
  std::vector<TraceRow> trace;
};

/// Snapshot of an iteration, evaluated by check_convergence in fixed priority
/// order: numerical failure > time limit > feasibility+gradient > iteration
/// limit.
struct IterationState {
  bool numerical_failure = false;
  double elapsed = 0.0;
  double wall_clock_limit = 0.0;
  double proj_grad_norm = 0.0;
  double grad_tol = 0.0;
  double violation = 0.0;
  double feas_tol = 0.0;
  long inner_iters = 0;
  long max_inner_iters = 0;

  long outer_iters = 0;
  long max_outer_iters = 0;
};

/// Returns the terminal status, or nullopt when iteration should continue.
std::optional<SolveStatus> check_convergence(const IterationState& state);

using ScalarFn = std::function<double(const Eigen::VectorXd&)>;

/// Combined objective + inequality-constraint evaluation (g <= 0 feasible),
/// expected to share one underlying rollout per call.
struct ConstrainedEval {
  double f = 0.0;
  Eigen::VectorXd g;
};
using ConstrainedFn = std::function<ConstrainedEval(const Eigen::VectorXd&)>;

/// Forward-difference gradient with per-coordinate step
/// h_i = fd_step * max(1, |x_i|). Probes run concurrently with a fixed
/// probe-to-coordinate assignment, so the result is independent of the worker
/// count and evaluation order. A probe that leaves [lower, upper] or returns
/// the blow-up penalty retreats to the opposite side (one-sided backward
/// difference).
Eigen::VectorXd fd_gradient(const ScalarFn& f, const Eigen::VectorXd& x, double f_at_x,
                            const SolverOptions& options,
                            const Eigen::VectorXd& lower = Eigen::VectorXd(),
                            const Eigen::VectorXd& upper = Eigen::VectorXd());

using Clock = std::chrono::steady_clock;

/// Projected quasi-Newton (limited-memory secant updates, gradient projection
/// onto the box, Armijo backtracking on the projected path). Coordinates are
/// internally scaled by max(1, |x0_i|). The accepted objective sequence is
/// non-increasing. `deadline` (when set) overrides the wall-clock limit; used
/// by the augmented-Lagrangian outer loop to share its budget.
SolveResult solve_box_qn(const ScalarFn& f, const Eigen::VectorXd& x0,
                         const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                         const SolverOptions& options,
                         std::optional<Clock::time_point> deadline = {},
                         const std::function<void(const TraceRow&)>& trace_sink = {});

/// Augmented-Lagrangian outer loop for inequality constraints g(x) <= 0 with
/// box bounds handled by the inner solver. Multipliers update as
/// lambda <- max(0, lambda + mu g); the penalty grows when the violation does
/// not shrink by 4x between outer iterations.
SolveResult solve_augmented_lagrangian(const ConstrainedFn& fg, const Eigen::VectorXd& x0,
                                       const Eigen::VectorXd& lower,
                                       const Eigen::VectorXd& upper,
                                       const SolverOptions& options,
                                       const std::function<void(const TraceRow&)>& trace_sink = {});

}  // namespace pushopt
