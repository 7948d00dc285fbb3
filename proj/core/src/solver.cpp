#include "pushopt/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>
#include <thread>

#include "pushopt/transcription.hpp"  // kNonFiniteObjectivePenalty

namespace pushopt {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void SolverOptions::validate() const {
  if (max_outer_iters < 1 || max_inner_iters < 1)
    throw std::invalid_argument("iteration limits must be >= 1");
  if (!(fd_step > 0) || !(grad_tol > 0) || !(feas_tol > 0) || !(al_mu0 > 0) ||
      !(wall_clock_limit > 0))
    throw std::invalid_argument("solver tolerances must be > 0");
  if (!(al_mu_growth > 1.0)) throw std::invalid_argument("al_mu_growth must be > 1");
  if (fd_workers < 0) throw std::invalid_argument("fd_workers must be >= 0");
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::IterLimit: return "iter_limit";
    case SolveStatus::TimeLimit: return "time_limit";
    case SolveStatus::NumericalFailure: return "numerical_failure";
  }
  return "?";
}

SolveStatus solve_status_from_string(const std::string& s) {
  if (s == "converged") return SolveStatus::Converged;
  if (s == "iter_limit") return SolveStatus::IterLimit;
  if (s == "time_limit") return SolveStatus::TimeLimit;
  if (s == "numerical_failure") return SolveStatus::NumericalFailure;
  throw std::invalid_argument("unknown solve status: " + s);
}

std::optional<SolveStatus> check_convergence(const IterationState& st) {
  if (st.numerical_failure) return SolveStatus::NumericalFailure;
  if (st.elapsed >= st.wall_clock_limit) return SolveStatus::TimeLimit;
  if (st.violation <= st.feas_tol && st.proj_grad_norm <= st.grad_tol)
    return SolveStatus::Converged;
  if (st.inner_iters >= st.max_inner_iters) return SolveStatus::IterLimit;
  if (st.max_outer_iters > 0 && st.outer_iters >= st.max_outer_iters)
    return SolveStatus::IterLimit;
  return std::nullopt;
}

namespace {

// Forward-difference gradient with per-coordinate steps
// h_i = fd_step * max(scale_i, |x_i|). Coordinates are assigned to workers by
// a fixed stride; each gradient entry depends only on its own probe, so the
// result is bit-identical for any worker count or evaluation order.
Eigen::VectorXd fd_gradient_scaled(const ScalarFn& f, const Eigen::VectorXd& x, double f0,
                                   const SolverOptions& opts, const Eigen::VectorXd& scale,
                                   const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                                   long* eval_count = nullptr, bool central = false) {
  const int n = static_cast<int>(x.size());
  Eigen::VectorXd g(n);
  const bool bounded = lower.size() == n && upper.size() == n;
  std::atomic<long> evals{0};

  auto probe = [&](int i) {
    const double sc = scale.size() == n ? scale[i] : 1.0;
    const double h = opts.fd_step * std::max(sc, std::abs(x[i]));
    const bool can_fwd = !bounded || x[i] + h <= upper[i];
    const bool can_bwd = !bounded || x[i] - h >= lower[i];
    if (central && can_fwd && can_bwd) {
      Eigen::VectorXd xp = x, xm = x;
      xp[i] = x[i] + h;
      xm[i] = x[i] - h;
      const double fp = f(xp);
      const double fm = f(xm);
      evals.fetch_add(2, std::memory_order_relaxed);
      if (fp < kNonFiniteObjectivePenalty && fm < kNonFiniteObjectivePenalty) {
        g[i] = (fp - fm) / (2.0 * h);
        return;
      }
      // fall through to the one-sided logic on a blown-up probe
    }
    bool forward = can_fwd;
    if (!can_fwd && !can_bwd) forward = true;  // degenerate box
    Eigen::VectorXd xp = x;
    xp[i] = forward ? x[i] + h : x[i] - h;
    double fp = f(xp);
    evals.fetch_add(1, std::memory_order_relaxed);
    if (fp >= kNonFiniteObjectivePenalty && f0 < kNonFiniteObjectivePenalty) {
      forward = !forward;  // blown-up probe: one-sided retreat
      xp[i] = forward ? x[i] + h : x[i] - h;
      fp = f(xp);
      evals.fetch_add(1, std::memory_order_relaxed);
      if (fp >= kNonFiniteObjectivePenalty) {
        g[i] = 0.0;
        return;
      }
    }
    g[i] = forward ? (fp - f0) / h : (f0 - fp) / h;
  };

  int workers = opts.fd_workers > 0
                    ? opts.fd_workers
                    : static_cast<int>(
                          std::min(8u, std::max(1u, std::thread::hardware_concurrency())));
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) probe(i);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (int i = w; i < n; i += workers) probe(i);
      });
    for (auto& t : pool) t.join();
  }
  if (eval_count) *eval_count += evals.load();
  return g;
}

struct LbfgsMemory {
  std::deque<Eigen::VectorXd> s, y;
  std::deque<double> rho;
  double gamma = 1.0;
  static constexpr int kCapacity = 12;

  void clear() {
    s.clear();
    y.clear();
    rho.clear();
    gamma = 1.0;
  }
  bool empty() const { return s.empty(); }
  void push(const Eigen::VectorXd& si, const Eigen::VectorXd& yi) {
    const double sy = si.dot(yi);
    if (sy <= 1e-12 * si.norm() * yi.norm()) return;  // skip non-curvature pairs
    s.push_back(si);
    y.push_back(yi);
    rho.push_back(1.0 / sy);
    gamma = sy / yi.squaredNorm();
    if (static_cast<int>(s.size()) > kCapacity) {
      s.pop_front();
      y.pop_front();
      rho.pop_front();
    }
  }
  Eigen::VectorXd direction(const Eigen::VectorXd& g) const {
    Eigen::VectorXd q = -g;
    const int m = static_cast<int>(s.size());
    std::vector<double> alpha(m);
    for (int i = m - 1; i >= 0; --i) {
      alpha[i] = rho[i] * s[i].dot(q);
      q -= alpha[i] * y[i];
    }
    q *= gamma;
    for (int i = 0; i < m; ++i) {
      const double beta = rho[i] * y[i].dot(q);
      q += (alpha[i] - beta) * s[i];
    }
    return q;
  }
};

}  // namespace

Eigen::VectorXd fd_gradient(const ScalarFn& f, const Eigen::VectorXd& x, double f_at_x,
                            const SolverOptions& options, const Eigen::VectorXd& lower,
                            const Eigen::VectorXd& upper) {
  return fd_gradient_scaled(f, x, f_at_x, options, Eigen::VectorXd(), lower, upper);
}

SolveResult solve_box_qn(const ScalarFn& f, const Eigen::VectorXd& x0,
                         const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                         const SolverOptions& options,
                         std::optional<Clock::time_point> deadline,
                         const std::function<void(const TraceRow&)>& trace_sink) {
  options.validate();
  const int n = static_cast<int>(x0.size());
  if (lower.size() != n || upper.size() != n)
    throw std::invalid_argument("bound sizes must match x0");
  for (int i = 0; i < n; ++i)
    if (!(lower[i] <= upper[i])) throw std::invalid_argument("lower > upper bound");

  const auto t_start = Clock::now();
  const auto t_end = deadline.value_or(
      t_start + std::chrono::duration_cast<Clock::duration>(
                    std::chrono::duration<double>(options.wall_clock_limit)));
  const double wall_limit = std::chrono::duration<double>(t_end - t_start).count();
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - t_start).count(); };

  // Internal coordinate scaling: typical magnitude from the initial point.
  Eigen::VectorXd scale(n);
  for (int i = 0; i < n; ++i) scale[i] = std::max(1.0, std::abs(x0[i]));

  SolveResult res;
  Eigen::VectorXd x = x0.cwiseMax(lower).cwiseMin(upper);
  double fx = f(x);
  res.function_evals = 1;

  constexpr double kArmijoC = 1e-4;
  constexpr double kBacktrack = 0.5;
  constexpr int kMaxLinesearch = 40;

  // Scaled projected-gradient norm: ||P(z - g_z) - z||_inf in z = x / scale.
  auto scaled_pg = [&](const Eigen::VectorXd& xx, const Eigen::VectorXd& g) {
    double m = 0.0;
    for (int i = 0; i < n; ++i) {
      const double z = xx[i] / scale[i];
      const double gz = g[i] * scale[i];
      const double step = std::clamp(z - gz, lower[i] / scale[i], upper[i] / scale[i]) - z;
      m = std::max(m, std::abs(step));
    }
    return m;
  };

  LbfgsMemory mem;
  Eigen::VectorXd g, g_prev, x_prev;
  bool have_prev = false;
  bool numerical_failure = false;
  double pg = kInf;
  SolveStatus status = SolveStatus::IterLimit;
  double f_epoch_start = fx;
  long iter = 0;
  // Forward differences limit how small a gradient the iteration can resolve
  // near sharply curved valley floors (truncation error h * f'' / 2 swamps the
  // residual gradient). When an epoch stalls, refine the step, then escalate
  // to central differences; declare failure only at the finest level.
  struct FdLevel {
    double step_factor;
    bool central;
  };
  constexpr FdLevel kFdRefine[] = {{1.0, false}, {0.1, false}, {1.0, true}, {0.1, true}};
  int fd_level = 0;

  while (true) {
    SolverOptions fd_opts = options;
    fd_opts.fd_step = options.fd_step * kFdRefine[fd_level].step_factor;
    g = fd_gradient_scaled(f, x, fx, fd_opts, scale, lower, upper, &res.function_evals,
                           kFdRefine[fd_level].central);
    pg = scaled_pg(x, g);

    IterationState st;
    st.numerical_failure = numerical_failure;
    st.elapsed = elapsed();
    st.wall_clock_limit = wall_limit;
    st.proj_grad_norm = pg;
    st.grad_tol = options.grad_tol;
    st.inner_iters = iter;
    st.max_inner_iters = options.max_inner_iters;
    if (auto done = check_convergence(st)) {
      status = *done;
      break;
    }

    if (have_prev) mem.push((x - x_prev).cwiseQuotient(scale), (g - g_prev).cwiseProduct(scale));

    // Direction in scaled coordinates; freeze bound-active coordinates whose
    // gradient pushes outward.
    Eigen::VectorXd gz = g.cwiseProduct(scale);
    for (int i = 0; i < n; ++i) {
      const bool at_lo = x[i] <= lower[i] && g[i] > 0.0;
      const bool at_hi = x[i] >= upper[i] && g[i] < 0.0;
      if (at_lo || at_hi) gz[i] = 0.0;
    }
    Eigen::VectorXd dz = mem.direction(gz);
    if (mem.empty()) dz /= std::max(1.0, gz.lpNorm<Eigen::Infinity>());

    bool accepted = false;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      if (attempt == 1) {
        if (mem.empty()) break;  // steepest descent already tried
        mem.clear();
        dz = -gz / std::max(1.0, gz.lpNorm<Eigen::Infinity>());
      }
      double alpha = 1.0;
      for (int ls = 0; ls < kMaxLinesearch; ++ls) {
        Eigen::VectorXd xt =
            (x + alpha * dz.cwiseProduct(scale)).cwiseMax(lower).cwiseMin(upper);
        Eigen::VectorXd dx = xt - x;
        if (dx.lpNorm<Eigen::Infinity>() == 0.0) break;
        double slope = g.dot(dx);
        if (slope >= 0.0) break;  // not a descent direction after projection
        double ft = f(xt);
        ++res.function_evals;
        if (ft <= fx + kArmijoC * slope) {
          x_prev = x;
          g_prev = g;
          have_prev = true;
          x = xt;
          fx = ft;
          accepted = true;
          if (trace_sink) {
            TraceRow row;
            row.inner = static_cast<int>(iter);
            row.objective = fx;
            row.step_norm = dx.norm();
            row.proj_grad_norm = pg;
            trace_sink(row);
          }
          break;
        }
        alpha *= kBacktrack;
      }
    }
    ++iter;
    if (!accepted) {
      const bool epoch_progress =
          std::abs(f_epoch_start - fx) > 1e-12 * std::max(1.0, std::abs(fx));
      if (!epoch_progress && fd_level + 1 >= static_cast<int>(std::size(kFdRefine))) {
        // No decrease possible along the projected direction even with the
        // finest difference step, and the epoch made no progress.
        numerical_failure = true;
        IterationState fail = st;
        fail.numerical_failure = true;
        status = *check_convergence(fail);
        break;
      }
      if (!epoch_progress) ++fd_level;
      mem.clear();  // restart curvature estimation and keep going
      have_prev = false;
      f_epoch_start = fx;
    }
    if (elapsed() >= wall_limit) {
      status = SolveStatus::TimeLimit;
      break;
    }
  }

  res.decision = x;
  res.objective.total = fx;
  res.status = status;
  res.inner_iters = iter;
  res.outer_iters = 1;
  res.proj_grad_norm = pg;
  res.wall_time = elapsed();
  return res;
}

SolveResult solve_augmented_lagrangian(const ConstrainedFn& fg, const Eigen::VectorXd& x0,
                                       const Eigen::VectorXd& lower,
                                       const Eigen::VectorXd& upper,
                                       const SolverOptions& options,
                                       const std::function<void(const TraceRow&)>& trace_sink) {
  options.validate();
  const auto t_start = Clock::now();
  const auto t_end = t_start + std::chrono::duration_cast<Clock::duration>(
                                   std::chrono::duration<double>(options.wall_clock_limit));
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - t_start).count(); };

  Eigen::VectorXd x = x0.cwiseMax(lower).cwiseMin(upper);
  ConstrainedEval e = fg(x);
  const int m = static_cast<int>(e.g.size());
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(m);
  double mu = options.al_mu0;

  auto violation_of = [](const Eigen::VectorXd& g) {
    return g.size() ? std::max(0.0, g.maxCoeff()) : 0.0;
  };

  SolveResult res;
  res.function_evals = 1;
  res.objective.total = e.f;
  double viol = violation_of(e.g);
  double viol_prev = kInf;
  double pg = kInf;
  SolveStatus status = SolveStatus::IterLimit;
  int outer = 0;

  while (true) {
    IterationState st;
    st.elapsed = elapsed();
    st.wall_clock_limit = options.wall_clock_limit;
    st.proj_grad_norm = pg;
    st.grad_tol = options.grad_tol;
    st.violation = viol;
    st.feas_tol = options.feas_tol;
    st.inner_iters = 0;
    st.max_inner_iters = std::numeric_limits<long>::max();
    st.outer_iters = outer;
    st.max_outer_iters = options.max_outer_iters;
    if (auto done = check_convergence(st)) {
      status = *done;
      break;
    }

    auto augmented = [&](const Eigen::VectorXd& xx) {
      const ConstrainedEval ev = fg(xx);
      double pen = 0.0;
      for (int i = 0; i < m; ++i) {
        const double t = std::max(0.0, lambda[i] + mu * ev.g[i]);
        pen += t * t - lambda[i] * lambda[i];
      }
      return ev.f + pen / (2.0 * mu);
    };

    // Loose inner tolerance for the first outer iterations.
    SolverOptions inner_opts = options;
    inner_opts.grad_tol =
        std::max(options.grad_tol, options.grad_tol * std::pow(10.0, 2 - outer));
    SolveResult inner =
        solve_box_qn(augmented, x, lower, upper, inner_opts, t_end, [&](const TraceRow& row) {
          if (trace_sink) {
            TraceRow r = row;
            r.outer = outer + 1;
            r.violation = viol;
            trace_sink(r);
          }
        });
    x = inner.decision;
    res.inner_iters += inner.inner_iters;
    res.function_evals += inner.function_evals;
    pg = inner.proj_grad_norm;
    ++outer;

    e = fg(x);
    ++res.function_evals;
    viol = violation_of(e.g);
    res.objective.total = e.f;
    if (trace_sink) {
      TraceRow row;
      row.outer = outer;
      row.inner = static_cast<int>(inner.inner_iters);
      row.objective = e.f;
      row.violation = viol;
      row.proj_grad_norm = pg;
      trace_sink(row);
    }
    for (int i = 0; i < m; ++i) lambda[i] = std::max(0.0, lambda[i] + mu * e.g[i]);
    if (inner.status == SolveStatus::NumericalFailure && viol > options.feas_tol) {
      status = SolveStatus::NumericalFailure;
      break;
    }
    if (inner.status == SolveStatus::TimeLimit) {
      status = SolveStatus::TimeLimit;
      break;
    }
    if (viol > 0.25 * viol_prev) mu = std::min(mu * options.al_mu_growth, 1e8);
    viol_prev = viol;
  }

  res.decision = x;
  res.status = status;
  res.outer_iters = outer;
  res.max_constraint_violation = viol;
  res.proj_grad_norm = pg;
  res.wall_time = elapsed();
  return res;
}

}  // namespace pushopt
