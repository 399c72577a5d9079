#include "ttgp/lbfgs.hpp"

#include <ceres/ceres.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ttgp {

void LbfgsOptions::validate() const {
  if (memory < 1) throw std::invalid_argument("LbfgsOptions: memory must be positive");
  if (!(grad_tol > 0.0)) throw std::invalid_argument("LbfgsOptions: grad_tol must be positive");
  if (max_iter < 0) throw std::invalid_argument("LbfgsOptions: max_iter must be nonnegative");
  if (max_restarts < 0) throw std::invalid_argument("LbfgsOptions: max_restarts must be nonnegative");
  if (!(time_limit_s > 0.0)) throw std::invalid_argument("LbfgsOptions: time limit must be positive");
}

namespace {

struct Tracker {
  const Objective* f = nullptr;
  int evaluations = 0;
  bool have_best = false;
  Eigen::VectorXd best_x;
  double best_value = std::numeric_limits<double>::infinity();
  double best_grad = std::numeric_limits<double>::quiet_NaN();
};

class Adapter final : public ceres::FirstOrderFunction {
 public:
  Adapter(Tracker* t, int n) : t_(t), n_(n) {}

  bool Evaluate(const double* parameters, double* cost, double* gradient) const override {
    Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(parameters, n_);
    Eigen::VectorXd g;
    double v;
    ++t_->evaluations;
    try {
      v = (*t_->f)(x, gradient ? &g : nullptr);
    } catch (const std::domain_error&) {
      return false;
    }
    if (!std::isfinite(v)) return false;
    if (gradient) {
      if (g.size() != n_ || !g.allFinite()) return false;
      Eigen::Map<Eigen::VectorXd>(gradient, n_) = g;
    }
    *cost = v;
    if (v < t_->best_value || (v == t_->best_value && gradient && std::isnan(t_->best_grad))) {
      t_->best_value = v;
      t_->best_x = x;
      t_->best_grad = gradient ? g.cwiseAbs().maxCoeff() : std::numeric_limits<double>::quiet_NaN();
      t_->have_best = true;
    }
    return true;
  }

  int NumParameters() const override { return n_; }

 private:
  Tracker* t_;
  int n_;
};

class TraceCallback final : public ceres::IterationCallback {
 public:
  explicit TraceCallback(std::vector<double>* trace) : trace_(trace) {}
  ceres::CallbackReturnType operator()(const ceres::IterationSummary& s) override {
    if (s.iteration == 0 ? !skip_initial : s.step_is_successful) trace_->push_back(s.cost);
    return ceres::SOLVER_CONTINUE;
  }

  bool skip_initial = false;

 private:
  std::vector<double>* trace_;
};

}  // namespace

LbfgsResult lbfgs_minimize(const Objective& f, const Eigen::VectorXd& x0, const LbfgsOptions& opts) {
  opts.validate();
  if (x0.size() == 0) throw std::invalid_argument("lbfgs_minimize: empty parameter vector");
  const int n = static_cast<int>(x0.size());
  Tracker tracker;
  tracker.f = &f;
  LbfgsResult out;

  ceres::GradientProblemSolver::Options o;
  o.line_search_direction_type = ceres::LBFGS;
  o.line_search_type = ceres::WOLFE;
  o.max_lbfgs_rank = opts.memory;
  o.gradient_tolerance = opts.grad_tol;
  o.function_tolerance = 0.0;
  o.parameter_tolerance = 0.0;
  o.logging_type = ceres::SILENT;
  o.minimizer_progress_to_stdout = false;
  TraceCallback cb(&out.trace);
  o.callbacks.push_back(&cb);

  // Ceres ends a run with a zero step when the Wolfe search finds nothing
  // acceptable, which happens on inexact objectives. Restart from the best
  // point with empty memory as long as the previous run made progress.
  const auto t0 = std::chrono::steady_clock::now();
  Eigen::VectorXd x = x0;
  int used = 0;
  for (;;) {
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.max_num_iterations = opts.max_iter - used;
    o.max_solver_time_in_seconds = std::max(opts.time_limit_s - elapsed, 1e-3);
    const double before = tracker.best_value;
    cb.skip_initial = out.restarts > 0;
    ceres::GradientProblem problem(new Adapter(&tracker, n));
    ceres::GradientProblemSolver::Summary summary;
    ceres::Solve(o, problem, x.data(), &summary);
    if (!tracker.have_best) throw std::domain_error("lbfgs_minimize: objective undefined at the starting point");
    used += static_cast<int>(summary.iterations.empty() ? 0 : summary.iterations.back().iteration);
    out.message = summary.message;
    if (summary.termination_type == ceres::CONVERGENCE && summary.message.find("Gradient tolerance") != std::string::npos) {
      out.status = LbfgsStatus::converged;
      break;
    }
    if (summary.termination_type == ceres::NO_CONVERGENCE) {
      out.status = summary.message.find("time") != std::string::npos ? LbfgsStatus::time_limit
                                                                      : LbfgsStatus::max_iterations;
      break;
    }
    out.status = LbfgsStatus::line_search_failed;
    if (!(tracker.best_value < before) || used >= opts.max_iter || out.restarts >= opts.max_restarts) break;
    const double now = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (now >= opts.time_limit_s) {
      out.status = LbfgsStatus::time_limit;
      break;
    }
    ++out.restarts;
    x = tracker.best_x;
  }

  out.x = tracker.best_x;
  out.value = tracker.best_value;
  out.grad_norm = tracker.best_grad;
  out.iterations = used;
  out.evaluations = tracker.evaluations;
  return out;
}

const char* to_string(LbfgsStatus s) {
  switch (s) {
    case LbfgsStatus::converged:
      return "converged";
    case LbfgsStatus::max_iterations:
      return "max_iterations";
    case LbfgsStatus::time_limit:
      return "time_limit";
    case LbfgsStatus::line_search_failed:
      return "line_search_failed";
  }
  return "unknown";
}

}  // namespace ttgp
