#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace ttgp {

/// Value at x; fills *grad when it is non-null. Throwing std::domain_error
/// marks x as infeasible and makes the line search back off.
using Objective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd* grad)>;

struct LbfgsOptions {
  int memory = 10;
  double grad_tol = 1e-10;   ///< on the max-norm of the gradient
  int max_iter = 200;
  double time_limit_s = 1e9;
  int max_restarts = 20;  ///< fresh-memory restarts after a stalled line search

  void validate() const;
};

enum class LbfgsStatus { converged, max_iterations, time_limit, line_search_failed };

struct LbfgsResult {
  Eigen::VectorXd x;       ///< best point seen among evaluations with finite value
  double value = 0.0;
  double grad_norm = 0.0;  ///< max-norm of the gradient at x, when known
  std::vector<double> trace;  ///< objective at accepted iterates, starting with x0
  int iterations = 0;
  int evaluations = 0;
  int restarts = 0;
  LbfgsStatus status = LbfgsStatus::max_iterations;
  std::string message;
};

/// Limited-memory BFGS with a strong-Wolfe line search.
LbfgsResult lbfgs_minimize(const Objective& f, const Eigen::VectorXd& x0, const LbfgsOptions& opts = {});

const char* to_string(LbfgsStatus s);

}  // namespace ttgp
