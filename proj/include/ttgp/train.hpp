#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ttgp/amen.hpp"
#include "ttgp/kernel.hpp"
#include "ttgp/krylov.hpp"
#include "ttgp/random.hpp"

namespace ttgp {

enum class ProbePolicy { frozen, resample };

/// How z^T L_log(K, dK_j) z is evaluated. `block` runs Arnoldi on the block
/// upper-triangular operator [[K, dK_j], [0, K]]; `projected` reuses the
/// Lanczos run of the cost and differentiates the projected logarithm.
enum class GradientMethod { block, projected };

struct TrainOptions {
  Index probes = 10;
  double kryltol = 1e-6;
  double amentol = 1e-6;
  double trunctol = 1e-8;
  int krylov_maxit = 50;
  int lbfgs_memory = 10;
  double grad_tol = 1e-10;
  int max_iter = 200;
  double time_limit_s = 1e9;
  ProbePolicy policy = ProbePolicy::frozen;
  GradientMethod gradient = GradientMethod::block;
  std::uint64_t seed = 0;
  bool warm_start = true;  ///< seed each linear solve with the previous solution

  void validate() const;
  KrylovOptions krylov() const;
  AmenOptions amen() const;
};

/// Worst case over the solver calls behind one evaluation.
struct SolverFlags {
  bool amen_converged = true;
  double amen_residual = 0.0;
  int amen_sweeps = 0;
  bool krylov_converged = true;
  int krylov_iterations = 0;

  void merge(const SolverFlags& other);
};

struct NllEvaluation {
  double value = 0.0;
  double logdet = 0.0;     ///< Hutchinson estimate t / p
  double data_fit = 0.0;   ///< y^T alpha
  Eigen::VectorXd gradient;  ///< empty unless requested
  TTTensor alpha;
  SolverFlags flags;
  double cost_ms = 0.0;
  double grad_ms = 0.0;
};

/// f = (N log 2pi + t/p + y^T alpha) / 2 and, on request, its gradient
/// (1/2)((1/p) sum_i z_i^T L_log(K, dK_j) z_i - alpha^T dK_j alpha) in the
/// flat log-parameter order of HyperParams.
NllEvaluation nll_evaluate(const KroneckerSumKernel& kernel, const HyperParams& theta, const TTTensor& y,
                           const ProbeSet& probes, const TrainOptions& opts, bool with_gradient,
                           const std::optional<TTTensor>& alpha_guess = std::nullopt);

double nll_cost(const KroneckerSumKernel& kernel, const HyperParams& theta, const TTTensor& y, const ProbeSet& probes,
                const TrainOptions& opts);
Eigen::VectorXd nll_grad(const KroneckerSumKernel& kernel, const HyperParams& theta, const TTTensor& y,
                         const ProbeSet& probes, const TrainOptions& opts);

struct FitResult {
  HyperParams theta_init;
  HyperParams theta_final;
  std::vector<double> cost_trace;  ///< accepted iterates
  double grad_norm = 0.0;
  std::uint64_t probe_seed = 0;
  int iterations = 0;
  int evaluations = 0;
  std::string status;
  std::string message;  ///< optimizer termination detail
  int restarts = 0;
  bool line_search_failed = false;
  double cost_ms = 0.0;
  double grad_ms = 0.0;
  double total_ms = 0.0;
  SolverFlags solver_flags;
};

void to_json(nlohmann::json& j, const FitResult& r);

/// Minimizes the stochastic NLL over the log-parameters with LBFGS. Under the
/// frozen policy one probe set is drawn from opts.seed; under resample every
/// evaluation draws a fresh set.
FitResult fit_hyperparameters(const KroneckerSumKernel& kernel, const TTTensor& y, const HyperParams& theta0,
                              const TrainOptions& opts);

/// Posterior mean on the test grid, K_* (K + sigma^2 I)^{-1} y.
TTTensor predict_mean(const GridDesign& train, const GridDesign& test, const HyperParams& theta, const TTTensor& y,
                      const TrainOptions& opts);

struct PriorSampleOptions {
  double compression = 1e-8;  ///< rounding of U, V and of the result
  KrylovOptions krylov;
  double jitter = 1e-10;
};

/// K^{1/2} U + sigma V for standard-normal U, V drawn from seed. A jitter is
/// added to K if the square root runs into a domain error.
TTTensor sample_prior(const GridDesign& grid, const HyperParams& theta, double sigma, std::uint64_t seed,
                      const PriorSampleOptions& opts = {});

const char* to_string(ProbePolicy p);
const char* to_string(GradientMethod m);

}  // namespace ttgp
