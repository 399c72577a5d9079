#include "ttgp/train.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ttgp/lbfgs.hpp"

namespace ttgp {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void fold(SolverFlags& f, const KrylovReport& r) {
  f.krylov_converged = f.krylov_converged && r.converged;
  f.krylov_iterations = std::max(f.krylov_iterations, r.iterations);
}

}  // namespace

void TrainOptions::validate() const {
  if (probes < 1) throw std::invalid_argument("TrainOptions: probe count must be positive");
  if (!(kryltol > 0 && amentol > 0 && trunctol > 0 && grad_tol > 0))
    throw std::invalid_argument("TrainOptions: tolerances must be positive");
  if (krylov_maxit < 2) throw std::invalid_argument("TrainOptions: krylov_maxit must be at least 2");
  if (lbfgs_memory < 1) throw std::invalid_argument("TrainOptions: LBFGS memory must be positive");
  if (max_iter < 0) throw std::invalid_argument("TrainOptions: max_iter must be nonnegative");
  if (!(time_limit_s > 0)) throw std::invalid_argument("TrainOptions: time limit must be positive");
}

KrylovOptions TrainOptions::krylov() const {
  KrylovOptions k;
  k.kryltol = kryltol;
  k.trunctol = trunctol;
  k.maxit = krylov_maxit;
  return k;
}

AmenOptions TrainOptions::amen() const {
  AmenOptions a;
  a.tol = amentol;
  // residual rounding must stay well below the target residual
  a.trunctol = std::min(trunctol, 1e-2 * amentol);
  return a;
}

void SolverFlags::merge(const SolverFlags& o) {
  amen_converged = amen_converged && o.amen_converged;
  amen_residual = std::max(amen_residual, o.amen_residual);
  amen_sweeps = std::max(amen_sweeps, o.amen_sweeps);
  krylov_converged = krylov_converged && o.krylov_converged;
  krylov_iterations = std::max(krylov_iterations, o.krylov_iterations);
}

NllEvaluation nll_evaluate(const KroneckerSumKernel& kernel, const HyperParams& theta, const TTTensor& y,
                           const ProbeSet& probes, const TrainOptions& opts, bool with_gradient,
                           const std::optional<TTTensor>& alpha_guess) {
  opts.validate();
  const auto sizes = kernel.grid().sizes();
  if (y.mode_sizes() != sizes) throw std::invalid_argument("nll_evaluate: data shape does not match the grid");
  if (probes.count() < 1) throw std::invalid_argument("nll_evaluate: empty probe set");
  for (const auto& z : probes.probes)
    if (z.mode_sizes() != sizes) throw std::invalid_argument("nll_evaluate: probe shape does not match the grid");

  NllEvaluation out;
  auto t0 = Clock::now();
  const TTMatrix k = kernel.noisy_kernel(theta);
  const KrylovOptions kopts = opts.krylov();
  const double p = static_cast<double>(probes.count());
  const Index np = theta.parameter_count();

  AmenResult sol = amen_solve(k, y, opts.amen(), alpha_guess);
  out.flags.amen_converged = sol.converged;
  out.flags.amen_residual = sol.residual;
  out.flags.amen_sweeps = sol.sweeps;
  out.alpha = std::move(sol.x);
  out.data_fit = tt_dot(y, out.alpha);

  std::vector<TTMatrix> dirs;
  if (with_gradient)
    for (Index j = 0; j < np; ++j) dirs.push_back(kernel.derivative(theta, j));

  Eigen::VectorXd trace_terms = Eigen::VectorXd::Zero(np);
  double t = 0.0;
  for (const auto& z : probes.probes) {
    if (with_gradient && opts.gradient == GradientMethod::projected) {
      auto r = tt_krylov_quadform_derivatives(MatrixFunctionKind::log, k, z, dirs, kopts);
      t += r.value;
      for (Index j = 0; j < np; ++j) trace_terms(j) += r.derivatives[static_cast<std::size_t>(j)];
      fold(out.flags, r.report);
    } else {
      auto r = tt_krylov_quadform(MatrixFunctionKind::log, k, z, kopts);
      t += r.value;
      fold(out.flags, r.report);
    }
  }
  const double n_total = static_cast<double>(kernel.grid().total_size());
  out.logdet = t / p;
  out.value = 0.5 * (n_total * std::log(2.0 * std::numbers::pi) + out.logdet + out.data_fit);
  out.cost_ms = ms_since(t0);

  if (!with_gradient) return out;
  auto g0 = Clock::now();
  if (opts.gradient == GradientMethod::block) {
    const double lower = theta.noise_sigma * theta.noise_sigma;  // eigenvalue bound of K + sigma^2 I
    for (Index j = 0; j < np; ++j) {
      // L_log is linear in E, so scaling E keeps the block operator's Ritz
      // values away from the branch cut at no cost in accuracy.
      const FrechetBlock blk = frechet_block(k, dirs[static_cast<std::size_t>(j)], lower);
      for (const auto& z : probes.probes) {
        auto r = tt_frechet_quadform(MatrixFunctionKind::log, blk, z, kopts);
        trace_terms(j) += r.value;
        fold(out.flags, r.report);
      }
    }
  }
  out.gradient.resize(np);
  for (Index j = 0; j < np; ++j) {
    const double fit = tt_dot(out.alpha, ttm_apply(dirs[static_cast<std::size_t>(j)], out.alpha));
    out.gradient(j) = 0.5 * (trace_terms(j) / p - fit);
  }
  // the projected path does its derivative work inside the probe loop, which
  // is booked under the cost
  out.grad_ms = ms_since(g0);
  return out;
}

double nll_cost(const KroneckerSumKernel& kernel, const HyperParams& theta, const TTTensor& y, const ProbeSet& probes,
                const TrainOptions& opts) {
  return nll_evaluate(kernel, theta, y, probes, opts, false).value;
}

Eigen::VectorXd nll_grad(const KroneckerSumKernel& kernel, const HyperParams& theta, const TTTensor& y,
                         const ProbeSet& probes, const TrainOptions& opts) {
  return nll_evaluate(kernel, theta, y, probes, opts, true).gradient;
}

void to_json(nlohmann::json& j, const SolverFlags& f) {
  j = nlohmann::json{{"amen_converged", f.amen_converged},     {"amen_residual", f.amen_residual},
                     {"amen_sweeps", f.amen_sweeps},           {"krylov_converged", f.krylov_converged},
                     {"krylov_iterations", f.krylov_iterations}};
}

void to_json(nlohmann::json& j, const FitResult& r) {
  j = nlohmann::json{{"theta_init", r.theta_init},
                     {"theta_final", r.theta_final},
                     {"cost_trace", r.cost_trace},
                     {"grad_norm", r.grad_norm},
                     {"probe_seed", r.probe_seed},
                     {"iterations", r.iterations},
                     {"evaluations", r.evaluations},
                     {"status", r.status},
                     {"message", r.message},
                     {"restarts", r.restarts},
                     {"timings_ms", {{"cost", r.cost_ms}, {"grad", r.grad_ms}, {"total", r.total_ms}}},
                     {"solver_flags", r.solver_flags}};
  if (!std::isfinite(r.grad_norm)) j["grad_norm"] = nullptr;
}

FitResult fit_hyperparameters(const KroneckerSumKernel& kernel, const TTTensor& y, const HyperParams& theta0,
                              const TrainOptions& opts) {
  opts.validate();
  theta0.validate();
  const auto t0 = Clock::now();
  const auto sizes = kernel.grid().sizes();
  FitResult out;
  out.theta_init = theta0;
  out.probe_seed = opts.seed;

  const ProbeSet frozen = ProbeSet::draw(sizes, opts.probes, opts.seed);
  std::uint64_t draws = 0;
  std::optional<TTTensor> last_alpha;
  bool first_flags = true;

  Objective f = [&](const Eigen::VectorXd& x, Eigen::VectorXd* grad) {
    const HyperParams th = theta0.with_flat(x);
    ProbeSet fresh;
    const ProbeSet* ps = &frozen;
    if (opts.policy == ProbePolicy::resample) {
      fresh = ProbeSet::draw(sizes, opts.probes, opts.seed, draws * static_cast<std::uint64_t>(opts.probes));
      ++draws;
      ps = &fresh;
    }
    NllEvaluation ev = nll_evaluate(kernel, th, y, *ps, opts, grad != nullptr,
                                    opts.warm_start ? last_alpha : std::nullopt);
    out.cost_ms += ev.cost_ms;
    out.grad_ms += ev.grad_ms;
    if (first_flags) {
      out.solver_flags = ev.flags;
      first_flags = false;
    } else {
      out.solver_flags.merge(ev.flags);
    }
    if (opts.warm_start) last_alpha = std::move(ev.alpha);
    if (grad) *grad = ev.gradient;
    return ev.value;
  };

  LbfgsOptions lo;
  lo.memory = opts.lbfgs_memory;
  lo.grad_tol = opts.grad_tol;
  lo.max_iter = opts.max_iter;
  lo.time_limit_s = opts.time_limit_s;
  LbfgsResult res = lbfgs_minimize(f, theta0.flatten(), lo);

  out.theta_final = theta0.with_flat(res.x);
  out.cost_trace = res.trace;
  out.grad_norm = res.grad_norm;
  out.iterations = res.iterations;
  out.evaluations = res.evaluations;
  out.status = to_string(res.status);
  out.message = res.message;
  out.restarts = res.restarts;
  out.line_search_failed = res.status == LbfgsStatus::line_search_failed;
  out.total_ms = ms_since(t0);
  return out;
}

TTTensor predict_mean(const GridDesign& train, const GridDesign& test, const HyperParams& theta, const TTTensor& y,
                      const TrainOptions& opts) {
  if (train.order() != test.order()) throw std::invalid_argument("predict_mean: grid dimension mismatch");
  if (y.mode_sizes() != train.sizes()) throw std::invalid_argument("predict_mean: data shape does not match the grid");
  const TTMatrix k = add_noise(build_kernel(train, theta), theta.noise_sigma);
  const TTTensor alpha = amen_solve(k, y, opts.amen()).x;
  return ttm_apply(build_cross_kernel(test, train, theta), alpha, {opts.trunctol});
}

TTTensor sample_prior(const GridDesign& grid, const HyperParams& theta, double sigma, std::uint64_t seed,
                      const PriorSampleOptions& opts) {
  grid.validate();
  const auto sizes = grid.sizes();
  const TruncationPolicy round{opts.compression};
  const TTTensor u = tt_from_full(normal_tensor(sizes, seed, 0), round);
  const TTTensor v = tt_from_full(normal_tensor(sizes, seed, 1), round);
  const TTMatrix k = build_kernel(grid, theta);
  TTTensor ku;
  try {
    ku = tt_krylov_apply(MatrixFunctionKind::sqrt, k, u, opts.krylov, OperatorSymmetry::symmetric).value;
  } catch (const DomainError&) {
    ku = tt_krylov_apply(MatrixFunctionKind::sqrt, add_noise(k, std::sqrt(opts.jitter)), u, opts.krylov,
                         OperatorSymmetry::symmetric)
             .value;
  }
  return tt_round(tt_axpy(1.0, ku, sigma, v), round);
}

const char* to_string(ProbePolicy p) { return p == ProbePolicy::frozen ? "frozen" : "resample"; }
const char* to_string(GradientMethod m) { return m == GradientMethod::block ? "block" : "projected"; }

}  // namespace ttgp
