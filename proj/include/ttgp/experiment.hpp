#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ttgp/train.hpp"

namespace ttgp {

enum class ExperimentKind { trig, gp_sample, probe_study, taylor_check };

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::trig;
  Index n = 21;  ///< training points per dimension
  int R = 3;
  int D = 3;
  std::vector<Index> probe_counts{2, 5, 10, 20};
  double kryltol = 1e-6;
  double amentol = 1e-6;
  double trunctol = 1e-8;
  double sigma = 0.01;
  std::uint64_t seed = 0;
  std::string out;  ///< output directory, empty for none

  int krylov_maxit = 50;
  int max_iter = 200;
  double fit_time_s = 1e9;  ///< wall-clock cap per LBFGS run
  double grad_tol = 1e-10;
  GradientMethod gradient = GradientMethod::projected;
  ProbePolicy policy = ProbePolicy::frozen;
  int repetitions = 50;      ///< probe-study repetitions per probe count
  Index slice_mode = 1;      ///< exported slice, 0-based
  Index slice_index = 9;

  void validate() const;
  TrainOptions train_options(Index probes) const;
};

void to_json(nlohmann::json& j, const ExperimentConfig& c);
void from_json(const nlohmann::json& j, ExperimentConfig& c);

ExperimentKind parse_experiment_kind(const std::string& s);
const char* to_string(ExperimentKind k);

struct GridPair {
  GridDesign train;  ///< n equispaced points in [-1, 1] per dimension
  GridDesign test;   ///< the n - 1 midpoints per dimension
};

GridPair gen_grids(Index n, int D = 3);

/// Coefficients R(r, d, k) of the sine-product labels, k = 0 frequency,
/// k = 1 phase, stored at index (r * D + d) * 2 + k.
struct TrigCoefficients {
  int R = 3;
  int D = 3;
  std::vector<double> values;

  double operator()(int r, int d, int k) const { return values[static_cast<std::size_t>((r * D + d) * 2 + k)]; }
};

/// sum_r prod_d sin(pi R(r,d,0) x_d + pi/2 R(r,d,1)) on a grid, dense, row-major.
DenseTensor trig_labels(const GridDesign& grid, const TrigCoefficients& c);

struct TrigData {
  TTTensor y_train;
  TTTensor y_test;
  TrigCoefficients coefficients;
};

/// Uniform [0,1) coefficients and N(0, sigma^2) noise on the training labels
/// only; both label tensors compressed at `round`.
TrigData gen_trig_data(const GridPair& grids, std::uint64_t seed, double sigma, double round = 1e-8);
TrigData gen_trig_data(const GridPair& grids, const TrigCoefficients& c, std::uint64_t seed, double sigma,
                       double round = 1e-8);

struct SampleData {
  TTTensor y_train;
  TTTensor y_test;
};

/// Sample on the union grid (2n - 1 points per dimension) via sample_prior,
/// then split into odd (train) and even (test) positions.
SampleData gen_gp_sample_data(const GridPair& grids, const HyperParams& truth, double sigma, std::uint64_t seed,
                              const PriorSampleOptions& opts = {});

/// Ground-truth parameters of the sampled-GP experiment.
HyperParams sample_truth_params(double noise_sigma);

/// sigma_f = 1 + eps and ell = 0.1 + eps, eps ~ N(0, 0.005^2) per parameter.
HyperParams initial_params(int R, int D, double noise_sigma, std::uint64_t seed);

/// Order-3 tensor with one mode fixed, as a dense matrix over the other two.
Eigen::MatrixXd export_slice(const TTTensor& t, Index mode, Index index);

struct ProbeStudyRow {
  Index p = 0;
  double mean_estimate = 0.0;
  double mean_abs_error = 0.0;
  double stddev = 0.0;
};

struct ProbeStudy {
  double exact = 0.0;  ///< dense log det
  std::vector<ProbeStudyRow> rows;
  double slope = 0.0;  ///< log-log regression of stddev on p
};

/// Repeated Hutchinson estimates of log det K~ with fresh probes; needs a
/// kernel small enough to factor densely.
ProbeStudy probe_study(const KroneckerSumKernel& kernel, const HyperParams& theta, const std::vector<Index>& counts,
                       int repetitions, std::uint64_t seed, const KrylovOptions& opts);

struct TaylorRow {
  double h = 0.0;
  double remainder = 0.0;
};

struct TaylorStudy {
  std::vector<TaylorRow> rows;
  double slope = 0.0;  ///< fitted on h in [0.01, 0.5]
  Eigen::VectorXd direction;
};

/// |f(theta + h d) - f(theta) - h g^T d| for a random unit direction d. The
/// cost uses one frozen probe set; the gradient is evaluated with an
/// independent probe set, as happens when probes are redrawn per call.
TaylorStudy taylor_check(const KroneckerSumKernel& kernel, const HyperParams& theta, const TTTensor& y,
                         const TrainOptions& opts, const std::vector<double>& steps);

/// Log-spaced step sizes from 1e-3 to 1.
std::vector<double> default_taylor_steps();

/// Least-squares slope of log(y) against log(x) over x in [lo, hi].
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y, double lo, double hi);

struct ProbeRun {
  Index p = 0;
  double error_init = 0.0;
  double error_opt = 0.0;
  std::optional<double> error_truth;
  FitResult fit;
  std::optional<std::string> failure;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<ProbeRun> runs;
  std::optional<ProbeStudy> probes;
  std::optional<TaylorStudy> taylor;
  std::optional<TrigCoefficients> coefficients;
  /// slices of y_test, the best posterior mean and their absolute difference
  std::optional<Eigen::MatrixXd> slice_test, slice_mean, slice_error;
  double total_ms = 0.0;
};

void to_json(nlohmann::json& j, const ExperimentReport& r);

ExperimentReport run_experiment(const ExperimentConfig& config);

/// report.json, errors.csv and slice_*.csv (whichever apply) into dir.
void write_report(const ExperimentReport& report, const std::string& dir);

}  // namespace ttgp
