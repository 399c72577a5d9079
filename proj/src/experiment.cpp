#include "ttgp/experiment.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <stdexcept>

namespace ttgp {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// fixed stream ids below the seed
constexpr std::uint64_t kStreamCoefficients = 1;
constexpr std::uint64_t kStreamTrainNoise = 2;
constexpr std::uint64_t kStreamInit = 3;
constexpr std::uint64_t kStreamTaylorDirection = 4;

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
  CounterRng r(seed, 1000 + salt);
  return r();
}

TTTensor compress(const DenseTensor& t, double round) { return tt_from_full(t, {round}); }

double frobenius_error(const TTTensor& a, const TTTensor& b) { return tt_norm(tt_axpy(1.0, a, -1.0, b)); }

void write_matrix_csv(const Eigen::MatrixXd& m, const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << std::setprecision(17);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) f << (j ? "," : "") << m(i, j);
    f << "\n";
  }
}

nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    std::vector<double> r(static_cast<std::size_t>(m.cols()));
    for (Index j = 0; j < m.cols(); ++j) r[static_cast<std::size_t>(j)] = m(i, j);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace

// ---- config ----

void ExperimentConfig::validate() const {
  if (n < 2) throw std::invalid_argument("ExperimentConfig: n must be at least 2");
  if (R < 1 || D < 1) throw std::invalid_argument("ExperimentConfig: R and D must be positive");
  if (probe_counts.empty()) throw std::invalid_argument("ExperimentConfig: empty probe count list");
  for (Index p : probe_counts)
    if (p < 1) throw std::invalid_argument("ExperimentConfig: probe counts must be positive");
  if (!(kryltol > 0 && amentol > 0 && trunctol > 0 && grad_tol > 0))
    throw std::invalid_argument("ExperimentConfig: tolerances must be positive");
  if (!(sigma > 0)) throw std::invalid_argument("ExperimentConfig: sigma must be positive");
  if ((kind == ExperimentKind::trig || kind == ExperimentKind::gp_sample || kind == ExperimentKind::taylor_check) &&
      D != 3)
    throw std::invalid_argument("ExperimentConfig: the data generators are defined for D = 3");
  if (kind == ExperimentKind::gp_sample && R != 3)
    throw std::invalid_argument("ExperimentConfig: the sampled-GP ground truth has R = 3");
  if (repetitions < 2) throw std::invalid_argument("ExperimentConfig: repetitions must be at least 2");
  if (krylov_maxit < 2 || max_iter < 0) throw std::invalid_argument("ExperimentConfig: bad iteration limits");
  if (!(fit_time_s > 0)) throw std::invalid_argument("ExperimentConfig: fit_time_s must be positive");
}

TrainOptions ExperimentConfig::train_options(Index probes) const {
  TrainOptions o;
  o.probes = probes;
  o.kryltol = kryltol;
  o.amentol = amentol;
  o.trunctol = trunctol;
  o.krylov_maxit = krylov_maxit;
  o.max_iter = max_iter;
  o.time_limit_s = fit_time_s;
  o.grad_tol = grad_tol;
  o.gradient = gradient;
  o.policy = policy;
  o.seed = derive_seed(seed, static_cast<std::uint64_t>(probes));
  return o;
}

ExperimentKind parse_experiment_kind(const std::string& s) {
  if (s == "trig") return ExperimentKind::trig;
  if (s == "gp-sample") return ExperimentKind::gp_sample;
  if (s == "probe-study") return ExperimentKind::probe_study;
  if (s == "taylor-check") return ExperimentKind::taylor_check;
  throw std::invalid_argument("unknown experiment kind: " + s);
}

const char* to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::trig:
      return "trig";
    case ExperimentKind::gp_sample:
      return "gp-sample";
    case ExperimentKind::probe_study:
      return "probe-study";
    case ExperimentKind::taylor_check:
      return "taylor-check";
  }
  return "unknown";
}

void to_json(nlohmann::json& j, const ExperimentConfig& c) {
  j = nlohmann::json{{"kind", to_string(c.kind)},
                     {"n", c.n},
                     {"R", c.R},
                     {"D", c.D},
                     {"probe_counts", c.probe_counts},
                     {"kryltol", c.kryltol},
                     {"amentol", c.amentol},
                     {"trunctol", c.trunctol},
                     {"sigma", c.sigma},
                     {"seed", c.seed},
                     {"out", c.out},
                     {"krylov_maxit", c.krylov_maxit},
                     {"max_iter", c.max_iter},
                     {"fit_time_s", c.fit_time_s},
                     {"grad_tol", c.grad_tol},
                     {"gradient", to_string(c.gradient)},
                     {"policy", to_string(c.policy)},
                     {"repetitions", c.repetitions},
                     {"slice_mode", c.slice_mode},
                     {"slice_index", c.slice_index}};
}

void from_json(const nlohmann::json& j, ExperimentConfig& c) {
  if (!j.is_object()) throw std::invalid_argument("experiment config must be a JSON object");
  static const char* known[] = {"kind",     "n",        "R",        "D",         "probe_counts", "kryltol",
                                "amentol",  "trunctol", "sigma",    "seed",      "out",          "krylov_maxit",
                                "max_iter", "grad_tol", "gradient", "policy",    "repetitions",  "slice_mode",
                                "slice_index", "fit_time_s"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) throw std::invalid_argument("unknown config key: " + it.key());
  }
  if (j.contains("kind")) c.kind = parse_experiment_kind(j.at("kind").get<std::string>());
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) j.at(key).get_to(field);
  };
  get("n", c.n);
  get("R", c.R);
  get("D", c.D);
  get("probe_counts", c.probe_counts);
  get("kryltol", c.kryltol);
  get("amentol", c.amentol);
  get("trunctol", c.trunctol);
  get("sigma", c.sigma);
  get("seed", c.seed);
  get("out", c.out);
  get("krylov_maxit", c.krylov_maxit);
  get("max_iter", c.max_iter);
  get("fit_time_s", c.fit_time_s);
  get("grad_tol", c.grad_tol);
  get("repetitions", c.repetitions);
  get("slice_mode", c.slice_mode);
  get("slice_index", c.slice_index);
  if (j.contains("gradient")) {
    const auto g = j.at("gradient").get<std::string>();
    if (g == "block") c.gradient = GradientMethod::block;
    else if (g == "projected") c.gradient = GradientMethod::projected;
    else throw std::invalid_argument("unknown gradient method: " + g);
  }
  if (j.contains("policy")) {
    const auto p = j.at("policy").get<std::string>();
    if (p == "frozen") c.policy = ProbePolicy::frozen;
    else if (p == "resample") c.policy = ProbePolicy::resample;
    else throw std::invalid_argument("unknown probe policy: " + p);
  }
}

// ---- data ----

GridPair gen_grids(Index n, int D) {
  if (n < 2) throw std::invalid_argument("gen_grids: n must be at least 2");
  if (D < 1) throw std::invalid_argument("gen_grids: D must be positive");
  std::vector<double> train(static_cast<std::size_t>(n)), test(static_cast<std::size_t>(n - 1));
  const double h = 2.0 / static_cast<double>(n - 1);
  for (Index i = 0; i < n; ++i) train[static_cast<std::size_t>(i)] = -1.0 + h * static_cast<double>(i);
  train.back() = 1.0;
  for (Index i = 0; i + 1 < n; ++i) test[static_cast<std::size_t>(i)] = -1.0 + h * (static_cast<double>(i) + 0.5);
  GridPair g;
  g.train.points.assign(static_cast<std::size_t>(D), train);
  g.test.points.assign(static_cast<std::size_t>(D), test);
  return g;
}

DenseTensor trig_labels(const GridDesign& grid, const TrigCoefficients& c) {
  grid.validate();
  if (grid.order() != c.D) throw std::invalid_argument("trig_labels: grid dimension does not match the coefficients");
  if (static_cast<int>(c.values.size()) != c.R * c.D * 2)
    throw std::invalid_argument("trig_labels: coefficient count mismatch");
  const auto sizes = grid.sizes();
  DenseTensor out(sizes);
  // separable terms: evaluate the univariate factors once
  std::vector<std::vector<Eigen::VectorXd>> f(static_cast<std::size_t>(c.R));
  for (int r = 0; r < c.R; ++r)
    for (int d = 0; d < c.D; ++d) {
      const auto& x = grid.points[static_cast<std::size_t>(d)];
      Eigen::VectorXd v(static_cast<Index>(x.size()));
      for (std::size_t i = 0; i < x.size(); ++i)
        v(static_cast<Index>(i)) =
            std::sin(std::numbers::pi * c(r, d, 0) * x[i] + 0.5 * std::numbers::pi * c(r, d, 1));
      f[static_cast<std::size_t>(r)].push_back(v);
    }
  std::vector<Index> idx(sizes.size(), 0);
  for (double& value : out.values) {
    double s = 0.0;
    for (int r = 0; r < c.R; ++r) {
      double prod = 1.0;
      for (int d = 0; d < c.D; ++d) prod *= f[static_cast<std::size_t>(r)][static_cast<std::size_t>(d)](idx[static_cast<std::size_t>(d)]);
      s += prod;
    }
    value = s;
    for (std::size_t d = sizes.size(); d-- > 0;) {
      if (++idx[d] < sizes[d]) break;
      idx[d] = 0;
    }
  }
  return out;
}

TrigData gen_trig_data(const GridPair& grids, const TrigCoefficients& c, std::uint64_t seed, double sigma,
                       double round) {
  if (grids.train.order() != 3 || grids.test.order() != 3) throw std::invalid_argument("gen_trig_data: D must be 3");
  if (!(sigma >= 0)) throw std::invalid_argument("gen_trig_data: sigma must be nonnegative");
  DenseTensor train = trig_labels(grids.train, c);
  DenseTensor noise = normal_tensor(grids.train.sizes(), seed, kStreamTrainNoise);
  for (std::size_t i = 0; i < train.values.size(); ++i) train.values[i] += sigma * noise.values[i];
  TrigData out;
  out.coefficients = c;
  out.y_train = compress(train, round);
  out.y_test = compress(trig_labels(grids.test, c), round);
  return out;
}

TrigData gen_trig_data(const GridPair& grids, std::uint64_t seed, double sigma, double round) {
  TrigCoefficients c;
  c.R = 3;
  c.D = 3;
  CounterRng rng(seed, kStreamCoefficients);
  for (int k = 0; k < c.R * c.D * 2; ++k) c.values.push_back(rng.uniform());
  return gen_trig_data(grids, c, seed, sigma, round);
}

SampleData gen_gp_sample_data(const GridPair& grids, const HyperParams& truth, double sigma, std::uint64_t seed,
                              const PriorSampleOptions& opts) {
  const int D = static_cast<int>(grids.train.order());
  if (D != 3 || grids.test.order() != 3) throw std::invalid_argument("gen_gp_sample_data: D must be 3");
  const Index n = static_cast<Index>(grids.train.points[0].size());
  const GridPair fine = gen_grids(2 * n - 1, D);
  const TTTensor full = sample_prior(fine.train, truth, sigma, seed, opts);
  std::vector<Index> odd, even;
  for (Index i = 0; i < 2 * n - 1; ++i) (i % 2 == 0 ? odd : even).push_back(i);
  SampleData out;
  out.y_train = tt_subsample(full, std::vector<std::vector<Index>>(3, odd));
  out.y_test = tt_subsample(full, std::vector<std::vector<Index>>(3, even));
  return out;
}

HyperParams sample_truth_params(double noise_sigma) {
  HyperParams p = HyperParams::uniform(3, 3, 1.0, 0.1, noise_sigma);
  const double sf[3] = {1.0, 0.1, 0.01};
  const double ell[3][3] = {{0.06, 0.05, 0.04}, {0.2, 0.19, 0.21}, {0.3, 0.4, 0.5}};
  for (int r = 0; r < 3; ++r) {
    p.log_sigma_f[static_cast<std::size_t>(r)] = std::log(sf[r]);
    for (int d = 0; d < 3; ++d) p.log_ell[static_cast<std::size_t>(r)][static_cast<std::size_t>(d)] = std::log(ell[r][d]);
  }
  return p;
}

HyperParams initial_params(int R, int D, double noise_sigma, std::uint64_t seed) {
  HyperParams p = HyperParams::uniform(R, D, 1.0, 0.1, noise_sigma);
  CounterRng rng(seed, kStreamInit);
  for (auto& s : p.log_sigma_f) s = std::log(1.0 + 0.005 * rng.normal());
  for (auto& row : p.log_ell)
    for (auto& l : row) l = std::log(0.1 + 0.005 * rng.normal());
  return p;
}

Eigen::MatrixXd export_slice(const TTTensor& t, Index mode, Index index) {
  if (t.order() != 3) throw std::invalid_argument("export_slice: tensor must have order 3");
  if (mode < 0 || mode > 2) throw std::out_of_range("export_slice: mode out of range");
  const Core3& c = t.core(mode);
  if (index < 0 || index >= c.mode_size()) throw std::out_of_range("export_slice: index out of range");
  std::vector<Core3> cores = t.cores();
  Core3 fixed(c.left_rank(), 1, c.right_rank());
  for (Index a = 0; a < c.left_rank(); ++a)
    for (Index b = 0; b < c.right_rank(); ++b) fixed(a, 0, b) = c(a, index, b);
  cores[static_cast<std::size_t>(mode)] = std::move(fixed);
  const DenseTensor full = tt_to_full(TTTensor(std::move(cores)));
  std::vector<Index> keep;
  for (Index d = 0; d < 3; ++d)
    if (d != mode) keep.push_back(t.core(d).mode_size());
  // row-major dense data with a unit mode removed is row-major over the rest
  Eigen::MatrixXd out(keep[0], keep[1]);
  for (Index i = 0; i < keep[0]; ++i)
    for (Index j = 0; j < keep[1]; ++j) out(i, j) = full.values[static_cast<std::size_t>(i * keep[1] + j)];
  return out;
}

// ---- studies ----

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y, double lo, double hi) {
  if (x.size() != y.size()) throw std::invalid_argument("loglog_slope: size mismatch");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < lo || x[i] > hi || !(x[i] > 0) || !(y[i] > 0)) continue;
    const double a = std::log(x[i]), b = std::log(y[i]);
    sx += a;
    sy += b;
    sxx += a * a;
    sxy += a * b;
    ++m;
  }
  if (m < 2) throw std::invalid_argument("loglog_slope: fewer than two usable points");
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

ProbeStudy probe_study(const KroneckerSumKernel& kernel, const HyperParams& theta, const std::vector<Index>& counts,
                       int repetitions, std::uint64_t seed, const KrylovOptions& opts) {
  if (repetitions < 2) throw std::invalid_argument("probe_study: need at least two repetitions");
  const TTMatrix k = kernel.noisy_kernel(theta);
  const Eigen::MatrixXd dense = ttm_to_full(k);
  Eigen::LLT<Eigen::MatrixXd> llt(dense);
  if (llt.info() != Eigen::Success) throw std::domain_error("probe_study: kernel is not positive definite");
  ProbeStudy out;
  out.exact = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  const auto sizes = kernel.grid().sizes();
  std::uint64_t stream = 0;
  std::vector<double> ps, sds;
  for (Index p : counts) {
    std::vector<double> est;
    for (int r = 0; r < repetitions; ++r) {
      const ProbeSet set = ProbeSet::draw(sizes, p, seed, stream);
      stream += static_cast<std::uint64_t>(p);
      double t = 0.0;
      for (const auto& z : set.probes) t += tt_krylov_quadform(MatrixFunctionKind::log, k, z, opts).value;
      est.push_back(t / static_cast<double>(p));
    }
    ProbeStudyRow row;
    row.p = p;
    for (double e : est) {
      row.mean_estimate += e / repetitions;
      row.mean_abs_error += std::abs(e - out.exact) / repetitions;
    }
    double var = 0.0;
    for (double e : est) var += (e - row.mean_estimate) * (e - row.mean_estimate);
    row.stddev = std::sqrt(var / (repetitions - 1));
    out.rows.push_back(row);
    ps.push_back(static_cast<double>(p));
    sds.push_back(row.stddev);
  }
  out.slope = counts.size() >= 2 ? loglog_slope(ps, sds, 0.0, 1e300) : std::nan("");
  return out;
}

std::vector<double> default_taylor_steps() {
  std::vector<double> h;
  for (int k = 0; k <= 15; ++k) h.push_back(std::pow(10.0, -3.0 + 0.2 * k));
  return h;
}

TaylorStudy taylor_check(const KroneckerSumKernel& kernel, const HyperParams& theta, const TTTensor& y,
                         const TrainOptions& opts, const std::vector<double>& steps) {
  const auto sizes = kernel.grid().sizes();
  const ProbeSet cost_probes = ProbeSet::draw(sizes, opts.probes, opts.seed, 0);
  const ProbeSet grad_probes =
      ProbeSet::draw(sizes, opts.probes, opts.seed, static_cast<std::uint64_t>(opts.probes));
  TaylorStudy out;
  const Index np = theta.parameter_count();
  CounterRng rng(opts.seed, kStreamTaylorDirection);
  out.direction.resize(np);
  for (Index j = 0; j < np; ++j) out.direction(j) = rng.normal();
  out.direction.normalize();
  const double f0 = nll_cost(kernel, theta, y, cost_probes, opts);
  const double slope = nll_grad(kernel, theta, y, grad_probes, opts).dot(out.direction);
  const Eigen::VectorXd th = theta.flatten();
  std::vector<double> hs, rs;
  for (double h : steps) {
    const double fh = nll_cost(kernel, theta.with_flat(th + h * out.direction), y, cost_probes, opts);
    out.rows.push_back({h, std::abs(fh - f0 - h * slope)});
    hs.push_back(h);
    rs.push_back(out.rows.back().remainder);
  }
  out.slope = loglog_slope(hs, rs, 0.01, 0.5);
  return out;
}

// ---- runner ----

void to_json(nlohmann::json& j, const ExperimentReport& r) {
  j = nlohmann::json::object();
  j["config"] = r.config;
  j["test_labels_noisy"] = false;
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& run : r.runs) {
    nlohmann::json e{{"p", run.p}, {"error_init", run.error_init}, {"error_opt", run.error_opt}};
    e["error_truth"] = run.error_truth ? nlohmann::json(*run.error_truth) : nlohmann::json(nullptr);
    e["fit"] = run.fit;
    if (run.failure) e["failure"] = *run.failure;
    runs.push_back(e);
  }
  j["runs"] = runs;
  if (r.probes) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.probes->rows)
      rows.push_back({{"p", row.p},
                      {"mean_estimate", row.mean_estimate},
                      {"mean_abs_error", row.mean_abs_error},
                      {"stddev", row.stddev}});
    j["probe_study"] = {{"exact_logdet", r.probes->exact}, {"rows", rows}, {"stddev_slope", r.probes->slope}};
  }
  if (r.taylor) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.taylor->rows) rows.push_back({{"h", row.h}, {"remainder", row.remainder}});
    std::vector<double> d(r.taylor->direction.data(), r.taylor->direction.data() + r.taylor->direction.size());
    j["taylor"] = {{"rows", rows}, {"slope", r.taylor->slope}, {"direction", d}};
  }
  if (r.coefficients) j["trig_coefficients"] = r.coefficients->values;
  if (r.slice_test) {
    j["slice"] = {{"mode", r.config.slice_mode},
                  {"index", r.config.slice_index},
                  {"test", matrix_json(*r.slice_test)},
                  {"mean", matrix_json(*r.slice_mean)},
                  {"abs_error", matrix_json(*r.slice_error)}};
  }
  j["timings_ms"] = {{"total", r.total_ms}};
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto t0 = Clock::now();
  ExperimentReport rep;
  rep.config = config;

  if (config.kind == ExperimentKind::probe_study) {
    const GridPair g = gen_grids(config.n, 2);
    const HyperParams theta = initial_params(config.R, 2, config.sigma, config.seed);
    KrylovOptions k = config.train_options(1).krylov();
    rep.probes = probe_study(KroneckerSumKernel(g.train), theta, config.probe_counts, config.repetitions,
                             derive_seed(config.seed, 0), k);
    rep.total_ms = ms_since(t0);
    return rep;
  }

  const GridPair grids = gen_grids(config.n, config.D);
  TTTensor y_train, y_test;
  std::optional<HyperParams> truth;
  if (config.kind == ExperimentKind::gp_sample) {
    truth = sample_truth_params(config.sigma);
    PriorSampleOptions so;
    so.compression = 1e-8;
    so.krylov = config.train_options(1).krylov();
    SampleData data = gen_gp_sample_data(grids, *truth, config.sigma, config.seed, so);
    y_train = std::move(data.y_train);
    y_test = std::move(data.y_test);
  } else {
    TrigData data = gen_trig_data(grids, config.seed, config.sigma);
    rep.coefficients = data.coefficients;
    y_train = std::move(data.y_train);
    y_test = std::move(data.y_test);
  }
  const HyperParams theta0 = initial_params(config.R, config.D, config.sigma, config.seed);
  const KroneckerSumKernel kernel(grids.train);

  if (config.kind == ExperimentKind::taylor_check) {
    rep.taylor = taylor_check(kernel, theta0, y_train, config.train_options(config.probe_counts.front()),
                              default_taylor_steps());
    rep.total_ms = ms_since(t0);
    return rep;
  }

  const TrainOptions base = config.train_options(config.probe_counts.front());
  const double err_init = frobenius_error(predict_mean(grids.train, grids.test, theta0, y_train, base), y_test);
  std::optional<double> err_truth;
  if (truth) err_truth = frobenius_error(predict_mean(grids.train, grids.test, *truth, y_train, base), y_test);

  std::optional<TTTensor> best_mean;
  double best_err = 0.0;
  for (Index p : config.probe_counts) {
    ProbeRun run;
    run.p = p;
    run.error_init = err_init;
    run.error_truth = err_truth;
    try {
      const TrainOptions opts = config.train_options(p);
      run.fit = fit_hyperparameters(kernel, y_train, theta0, opts);
      TTTensor mean = predict_mean(grids.train, grids.test, run.fit.theta_final, y_train, opts);
      run.error_opt = frobenius_error(mean, y_test);
      if (!best_mean || run.error_opt < best_err) {
        best_err = run.error_opt;
        best_mean = std::move(mean);
      }
    } catch (const std::exception& e) {
      run.failure = e.what();
      run.error_opt = std::nan("");
    }
    rep.runs.push_back(std::move(run));
  }

  if (best_mean && config.slice_index < y_test.core(config.slice_mode).mode_size()) {
    rep.slice_test = export_slice(y_test, config.slice_mode, config.slice_index);
    rep.slice_mean = export_slice(*best_mean, config.slice_mode, config.slice_index);
    rep.slice_error = (*rep.slice_test - *rep.slice_mean).cwiseAbs();
  }
  rep.total_ms = ms_since(t0);
  return rep;
}

void write_report(const ExperimentReport& report, const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  fs::create_directories(root);
  {
    std::ofstream f(root / "report.json");
    if (!f) throw std::runtime_error("cannot write " + (root / "report.json").string());
    f << nlohmann::json(report).dump(2) << "\n";
  }
  std::ofstream csv(root / "errors.csv");
  if (!csv) throw std::runtime_error("cannot write " + (root / "errors.csv").string());
  csv << std::setprecision(17);
  if (report.probes) {
    csv << "p,mean_estimate,mean_abs_error,stddev\n";
    for (const auto& r : report.probes->rows)
      csv << r.p << "," << r.mean_estimate << "," << r.mean_abs_error << "," << r.stddev << "\n";
  } else if (report.taylor) {
    csv << "h,remainder\n";
    for (const auto& r : report.taylor->rows) csv << r.h << "," << r.remainder << "\n";
  } else {
    csv << "p,initial,optimized,ground_truth\n";
    for (const auto& r : report.runs) {
      csv << r.p << "," << r.error_init << "," << r.error_opt << ",";
      if (r.error_truth) csv << *r.error_truth;
      csv << "\n";
    }
  }
  if (report.slice_test) {
    write_matrix_csv(*report.slice_test, root / "slice_test.csv");
    write_matrix_csv(*report.slice_mean, root / "slice_mean.csv");
    write_matrix_csv(*report.slice_error, root / "slice_error.csv");
  }
}

}  // namespace ttgp
