#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "ttgp/train.hpp"

using namespace ttgp;

namespace {

// Dense K + sigma^2 I built straight from the SE definition.
Eigen::MatrixXd dense_kernel(const GridDesign& g, const HyperParams& p, bool noise = true) {
  const Index n = g.total_size();
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  for (int r = 0; r < p.R; ++r) {
    std::vector<Eigen::MatrixXd> f;
    for (int d = 0; d < p.D; ++d) {
      const double s = d == 0 ? std::exp(2 * p.log_sigma_f[r]) : 1.0;
      f.push_back(oracle::se(g.points[d], g.points[d], std::exp(p.log_ell[r][d]), s));
    }
    k += oracle::kron_all(f);
  }
  if (noise) k += p.noise_sigma * p.noise_sigma * Eigen::MatrixXd::Identity(n, n);
  return k;
}

GridDesign grid2(Index n) {
  GridDesign g;
  g.points = {oracle::linspace(-1, 1, n), oracle::linspace(-0.9, 1.0, n)};
  return g;
}

HyperParams params2() {
  HyperParams p = HyperParams::uniform(2, 2, 1.0, 0.5, 0.1);
  p.log_sigma_f[1] = std::log(0.6);
  p.log_ell[0][1] = std::log(0.35);
  p.log_ell[1][0] = std::log(0.8);
  return p;
}

TTTensor smooth_data(const GridDesign& g) {
  std::vector<Eigen::VectorXd> f;
  for (const auto& x : g.points) {
    Eigen::VectorXd v(static_cast<Index>(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i) v(static_cast<Index>(i)) = std::sin(2.0 * x[i]) + 0.3;
    f.push_back(v);
  }
  return tt_rank1(f);
}

TrainOptions tight() {
  TrainOptions o;
  o.kryltol = 1e-10;
  o.amentol = 1e-10;
  o.trunctol = 1e-12;
  o.krylov_maxit = 80;
  return o;
}

double log_det(const Eigen::MatrixXd& k) {
  Eigen::LLT<Eigen::MatrixXd> llt(k);
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

}  // namespace

TEST(NllCost, DiagonalOperatorIsExact) {
  // points far apart relative to the length scale: K is a multiple of I
  GridDesign g;
  g.points = {{0.0, 100.0, 200.0}, {0.0, 100.0}};
  HyperParams p = HyperParams::uniform(2, 2, 1.0, 0.1, 0.5);
  p.log_sigma_f[1] = std::log(2.0);
  const double c = 1.0 + 4.0 + 0.25;
  TrainOptions o;
  o.probes = 3;
  auto ps = ProbeSet::draw(g.sizes(), 3, 1);
  const double v = nll_cost(KroneckerSumKernel(g), p, tt_zeros({3, 2}), ps, o);
  EXPECT_NEAR(v, 0.5 * (6 * std::log(2 * std::numbers::pi) + 6 * std::log(c)), 1e-10);
}

TEST(NllCost, MatchesDenseOracle) {
  GridDesign g;
  g.points = {oracle::linspace(-1, 1, 6), oracle::linspace(-1, 1, 6)};
  HyperParams p = params2();
  p.noise_sigma = 0.01;
  TTTensor y = smooth_data(g);
  TrainOptions o;
  o.kryltol = 1e-8;
  o.krylov_maxit = 60;
  auto ps = ProbeSet::draw(g.sizes(), 200, 3);
  auto ev = nll_evaluate(KroneckerSumKernel(g), p, y, ps, o, false);
  Eigen::MatrixXd k = dense_kernel(g, p);
  Eigen::VectorXd yd = oracle::brute_full(y);
  const double fit = yd.dot(k.llt().solve(yd));
  const double ld = log_det(k);
  EXPECT_LE(std::abs(ev.logdet - ld), 0.05 * std::abs(ld));
  EXPECT_LE(std::abs(ev.data_fit - fit), 1e-5 * fit);
  EXPECT_NEAR(ev.value, 0.5 * (36 * std::log(2 * std::numbers::pi) + ev.logdet + ev.data_fit), 1e-9);
}

TEST(NllCost, DoublingDataAddsThreeHalvesOfFit) {
  GridDesign g = grid2(5);
  HyperParams p = params2();
  TTTensor y = smooth_data(g);
  auto ps = ProbeSet::draw(g.sizes(), 4, 2);
  KroneckerSumKernel ks(g);
  TrainOptions o = tight();
  const double c1 = nll_cost(ks, p, y, ps, o);
  const double c2 = nll_cost(ks, p, tt_scale(y, 2.0), ps, o);
  Eigen::VectorXd yd = oracle::brute_full(y);
  const double fit = yd.dot(dense_kernel(g, p).llt().solve(yd));
  EXPECT_NEAR(c2 - c1, 1.5 * fit, 1e-6 * fit);
}

TEST(NllGrad, SinglePointGridHasZeroLengthScaleGradient) {
  GridDesign g;
  g.points = {{0.3}, {-0.2}, {0.5}};
  HyperParams p = HyperParams::uniform(1, 3, 1.3, 0.4, 0.1);
  auto ps = ProbeSet::draw(g.sizes(), 2, 5);
  TTTensor y = tt_rank1({Eigen::VectorXd::Constant(1, 0.7), Eigen::VectorXd::Ones(1), Eigen::VectorXd::Ones(1)});
  for (GradientMethod m : {GradientMethod::block, GradientMethod::projected}) {
    TrainOptions o;
    o.gradient = m;
    Eigen::VectorXd gr = nll_grad(KroneckerSumKernel(g), p, y, ps, o);
    ASSERT_EQ(gr.size(), 4);
    for (Index j = 1; j < 4; ++j) EXPECT_EQ(gr(j), 0.0) << j;
    EXPECT_NE(gr(0), 0.0);
  }
}

class NllGradMethod : public ::testing::TestWithParam<GradientMethod> {};

TEST_P(NllGradMethod, MatchesFrozenProbeFiniteDifferences) {
  GridDesign g = grid2(5);
  HyperParams p = params2();
  TTTensor y = smooth_data(g);
  KroneckerSumKernel ks(g);
  TrainOptions o = tight();
  o.gradient = GetParam();
  auto ps = ProbeSet::draw(g.sizes(), 6, 11);
  Eigen::VectorXd gr = nll_grad(ks, p, y, ps, o);
  const Eigen::VectorXd th = p.flatten();
  const double h = 1e-5;
  for (Index j = 0; j < th.size(); ++j) {
    Eigen::VectorXd tp = th, tm = th;
    tp(j) += h;
    tm(j) -= h;
    const double fd = (nll_cost(ks, p.with_flat(tp), y, ps, o) - nll_cost(ks, p.with_flat(tm), y, ps, o)) / (2 * h);
    EXPECT_LE(std::abs(gr(j) - fd), 1e-4 * std::max(std::abs(fd), 1e-2 * gr.norm())) << j;
    // sign convention
    if (std::abs(fd) > 1e-3 * gr.norm()) EXPECT_EQ(gr(j) > 0, fd > 0) << j;
  }
}

INSTANTIATE_TEST_SUITE_P(Paths, NllGradMethod, ::testing::Values(GradientMethod::block, GradientMethod::projected),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(NllGrad, MatchesDenseTraceWithinProbeNoise) {
  GridDesign g = grid2(4);
  HyperParams p = params2();
  TTTensor y = smooth_data(g);
  KroneckerSumKernel ks(g);
  TrainOptions o = tight();
  o.gradient = GradientMethod::projected;
  Eigen::MatrixXd k = dense_kernel(g, p);
  Eigen::VectorXd yd = oracle::brute_full(y);
  Eigen::VectorXd alpha = k.llt().solve(yd);
  const Index np = p.parameter_count();
  Eigen::VectorXd expect(np);
  for (Index j = 0; j < np; ++j) {
    Eigen::MatrixXd e = ttm_to_full(ks.derivative(p, j));
    expect(j) = 0.5 * (k.llt().solve(e).trace() - alpha.dot(e * alpha));
  }
  const int reps = 50;
  Eigen::MatrixXd draws(reps, np);
  for (int s = 0; s < reps; ++s) draws.row(s) = nll_grad(ks, p, y, ProbeSet::draw(g.sizes(), 1, 100 + s), o);
  Eigen::VectorXd mean = draws.colwise().mean();
  for (Index j = 0; j < np; ++j) {
    const double sd = std::sqrt((draws.col(j).array() - mean(j)).square().sum() / (reps - 1));
    EXPECT_LE(std::abs(mean(j) - expect(j)), 3.0 * sd / std::sqrt(reps) + 1e-10) << j;
  }
}

TEST(Fit, FrozenProbeFitDecreasesCost) {
  GridDesign g = grid2(5);
  HyperParams p0 = HyperParams::uniform(2, 2, 1.0, 0.2, 0.1);
  p0.log_ell[1][1] = std::log(0.25);
  TTTensor y = smooth_data(g);
  TrainOptions o;
  o.probes = 4;
  o.max_iter = 15;
  o.gradient = GradientMethod::projected;
  o.seed = 7;
  auto fit = fit_hyperparameters(KroneckerSumKernel(g), y, p0, o);
  ASSERT_GE(fit.cost_trace.size(), 2u);
  for (std::size_t k = 1; k < fit.cost_trace.size(); ++k) EXPECT_LE(fit.cost_trace[k], fit.cost_trace[k - 1]);
  EXPECT_LT(fit.cost_trace.back(), fit.cost_trace.front());
  nlohmann::json j = fit;
  for (const char* key : {"theta_init", "theta_final", "cost_trace", "grad_norm", "probe_seed", "timings_ms",
                          "solver_flags"})
    EXPECT_TRUE(j.contains(key)) << key;
  // deterministic given the seed
  auto again = fit_hyperparameters(KroneckerSumKernel(g), y, p0, o);
  EXPECT_EQ(again.cost_trace, fit.cost_trace);
}

TEST(PredictMean, MatchesDenseFormula) {
  GridDesign train = grid2(5);
  GridDesign test;
  test.points = {oracle::linspace(-0.8, 0.8, 4), oracle::linspace(-0.7, 0.9, 4)};
  HyperParams p = params2();
  TTTensor y = smooth_data(train);
  TrainOptions o = tight();
  TTTensor mu = predict_mean(train, test, p, y, o);
  Eigen::MatrixXd kx = Eigen::MatrixXd::Zero(16, 25);
  for (int r = 0; r < p.R; ++r) {
    std::vector<Eigen::MatrixXd> f;
    for (int d = 0; d < p.D; ++d)
      f.push_back(oracle::se(test.points[d], train.points[d], std::exp(p.log_ell[r][d]),
                             d == 0 ? std::exp(2 * p.log_sigma_f[r]) : 1.0));
    kx += oracle::kron_all(f);
  }
  Eigen::VectorXd expect = kx * dense_kernel(train, p).llt().solve(oracle::brute_full(y));
  EXPECT_LE((oracle::brute_full(mu) - expect).norm(), 1e-5 * expect.norm());
  EXPECT_EQ(tt_norm(predict_mean(train, test, p, tt_zeros({5, 5}), o)), 0.0);
  GridDesign bad;
  bad.points = {{0.0}};
  EXPECT_THROW(predict_mean(train, bad, p, y, o), std::invalid_argument);
}

TEST(PredictMean, InterpolatesWithoutNoise) {
  GridDesign g = grid2(5);
  HyperParams p = params2();
  p.noise_sigma = 1e-8;
  TTTensor y = smooth_data(g);
  TTTensor mu = predict_mean(g, g, p, y, tight());
  EXPECT_LE((oracle::brute_full(mu) - oracle::brute_full(y)).norm(), 1e-4 * oracle::brute_full(y).norm());
}

TEST(SamplePrior, VanishingKernelGivesNoise) {
  GridDesign g = grid2(4);
  HyperParams p = params2();
  for (auto& s : p.log_sigma_f) s = -20.0;
  TTTensor s = sample_prior(g, p, 1.0, 5);
  DenseTensor v = normal_tensor(g.sizes(), 5, 1);
  Eigen::VectorXd vd = oracle::as_vector(v);
  EXPECT_LE((oracle::brute_full(s) - vd).norm(), 1e-6 * vd.norm());
}

TEST(SamplePrior, SeedDeterminism) {
  GridDesign g = grid2(4);
  TTTensor a = sample_prior(g, params2(), 0.1, 9);
  TTTensor b = sample_prior(g, params2(), 0.1, 9);
  ASSERT_EQ(a.ranks(), b.ranks());
  for (Index d = 0; d < a.order(); ++d) EXPECT_EQ(a.core(d).data(), b.core(d).data());
}

TEST(SamplePrior, SecondMomentMatchesKernel) {
  GridDesign g = grid2(4);
  HyperParams p = params2();
  const double sigma = 0.3;
  const int reps = 200;
  const Index n = 16;
  std::vector<Eigen::VectorXd> xs;
  for (int s = 0; s < reps; ++s) xs.push_back(oracle::brute_full(sample_prior(g, p, sigma, 1000 + s)));
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (const auto& x : xs) m += x * x.transpose();
  m /= reps;
  Eigen::MatrixXd k = dense_kernel(g, p, false) + sigma * sigma * Eigen::MatrixXd::Identity(n, n);
  int outside = 0;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      // standard error of a Gaussian second moment: sqrt((K_ii K_jj + K_ij^2) / reps)
      const double se = std::sqrt((k(i, i) * k(j, j) + k(i, j) * k(i, j)) / reps);
      if (std::abs(m(i, j) - k(i, j)) > 3.0 * se) ++outside;
    }
  EXPECT_EQ(outside, 0);
}

TEST(TrainOptions, Validation) {
  TrainOptions o;
  o.probes = 0;
  EXPECT_THROW(o.validate(), std::invalid_argument);
  o = {};
  o.kryltol = 0;
  EXPECT_THROW(o.validate(), std::invalid_argument);
}
