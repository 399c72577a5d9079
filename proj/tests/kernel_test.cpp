#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "ttgp/kernel.hpp"

using namespace ttgp;

namespace {

HyperParams random_theta(std::mt19937_64& rng, int R, int D, double noise) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  HyperParams p = HyperParams::uniform(R, D, 1.0, 0.5, noise);
  for (auto& v : p.log_sigma_f) v = u(rng);
  for (auto& row : p.log_ell)
    for (auto& v : row) v = std::log(0.3) + u(rng);
  return p;
}

Eigen::MatrixXd dense_kernel(const GridDesign& g, const HyperParams& p) {
  Eigen::MatrixXd k;
  for (int r = 0; r < p.R; ++r) {
    std::vector<Eigen::MatrixXd> f;
    for (int d = 0; d < p.D; ++d)
      f.push_back(oracle::se(g.points[d], g.points[d], std::exp(p.log_ell[r][d]),
                             d == 0 ? std::exp(2 * p.log_sigma_f[r]) : 1.0));
    Eigen::MatrixXd term = oracle::kron_all(f);
    k = r == 0 ? term : Eigen::MatrixXd(k + term);
  }
  return k;
}

GridDesign grid(int D, Index n) {
  GridDesign g;
  for (int d = 0; d < D; ++d) g.points.push_back(oracle::linspace(-1.0 + 0.1 * d, 1.0, n));
  return g;
}

}  // namespace

TEST(SeFactor, Cases) {
  std::vector<double> one{0.3};
  EXPECT_EQ(se_factor(one, 0.0), Eigen::MatrixXd::Ones(1, 1));
  std::vector<double> two{0.0, 1.0};
  Eigen::MatrixXd k = se_factor(two, 0.0, std::log(2.0));
  EXPECT_DOUBLE_EQ(k(0, 0), 4.0);
  EXPECT_NEAR(k(0, 1), 2.4261226, 1e-7);
  EXPECT_EQ(k(0, 1), k(1, 0));
  std::vector<double> pts{-1.0, 0.0, 0.4, 1.0};
  EXPECT_LE((se_factor(pts, 20.0) - Eigen::MatrixXd::Ones(4, 4)).cwiseAbs().maxCoeff(), 1e-10);
  // overflow is reported as a domain error so a line search can back off
  EXPECT_THROW(se_factor(pts, -400.0), std::domain_error);
  EXPECT_THROW(se_factor(pts, 0.0, 400.0), std::domain_error);
}

TEST(HyperParams, FlatteningOrderAndJson) {
  HyperParams p = HyperParams::uniform(2, 3, 1.0, 1.0, 0.01);
  p.log_sigma_f = {0.1, 0.2};
  p.log_ell = {{1, 2, 3}, {4, 5, 6}};
  Eigen::VectorXd flat(8);
  flat << 0.1, 0.2, 1, 2, 3, 4, 5, 6;
  EXPECT_EQ(p.flatten(), flat);
  EXPECT_EQ(p.slot(1), (std::pair<int, int>{1, -1}));
  EXPECT_EQ(p.slot(6), (std::pair<int, int>{1, 1}));
  EXPECT_THROW(p.slot(8), std::out_of_range);
  nlohmann::json j = p;
  HyperParams back = j.get<HyperParams>();
  EXPECT_EQ(back.flatten(), flat);
  EXPECT_EQ(back.noise_sigma, 0.01);
  EXPECT_EQ(p.with_flat(2 * flat).flatten(), 2 * flat);
}

TEST(BuildKernel, SingleFactor) {
  std::vector<double> x{-0.5, 0.1, 0.7};
  HyperParams p = HyperParams::uniform(1, 1, 1.3, 0.4, 0.0);
  Eigen::MatrixXd expect = oracle::se(x, x, 0.4, 1.3 * 1.3);
  EXPECT_LE((ttm_to_full(build_kernel(GridDesign{{x}}, p)) - expect).norm(), 1e-14);
}

TEST(BuildKernel, MatchesDenseKroneckerSum) {
  std::mt19937_64 rng(1);
  GridDesign g = grid(2, 4);
  HyperParams p = random_theta(rng, 2, 2, 0.0);
  TTMatrix k = build_kernel(g, p);
  EXPECT_EQ(k.ranks(), (std::vector<Index>{1, 2, 1}));
  Eigen::MatrixXd dense = ttm_to_full(k);
  EXPECT_LE((dense - dense_kernel(g, p)).norm(), 1e-13 * dense.norm());
  EXPECT_GE(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(dense).eigenvalues().minCoeff(), -1e-10);

  Eigen::VectorXd e0 = Eigen::VectorXd::Unit(4, 0);
  TTTensor col = ttm_apply(k, tt_rank1({e0, e0}));
  Eigen::VectorXd c = oracle::as_vector(tt_to_full(col));
  EXPECT_LE((c - dense.col(0)).norm(), 1e-14);
}

TEST(AddNoise, Cases) {
  std::mt19937_64 rng(2);
  GridDesign g = grid(2, 4);
  HyperParams p = random_theta(rng, 2, 2, 0.01);
  TTMatrix k = build_kernel(g, p);
  TTMatrix kn = add_noise(k, 0.01);
  EXPECT_EQ(kn.ranks(), (std::vector<Index>{1, 3, 1}));
  Eigen::MatrixXd expect = dense_kernel(g, p) + 1e-4 * Eigen::MatrixXd::Identity(16, 16);
  EXPECT_LE((ttm_to_full(kn) - expect).norm(), 1e-13 * expect.norm());
  EXPECT_GE(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(ttm_to_full(kn)).eigenvalues().minCoeff(), 1e-4 - 1e-10);
  EXPECT_EQ(ttm_to_full(add_noise(k, 0.0)), ttm_to_full(k));

  TTMatrix zero = ttm_from_factors({Eigen::MatrixXd::Zero(4, 4), Eigen::MatrixXd::Zero(4, 4)});
  Eigen::MatrixXd scaled = ttm_to_full(add_noise(zero, 0.1));
  EXPECT_LE((scaled - 0.01 * Eigen::MatrixXd::Identity(16, 16)).norm(), 1e-16);
  EXPECT_EQ(KroneckerSumKernel(g).noisy_kernel(p).ranks(), kn.ranks());
}

TEST(KernelDerivative, SignalVarianceSingleFactor) {
  std::vector<double> x{0.0, 0.3, 0.9};
  HyperParams p = HyperParams::uniform(1, 1, 0.7, 0.5, 0.0);
  Eigen::MatrixXd k = ttm_to_full(build_kernel(GridDesign{{x}}, p));
  EXPECT_LE((ttm_to_full(kernel_derivative(GridDesign{{x}}, p, 0)) - 2 * k).norm(), 1e-15);
}

TEST(KernelDerivative, IdenticalPointsGiveZero) {
  GridDesign g{{{0.2, 0.2, 0.2}, {0.5, 0.5}}};
  HyperParams p = HyperParams::uniform(1, 2, 1.0, 0.5, 0.0);
  for (Index j = 1; j < 3; ++j) EXPECT_EQ(ttm_to_full(kernel_derivative(g, p, j)).norm(), 0.0);
}

TEST(KernelDerivative, MatchesFiniteDifferences) {
  std::mt19937_64 rng(3);
  GridDesign g = grid(2, 4);
  HyperParams p = random_theta(rng, 2, 2, 0.0);
  KroneckerSumKernel ks(g);
  const double h = 1e-6;
  for (Index j = 0; j < p.parameter_count(); ++j) {
    Eigen::VectorXd tp = p.flatten(), tm = p.flatten();
    tp(j) += h;
    tm(j) -= h;
    Eigen::MatrixXd fd = (dense_kernel(g, p.with_flat(tp)) - dense_kernel(g, p.with_flat(tm))) / (2 * h);
    TTMatrix dk = ks.derivative(p, j);
    EXPECT_EQ(dk.ranks(), (std::vector<Index>{1, 1, 1}));
    Eigen::MatrixXd dd = ttm_to_full(dk);
    EXPECT_LE((dd - fd).norm(), 1e-5 * fd.norm()) << j;
    EXPECT_LE((dd - dd.transpose()).norm(), 1e-15);
  }
  EXPECT_THROW(ks.derivative(p, 6), std::out_of_range);
}

TEST(Kernel, ScaleCovariance) {
  std::mt19937_64 rng(4);
  GridDesign g = grid(2, 3);
  HyperParams p = random_theta(rng, 2, 2, 0.0);
  HyperParams q = p;
  q.log_sigma_f[1] += std::log(3.0);
  HyperParams only0 = p, only1 = p;
  only0.R = only1.R = 1;
  only0.log_sigma_f = {p.log_sigma_f[0]};
  only0.log_ell = {p.log_ell[0]};
  only1.log_sigma_f = {p.log_sigma_f[1]};
  only1.log_ell = {p.log_ell[1]};
  Eigen::MatrixXd expect = dense_kernel(g, only0) + 9.0 * dense_kernel(g, only1);
  EXPECT_LE((ttm_to_full(build_kernel(g, q)) - expect).norm(), 1e-13 * expect.norm());
}

TEST(CrossKernel, MatchesDense) {
  std::mt19937_64 rng(5);
  GridDesign train = grid(2, 5), test = grid(2, 4);
  HyperParams p = random_theta(rng, 2, 2, 0.0);
  Eigen::MatrixXd expect;
  for (int r = 0; r < 2; ++r) {
    Eigen::MatrixXd term = oracle::kron(
        oracle::se(test.points[0], train.points[0], std::exp(p.log_ell[r][0]), std::exp(2 * p.log_sigma_f[r])),
        oracle::se(test.points[1], train.points[1], std::exp(p.log_ell[r][1]), 1.0));
    expect = r == 0 ? term : Eigen::MatrixXd(expect + term);
  }
  Eigen::MatrixXd got = ttm_to_full(build_cross_kernel(test, train, p));
  ASSERT_EQ(got.rows(), 16);
  ASSERT_EQ(got.cols(), 25);
  EXPECT_LE((got - expect).norm(), 1e-13 * expect.norm());
}
