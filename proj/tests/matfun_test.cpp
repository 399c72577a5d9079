#include <gtest/gtest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "ttgp/matfun.hpp"

using namespace ttgp;

TEST(DenseLogm, TrivialCases) {
  EXPECT_EQ(dense_logm(Eigen::MatrixXd::Identity(4, 4)).norm(), 0.0);
  Eigen::MatrixXd d = Eigen::Vector2d(std::exp(1.0), std::exp(2.0)).asDiagonal();
  Eigen::MatrixXd expect = Eigen::Vector2d(1.0, 2.0).asDiagonal();
  EXPECT_LE((dense_logm(d) - expect).norm(), 1e-14);
}

TEST(DenseLogm, SpdMatchesEigenOracle) {
  std::mt19937_64 rng(1);
  Eigen::MatrixXd m = oracle::random_spd(rng, 6);
  Eigen::MatrixXd expect = oracle::sym_fun(m, [](double x) { return std::log(x); });
  Eigen::MatrixXd l = dense_logm(m);
  EXPECT_LE((l - expect).norm(), 1e-10 * expect.norm());
  EXPECT_EQ((l - l.transpose()).norm(), 0.0);
}

TEST(DenseLogm, RoundTripUpTo50) {
  std::mt19937_64 rng(2);
  for (Eigen::Index n : {1, 5, 20, 50}) {
    Eigen::MatrixXd m = oracle::random_spd(rng, n, 0.01, 10.0);
    Eigen::MatrixXd back = oracle::sym_fun(dense_logm(m), [](double x) { return std::exp(x); });
    EXPECT_LE((back - m).norm(), 1e-10 * m.norm()) << n;
    Eigen::MatrixXd s = dense_sqrtm(m);
    EXPECT_LE((s * s - m).norm(), 1e-10 * m.norm()) << n;
  }
}

TEST(DenseLogm, NonsymmetricInput) {
  std::mt19937_64 rng(3);
  Eigen::MatrixXd m = oracle::random_spd(rng, 8);
  m(0, 5) += 0.3;
  m(6, 2) -= 0.2;
  Eigen::MatrixXd l = dense_logm(m);
  EXPECT_LE((Eigen::MatrixXd(l.exp()) - m).norm(), 1e-10 * m.norm());
  Eigen::MatrixXd s = dense_sqrtm(m);
  EXPECT_LE((s * s - m).norm(), 1e-10 * m.norm());
}

TEST(DenseLogm, FrechetBlockMatchesFiniteDifference) {
  std::mt19937_64 rng(4);
  const Eigen::Index n = 5;
  Eigen::MatrixXd a = oracle::random_spd(rng, n);
  Eigen::MatrixXd e = oracle::random_spd(rng, n) - 1.5 * Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd blk = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  blk.topLeftCorner(n, n) = a;
  blk.bottomRightCorner(n, n) = a;
  blk.topRightCorner(n, n) = e;
  Eigen::MatrixXd l = dense_logm(blk).topRightCorner(n, n);
  const double h = 1e-5;
  Eigen::MatrixXd fd = (dense_logm(a + h * e) - dense_logm(a - h * e)) / (2 * h);
  EXPECT_LE((l - fd).norm(), 1e-6 * fd.norm());
}

TEST(DenseSqrtm, TrivialCases) {
  EXPECT_EQ(dense_sqrtm(Eigen::MatrixXd::Identity(3, 3)), Eigen::MatrixXd::Identity(3, 3));
  Eigen::MatrixXd d = Eigen::Vector2d(4.0, 9.0).asDiagonal();
  Eigen::MatrixXd expect = Eigen::Vector2d(2.0, 3.0).asDiagonal();
  EXPECT_LE((dense_sqrtm(d) - expect).norm(), 1e-15);
}

TEST(DenseSqrtm, SpdMatchesEigenOracle) {
  std::mt19937_64 rng(5);
  Eigen::MatrixXd m = oracle::random_spd(rng, 6);
  Eigen::MatrixXd expect = oracle::sym_fun(m, [](double x) { return std::sqrt(x); });
  Eigen::MatrixXd s = dense_sqrtm(m);
  EXPECT_LE((s - expect).norm(), 1e-10 * expect.norm());
  EXPECT_GT(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(s).eigenvalues().minCoeff(), 0.0);
}

TEST(DenseMatfun, DomainErrors) {
  Eigen::MatrixXd neg = Eigen::Vector2d(1.0, -2.0).asDiagonal();
  try {
    dense_logm(neg);
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_DOUBLE_EQ(e.eigenvalue().real(), -2.0);
  }
  EXPECT_THROW(dense_sqrtm(neg), DomainError);
  Eigen::MatrixXd singular = Eigen::Vector2d(1.0, 0.0).asDiagonal();
  EXPECT_THROW(dense_logm(singular), DomainError);
  EXPECT_NO_THROW(dense_sqrtm(singular));
  Eigen::MatrixXd jordan(2, 2);
  jordan << -1.0, 1.0, 0.0, -1.0;
  EXPECT_THROW(dense_logm(jordan), DomainError);
  EXPECT_THROW(dense_logm(Eigen::MatrixXd(2, 3)), std::invalid_argument);
}

TEST(DenseFrechet, SymmetricMatchesBlockLogAndSqrt) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::Index n = 6;
    Eigen::MatrixXd a = oracle::random_spd(rng, n, 0.05, 4.0);
    Eigen::MatrixXd e = Eigen::Map<Eigen::MatrixXd>(oracle::random_values(rng, n * n).data(), n, n);
    // two nearly equal eigenvalues exercise the confluent branch
    if (trial == 4) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
      Eigen::VectorXd l = es.eigenvalues();
      l(1) = l(0) * (1.0 + 1e-11);
      a = es.eigenvectors() * l.asDiagonal() * es.eigenvectors().transpose();
      a = 0.5 * (a + a.transpose()).eval();
    }
    Eigen::MatrixXd blk = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    blk.topLeftCorner(n, n) = a;
    blk.bottomRightCorner(n, n) = a;
    blk.topRightCorner(n, n) = e;
    Eigen::MatrixXd lref = blk.log().topRightCorner(n, n);
    Eigen::MatrixXd sref = blk.sqrt().topRightCorner(n, n);
    EXPECT_LE((dense_frechet_symmetric(MatrixFunctionKind::log, a, e) - lref).norm(), 1e-8 * lref.norm()) << trial;
    EXPECT_LE((dense_frechet_symmetric(MatrixFunctionKind::sqrt, a, e) - sref).norm(), 1e-8 * sref.norm()) << trial;
  }
}

TEST(DenseFrechet, Errors) {
  Eigen::MatrixXd nonsym(2, 2);
  nonsym << 1, 2, 0, 1;
  EXPECT_THROW(dense_frechet_symmetric(MatrixFunctionKind::log, nonsym, nonsym), std::invalid_argument);
  Eigen::MatrixXd singular = Eigen::Vector2d(1.0, 0.0).asDiagonal();
  EXPECT_THROW(dense_frechet_symmetric(MatrixFunctionKind::log, singular, singular), DomainError);
  EXPECT_THROW(dense_frechet_symmetric(MatrixFunctionKind::log, singular, Eigen::MatrixXd::Ones(3, 3)),
               std::invalid_argument);
}
