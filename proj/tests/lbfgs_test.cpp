#include <gtest/gtest.h>

#include <cmath>

#include "ttgp/lbfgs.hpp"

using namespace ttgp;

TEST(Lbfgs, ConvexQuadratic) {
  Eigen::VectorXd c(4);
  c << 1.0, -2.0, 0.5, 3.0;
  Objective f = [&](const Eigen::VectorXd& x, Eigen::VectorXd* g) {
    if (g) *g = x - c;
    return 0.5 * (x - c).squaredNorm();
  };
  auto res = lbfgs_minimize(f, Eigen::VectorXd::Zero(4));
  EXPECT_LE((res.x - c).norm(), 1e-8);
  EXPECT_LE(res.iterations, 30);
  EXPECT_EQ(res.status, LbfgsStatus::converged);
}

TEST(Lbfgs, Rosenbrock) {
  Objective f = [](const Eigen::VectorXd& x, Eigen::VectorXd* g) {
    const double a = 1.0 - x(0), b = x(1) - x(0) * x(0);
    if (g) {
      g->resize(2);
      (*g)(0) = -2.0 * a - 400.0 * x(0) * b;
      (*g)(1) = 200.0 * b;
    }
    return a * a + 100.0 * b * b;
  };
  auto res = lbfgs_minimize(f, Eigen::Vector2d(-1.2, 1.0));
  EXPECT_LE((res.x - Eigen::Vector2d(1.0, 1.0)).norm(), 1e-6);
  for (std::size_t k = 1; k < res.trace.size(); ++k) EXPECT_LE(res.trace[k], res.trace[k - 1]);
}

TEST(Lbfgs, IterationCapAndBestPoint) {
  Objective f = [](const Eigen::VectorXd& x, Eigen::VectorXd* g) {
    if (g) *g = 4.0 * x.array().cube().matrix();
    return x.array().pow(4).sum();
  };
  LbfgsOptions o;
  o.max_iter = 3;
  auto res = lbfgs_minimize(f, Eigen::Vector3d(1.0, -2.0, 0.5), o);
  EXPECT_EQ(res.status, LbfgsStatus::max_iterations);
  EXPECT_LE(res.iterations, 3);
  EXPECT_LT(res.value, f(Eigen::Vector3d(1.0, -2.0, 0.5), nullptr));
}

TEST(Lbfgs, InfeasibleRegionIsAvoided) {
  // log barrier: undefined for x <= 0
  Objective f = [](const Eigen::VectorXd& x, Eigen::VectorXd* g) {
    if (x(0) <= 0.0) throw std::domain_error("outside");
    if (g) *g = Eigen::VectorXd::Constant(1, 1.0 - 1.0 / x(0));
    return x(0) - std::log(x(0));
  };
  auto res = lbfgs_minimize(f, Eigen::VectorXd::Constant(1, 5.0));
  EXPECT_NEAR(res.x(0), 1.0, 1e-6);
  EXPECT_THROW(lbfgs_minimize(f, Eigen::VectorXd::Constant(1, -1.0)), std::domain_error);
}

TEST(Lbfgs, InconsistentGradientStopsAfterRestarts) {
  // the gradient carries a constant bias, as a stochastic one would; the line
  // search eventually finds no acceptable step
  Objective f = [](const Eigen::VectorXd& x, Eigen::VectorXd* g) {
    if (g) *g = x + Eigen::Vector2d(0.3, -0.1);
    return 0.5 * x.squaredNorm();
  };
  LbfgsOptions o;
  o.max_restarts = 4;
  const Eigen::Vector2d x0(3.0, 2.0);
  auto res = lbfgs_minimize(f, x0, o);
  EXPECT_NE(res.status, LbfgsStatus::converged);
  EXPECT_LE(res.restarts, 4);
  EXPECT_LT(res.value, 0.5 * x0.squaredNorm());
  EXPECT_LE(res.x.norm(), 0.5);
  for (std::size_t k = 1; k < res.trace.size(); ++k) EXPECT_LE(res.trace[k], res.trace[k - 1]);
}

TEST(Lbfgs, InvalidOptions) {
  LbfgsOptions o;
  o.memory = 0;
  Objective f = [](const Eigen::VectorXd& x, Eigen::VectorXd*) { return x.squaredNorm(); };
  EXPECT_THROW(lbfgs_minimize(f, Eigen::VectorXd::Zero(1), o), std::invalid_argument);
  o = {};
  o.max_restarts = -1;
  EXPECT_THROW(lbfgs_minimize(f, Eigen::VectorXd::Zero(1), o), std::invalid_argument);
}
