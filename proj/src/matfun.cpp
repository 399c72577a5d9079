#include "ttgp/matfun.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <sstream>

namespace ttgp {

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kZeroTol = 1e-14;

void check_input(const Eigen::MatrixXd& m, const char* name) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw std::invalid_argument(std::string(name) + ": matrix must be square and nonempty");
  if (!m.allFinite()) throw std::invalid_argument(std::string(name) + ": non-finite entries");
}

bool is_symmetric(const Eigen::MatrixXd& m) {
  return (m - m.transpose()).norm() <= kSymmetryTol * m.norm();
}

[[noreturn]] void domain_fail(const char* name, std::complex<double> lambda) {
  std::ostringstream msg;
  msg << name << ": eigenvalue " << lambda.real();
  if (lambda.imag() != 0.0) msg << (lambda.imag() < 0 ? " - " : " + ") << std::abs(lambda.imag()) << "i";
  msg << " lies outside the principal domain";
  throw DomainError(msg.str(), lambda);
}

Eigen::MatrixXd symmetric_apply(const Eigen::MatrixXd& m, MatrixFunctionKind kind) {
  const char* name = kind == MatrixFunctionKind::log ? "dense_logm" : "dense_sqrtm";
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()));
  const Eigen::VectorXd& lam = es.eigenvalues();
  const double scale = std::max(lam.cwiseAbs().maxCoeff(), 1e-300);
  Eigen::VectorXd f(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    const double l = lam(i);
    if (kind == MatrixFunctionKind::log) {
      if (l <= kZeroTol * scale) domain_fail(name, l);
      f(i) = std::log(l);
    } else {
      if (l < -kZeroTol * scale) domain_fail(name, l);
      f(i) = std::sqrt(std::max(l, 0.0));
    }
  }
  Eigen::MatrixXd out = es.eigenvectors() * f.asDiagonal() * es.eigenvectors().transpose();
  return 0.5 * (out + out.transpose());
}

void check_general_domain(const Eigen::MatrixXd& m, MatrixFunctionKind kind) {
  const char* name = kind == MatrixFunctionKind::log ? "dense_logm" : "dense_sqrtm";
  Eigen::ComplexEigenSolver<Eigen::MatrixXd> es(m, false);
  const Eigen::VectorXcd& lam = es.eigenvalues();
  const double scale = std::max(lam.cwiseAbs().maxCoeff(), 1e-300);
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    const std::complex<double> l = lam(i);
    const bool on_axis = std::abs(l.imag()) <= kZeroTol * scale;
    if (kind == MatrixFunctionKind::log) {
      if (on_axis && l.real() <= kZeroTol * scale) domain_fail(name, l);
    } else {
      if (on_axis && l.real() < -kZeroTol * scale) domain_fail(name, l);
    }
  }
}

}  // namespace

Eigen::MatrixXd dense_logm(const Eigen::MatrixXd& m) { return dense_matfun(MatrixFunctionKind::log, m); }

Eigen::MatrixXd dense_sqrtm(const Eigen::MatrixXd& m) { return dense_matfun(MatrixFunctionKind::sqrt, m); }

Eigen::MatrixXd dense_matfun(MatrixFunctionKind kind, const Eigen::MatrixXd& m) {
  check_input(m, kind == MatrixFunctionKind::log ? "dense_logm" : "dense_sqrtm");
  if (is_symmetric(m)) return symmetric_apply(m, kind);
  check_general_domain(m, kind);
  Eigen::MatrixXd out = kind == MatrixFunctionKind::log ? Eigen::MatrixXd(m.log()) : Eigen::MatrixXd(m.sqrt());
  if (!out.allFinite()) throw DomainError("matrix function produced non-finite values", {0.0, 0.0});
  return out;
}

Eigen::MatrixXd dense_frechet_symmetric(MatrixFunctionKind kind, const Eigen::MatrixXd& a, const Eigen::MatrixXd& e) {
  const char* name = "dense_frechet_symmetric";
  check_input(a, name);
  if (e.rows() != a.rows() || e.cols() != a.cols()) throw std::invalid_argument("dense_frechet_symmetric: shape mismatch");
  if (!is_symmetric(a)) throw std::invalid_argument("dense_frechet_symmetric: matrix must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (a + a.transpose()));
  const Eigen::VectorXd& lam = es.eigenvalues();
  const double scale = std::max(lam.cwiseAbs().maxCoeff(), 1e-300);
  const Eigen::Index n = lam.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    // The derivative needs g to be differentiable, so zero is excluded for sqrt too.
    if (lam(i) <= kZeroTol * scale) domain_fail(name, lam(i));
  }
  Eigen::MatrixXd dd(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double x = lam(i), y = lam(j);
      if (kind == MatrixFunctionKind::sqrt) {
        dd(i, j) = 1.0 / (std::sqrt(x) + std::sqrt(y));
      } else if (std::abs(x - y) <= 1e-8 * std::max(x, y)) {
        dd(i, j) = 2.0 / (x + y);
      } else {
        // log(x/y)/(x-y) written to avoid cancellation when x is close to y
        const double t = (x - y) / y;
        dd(i, j) = std::log1p(t) / (x - y);
      }
    }
  }
  const Eigen::MatrixXd& q = es.eigenvectors();
  return q * (dd.cwiseProduct(q.transpose() * e * q)) * q.transpose();
}

const char* to_string(MatrixFunctionKind kind) { return kind == MatrixFunctionKind::log ? "log" : "sqrt"; }

}  // namespace ttgp
