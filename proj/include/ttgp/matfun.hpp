#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace ttgp {

enum class MatrixFunctionKind { log, sqrt };

/// Raised when the principal branch does not exist for the input; carries the
/// offending eigenvalue estimate.
class DomainError : public std::domain_error {
 public:
  DomainError(const std::string& what, std::complex<double> eigenvalue)
      : std::domain_error(what), eigenvalue_(eigenvalue) {}
  std::complex<double> eigenvalue() const { return eigenvalue_; }

 private:
  std::complex<double> eigenvalue_;
};

/// Principal logarithm. Symmetric input goes through an eigendecomposition
/// and returns an exactly symmetric result; anything else uses a Schur-based
/// method.
Eigen::MatrixXd dense_logm(const Eigen::MatrixXd& m);

/// Principal square root, same dispatch as dense_logm. On the symmetric path
/// eigenvalues within rounding of zero are treated as zero.
Eigen::MatrixXd dense_sqrtm(const Eigen::MatrixXd& m);

Eigen::MatrixXd dense_matfun(MatrixFunctionKind kind, const Eigen::MatrixXd& m);

/// Frechet derivative L_g(A, E) for symmetric A, via divided differences of
/// g on the eigenvalues of A. E need not be symmetric.
Eigen::MatrixXd dense_frechet_symmetric(MatrixFunctionKind kind, const Eigen::MatrixXd& a, const Eigen::MatrixXd& e);

const char* to_string(MatrixFunctionKind kind);

}  // namespace ttgp
