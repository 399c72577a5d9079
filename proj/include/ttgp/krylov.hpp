#pragma once

#include <vector>

#include "ttgp/matfun.hpp"
#include "ttgp/tt.hpp"

namespace ttgp {

struct KrylovOptions {
  double trunctol = 1e-8;   ///< rounding tolerance inside the recurrence
  double kryltol = 1e-6;    ///< relative change between consecutive approximants
  int maxit = 50;
  double breakdown = 1e-14; ///< relative size of the new subdiagonal entry

  void validate() const;
};

struct KrylovReport {
  int iterations = 0;
  std::vector<double> differences;  ///< one entry per iteration after the first
  bool breakdown = false;
  bool converged = false;
};

enum class OperatorSymmetry { symmetric, general };

/// Arnoldi recurrence on TT vectors with rounding after every subtraction.
/// Each orthogonalization runs twice. In the symmetric case only the two most
/// recent basis vectors take part.
class ArnoldiProcess {
 public:
  ArnoldiProcess(const TTMatrix& a, const TTTensor& b, OperatorSymmetry symmetry, const KrylovOptions& opts,
                 bool keep_basis = true);

  /// Adds column k of H (k = size() before the call) and the next basis
  /// vector. Returns false on breakdown, in which case no vector is added.
  bool step();

  int size() const { return columns_; }
  double beta() const { return beta_; }
  bool broke_down() const { return broke_down_; }

  /// Leading k x k block of the Hessenberg matrix, k = size().
  Eigen::MatrixXd hessenberg() const;
  /// Entry h_{k+1,k} from the latest step.
  double subdiagonal() const;

  /// Stored basis vectors v_1..v_{k+1}. Without keep_basis only the last
  /// two are retained, at the back of the list.
  const std::vector<TTTensor>& basis() const { return basis_; }
  const TTTensor& latest() const { return basis_.back(); }

 private:
  const TTMatrix& a_;
  OperatorSymmetry symmetry_;
  KrylovOptions opts_;
  bool keep_basis_;
  double beta_ = 0.0;
  int columns_ = 0;
  bool broke_down_ = false;
  Eigen::MatrixXd h_;
  std::vector<TTTensor> basis_;
  int first_stored_ = 0;  // Krylov index of basis_.front()
};

struct KrylovTensorResult {
  TTTensor value;
  KrylovReport report;
};

struct KrylovScalarResult {
  double value = 0.0;
  KrylovReport report;
};

/// g(A) b with the approximant beta * V_k g(H_k) e_1.
KrylovTensorResult tt_krylov_apply(MatrixFunctionKind g, const TTMatrix& a, const TTTensor& b,
                                   const KrylovOptions& opts, OperatorSymmetry symmetry = OperatorSymmetry::general);

/// v^T g(A) v for symmetric A, from beta^2 * g(H_k)(1,1).
KrylovScalarResult tt_krylov_quadform(MatrixFunctionKind g, const TTMatrix& a, const TTTensor& v,
                                      const KrylovOptions& opts);

struct KrylovQuadformDerivatives {
  double value = 0.0;
  std::vector<double> derivatives;  ///< one per direction
  KrylovReport report;
};

/// v^T g(A) v as in tt_krylov_quadform, plus v^T L_g(A, E) v for each
/// symmetric direction E, taken from the same Lanczos run as
/// beta^2 e_1^T L_g(T_k, V_k^T E V_k) e_1. Exact when the Krylov space is
/// invariant; otherwise it has the same polynomial accuracy as the value.
KrylovQuadformDerivatives tt_krylov_quadform_derivatives(MatrixFunctionKind g, const TTMatrix& a, const TTTensor& v,
                                                         const std::vector<TTMatrix>& directions,
                                                         const KrylovOptions& opts);

/// u^T g(A) v for general A: the inner product of u with the approximant of
/// g(A) v.
KrylovScalarResult tt_krylov_bilinear(MatrixFunctionKind g, const TTMatrix& a, const TTTensor& u,
                                      const TTTensor& v, const KrylovOptions& opts,
                                      OperatorSymmetry symmetry = OperatorSymmetry::general);

/// [[A, cE], [0, A]] with c = min(1, lower / |E|_F). lower is a lower bound
/// on the spectrum of symmetric A; the scaling keeps the Ritz values of the
/// block operator in the right half-plane.
struct FrechetBlock {
  TTMatrix op;
  double scale = 1.0;
};

FrechetBlock frechet_block(const TTMatrix& a, const TTMatrix& e, double lower);

/// z^T L_g(A, E) z as the top-right block of g applied to the block operator,
/// divided by the scale.
KrylovScalarResult tt_frechet_quadform(MatrixFunctionKind g, const FrechetBlock& block, const TTTensor& z,
                                       const KrylovOptions& opts);

}  // namespace ttgp
