#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace ttgp {

using Index = Eigen::Index;

/// Thrown when a dense reconstruction would exceed the configured entry cap.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Dense D-index array in row-major (last index fastest) order.
struct DenseTensor {
  std::vector<Index> sizes;
  std::vector<double> values;

  DenseTensor() = default;
  explicit DenseTensor(std::vector<Index> shape);
  DenseTensor(std::vector<Index> shape, std::vector<double> data);

  Index order() const { return static_cast<Index>(sizes.size()); }
  Index element_count() const;
  Index linear_index(std::span<const Index> multi) const;
  double& operator[](std::span<const Index> multi) { return values[linear_index(multi)]; }
  double operator[](std::span<const Index> multi) const { return values[linear_index(multi)]; }
  double frobenius_norm() const;
};

/// Three-index core with shape left x mode x right.
///
/// Storage is column-major with the left rank fastest, so both the left
/// unfolding ((left*mode) x right) and the right unfolding (left x
/// (mode*right)) are plain views of the same buffer.
class Core3 {
 public:
  Core3() = default;
  Core3(Index left, Index mode, Index right);
  Core3(Index left, Index mode, Index right, std::vector<double> data);

  Index left_rank() const { return left_; }
  Index mode_size() const { return mode_; }
  Index right_rank() const { return right_; }
  Index size() const { return left_ * mode_ * right_; }

  double& operator()(Index a, Index i, Index b) { return data_[a + left_ * (i + mode_ * b)]; }
  double operator()(Index a, Index i, Index b) const { return data_[a + left_ * (i + mode_ * b)]; }

  Eigen::Map<Eigen::MatrixXd> left_unfolding() { return {data_.data(), left_ * mode_, right_}; }
  Eigen::Map<const Eigen::MatrixXd> left_unfolding() const { return {data_.data(), left_ * mode_, right_}; }
  Eigen::Map<Eigen::MatrixXd> right_unfolding() { return {data_.data(), left_, mode_ * right_}; }
  Eigen::Map<const Eigen::MatrixXd> right_unfolding() const { return {data_.data(), left_, mode_ * right_}; }

  /// Slice G(:, i, :) as a left x right matrix.
  Eigen::MatrixXd slice(Index i) const;

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  static Core3 from_left_unfolding(const Eigen::MatrixXd& m, Index left, Index mode);
  static Core3 from_right_unfolding(const Eigen::MatrixXd& m, Index mode, Index right);

 private:
  Index left_ = 0;
  Index mode_ = 0;
  Index right_ = 0;
  std::vector<double> data_;
};

/// Order-D tensor in tensor-train form. Boundary ranks are 1 and
/// neighbouring cores agree on their shared rank.
class TTTensor {
 public:
  TTTensor() = default;
  explicit TTTensor(std::vector<Core3> cores);

  Index order() const { return static_cast<Index>(cores_.size()); }
  std::vector<Index> mode_sizes() const;
  std::vector<Index> ranks() const;
  Index max_rank() const;
  const Core3& core(Index d) const { return cores_[static_cast<std::size_t>(d)]; }
  const std::vector<Core3>& cores() const { return cores_; }
  Index parameter_count() const;

  /// Entry at a multi-index (0-based), evaluated as a product of core slices.
  double entry(std::span<const Index> multi) const;

 private:
  std::vector<Core3> cores_;
};

/// Order-D linear operator in TT-matrix form. Core d has shape
/// r_{d-1} x (rows_d * cols_d) x r_d with the combined mode index
/// i + rows_d * j (row i, column j).
class TTMatrix {
 public:
  TTMatrix() = default;
  TTMatrix(std::vector<Core3> cores, std::vector<Index> row_sizes, std::vector<Index> col_sizes);

  Index order() const { return static_cast<Index>(cores_.size()); }
  const std::vector<Index>& row_sizes() const { return rows_; }
  const std::vector<Index>& col_sizes() const { return cols_; }
  std::vector<Index> ranks() const;
  const Core3& core(Index d) const { return cores_[static_cast<std::size_t>(d)]; }
  const std::vector<Core3>& cores() const { return cores_; }
  bool is_square() const { return rows_ == cols_; }

  /// Core d entry A_d(a, i, j, b).
  double entry(Index d, Index a, Index i, Index j, Index b) const;

 private:
  std::vector<Core3> cores_;
  std::vector<Index> rows_;
  std::vector<Index> cols_;
};

struct TruncationPolicy {
  double tolerance = 0.0;  ///< relative Frobenius tolerance
  std::optional<Index> max_rank = std::nullopt;
};

/// Default cap on dense reconstructions.
inline constexpr Index kDenseEntryCap = 1'000'000;

// Construction and conversion.
TTTensor tt_from_full(const DenseTensor& full, const TruncationPolicy& policy);
DenseTensor tt_to_full(const TTTensor& t, Index cap = kDenseEntryCap);
TTTensor tt_rank1(const std::vector<Eigen::VectorXd>& vectors);
TTTensor tt_zeros(const std::vector<Index>& sizes);

// Rounding and arithmetic.
/// The result is right-orthonormal in cores 2..D, so its norm is the norm of
/// the first core.
TTTensor tt_round(const TTTensor& t, const TruncationPolicy& policy);
TTTensor tt_axpy(double a, const TTTensor& x, double b, const TTTensor& y);
TTTensor tt_scale(const TTTensor& x, double a);
double tt_dot(const TTTensor& x, const TTTensor& y);
/// Frobenius norm computed by orthogonalization, accurate even when the
/// tensor is the small difference of two large ones.
double tt_norm(const TTTensor& x);
TTTensor tt_hadamard(const TTTensor& x, const TTTensor& y);
TTTensor tt_weighted_sum(const std::vector<TTTensor>& vectors, std::span<const double> coeffs,
                         const TruncationPolicy& policy);
TTTensor tt_subsample(const TTTensor& t, const std::vector<std::vector<Index>>& index_lists);

/// Brings all cores but the last into left-orthonormal form.
TTTensor tt_left_orthogonalize(const TTTensor& t);
/// Brings all cores but the first into right-orthonormal form.
TTTensor tt_right_orthogonalize(const TTTensor& t);

// TT matrices.
TTMatrix ttm_from_factors(const std::vector<Eigen::MatrixXd>& factors);
TTMatrix ttm_identity(const std::vector<Index>& sizes);
TTMatrix ttm_add(const TTMatrix& a, const TTMatrix& b);
TTMatrix ttm_scale(const TTMatrix& a, double c);
TTTensor ttm_apply(const TTMatrix& a, const TTTensor& x);
TTTensor ttm_apply(const TTMatrix& a, const TTTensor& x, const TruncationPolicy& policy);
Eigen::MatrixXd ttm_to_full(const TTMatrix& a, Index cap = kDenseEntryCap);

/// Order D+1 operator [[A, E], [0, A]] = I_2 (x) A + N (x) E with the block
/// index as the new leading mode.
TTMatrix ttm_block_upper(const TTMatrix& a, const TTMatrix& e);

enum class BlockSlot { top, bottom };

/// Order D+1 tensor [z; 0] (top) or [0; z] (bottom).
TTTensor tt_block_embed(const TTTensor& z, BlockSlot slot);

}  // namespace ttgp
