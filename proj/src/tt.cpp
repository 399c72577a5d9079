#include "ttgp/tt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "linalg.hpp"

namespace ttgp {

namespace {

Index product(const std::vector<Index>& v) {
  return std::accumulate(v.begin(), v.end(), Index{1}, std::multiplies<>());
}

void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

void require_same_shape(const TTTensor& x, const TTTensor& y, const char* op) {
  if (x.order() == 0 || x.mode_sizes() != y.mode_sizes())
    throw std::invalid_argument(std::string(op) + ": shape mismatch");
}

// Block sum of two core chains: first cores side by side, middle cores
// block-diagonal, last cores stacked. Mode sizes must agree.
std::vector<Core3> block_sum(const std::vector<Core3>& x, double a, const std::vector<Core3>& y,
                             double b) {
  const std::size_t order = x.size();
  std::vector<Core3> out;
  out.reserve(order);
  if (order == 1) {
    Core3 c(1, x[0].mode_size(), 1);
    for (Index i = 0; i < c.mode_size(); ++i) c(0, i, 0) = a * x[0](0, i, 0) + b * y[0](0, i, 0);
    out.push_back(std::move(c));
    return out;
  }
  for (std::size_t d = 0; d < order; ++d) {
    const Core3& cx = x[d];
    const Core3& cy = y[d];
    const Index n = cx.mode_size();
    const bool first = d == 0;
    const bool last = d + 1 == order;
    const Index left = first ? 1 : cx.left_rank() + cy.left_rank();
    const Index right = last ? 1 : cx.right_rank() + cy.right_rank();
    Core3 c(left, n, right);
    const Index ly = first ? 0 : cx.left_rank();
    const Index ry = last ? 0 : cx.right_rank();
    const double sx = first ? a : 1.0;
    const double sy = first ? b : 1.0;
    for (Index i = 0; i < n; ++i) {
      for (Index q = 0; q < cx.right_rank(); ++q)
        for (Index p = 0; p < cx.left_rank(); ++p) c(p, i, q) = sx * cx(p, i, q);
      for (Index q = 0; q < cy.right_rank(); ++q)
        for (Index p = 0; p < cy.left_rank(); ++p) c(ly + p, i, ry + q) = sy * cy(p, i, q);
    }
    out.push_back(std::move(c));
  }
  return out;
}

// Left-to-right QR sweep over cores [0, D-1); the last core carries the norm.
void left_orthogonalize_inplace(std::vector<Core3>& cores) {
  for (std::size_t d = 0; d + 1 < cores.size(); ++d) {
    const Index left = cores[d].left_rank();
    const Index n = cores[d].mode_size();
    detail::ThinQR qr = detail::thin_qr(cores[d].left_unfolding());
    cores[d] = Core3::from_left_unfolding(qr.q, left, n);
    const Core3& next = cores[d + 1];
    Eigen::MatrixXd merged = qr.r * next.right_unfolding();
    cores[d + 1] = Core3::from_right_unfolding(merged, next.mode_size(), next.right_rank());
  }
}

void right_orthogonalize_inplace(std::vector<Core3>& cores) {
  for (std::size_t d = cores.size() - 1; d > 0; --d) {
    const Index n = cores[d].mode_size();
    const Index right = cores[d].right_rank();
    detail::ThinQR qr = detail::thin_qr(cores[d].right_unfolding().transpose());
    cores[d] = Core3::from_right_unfolding(qr.q.transpose(), n, right);
    const Core3& prev = cores[d - 1];
    Eigen::MatrixXd merged = prev.left_unfolding() * qr.r.transpose();
    cores[d - 1] = Core3::from_left_unfolding(merged, prev.left_rank(), prev.mode_size());
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// DenseTensor

DenseTensor::DenseTensor(std::vector<Index> shape) : sizes(std::move(shape)) {
  values.assign(static_cast<std::size_t>(element_count()), 0.0);
}

DenseTensor::DenseTensor(std::vector<Index> shape, std::vector<double> data)
    : sizes(std::move(shape)), values(std::move(data)) {
  if (static_cast<Index>(values.size()) != element_count())
    throw std::invalid_argument("DenseTensor: data size does not match shape");
}

Index DenseTensor::element_count() const { return product(sizes); }

Index DenseTensor::linear_index(std::span<const Index> multi) const {
  Index idx = 0;
  for (std::size_t d = 0; d < sizes.size(); ++d) idx = idx * sizes[d] + multi[d];
  return idx;
}

double DenseTensor::frobenius_norm() const {
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Index>(values.size())).norm();
}

// ---------------------------------------------------------------------------
// Core3

Core3::Core3(Index left, Index mode, Index right)
    : left_(left), mode_(mode), right_(right), data_(static_cast<std::size_t>(left * mode * right), 0.0) {}

Core3::Core3(Index left, Index mode, Index right, std::vector<double> data)
    : left_(left), mode_(mode), right_(right), data_(std::move(data)) {
  if (static_cast<Index>(data_.size()) != left * mode * right)
    throw std::invalid_argument("Core3: data size does not match shape");
}

Eigen::MatrixXd Core3::slice(Index i) const {
  Eigen::MatrixXd m(left_, right_);
  for (Index b = 0; b < right_; ++b)
    for (Index a = 0; a < left_; ++a) m(a, b) = (*this)(a, i, b);
  return m;
}

Core3 Core3::from_left_unfolding(const Eigen::MatrixXd& m, Index left, Index mode) {
  Core3 c(left, mode, m.cols());
  c.left_unfolding() = m;
  return c;
}

Core3 Core3::from_right_unfolding(const Eigen::MatrixXd& m, Index mode, Index right) {
  Core3 c(m.rows(), mode, right);
  c.right_unfolding() = m;
  return c;
}

// ---------------------------------------------------------------------------
// TTTensor

TTTensor::TTTensor(std::vector<Core3> cores) : cores_(std::move(cores)) {
  require(!cores_.empty(), "TTTensor: at least one core is required");
  require(cores_.front().left_rank() == 1 && cores_.back().right_rank() == 1,
          "TTTensor: boundary ranks must be 1");
  for (std::size_t d = 0; d < cores_.size(); ++d) {
    require(cores_[d].mode_size() > 0, "TTTensor: zero-size mode");
    require(cores_[d].left_rank() > 0 && cores_[d].right_rank() > 0, "TTTensor: zero rank");
    if (d + 1 < cores_.size())
      require(cores_[d].right_rank() == cores_[d + 1].left_rank(), "TTTensor: adjacent ranks disagree");
  }
}

std::vector<Index> TTTensor::mode_sizes() const {
  std::vector<Index> n;
  n.reserve(cores_.size());
  for (const auto& c : cores_) n.push_back(c.mode_size());
  return n;
}

std::vector<Index> TTTensor::ranks() const {
  std::vector<Index> r{1};
  for (const auto& c : cores_) r.push_back(c.right_rank());
  return r;
}

Index TTTensor::max_rank() const {
  Index r = 1;
  for (const auto& c : cores_) r = std::max(r, c.right_rank());
  return r;
}

Index TTTensor::parameter_count() const {
  Index s = 0;
  for (const auto& c : cores_) s += c.size();
  return s;
}

double TTTensor::entry(std::span<const Index> multi) const {
  Eigen::RowVectorXd acc = Eigen::RowVectorXd::Ones(1);
  for (std::size_t d = 0; d < cores_.size(); ++d) acc = acc * cores_[d].slice(multi[d]);
  return acc(0);
}

// ---------------------------------------------------------------------------
// TTMatrix

TTMatrix::TTMatrix(std::vector<Core3> cores, std::vector<Index> row_sizes, std::vector<Index> col_sizes)
    : cores_(std::move(cores)), rows_(std::move(row_sizes)), cols_(std::move(col_sizes)) {
  require(!cores_.empty(), "TTMatrix: at least one core is required");
  require(rows_.size() == cores_.size() && cols_.size() == cores_.size(), "TTMatrix: size lists");
  require(cores_.front().left_rank() == 1 && cores_.back().right_rank() == 1,
          "TTMatrix: boundary ranks must be 1");
  for (std::size_t d = 0; d < cores_.size(); ++d) {
    require(rows_[d] > 0 && cols_[d] > 0, "TTMatrix: zero-size mode");
    require(cores_[d].mode_size() == rows_[d] * cols_[d], "TTMatrix: core mode size");
    if (d + 1 < cores_.size())
      require(cores_[d].right_rank() == cores_[d + 1].left_rank(), "TTMatrix: adjacent ranks disagree");
  }
}

std::vector<Index> TTMatrix::ranks() const {
  std::vector<Index> r{1};
  for (const auto& c : cores_) r.push_back(c.right_rank());
  return r;
}

double TTMatrix::entry(Index d, Index a, Index i, Index j, Index b) const {
  const auto du = static_cast<std::size_t>(d);
  return cores_[du](a, i + rows_[du] * j, b);
}

// ---------------------------------------------------------------------------
// Construction and conversion

TTTensor tt_from_full(const DenseTensor& full, const TruncationPolicy& policy) {
  const Index order = full.order();
  require(order > 0, "tt_from_full: empty shape");
  for (Index n : full.sizes) require(n > 0, "tt_from_full: zero-size mode");

  const double delta =
      order > 1 ? policy.tolerance * full.frobenius_norm() / std::sqrt(static_cast<double>(order - 1)) : 0.0;

  std::vector<Core3> cores;
  // Remainder W holds (rank, remaining modes) in row-major order of the
  // remaining indices.
  Index rank = 1;
  Index rest = full.element_count();
  Eigen::MatrixXd w = Eigen::Map<const Eigen::MatrixXd>(full.values.data(), 1, rest);
  for (Index d = 0; d + 1 < order; ++d) {
    const Index n = full.sizes[static_cast<std::size_t>(d)];
    rest /= n;
    // Unfolding rows (a, i) with a fastest, columns the trailing indices.
    Eigen::MatrixXd m(rank * n, rest);
    for (Index a = 0; a < rank; ++a)
      for (Index i = 0; i < n; ++i) m.row(a + rank * i) = w.block(a, i * rest, 1, rest);
    detail::ThinSVD svd = detail::thin_svd(m);
    const Index r = detail::truncation_rank(svd.s, delta, policy.max_rank);
    cores.push_back(Core3::from_left_unfolding(svd.u.leftCols(r), rank, n));
    w = svd.s.head(r).asDiagonal() * svd.v.leftCols(r).transpose();
    rank = r;
  }
  const Index n_last = full.sizes.back();
  Core3 last(rank, n_last, 1);
  for (Index a = 0; a < rank; ++a)
    for (Index i = 0; i < n_last; ++i) last(a, i, 0) = w(a, i);
  cores.push_back(std::move(last));
  return TTTensor(std::move(cores));
}

DenseTensor tt_to_full(const TTTensor& t, Index cap) {
  const auto sizes = t.mode_sizes();
  const Index total = product(sizes);
  if (total > cap)
    throw SizeError("tt_to_full: " + std::to_string(total) + " entries exceed cap " + std::to_string(cap));
  // acc rows: row-major prefix index; columns: current right rank.
  Eigen::MatrixXd acc = Eigen::MatrixXd::Ones(1, 1);
  for (const Core3& c : t.cores()) {
    const Index n = c.mode_size();
    Eigen::MatrixXd next(acc.rows() * n, c.right_rank());
    for (Index i = 0; i < n; ++i) {
      Eigen::MatrixXd part = acc * c.slice(i);
      for (Index p = 0; p < acc.rows(); ++p) next.row(p * n + i) = part.row(p);
    }
    acc = std::move(next);
  }
  DenseTensor out(sizes);
  for (Index k = 0; k < total; ++k) out.values[static_cast<std::size_t>(k)] = acc(k, 0);
  return out;
}

TTTensor tt_rank1(const std::vector<Eigen::VectorXd>& vectors) {
  require(!vectors.empty(), "tt_rank1: empty vector list");
  std::vector<Core3> cores;
  for (const auto& v : vectors) {
    require(v.size() > 0, "tt_rank1: empty vector");
    cores.emplace_back(1, v.size(), 1, std::vector<double>(v.data(), v.data() + v.size()));
  }
  return TTTensor(std::move(cores));
}

TTTensor tt_zeros(const std::vector<Index>& sizes) {
  std::vector<Eigen::VectorXd> v;
  for (Index n : sizes) v.push_back(Eigen::VectorXd::Zero(n));
  return tt_rank1(v);
}

// ---------------------------------------------------------------------------
// Rounding and arithmetic

TTTensor tt_left_orthogonalize(const TTTensor& t) {
  auto cores = t.cores();
  left_orthogonalize_inplace(cores);
  return TTTensor(std::move(cores));
}

TTTensor tt_right_orthogonalize(const TTTensor& t) {
  auto cores = t.cores();
  right_orthogonalize_inplace(cores);
  return TTTensor(std::move(cores));
}

TTTensor tt_round(const TTTensor& t, const TruncationPolicy& policy) {
  auto cores = t.cores();
  const std::size_t order = cores.size();
  if (order == 1) return t;

  left_orthogonalize_inplace(cores);
  const double norm = cores.back().left_unfolding().norm();
  const double delta = policy.tolerance * norm / std::sqrt(static_cast<double>(order - 1));

  for (std::size_t d = order - 1; d > 0; --d) {
    const Core3& c = cores[d];
    const Index n = c.mode_size();
    const Index right = c.right_rank();
    detail::ThinSVD svd = detail::thin_svd(c.right_unfolding());
    const Index r = detail::truncation_rank(svd.s, delta, policy.max_rank);
    cores[d] = Core3::from_right_unfolding(svd.v.leftCols(r).transpose(), n, right);
    const Core3& prev = cores[d - 1];
    Eigen::MatrixXd merged = prev.left_unfolding() * (svd.u.leftCols(r) * svd.s.head(r).asDiagonal());
    cores[d - 1] = Core3::from_left_unfolding(merged, prev.left_rank(), prev.mode_size());
  }
  return TTTensor(std::move(cores));
}

TTTensor tt_axpy(double a, const TTTensor& x, double b, const TTTensor& y) {
  require_same_shape(x, y, "tt_axpy");
  return TTTensor(block_sum(x.cores(), a, y.cores(), b));
}

TTTensor tt_scale(const TTTensor& x, double a) {
  auto cores = x.cores();
  for (double& v : cores.front().data()) v *= a;
  return TTTensor(std::move(cores));
}

double tt_dot(const TTTensor& x, const TTTensor& y) {
  require_same_shape(x, y, "tt_dot");
  // m(a, b): contraction of the leading cores, a over x ranks, b over y ranks.
  Eigen::MatrixXd m = Eigen::MatrixXd::Ones(1, 1);
  for (Index d = 0; d < x.order(); ++d) {
    const Core3& cx = x.core(d);
    const Core3& cy = y.core(d);
    // w(a, (i, b')) = sum_b m(a, b) y(b, i, b'); same buffer as ((a, i), b').
    Eigen::MatrixXd w = m * cy.right_unfolding();
    Eigen::Map<const Eigen::MatrixXd> wl(w.data(), cx.left_rank() * cx.mode_size(), cy.right_rank());
    m = cx.left_unfolding().transpose() * wl;
  }
  return m(0, 0);
}

double tt_norm(const TTTensor& x) {
  auto cores = x.cores();
  left_orthogonalize_inplace(cores);
  return cores.back().left_unfolding().norm();
}

TTTensor tt_hadamard(const TTTensor& x, const TTTensor& y) {
  require_same_shape(x, y, "tt_hadamard");
  std::vector<Core3> cores;
  for (Index d = 0; d < x.order(); ++d) {
    const Core3& cx = x.core(d);
    const Core3& cy = y.core(d);
    const Index lx = cx.left_rank(), rx = cx.right_rank();
    const Index ly = cy.left_rank(), ry = cy.right_rank();
    Core3 c(lx * ly, cx.mode_size(), rx * ry);
    for (Index i = 0; i < cx.mode_size(); ++i)
      for (Index bx = 0; bx < rx; ++bx)
        for (Index by = 0; by < ry; ++by)
          for (Index ax = 0; ax < lx; ++ax)
            for (Index ay = 0; ay < ly; ++ay) c(ax + lx * ay, i, bx + rx * by) = cx(ax, i, bx) * cy(ay, i, by);
    cores.push_back(std::move(c));
  }
  return TTTensor(std::move(cores));
}

TTTensor tt_weighted_sum(const std::vector<TTTensor>& vectors, std::span<const double> coeffs,
                         const TruncationPolicy& policy) {
  require(!vectors.empty(), "tt_weighted_sum: empty list");
  require(vectors.size() == coeffs.size(), "tt_weighted_sum: list lengths differ");
  for (const auto& v : vectors) require_same_shape(vectors.front(), v, "tt_weighted_sum");

  std::vector<TTTensor> level;
  level.reserve(vectors.size());
  for (std::size_t k = 0; k < vectors.size(); ++k) level.push_back(tt_scale(vectors[k], coeffs[k]));
  if (level.size() == 1) return level.front();
  while (level.size() > 1) {
    std::vector<TTTensor> next;
    next.reserve((level.size() + 1) / 2);
    for (std::size_t k = 0; k + 1 < level.size(); k += 2)
      next.push_back(tt_round(tt_axpy(1.0, level[k], 1.0, level[k + 1]), policy));
    if (level.size() % 2 == 1) next.push_back(std::move(level.back()));
    level = std::move(next);
  }
  return level.front();
}

TTTensor tt_subsample(const TTTensor& t, const std::vector<std::vector<Index>>& index_lists) {
  require(static_cast<Index>(index_lists.size()) == t.order(), "tt_subsample: one index list per mode");
  std::vector<Core3> cores;
  for (Index d = 0; d < t.order(); ++d) {
    const Core3& c = t.core(d);
    const auto& idx = index_lists[static_cast<std::size_t>(d)];
    require(!idx.empty(), "tt_subsample: empty index list");
    Core3 s(c.left_rank(), static_cast<Index>(idx.size()), c.right_rank());
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (idx[k] < 0 || idx[k] >= c.mode_size()) throw std::out_of_range("tt_subsample: index out of range");
      for (Index b = 0; b < c.right_rank(); ++b)
        for (Index a = 0; a < c.left_rank(); ++a) s(a, static_cast<Index>(k), b) = c(a, idx[k], b);
    }
    cores.push_back(std::move(s));
  }
  return TTTensor(std::move(cores));
}

// ---------------------------------------------------------------------------
// TT matrices

TTMatrix ttm_from_factors(const std::vector<Eigen::MatrixXd>& factors) {
  require(!factors.empty(), "ttm_from_factors: empty factor list");
  std::vector<Core3> cores;
  std::vector<Index> rows, cols;
  for (const auto& f : factors) {
    require(f.size() > 0, "ttm_from_factors: empty factor");
    // Column-major storage of f is exactly the combined index i + rows * j.
    cores.emplace_back(1, f.size(), 1, std::vector<double>(f.data(), f.data() + f.size()));
    rows.push_back(f.rows());
    cols.push_back(f.cols());
  }
  return TTMatrix(std::move(cores), std::move(rows), std::move(cols));
}

TTMatrix ttm_identity(const std::vector<Index>& sizes) {
  std::vector<Eigen::MatrixXd> f;
  for (Index n : sizes) f.push_back(Eigen::MatrixXd::Identity(n, n));
  return ttm_from_factors(f);
}

TTMatrix ttm_add(const TTMatrix& a, const TTMatrix& b) {
  if (a.row_sizes() != b.row_sizes() || a.col_sizes() != b.col_sizes())
    throw std::invalid_argument("ttm_add: shape mismatch");
  return TTMatrix(block_sum(a.cores(), 1.0, b.cores(), 1.0), a.row_sizes(), a.col_sizes());
}

TTMatrix ttm_scale(const TTMatrix& a, double c) {
  auto cores = a.cores();
  for (double& v : cores.front().data()) v *= c;
  return TTMatrix(std::move(cores), a.row_sizes(), a.col_sizes());
}

TTTensor ttm_apply(const TTMatrix& a, const TTTensor& x) {
  if (a.col_sizes() != x.mode_sizes()) throw std::invalid_argument("ttm_apply: shape mismatch");
  std::vector<Core3> cores;
  cores.reserve(static_cast<std::size_t>(x.order()));
  for (Index d = 0; d < x.order(); ++d) {
    const Core3& ca = a.core(d);
    const Core3& cx = x.core(d);
    const Index m = a.row_sizes()[static_cast<std::size_t>(d)];
    const Index n = a.col_sizes()[static_cast<std::size_t>(d)];
    const Index la = ca.left_rank(), ra = ca.right_rank();
    const Index lx = cx.left_rank(), rx = cx.right_rank();
    // xs(j, (a', b')) = x(a', j, b')
    Eigen::MatrixXd xs(n, lx * rx);
    for (Index b = 0; b < rx; ++b)
      for (Index j = 0; j < n; ++j)
        for (Index p = 0; p < lx; ++p) xs(j, p + lx * b) = cx(p, j, b);
    Core3 out(la * lx, m, ra * rx);
    Eigen::MatrixXd block(m, n);
    for (Index q = 0; q < ra; ++q) {
      for (Index p = 0; p < la; ++p) {
        for (Index j = 0; j < n; ++j)
          for (Index i = 0; i < m; ++i) block(i, j) = ca(p, i + m * j, q);
        Eigen::MatrixXd ys = block * xs;
        for (Index bx = 0; bx < rx; ++bx)
          for (Index ax = 0; ax < lx; ++ax)
            for (Index i = 0; i < m; ++i) out(p + la * ax, i, q + ra * bx) = ys(i, ax + lx * bx);
      }
    }
    cores.push_back(std::move(out));
  }
  return TTTensor(std::move(cores));
}

TTTensor ttm_apply(const TTMatrix& a, const TTTensor& x, const TruncationPolicy& policy) {
  return tt_round(ttm_apply(a, x), policy);
}

Eigen::MatrixXd ttm_to_full(const TTMatrix& a, Index cap) {
  const Index rows = product(a.row_sizes());
  const Index cols = product(a.col_sizes());
  if (rows * cols > cap)
    throw SizeError("ttm_to_full: " + std::to_string(rows * cols) + " entries exceed cap " + std::to_string(cap));
  // Treat as a tensor over combined modes, then scatter into (row, col).
  DenseTensor combined = tt_to_full(TTTensor(a.cores()), cap);
  const std::size_t order = a.row_sizes().size();
  Eigen::MatrixXd out(rows, cols);
  std::vector<Index> multi(order, 0);
  for (Index k = 0; k < combined.element_count(); ++k) {
    Index rem = k;
    for (std::size_t d = order; d-- > 0;) {
      const Index nd = a.row_sizes()[d] * a.col_sizes()[d];
      multi[d] = rem % nd;
      rem /= nd;
    }
    Index r = 0, c = 0;
    for (std::size_t d = 0; d < order; ++d) {
      r = r * a.row_sizes()[d] + multi[d] % a.row_sizes()[d];
      c = c * a.col_sizes()[d] + multi[d] / a.row_sizes()[d];
    }
    out(r, c) = combined.values[static_cast<std::size_t>(k)];
  }
  return out;
}

namespace {

TTMatrix prepend_factor(const Eigen::MatrixXd& f, const TTMatrix& a) {
  std::vector<Core3> cores;
  cores.emplace_back(1, f.size(), 1, std::vector<double>(f.data(), f.data() + f.size()));
  for (const auto& c : a.cores()) cores.push_back(c);
  std::vector<Index> rows{f.rows()}, cols{f.cols()};
  rows.insert(rows.end(), a.row_sizes().begin(), a.row_sizes().end());
  cols.insert(cols.end(), a.col_sizes().begin(), a.col_sizes().end());
  return TTMatrix(std::move(cores), std::move(rows), std::move(cols));
}

}  // namespace

TTMatrix ttm_block_upper(const TTMatrix& a, const TTMatrix& e) {
  if (a.row_sizes() != e.row_sizes() || a.col_sizes() != e.col_sizes())
    throw std::invalid_argument("ttm_block_upper: shape mismatch");
  Eigen::MatrixXd nilpotent = Eigen::MatrixXd::Zero(2, 2);
  nilpotent(0, 1) = 1.0;
  return ttm_add(prepend_factor(Eigen::MatrixXd::Identity(2, 2), a), prepend_factor(nilpotent, e));
}

TTTensor tt_block_embed(const TTTensor& z, BlockSlot slot) {
  std::vector<Core3> cores;
  Core3 lead(1, 2, 1);
  lead(0, slot == BlockSlot::top ? 0 : 1, 0) = 1.0;
  cores.push_back(std::move(lead));
  for (const auto& c : z.cores()) cores.push_back(c);
  return TTTensor(std::move(cores));
}

}  // namespace ttgp
