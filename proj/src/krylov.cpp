#include "ttgp/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ttgp {

void KrylovOptions::validate() const {
  if (!(trunctol > 0 && kryltol > 0 && breakdown > 0)) throw std::invalid_argument("KrylovOptions: tolerances must be positive");
  if (maxit < 2) throw std::invalid_argument("KrylovOptions: maxit must be at least 2");
}

namespace {

// Norm of a rounded tensor: everything but the first core is orthonormal.
double rounded_norm(const TTTensor& t) { return t.core(0).left_unfolding().norm(); }

Eigen::MatrixXd evaluate(MatrixFunctionKind g, const Eigen::MatrixXd& h, int iteration) {
  try {
    return dense_matfun(g, h);
  } catch (const DomainError& e) {
    throw DomainError(std::string(e.what()) + " (Krylov iteration " + std::to_string(iteration) + ")",
                      e.eigenvalue());
  }
}

double scalar_change(double current, double previous) {
  const double diff = std::abs(current - previous);
  return current != 0.0 ? diff / std::abs(current) : diff;
}

}  // namespace

ArnoldiProcess::ArnoldiProcess(const TTMatrix& a, const TTTensor& b, OperatorSymmetry symmetry,
                               const KrylovOptions& opts, bool keep_basis)
    : a_(a), symmetry_(symmetry), opts_(opts), keep_basis_(keep_basis) {
  opts_.validate();
  if (!a.is_square()) throw std::invalid_argument("Krylov: operator must be square");
  if (a.col_sizes() != b.mode_sizes()) throw std::invalid_argument("Krylov: operator and vector shapes differ");
  beta_ = tt_norm(b);
  if (!(beta_ > 0.0)) throw std::invalid_argument("Krylov: starting vector must be nonzero");
  h_ = Eigen::MatrixXd::Zero(opts_.maxit + 1, opts_.maxit);
  basis_.push_back(tt_scale(b, 1.0 / beta_));
}

bool ArnoldiProcess::step() {
  if (broke_down_) throw std::logic_error("ArnoldiProcess: step after breakdown");
  if (columns_ >= opts_.maxit) throw std::logic_error("ArnoldiProcess: maxit reached");
  const int k = columns_;
  const TruncationPolicy round{opts_.trunctol};
  TTTensor w = ttm_apply(a_, basis_.back(), round);
  const int lo = std::max(first_stored_, symmetry_ == OperatorSymmetry::symmetric ? k - 1 : 0);
  for (int pass = 0; pass < 2; ++pass) {
    for (int j = lo; j <= k; ++j) {
      const TTTensor& vj = basis_[static_cast<std::size_t>(j - first_stored_)];
      const double c = tt_dot(vj, w);
      h_(j, k) += c;
      w = tt_round(tt_axpy(1.0, w, -c, vj), round);
    }
  }
  const double hn = rounded_norm(w);
  if (!std::isfinite(hn) || !h_.col(k).allFinite())
    throw DomainError("Krylov: non-finite recurrence coefficients", {0.0, 0.0});
  h_(k + 1, k) = hn;
  ++columns_;
  const double column = h_.col(k).head(k + 2).norm();
  if (!(hn > opts_.breakdown * column)) {
    broke_down_ = true;
    return false;
  }
  basis_.push_back(tt_scale(w, 1.0 / hn));
  if (!keep_basis_ && basis_.size() > 2) {
    basis_.erase(basis_.begin());
    ++first_stored_;
  }
  return true;
}

Eigen::MatrixXd ArnoldiProcess::hessenberg() const {
  Eigen::MatrixXd h = h_.topLeftCorner(columns_, columns_);
  if (symmetry_ == OperatorSymmetry::symmetric) h = 0.5 * (h + h.transpose()).eval();
  return h;
}

double ArnoldiProcess::subdiagonal() const { return columns_ > 0 ? h_(columns_, columns_ - 1) : 0.0; }

KrylovTensorResult tt_krylov_apply(MatrixFunctionKind g, const TTMatrix& a, const TTTensor& b,
                                   const KrylovOptions& opts, OperatorSymmetry symmetry) {
  ArnoldiProcess proc(a, b, symmetry, opts);
  KrylovTensorResult out;
  TTTensor previous;
  while (true) {
    const bool extended = proc.step();
    const int k = proc.size();
    const Eigen::MatrixXd gh = evaluate(g, proc.hessenberg(), k);
    const Eigen::VectorXd coeffs = proc.beta() * gh.col(0);
    std::vector<TTTensor> vs(proc.basis().begin(), proc.basis().begin() + k);
    TTTensor current = tt_weighted_sum(vs, std::span<const double>(coeffs.data(), static_cast<std::size_t>(k)),
                                       {opts.trunctol});
    out.report.iterations = k;
    if (k > 1) {
      const double num = tt_norm(tt_axpy(1.0, current, -1.0, previous));
      const double den = tt_norm(current);
      const double diff = den > 0.0 ? num / den : num;
      out.report.differences.push_back(diff);
      if (diff <= opts.kryltol) out.report.converged = true;
    }
    previous = std::move(current);
    if (!extended) {
      out.report.breakdown = true;
      out.report.converged = true;
    }
    if (out.report.converged || k >= opts.maxit) break;
  }
  out.value = std::move(previous);
  return out;
}

namespace {

// Symmetric Lanczos loop shared by the quadratic-form entry points.
double run_quadform(MatrixFunctionKind g, ArnoldiProcess& proc, KrylovReport& report, const KrylovOptions& opts) {
  const double beta2 = proc.beta() * proc.beta();
  double value = 0.0;
  while (true) {
    const bool extended = proc.step();
    const int k = proc.size();
    const double current = beta2 * evaluate(g, proc.hessenberg(), k)(0, 0);
    report.iterations = k;
    if (k > 1) {
      const double diff = scalar_change(current, value);
      report.differences.push_back(diff);
      if (diff <= opts.kryltol) report.converged = true;
    }
    value = current;
    if (!extended) {
      report.breakdown = true;
      report.converged = true;
    }
    if (report.converged || k >= opts.maxit) break;
  }
  return value;
}

}  // namespace

KrylovScalarResult tt_krylov_quadform(MatrixFunctionKind g, const TTMatrix& a, const TTTensor& v,
                                      const KrylovOptions& opts) {
  ArnoldiProcess proc(a, v, OperatorSymmetry::symmetric, opts, false);
  KrylovScalarResult out;
  out.value = run_quadform(g, proc, out.report, opts);
  return out;
}

KrylovQuadformDerivatives tt_krylov_quadform_derivatives(MatrixFunctionKind g, const TTMatrix& a, const TTTensor& v,
                                                         const std::vector<TTMatrix>& directions,
                                                         const KrylovOptions& opts) {
  for (const auto& e : directions)
    if (e.row_sizes() != a.row_sizes() || e.col_sizes() != a.col_sizes())
      throw std::invalid_argument("Krylov: direction and operator shapes differ");
  ArnoldiProcess proc(a, v, OperatorSymmetry::symmetric, opts, true);
  KrylovQuadformDerivatives out;
  out.value = run_quadform(g, proc, out.report, opts);
  const int k = proc.size();
  const Eigen::MatrixXd t = proc.hessenberg();
  const double beta2 = proc.beta() * proc.beta();
  const auto& basis = proc.basis();
  for (const auto& e : directions) {
    Eigen::MatrixXd m(k, k);
    for (int b = 0; b < k; ++b) {
      const TTTensor w = ttm_apply(e, basis[static_cast<std::size_t>(b)]);
      for (int c = 0; c <= b; ++c) m(c, b) = m(b, c) = tt_dot(basis[static_cast<std::size_t>(c)], w);
    }
    try {
      out.derivatives.push_back(beta2 * dense_frechet_symmetric(g, t, m)(0, 0));
    } catch (const DomainError& err) {
      throw DomainError(std::string(err.what()) + " (Krylov iteration " + std::to_string(k) + ")", err.eigenvalue());
    }
  }
  return out;
}

KrylovScalarResult tt_krylov_bilinear(MatrixFunctionKind g, const TTMatrix& a, const TTTensor& u,
                                      const TTTensor& v, const KrylovOptions& opts, OperatorSymmetry symmetry) {
  if (u.mode_sizes() != v.mode_sizes()) throw std::invalid_argument("Krylov: u and v shapes differ");
  // Full orthogonalization needs the whole basis unless the operator is symmetric.
  ArnoldiProcess proc(a, v, symmetry, opts, symmetry != OperatorSymmetry::symmetric);
  KrylovScalarResult out;
  // Projections u^T v_j, gathered as basis vectors appear.
  std::vector<double> proj{tt_dot(u, proc.latest())};
  while (true) {
    const bool extended = proc.step();
    const int k = proc.size();
    const Eigen::MatrixXd gh = evaluate(g, proc.hessenberg(), k);
    double current = 0.0;
    for (int j = 0; j < k; ++j) current += gh(j, 0) * proj[static_cast<std::size_t>(j)];
    current *= proc.beta();
    out.report.iterations = k;
    if (k > 1) {
      const double diff = scalar_change(current, out.value);
      out.report.differences.push_back(diff);
      if (diff <= opts.kryltol) out.report.converged = true;
    }
    out.value = current;
    if (!extended) {
      out.report.breakdown = true;
      out.report.converged = true;
    }
    if (out.report.converged || k >= opts.maxit) break;
    proj.push_back(tt_dot(u, proc.latest()));
  }
  return out;
}

FrechetBlock frechet_block(const TTMatrix& a, const TTMatrix& e, double lower) {
  const double enorm = tt_norm(TTTensor(e.cores()));
  const double c = lower > 0.0 && enorm > lower ? lower / enorm : 1.0;
  return {ttm_block_upper(a, ttm_scale(e, c)), c};
}

KrylovScalarResult tt_frechet_quadform(MatrixFunctionKind g, const FrechetBlock& block, const TTTensor& z,
                                       const KrylovOptions& opts) {
  auto r = tt_krylov_bilinear(g, block.op, tt_block_embed(z, BlockSlot::top), tt_block_embed(z, BlockSlot::bottom),
                              opts);
  r.value /= block.scale;
  return r;
}

}  // namespace ttgp
