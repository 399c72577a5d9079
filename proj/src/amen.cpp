#include "ttgp/amen.hpp"

#include <cmath>
#include <random>

#include "linalg.hpp"

namespace ttgp {

void AmenOptions::validate() const {
  if (!(tol > 0.0)) throw std::invalid_argument("AmenOptions: tol must be positive");
  if (max_sweeps < 1) throw std::invalid_argument("AmenOptions: max_sweeps must be positive");
  if (enrichment < 1) throw std::invalid_argument("AmenOptions: enrichment must be at least 1");
  if (!(trunctol >= 0.0)) throw std::invalid_argument("AmenOptions: trunctol must be nonnegative");
}

namespace {

using Mat = Eigen::MatrixXd;
using CMap = Eigen::Map<const Mat>;

// Interfaces. Operator interfaces are Core3(ry, ra, rx) with element
// (alpha, beta, gamma) = test index, operator rank, trial index. Vector
// interfaces are ry x rb matrices.

// y = (PhiL x A_d x PhiR) u for a square operator core.
Core3 apply_local(const Core3& phil, const Core3& a, Index n, const Core3& phir, const Core3& u) {
  const Index ral = phil.mode_size(), rxl = phil.right_rank();
  const Index ryr = phir.left_rank(), rar = phir.mode_size();
  // W1[(g + rxl j), (a' + ryr b')] = sum_g' u(g, j, g') PhiR(a', b', g')
  Mat w1 = u.left_unfolding() * phir.left_unfolding().transpose();
  // P1[(j + n b'), (g + rxl a')]
  Mat p1(n * rar, rxl * ryr);
  for (Index bp = 0; bp < rar; ++bp)
    for (Index ap = 0; ap < ryr; ++ap)
      for (Index j = 0; j < n; ++j)
        for (Index g = 0; g < rxl; ++g) p1(j + n * bp, g + rxl * ap) = w1(g + rxl * j, ap + ryr * bp);
  // A as (b + ral i) x (j + n b')
  CMap amap(a.data().data(), ral * n, n * rar);
  Mat w2 = amap * p1;  // [(b + ral i), (g + rxl a')]
  // P2[(b + ral g), (i + n a')]
  Mat p2(ral * rxl, n * ryr);
  for (Index ap = 0; ap < ryr; ++ap)
    for (Index i = 0; i < n; ++i)
      for (Index g = 0; g < rxl; ++g)
        for (Index b = 0; b < ral; ++b) p2(b + ral * g, i + n * ap) = w2(b + ral * i, g + rxl * ap);
  Mat out = phil.right_unfolding() * p2;  // ryl x (n ryr)
  return Core3::from_right_unfolding(out, n, ryr);
}

// Dense local matrix of PhiL x A_d x PhiR, rows (a + ryl (i + n a')).
Mat assemble_local(const Core3& phil, const Core3& a, Index n, const Core3& phir) {
  const Index ryl = phil.left_rank(), ral = phil.mode_size(), rxl = phil.right_rank();
  const Index ryr = phir.left_rank(), rar = phir.mode_size(), rxr = phir.right_rank();
  Mat m = Mat::Zero(ryl * n * ryr, rxl * n * rxr);
  for (Index bp = 0; bp < rar; ++bp)
    for (Index b = 0; b < ral; ++b)
      for (Index gp = 0; gp < rxr; ++gp)
        for (Index ap = 0; ap < ryr; ++ap) {
          const double r = phir(ap, bp, gp);
          if (r == 0.0) continue;
          for (Index j = 0; j < n; ++j)
            for (Index i = 0; i < n; ++i) {
              const double ar = r * a(b, i + n * j, bp);
              if (ar == 0.0) continue;
              for (Index g = 0; g < rxl; ++g)
                for (Index al = 0; al < ryl; ++al)
                  m(al + ryl * (i + n * ap), g + rxl * (j + n * gp)) += phil(al, b, g) * ar;
            }
        }
  return m;
}

// f = PhiL x B_d x PhiR for vector interfaces.
Core3 local_rhs(const Mat& phil, const Core3& b, const Mat& phir) {
  Mat t = phil * b.right_unfolding();  // ry x (n rb')
  CMap tl(t.data(), phil.rows() * b.mode_size(), b.right_rank());
  Mat out = tl * phir.transpose();  // (ry n) x ry'
  return Core3::from_left_unfolding(out, phil.rows(), b.mode_size());
}

Core3 operator_left(const Core3& phil, const Core3& y, const Core3& a, Index n, const Core3& x) {
  const Index ry = phil.left_rank(), ra = phil.mode_size();
  const Index rap = a.right_rank(), rxp = x.right_rank();
  // V1[(al + ry b), (j + n g')]
  Mat v1 = phil.left_unfolding() * x.right_unfolding();
  // Aperm[(i + n b'), (b + ra j)]
  Mat aperm(n * rap, ra * n);
  for (Index bp = 0; bp < rap; ++bp)
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < n; ++i)
        for (Index b = 0; b < ra; ++b) aperm(i + n * bp, b + ra * j) = a(b, i + n * j, bp);
  // P[(b + ra j), (al + ry g')]
  Mat p(ra * n, ry * rxp);
  for (Index gp = 0; gp < rxp; ++gp)
    for (Index al = 0; al < ry; ++al)
      for (Index j = 0; j < n; ++j)
        for (Index b = 0; b < ra; ++b) p(b + ra * j, al + ry * gp) = v1(al + ry * b, j + n * gp);
  Mat v2 = aperm * p;  // [(i + n b'), (al + ry g')]
  // Q[(al + ry i), (b' + rap g')]
  Mat q(ry * n, rap * rxp);
  for (Index gp = 0; gp < rxp; ++gp)
    for (Index bp = 0; bp < rap; ++bp)
      for (Index i = 0; i < n; ++i)
        for (Index al = 0; al < ry; ++al) q(al + ry * i, bp + rap * gp) = v2(i + n * bp, al + ry * gp);
  Mat out = y.left_unfolding().transpose() * q;  // ry' x (rap rx')
  return Core3::from_right_unfolding(out, rap, rxp);
}

Core3 operator_right(const Core3& phir, const Core3& y, const Core3& a, Index n, const Core3& x) {
  const Index ra = a.left_rank(), rx = x.left_rank();
  const Index ryp = phir.left_rank(), rap = phir.mode_size();
  // V1[(g + rx j), (a' + ryp b')]
  Mat v1 = x.left_unfolding() * phir.left_unfolding().transpose();
  Mat p(n * rap, rx * ryp);
  for (Index bp = 0; bp < rap; ++bp)
    for (Index ap = 0; ap < ryp; ++ap)
      for (Index j = 0; j < n; ++j)
        for (Index g = 0; g < rx; ++g) p(j + n * bp, g + rx * ap) = v1(g + rx * j, ap + ryp * bp);
  CMap amap(a.data().data(), ra * n, n * rap);
  Mat v2 = amap * p;  // [(b + ra i), (g + rx a')]
  Mat q(n * ryp, ra * rx);
  for (Index ap = 0; ap < ryp; ++ap)
    for (Index g = 0; g < rx; ++g)
      for (Index i = 0; i < n; ++i)
        for (Index b = 0; b < ra; ++b) q(i + n * ap, b + ra * g) = v2(b + ra * i, g + rx * ap);
  Mat out = y.right_unfolding() * q;  // ry x (ra rx)
  return Core3::from_right_unfolding(out, ra, rx);
}

Mat vector_left(const Mat& phil, const Core3& y, const Core3& b) {
  Mat t = phil * b.right_unfolding();
  CMap tl(t.data(), phil.rows() * b.mode_size(), b.right_rank());
  return y.left_unfolding().transpose() * tl;
}

Mat vector_right(const Mat& phir, const Core3& y, const Core3& b) {
  Mat t = b.left_unfolding() * phir.transpose();  // (rb n) x ry'
  CMap tr(t.data(), b.left_rank(), b.mode_size() * phir.rows());
  return y.right_unfolding() * tr.transpose();
}

Core3 unit_operator_interface() {
  Core3 c(1, 1, 1);
  c(0, 0, 0) = 1.0;
  return c;
}

double core_norm(const Core3& c) { return c.left_unfolding().norm(); }

Core3 axpy_core(const Core3& f, const Core3& au) {
  Core3 out = f;
  for (std::size_t k = 0; k < out.data().size(); ++k) out.data()[k] -= au.data()[k];
  return out;
}

// Conjugate gradients on the local system, warm started from u0.
Core3 local_cg(const Core3& phil, const Core3& a, Index n, const Core3& phir, const Core3& f, const Core3& u0,
               double rel_tol) {
  const double fnorm = core_norm(f);
  if (fnorm == 0.0) return Core3(f.left_rank(), f.mode_size(), f.right_rank());
  Core3 x = u0;
  const Index size = x.size();
  Eigen::Map<Eigen::VectorXd> xv(x.data().data(), size);
  Core3 r = axpy_core(f, apply_local(phil, a, n, phir, x));
  Eigen::Map<Eigen::VectorXd> rv(r.data().data(), size);
  if (rv.norm() > fnorm) {  // a poor warm start; restart from zero
    xv.setZero();
    rv = Eigen::Map<const Eigen::VectorXd>(f.data().data(), size);
  }
  Core3 p = r;
  Eigen::Map<Eigen::VectorXd> pv(p.data().data(), size);
  double rr = rv.squaredNorm();
  const double target = rel_tol * fnorm;
  const Index max_iter = std::max<Index>(200, 20 * size);
  for (Index it = 0; it < max_iter && std::sqrt(rr) > target; ++it) {
    Core3 ap = apply_local(phil, a, n, phir, p);
    Eigen::Map<const Eigen::VectorXd> apv(ap.data().data(), size);
    const double pap = pv.dot(apv);
    if (!(pap > 0.0)) break;
    const double alpha = rr / pap;
    xv += alpha * pv;
    rv -= alpha * apv;
    const double rr_new = rv.squaredNorm();
    pv = rv + (rr_new / rr) * pv;
    rr = rr_new;
  }
  return x;
}

Core3 local_direct(const Core3& phil, const Core3& a, Index n, const Core3& phir, const Core3& f) {
  Mat m = assemble_local(phil, a, n, phir);
  m = 0.5 * (m + m.transpose()).eval();
  Eigen::Map<const Eigen::VectorXd> fv(f.data().data(), f.size());
  Eigen::VectorXd sol;
  Eigen::LLT<Mat> llt(m);
  if (llt.info() == Eigen::Success) {
    sol = llt.solve(fv);
  } else {
    sol = m.fullPivLu().solve(fv);
  }
  return Core3(f.left_rank(), f.mode_size(), f.right_rank(), std::vector<double>(sol.data(), sol.data() + sol.size()));
}

TTTensor random_tt(const std::vector<Index>& sizes, Index rank, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  std::vector<Core3> cores;
  Index left = 1;
  Index before = 1;
  Index after = 1;
  for (Index n : sizes) after *= n;
  for (std::size_t d = 0; d < sizes.size(); ++d) {
    before *= sizes[d];
    after /= sizes[d];
    const Index right = d + 1 == sizes.size() ? 1 : std::min({rank, before, after});
    Core3 c(left, sizes[d], right);
    for (double& v : c.data()) v = nd(rng);
    cores.push_back(std::move(c));
    left = right;
  }
  return tt_right_orthogonalize(TTTensor(std::move(cores)));
}

class Solver {
 public:
  Solver(const TTMatrix& a, const TTTensor& b, const AmenOptions& opts) : a_(a), b_(b), opts_(opts) {
    order_ = a.order();
    n_ = a.row_sizes();
  }

  AmenResult run(TTTensor x0) {
    AmenResult res;
    bnorm_ = tt_norm(b_);
    if (bnorm_ == 0.0) {
      res.x = tt_zeros(n_);
      res.converged = true;
      return res;
    }
    std::mt19937_64 rng(0x5eed);
    x_ = tt_right_orthogonalize(x0).cores();
    z_ = random_tt(n_, opts_.enrichment, rng).cores();
    init_interfaces();

    double best = residual_of(x_);
    TTTensor best_x(x_);
    for (int sweep = 1; sweep <= opts_.max_sweeps; ++sweep) {
      forward_sweep();
      const double r = residual_of(x_);
      res.residual_history.push_back(r);
      res.sweeps = sweep;
      if (r <= best) {
        best = r;
        best_x = TTTensor(x_);
      }
      if (r <= opts_.tol) {
        res.converged = true;
        break;
      }
      x_ = tt_right_orthogonalize(TTTensor(x_)).cores();
      z_ = tt_right_orthogonalize(TTTensor(z_)).cores();
      init_interfaces();
    }
    res.x = std::move(best_x);
    res.residual = best;
    return res;
  }

 private:
  double residual_of(const std::vector<Core3>& x) const {
    TTTensor ax = ttm_apply(a_, TTTensor(x));
    return tt_norm(tt_round(tt_axpy(1.0, ax, -1.0, b_), {opts_.trunctol})) / bnorm_;
  }

  void init_interfaces() {
    const auto du = static_cast<std::size_t>(order_);
    lxax_.assign(du + 1, Core3());
    rxax_.assign(du + 1, Core3());
    lzax_.assign(du + 1, Core3());
    rzax_.assign(du + 1, Core3());
    lxb_.assign(du + 1, Mat());
    rxb_.assign(du + 1, Mat());
    lzb_.assign(du + 1, Mat());
    rzb_.assign(du + 1, Mat());
    lxax_[0] = lzax_[0] = rxax_[du] = rzax_[du] = unit_operator_interface();
    lxb_[0] = lzb_[0] = rxb_[du] = rzb_[du] = Mat::Ones(1, 1);
    for (std::size_t d = du; d-- > 1;) {
      const Core3& ad = a_.core(static_cast<Index>(d));
      const Core3& bd = b_.core(static_cast<Index>(d));
      rxax_[d] = operator_right(rxax_[d + 1], x_[d], ad, n_[d], x_[d]);
      rzax_[d] = operator_right(rzax_[d + 1], z_[d], ad, n_[d], x_[d]);
      rxb_[d] = vector_right(rxb_[d + 1], x_[d], bd);
      rzb_[d] = vector_right(rzb_[d + 1], z_[d], bd);
    }
  }

  void forward_sweep() {
    const auto du = static_cast<std::size_t>(order_);
    const double local_trunc = opts_.trunctol / std::sqrt(static_cast<double>(std::max<Index>(order_ - 1, 1)));
    for (std::size_t d = 0; d < du; ++d) {
      const Core3& ad = a_.core(static_cast<Index>(d));
      const Core3& bd = b_.core(static_cast<Index>(d));
      const Index n = n_[d];
      const Core3 f = local_rhs(lxb_[d], bd, rxb_[d + 1]);
      Core3 u;
      if (f.size() <= opts_.local_direct_limit) {
        u = local_direct(lxax_[d], ad, n, rxax_[d + 1], f);
      } else {
        u = local_cg(lxax_[d], ad, n, rxax_[d + 1], f, x_[d], 0.1 * opts_.tol);
      }
      if (d + 1 == du) {
        x_[d] = std::move(u);
        break;
      }

      // Residual basis: projection of b - A x onto left and right z interfaces.
      Core3 zr = axpy_core(local_rhs(lzb_[d], bd, rzb_[d + 1]), apply_local(lzax_[d], ad, n, rzax_[d + 1], u));
      detail::ThinQR zq = detail::thin_qr(zr.left_unfolding());
      z_[d] = Core3::from_left_unfolding(zq.q, zr.left_rank(), n);
      if (z_[d].right_rank() != z_[d + 1].left_rank()) {
        // Rank-deficient case: keep shapes consistent by padding the next core.
        const Core3& next = z_[d + 1];
        Mat padded = Mat::Zero(z_[d].right_rank(), next.mode_size() * next.right_rank());
        padded.topRows(std::min(padded.rows(), next.left_rank())) =
            next.right_unfolding().topRows(std::min(padded.rows(), next.left_rank()));
        z_[d + 1] = Core3::from_right_unfolding(padded, next.mode_size(), next.right_rank());
      }

      // Enrichment from the residual with x on the left and z on the right.
      Core3 e = axpy_core(local_rhs(lxb_[d], bd, rzb_[d + 1]), apply_local(lxax_[d], ad, n, rzax_[d + 1], u));

      detail::ThinSVD svd = detail::thin_svd(u.left_unfolding());
      const Index r = detail::truncation_rank(svd.s, local_trunc * svd.s.norm(), std::nullopt);
      Mat stacked(u.left_rank() * n, r + e.right_rank());
      stacked << svd.u.leftCols(r), e.left_unfolding();
      detail::ThinQR qr = detail::thin_qr(stacked);
      Mat coeff = Mat::Zero(r + e.right_rank(), u.right_rank());
      coeff.topRows(r) = svd.s.head(r).asDiagonal() * svd.v.leftCols(r).transpose();
      Mat carry = qr.r * coeff;  // new rank x old right rank
      x_[d] = Core3::from_left_unfolding(qr.q, u.left_rank(), n);
      const Core3& next = x_[d + 1];
      x_[d + 1] = Core3::from_right_unfolding(carry * next.right_unfolding(), next.mode_size(), next.right_rank());

      lxax_[d + 1] = operator_left(lxax_[d], x_[d], ad, n, x_[d]);
      lzax_[d + 1] = operator_left(lzax_[d], z_[d], ad, n, x_[d]);
      lxb_[d + 1] = vector_left(lxb_[d], x_[d], bd);
      lzb_[d + 1] = vector_left(lzb_[d], z_[d], bd);
    }
  }

  const TTMatrix& a_;
  const TTTensor& b_;
  AmenOptions opts_;
  Index order_ = 0;
  std::vector<Index> n_;
  double bnorm_ = 0.0;
  std::vector<Core3> x_, z_;
  std::vector<Core3> lxax_, rxax_, lzax_, rzax_;
  std::vector<Mat> lxb_, rxb_, lzb_, rzb_;
};

}  // namespace

AmenResult amen_solve(const TTMatrix& a, const TTTensor& b, const AmenOptions& opts,
                      const std::optional<TTTensor>& initial) {
  opts.validate();
  if (!a.is_square()) throw std::invalid_argument("amen_solve: operator must be square");
  if (a.col_sizes() != b.mode_sizes()) throw std::invalid_argument("amen_solve: operator and right-hand side shapes differ");
  TTTensor x0;
  if (initial) {
    if (initial->mode_sizes() != b.mode_sizes()) throw std::invalid_argument("amen_solve: initial guess shape differs");
    x0 = *initial;
  } else {
    x0 = tt_round(b, {0.0, 2});
  }
  Solver solver(a, b, opts);
  return solver.run(std::move(x0));
}

}  // namespace ttgp
