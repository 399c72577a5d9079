#pragma once

// Small dense kernels shared by the TT routines. Private to the library.

#include <Eigen/Dense>

#include <optional>

namespace ttgp::detail {

struct ThinQR {
  Eigen::MatrixXd q;  // rows x k, orthonormal columns
  Eigen::MatrixXd r;  // k x cols
};

inline ThinQR thin_qr(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  const Eigen::Index k = std::min(m.rows(), m.cols());
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  ThinQR out;
  out.q = qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), k);
  out.r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  return out;
}

struct ThinSVD {
  Eigen::MatrixXd u;
  Eigen::VectorXd s;
  Eigen::MatrixXd v;
};

/// Thin SVD; strongly rectangular inputs are first reduced by QR.
inline ThinSVD thin_svd(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  ThinSVD out;
  const Eigen::Index rows = m.rows();
  const Eigen::Index cols = m.cols();
  if (rows >= 2 * cols && cols > 0) {
    ThinQR qr = thin_qr(m);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(qr.r, Eigen::ComputeThinU | Eigen::ComputeThinV);
    out.u = qr.q * svd.matrixU();
    out.s = svd.singularValues();
    out.v = svd.matrixV();
  } else if (cols >= 2 * rows && rows > 0) {
    ThinQR qr = thin_qr(m.transpose());
    Eigen::BDCSVD<Eigen::MatrixXd> svd(qr.r, Eigen::ComputeThinU | Eigen::ComputeThinV);
    out.u = svd.matrixV();
    out.s = svd.singularValues();
    out.v = qr.q * svd.matrixU();
  } else {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    out.u = svd.matrixU();
    out.s = svd.singularValues();
    out.v = svd.matrixV();
  }
  return out;
}

/// Smallest rank whose discarded tail has Frobenius norm <= delta, clamped
/// to [1, max_rank].
inline Eigen::Index truncation_rank(const Eigen::VectorXd& s, double delta,
                                    std::optional<Eigen::Index> max_rank) {
  Eigen::Index r = s.size();
  double tail = 0.0;
  const double delta2 = delta * delta;
  while (r > 0) {
    const double next = tail + s(r - 1) * s(r - 1);
    if (next > delta2) break;
    tail = next;
    --r;
  }
  if (max_rank) r = std::min(r, *max_rank);
  return std::max<Eigen::Index>(r, 1);
}

}  // namespace ttgp::detail
