#include "ttgp/kernel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ttgp {

std::vector<Index> GridDesign::sizes() const {
  std::vector<Index> n;
  for (const auto& p : points) n.push_back(static_cast<Index>(p.size()));
  return n;
}

Index GridDesign::total_size() const {
  Index total = 1;
  for (const auto& p : points) total *= static_cast<Index>(p.size());
  return total;
}

void GridDesign::validate() const {
  if (points.empty()) throw std::invalid_argument("GridDesign: no dimensions");
  for (const auto& p : points) {
    if (p.empty()) throw std::invalid_argument("GridDesign: empty point list");
    for (double x : p)
      if (!std::isfinite(x)) throw std::invalid_argument("GridDesign: non-finite point");
  }
}

HyperParams HyperParams::uniform(int R, int D, double sigma_f, double ell, double noise_sigma) {
  HyperParams p;
  p.R = R;
  p.D = D;
  p.log_sigma_f.assign(static_cast<std::size_t>(R), std::log(sigma_f));
  p.log_ell.assign(static_cast<std::size_t>(R), std::vector<double>(static_cast<std::size_t>(D), std::log(ell)));
  p.noise_sigma = noise_sigma;
  p.validate();
  return p;
}

void HyperParams::validate() const {
  if (R < 1 || D < 1) throw std::invalid_argument("HyperParams: R and D must be positive");
  if (log_sigma_f.size() != static_cast<std::size_t>(R) || log_ell.size() != static_cast<std::size_t>(R))
    throw std::invalid_argument("HyperParams: array lengths do not match R");
  for (const auto& row : log_ell)
    if (row.size() != static_cast<std::size_t>(D)) throw std::invalid_argument("HyperParams: log_ell rows must have D entries");
  if (!(noise_sigma >= 0.0)) throw std::invalid_argument("HyperParams: noise_sigma must be nonnegative");
}

Eigen::VectorXd HyperParams::flatten() const {
  Eigen::VectorXd theta(parameter_count());
  Index j = 0;
  for (double v : log_sigma_f) theta(j++) = v;
  for (const auto& row : log_ell)
    for (double v : row) theta(j++) = v;
  return theta;
}

HyperParams HyperParams::with_flat(const Eigen::VectorXd& theta) const {
  if (theta.size() != parameter_count()) throw std::invalid_argument("HyperParams: flat vector has wrong length");
  HyperParams p = *this;
  Index j = 0;
  for (double& v : p.log_sigma_f) v = theta(j++);
  for (auto& row : p.log_ell)
    for (double& v : row) v = theta(j++);
  return p;
}

std::pair<int, int> HyperParams::slot(Index j) const {
  if (j < 0 || j >= parameter_count()) throw std::out_of_range("HyperParams: parameter index " + std::to_string(j));
  if (j < R) return {static_cast<int>(j), -1};
  const Index idx = j - R;
  return {static_cast<int>(idx / D), static_cast<int>(idx % D)};
}

void to_json(nlohmann::json& j, const HyperParams& p) {
  j = nlohmann::json{{"R", p.R}, {"D", p.D}, {"log_sigma_f", p.log_sigma_f}, {"log_ell", p.log_ell},
                     {"noise_sigma", p.noise_sigma}};
}

void from_json(const nlohmann::json& j, HyperParams& p) {
  j.at("R").get_to(p.R);
  j.at("D").get_to(p.D);
  j.at("log_sigma_f").get_to(p.log_sigma_f);
  j.at("log_ell").get_to(p.log_ell);
  j.at("noise_sigma").get_to(p.noise_sigma);
  p.validate();
}

namespace {

Eigen::MatrixXd squared_differences(std::span<const double> x, std::span<const double> y) {
  Eigen::MatrixXd s(static_cast<Index>(x.size()), static_cast<Index>(y.size()));
  for (Index i = 0; i < s.rows(); ++i)
    for (Index j = 0; j < s.cols(); ++j) {
      const double diff = x[static_cast<std::size_t>(i)] - y[static_cast<std::size_t>(j)];
      s(i, j) = diff * diff;
    }
  return s;
}

Eigen::MatrixXd se_from_sqdiff(const Eigen::MatrixXd& sq, double log_ell, std::optional<double> log_sigma_f) {
  const double inv = std::exp(-2.0 * log_ell);
  const double scale = log_sigma_f ? std::exp(2.0 * *log_sigma_f) : 1.0;
  // overflow here means the parameters left the representable range
  if (!std::isfinite(inv) || !std::isfinite(scale) || !(inv > 0.0))
    throw std::domain_error("kernel: hyperparameters out of floating-point range");
  return scale * (-0.5 * inv * sq.array()).exp().matrix();
}

}  // namespace

Eigen::MatrixXd se_factor(std::span<const double> points, double log_ell, std::optional<double> log_sigma_f) {
  return se_cross_factor(points, points, log_ell, log_sigma_f);
}

Eigen::MatrixXd se_cross_factor(std::span<const double> rows, std::span<const double> cols, double log_ell,
                                std::optional<double> log_sigma_f) {
  if (rows.empty() || cols.empty()) throw std::invalid_argument("se_factor: empty point list");
  return se_from_sqdiff(squared_differences(rows, cols), log_ell, log_sigma_f);
}

KroneckerSumKernel::KroneckerSumKernel(GridDesign grid) : grid_(std::move(grid)) {
  grid_.validate();
  for (const auto& p : grid_.points) sqdiff_.push_back(squared_differences(p, p));
}

void KroneckerSumKernel::check(const HyperParams& theta) const {
  theta.validate();
  if (theta.D != grid_.order()) throw std::invalid_argument("kernel: HyperParams D does not match the grid");
}

Eigen::MatrixXd KroneckerSumKernel::factor(const HyperParams& theta, int r, int d) const {
  const auto ru = static_cast<std::size_t>(r);
  const auto du = static_cast<std::size_t>(d);
  std::optional<double> scale;
  if (d == 0) scale = theta.log_sigma_f[ru];
  return se_from_sqdiff(sqdiff_[du], theta.log_ell[ru][du], scale);
}

TTMatrix KroneckerSumKernel::kernel(const HyperParams& theta) const {
  check(theta);
  TTMatrix k;
  for (int r = 0; r < theta.R; ++r) {
    std::vector<Eigen::MatrixXd> f;
    for (int d = 0; d < theta.D; ++d) f.push_back(factor(theta, r, d));
    TTMatrix term = ttm_from_factors(f);
    k = r == 0 ? std::move(term) : ttm_add(k, term);
  }
  return k;
}

TTMatrix KroneckerSumKernel::noisy_kernel(const HyperParams& theta) const {
  return add_noise(kernel(theta), theta.noise_sigma);
}

TTMatrix KroneckerSumKernel::derivative(const HyperParams& theta, Index j) const {
  check(theta);
  const auto [r, dslot] = theta.slot(j);
  std::vector<Eigen::MatrixXd> f;
  for (int d = 0; d < theta.D; ++d) f.push_back(factor(theta, r, d));
  if (dslot < 0) {
    f[0] *= 2.0;
  } else {
    const auto du = static_cast<std::size_t>(dslot);
    const double inv = std::exp(-2.0 * theta.log_ell[static_cast<std::size_t>(r)][du]);
    f[du] = (inv * sqdiff_[du].array() * f[du].array()).matrix();
  }
  return ttm_from_factors(f);
}

TTMatrix build_kernel(const GridDesign& grid, const HyperParams& theta) {
  return KroneckerSumKernel(grid).kernel(theta);
}

TTMatrix add_noise(const TTMatrix& k, double sigma) {
  if (!k.is_square()) throw std::invalid_argument("add_noise: kernel must be square");
  if (!(sigma >= 0.0)) throw std::invalid_argument("add_noise: sigma must be nonnegative");
  return ttm_add(k, ttm_scale(ttm_identity(k.row_sizes()), sigma * sigma));
}

TTMatrix kernel_derivative(const GridDesign& grid, const HyperParams& theta, Index j) {
  return KroneckerSumKernel(grid).derivative(theta, j);
}

TTMatrix build_cross_kernel(const GridDesign& test, const GridDesign& train, const HyperParams& theta) {
  test.validate();
  train.validate();
  theta.validate();
  if (test.order() != train.order() || theta.D != train.order())
    throw std::invalid_argument("build_cross_kernel: dimension mismatch");
  TTMatrix k;
  for (int r = 0; r < theta.R; ++r) {
    std::vector<Eigen::MatrixXd> f;
    for (int d = 0; d < theta.D; ++d) {
      const auto du = static_cast<std::size_t>(d);
      std::optional<double> scale;
      if (d == 0) scale = theta.log_sigma_f[static_cast<std::size_t>(r)];
      f.push_back(se_cross_factor(test.points[du], train.points[du], theta.log_ell[static_cast<std::size_t>(r)][du], scale));
    }
    TTMatrix term = ttm_from_factors(f);
    k = r == 0 ? std::move(term) : ttm_add(k, term);
  }
  return k;
}

}  // namespace ttgp
