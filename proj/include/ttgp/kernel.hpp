#pragma once

#include <json.hpp>

#include <optional>
#include <span>
#include <vector>

#include "ttgp/tt.hpp"

namespace ttgp {

/// Cartesian product grid, one coordinate list per dimension.
struct GridDesign {
  std::vector<std::vector<double>> points;

  Index order() const { return static_cast<Index>(points.size()); }
  std::vector<Index> sizes() const;
  Index total_size() const;
  void validate() const;
};

/// Hyperparameters of a rank-R Kronecker sum of squared-exponential kernels.
///
/// Flattened order: log_sigma_f[0..R), then log_ell[r][d] with r major and d
/// minor. noise_sigma is fixed and never part of the flat vector.
struct HyperParams {
  int R = 0;
  int D = 0;
  std::vector<double> log_sigma_f;
  std::vector<std::vector<double>> log_ell;
  double noise_sigma = 0.0;

  static HyperParams uniform(int R, int D, double sigma_f, double ell, double noise_sigma);

  Index parameter_count() const { return static_cast<Index>(R) * (1 + D); }
  Eigen::VectorXd flatten() const;
  HyperParams with_flat(const Eigen::VectorXd& theta) const;
  void validate() const;

  /// (r, d) slot of flat index j; d is -1 for a signal-variance parameter.
  std::pair<int, int> slot(Index j) const;
};

void to_json(nlohmann::json& j, const HyperParams& p);
void from_json(const nlohmann::json& j, HyperParams& p);

/// s * exp(-(x_i - y_j)^2 / (2 ell^2)), s = sigma_f^2 when a scale is given.
Eigen::MatrixXd se_factor(std::span<const double> points, double log_ell,
                          std::optional<double> log_sigma_f = std::nullopt);
Eigen::MatrixXd se_cross_factor(std::span<const double> rows, std::span<const double> cols, double log_ell,
                                std::optional<double> log_sigma_f = std::nullopt);

/// Per-dimension squared differences cached for repeated kernel assembly.
class KroneckerSumKernel {
 public:
  explicit KroneckerSumKernel(GridDesign grid);

  const GridDesign& grid() const { return grid_; }

  Eigen::MatrixXd factor(const HyperParams& theta, int r, int d) const;
  TTMatrix kernel(const HyperParams& theta) const;
  /// Kernel plus noise_sigma^2 times the identity.
  TTMatrix noisy_kernel(const HyperParams& theta) const;
  TTMatrix derivative(const HyperParams& theta, Index j) const;

 private:
  void check(const HyperParams& theta) const;

  GridDesign grid_;
  std::vector<Eigen::MatrixXd> sqdiff_;
};

TTMatrix build_kernel(const GridDesign& grid, const HyperParams& theta);
TTMatrix add_noise(const TTMatrix& k, double sigma);
TTMatrix kernel_derivative(const GridDesign& grid, const HyperParams& theta, Index j);

/// Rectangular cross-covariance between a test grid (rows) and a training
/// grid (columns), same rank as the kernel.
TTMatrix build_cross_kernel(const GridDesign& test, const GridDesign& train, const HyperParams& theta);

}  // namespace ttgp
