#pragma once

#include <optional>
#include <vector>

#include "ttgp/tt.hpp"

namespace ttgp {

struct AmenOptions {
  double tol = 1e-6;              ///< target relative residual
  int max_sweeps = 20;
  Index enrichment = 4;           ///< rank of the residual basis
  Index local_direct_limit = 2000; ///< dense factorization up to this local size
  double trunctol = 1e-10;        ///< truncation of local solutions and of the residual

  void validate() const;
};

struct AmenResult {
  TTTensor x;
  double residual = 0.0;  ///< relative residual of x
  int sweeps = 0;
  bool converged = false;
  std::vector<double> residual_history;  ///< one entry per sweep
};

/// One-site alternating solver with residual enrichment for symmetric
/// positive definite A. Starts from b rounded to rank 2 unless a guess is
/// given. Never throws on non-convergence; the best iterate is returned.
AmenResult amen_solve(const TTMatrix& a, const TTTensor& b, const AmenOptions& opts = {},
                      const std::optional<TTTensor>& initial = std::nullopt);

}  // namespace ttgp
