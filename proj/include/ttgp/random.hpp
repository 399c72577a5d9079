#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "ttgp/tt.hpp"

namespace ttgp {

/// Counter-based generator: draw k of stream s is a pure hash of
/// (seed, s, k), so any stream can be regenerated independently.
/// Satisfies UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  double uniform();   ///< [0, 1)
  double normal();    ///< standard normal
  double rademacher();

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Rank-1 Rademacher probes; probe i is drawn from stream (seed, first_stream + i).
struct ProbeSet {
  std::uint64_t seed = 0;
  std::uint64_t first_stream = 0;
  std::vector<TTTensor> probes;

  Index count() const { return static_cast<Index>(probes.size()); }

  static ProbeSet draw(const std::vector<Index>& sizes, Index count, std::uint64_t seed,
                       std::uint64_t first_stream = 0);
};

/// Dense standard-normal tensor from a single stream, row-major fill.
DenseTensor normal_tensor(const std::vector<Index>& sizes, std::uint64_t seed, std::uint64_t stream);

}  // namespace ttgp
