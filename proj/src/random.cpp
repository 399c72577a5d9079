#include "ttgp/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ttgp {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(mix(mix(seed + kGolden) ^ (stream * 0xd1b54a32d192ed03ULL + 1))) {}

CounterRng::result_type CounterRng::operator()() { return mix(key_ + kGolden * ++counter_); }

double CounterRng::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

double CounterRng::normal() {
  // Box-Muller, explicit so sequences do not depend on the standard library
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
  has_spare_ = true;
  return r * std::cos(2.0 * std::numbers::pi * u2);
}

double CounterRng::rademacher() { return ((*this)() >> 63) ? 1.0 : -1.0; }

ProbeSet ProbeSet::draw(const std::vector<Index>& sizes, Index count, std::uint64_t seed,
                        std::uint64_t first_stream) {
  if (count < 1) throw std::invalid_argument("ProbeSet: probe count must be positive");
  if (sizes.empty()) throw std::invalid_argument("ProbeSet: empty shape");
  ProbeSet out;
  out.seed = seed;
  out.first_stream = first_stream;
  for (Index i = 0; i < count; ++i) {
    CounterRng rng(seed, first_stream + static_cast<std::uint64_t>(i));
    std::vector<Eigen::VectorXd> factors;
    for (Index n : sizes) {
      if (n < 1) throw std::invalid_argument("ProbeSet: mode sizes must be positive");
      Eigen::VectorXd v(n);
      for (Index k = 0; k < n; ++k) v(k) = rng.rademacher();
      factors.push_back(std::move(v));
    }
    out.probes.push_back(tt_rank1(factors));
  }
  return out;
}

DenseTensor normal_tensor(const std::vector<Index>& sizes, std::uint64_t seed, std::uint64_t stream) {
  DenseTensor t(sizes);
  CounterRng rng(seed, stream);
  for (double& v : t.values) v = rng.normal();
  return t;
}

}  // namespace ttgp
