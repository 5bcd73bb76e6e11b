#pragma once

#include <cstdint>
#include <random>

namespace dyadcov {

/// SplitMix64 finalizer. Used only to derive substream seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of the substream owned by replication `index` under master `seed`.
/// A pure function of its arguments, so replications can run in any order
/// or on any thread.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);

/// Standard normal draws from a 64-bit Mersenne Twister using the Marsaglia
/// polar method. The uniform and Gaussian transforms are implemented here
/// rather than taken from <random> distributions, whose algorithms are
/// implementation-defined, so that streams agree across standard libraries.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

  static NormalStream for_replication(std::uint64_t seed, std::uint64_t index) {
    return NormalStream(substream_seed(seed, index));
  }

  /// Uniform on the open interval (0, 1) with 53-bit resolution.
  double uniform();
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace dyadcov
