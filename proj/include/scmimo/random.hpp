#pragma once

#include <cstdint>
#include <random>

#include "scmimo/types.hpp"

namespace scmimo {

// What a random stream is used for inside one Monte Carlo trial. Each purpose
// gets its own independent stream so that adding, say, symbol generation to
// a run does not perturb the channel draws.
enum class StreamPurpose : std::uint64_t { Channel = 1, Symbols = 2, Noise = 3, Oracle = 4 };

// Stateless 64-bit mixer (SplitMix64 finalizer).
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seeded generator for one (master seed, trial, purpose) triple. The seed is
/// a pure function of the triple, so trials can run in any order on any
/// number of workers and still reproduce bit-for-bit.
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t trial,
               StreamPurpose purpose = StreamPurpose::Channel);

  double normal() { return normal_(engine_); }
  /// CN(0, variance): independent real and imaginary parts of variance/2.
  cdouble complex_normal(double variance = 1.0);
  Block complex_normal_block(Eigen::Index rows, Eigen::Index cols, double variance = 1.0);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// Master seed from the SCMIMO_SEED environment variable, else `fallback`.
std::uint64_t default_seed(std::uint64_t fallback = 1);

}  // namespace scmimo
