#include "scmimo/random.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace scmimo {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t master_seed, std::uint64_t trial, StreamPurpose purpose) {
  const std::uint64_t key =
      mix64(mix64(mix64(master_seed) ^ trial) ^ static_cast<std::uint64_t>(purpose));
  std::seed_seq seq{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(purpose)};
  engine_.seed(seq);
}

cdouble RandomStream::complex_normal(double variance) {
  const double s = std::sqrt(0.5 * variance);
  const double re = normal();
  const double im = normal();
  return {s * re, s * im};
}

Block RandomStream::complex_normal_block(Eigen::Index rows, Eigen::Index cols, double variance) {
  Block out(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) out(r, c) = complex_normal(variance);
  return out;
}

std::uint64_t default_seed(std::uint64_t fallback) {
  const char* env = std::getenv("SCMIMO_SEED");
  if (env == nullptr || *env == '\0') return fallback;
  try {
    return std::stoull(env);
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("SCMIMO_SEED is not an unsigned integer: ") + env);
  }
}

}  // namespace scmimo
