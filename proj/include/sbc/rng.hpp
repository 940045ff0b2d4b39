#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace sbc {

using Rng = std::mt19937_64;

// Purpose tags keep independent streams per pipeline stage, so changing how
// many numbers one stage consumes never shifts another stage's draws.
enum class Stream : std::uint32_t {
  kGeometry = 1,
  kSignatures = 2,
  kAllocation = 3,
  kChannels = 4,
  kPilotNoise = 5,
  kUplinkData = 6,
  kInstance = 7,
};

/// Deterministic sub-stream derived from a run seed and arbitrary labels.
inline Rng make_stream(std::uint64_t seed, Stream stream, std::initializer_list<std::uint64_t> labels = {}) {
  std::vector<std::uint32_t> words;
  words.push_back(static_cast<std::uint32_t>(seed));
  words.push_back(static_cast<std::uint32_t>(seed >> 32));
  words.push_back(static_cast<std::uint32_t>(stream));
  for (std::uint64_t l : labels) {
    words.push_back(static_cast<std::uint32_t>(l));
    words.push_back(static_cast<std::uint32_t>(l >> 32));
  }
  std::seed_seq s(words.begin(), words.end());
  return Rng(s);
}

/// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
inline std::complex<double> complex_normal(Rng& rng, double variance) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double scale = std::sqrt(variance / 2.0);
  const double re = n(rng);
  const double im = n(rng);
  return {scale * re, scale * im};
}

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace sbc
