#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace inar {

// All randomness in this project flows through RngStream. The engine is
// std::mt19937_64 (its output sequence is pinned by the standard), and every
// sampler below is built directly on raw 64-bit engine output, because the
// std::*_distribution adaptors are implementation-defined and would make
// "same seed, same series" silently false across standard libraries.
//
// Stream discipline: stream k of master seed s seeds the engine with
// splitmix64(s + (k+1) * 0x9E3779B97F4A7C15). Monte Carlo replica r uses
// stream r; single-shot simulation uses stream 0. Two streams with different
// indices are treated as independent.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
      : engine_(splitmix64(master_seed +
                           (stream_index + 1) * 0x9E3779B97F4A7C15ull)) {}

  // Uniform on [0,1) with 53 random bits.
  double uniform01() {
    return (double)(engine_() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; the spare deviate is cached.
  double normal();

  // Number of successes among `count` independent trials with probability p.
  // Always draws exactly `count` uniforms, so the draw pattern depends only
  // on the trial count, not on p. Thinning relies on that.
  std::uint32_t bernoulli_sum(std::uint32_t count, double p) {
    std::uint32_t s = 0;
    for (std::uint32_t i = 0; i < count; ++i) s += (uniform01() < p) ? 1u : 0u;
    return s;
  }

  // Poisson by uniform products (exact). Means above 30 are split into
  // chunks of at most 30 and the chunk draws summed, keeping per-draw cost
  // proportional to the mean without approximation.
  std::uint32_t poisson(double mean);

  // Marsaglia-Tsang squeeze for shape >= 1, boosted by U^(1/shape) below 1.
  double gamma(double shape, double scale);

  // Index sampled from a cumulative mass table (last entry treated as 1).
  std::uint32_t from_cdf(const std::vector<double>& cdf) {
    const double u = uniform01();
    for (std::size_t i = 0; i + 1 < cdf.size(); ++i)
      if (u < cdf[i]) return (std::uint32_t)i;
    return (std::uint32_t)(cdf.empty() ? 0 : cdf.size() - 1);
  }

 private:
  std::uint32_t poisson_chunk(double mean);

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace inar
