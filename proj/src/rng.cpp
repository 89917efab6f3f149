#include "inar/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace inar {

double RngStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller. u is kept away from 0 so the log is finite.
  double u = uniform01();
  if (u <= 0.0) u = 0x1.0p-53;
  const double v = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u));
  const double a = 6.283185307179586476925286766559 * v;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

std::uint32_t RngStream::poisson(double mean) {
  if (mean < 0.0 || !std::isfinite(mean))
    throw std::invalid_argument("poisson: mean must be finite and nonnegative");
  std::uint32_t total = 0;
  // Split large means so the product of uniforms never underflows and the
  // per-chunk expected draw count stays small.
  while (mean > 30.0) {
    total += poisson_chunk(30.0);
    mean -= 30.0;
  }
  return total + poisson_chunk(mean);
}

std::uint32_t RngStream::poisson_chunk(double mean) {
  if (mean == 0.0) return 0;
  const double limit = std::exp(-mean);
  double prod = 1.0;
  std::uint32_t k = 0;
  do {
    prod *= uniform01();
    ++k;
  } while (prod > limit);
  return k - 1;
}

double RngStream::gamma(double shape, double scale) {
  if (shape <= 0.0 || scale <= 0.0)
    throw std::invalid_argument("gamma: shape and scale must be positive");
  if (shape < 1.0) {
    // Boost to shape+1 and multiply back by U^(1/shape).
    const double u = std::max(uniform01(), 0x1.0p-53);
    return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
  }
  // Marsaglia-Tsang: squeeze-accept cubes of normals.
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform01();
    if (u < 1.0 - 0.0331 * x * x * x * x) return scale * d * v;
    if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
      return scale * d * v;
  }
}

}  // namespace inar
