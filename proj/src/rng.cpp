#include "mbc/rng.hpp"

#include <cmath>
#include <stdexcept>

#include "mbc/specfun.hpp"

namespace mbc {

double sample_normal(Rng& rng) { return specfun::norm_quantile(rng.uniform_pos()); }

double sample_gamma(Rng& rng, double shape) {
  if (shape <= 0.0) throw std::invalid_argument("sample_gamma: shape must be > 0");
  if (shape < 1.0) {
    // Boost: X ~ Gamma(shape+1), then X * U^{1/shape} ~ Gamma(shape).
    const double boost = std::pow(rng.uniform_pos(), 1.0 / shape);
    return boost * sample_gamma(rng, shape + 1.0);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double z, v;
    do {
      z = sample_normal(rng);
      v = 1.0 + c * z;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform_pos();
    const double z2 = z * z;
    if (u < 1.0 - 0.0331 * z2 * z2) return d * v;
    if (std::log(u) < 0.5 * z2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double sample_beta(Rng& rng, double a, double b) {
  const double x = sample_gamma(rng, a);
  const double y = sample_gamma(rng, b);
  return x / (x + y);
}

}  // namespace mbc
