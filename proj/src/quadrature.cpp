#include "biotdd/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace biot {

Rule1d gauss_1d(int n) {
  if (n < 1) throw std::invalid_argument("gauss_1d: n must be >= 1");
  Rule1d r;
  r.x.resize(static_cast<std::size_t>(n));
  r.w.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    // Newton on P_n from the Chebyshev-like initial guess
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    double p0 = 1.0, p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (z * p1 - (n == 1 ? 1.0 : p0)) / (z * z - 1.0);
    const std::size_t k = static_cast<std::size_t>(n - 1 - i);
    r.x[k] = 0.5 * (1.0 + z);
    r.w[k] = 1.0 / ((1.0 - z * z) * dp * dp);
  }
  return r;
}

Rule2d gauss_square(int n) {
  const Rule1d g = gauss_1d(n);
  Rule2d r;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      r.x.emplace_back(g.x[i], g.x[j]);
      r.w.push_back(g.w[i] * g.w[j]);
    }
  return r;
}

}  // namespace biot
