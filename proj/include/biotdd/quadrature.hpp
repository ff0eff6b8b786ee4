#pragma once

#include <Eigen/Core>

#include <vector>

namespace biot {

/// Gauss-Legendre rule on [0, 1].
struct Rule1d {
  std::vector<double> x;
  std::vector<double> w;
  int size() const { return static_cast<int>(x.size()); }
};

/// Tensor Gauss rule on the reference square [0, 1]^2.
struct Rule2d {
  std::vector<Eigen::Vector2d> x;
  std::vector<double> w;
  int size() const { return static_cast<int>(x.size()); }
};

/// n-point rule, exact for polynomials of degree 2n-1.
Rule1d gauss_1d(int n);
Rule2d gauss_square(int n);

/// Smallest rule exact for degree `degree` (per coordinate on the square).
inline int points_for_degree(int degree) { return degree / 2 + 1; }

}  // namespace biot
