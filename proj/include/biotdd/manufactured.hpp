#pragma once

#include "biotdd/problem.hpp"

namespace biot {

/// Exact fields used by the error norms.
struct ExactSolution {
  std::function<Mat2(const Vec2&, double)> sigma;
  VectorFn div_sigma;
  VectorFn u;
  ScalarFn gamma;
  VectorFn z;
  ScalarFn div_z;
  ScalarFn p;
};

/// Smooth manufactured Biot solution on the unit square with K = I:
/// p = e^t (sin(pi x) cos(pi y) + 10) and a fixed polynomial/trigonometric u.
class ManufacturedCase {
 public:
  ManufacturedCase(double mu = 100.0, double lambda = 100.0, double c0 = 1.0, double alpha = 1.0);

  double p(const Vec2& x, double t) const;
  Vec2 grad_p(const Vec2& x, double t) const;
  double lap_p(const Vec2& x, double t) const;
  Vec2 u(const Vec2& x, double t) const;
  /// grad_u(i, j) = d u_i / d x_j
  Mat2 grad_u(const Vec2& x, double t) const;
  /// Second derivatives: {u0_xx, u0_xy, u0_yy, u1_xx, u1_xy, u1_yy}.
  std::array<double, 6> hess_u(const Vec2& x, double t) const;

  Mat2 sigma(const Vec2& x, double t) const;
  Vec2 div_sigma(const Vec2& x, double t) const;
  /// Skew part of grad u, entry (0, 1).
  double gamma(const Vec2& x, double t) const;
  Vec2 z(const Vec2& x, double t) const { return -grad_p(x, t); }
  double div_z(const Vec2& x, double t) const { return -lap_p(x, t); }
  Vec2 f(const Vec2& x, double t) const { return -div_sigma(x, t); }
  /// d/dt (c0 p + alpha div u) + div z
  double g(const Vec2& x, double t) const;

  /// Sources, Dirichlet data on every side, initial pressure.
  ProblemData data() const;
  ExactSolution exact() const;

  double mu, lambda, c0, alpha;
};

}  // namespace biot
