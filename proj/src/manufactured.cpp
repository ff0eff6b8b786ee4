#include "biotdd/manufactured.hpp"

#include <cmath>

namespace biot {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

ManufacturedCase::ManufacturedCase(double mu_, double lambda_, double c0_, double alpha_)
    : mu(mu_), lambda(lambda_), c0(c0_), alpha(alpha_) {}

double ManufacturedCase::p(const Vec2& x, double t) const {
  return std::exp(t) * (std::sin(kPi * x.x()) * std::cos(kPi * x.y()) + 10.0);
}

Vec2 ManufacturedCase::grad_p(const Vec2& x, double t) const {
  const double e = std::exp(t) * kPi;
  return {e * std::cos(kPi * x.x()) * std::cos(kPi * x.y()), -e * std::sin(kPi * x.x()) * std::sin(kPi * x.y())};
}

double ManufacturedCase::lap_p(const Vec2& x, double t) const {
  return -2.0 * kPi * kPi * std::exp(t) * std::sin(kPi * x.x()) * std::cos(kPi * x.y());
}

Vec2 ManufacturedCase::u(const Vec2& X, double t) const {
  const double x = X.x(), y = X.y(), a = 1.0 - x, b = 1.0 - y, e = std::exp(t);
  return {e * (x * x * x * std::pow(y, 4) + x * x + std::sin(a * b) * std::cos(b)),
          e * (std::pow(a, 4) * b * b * b + b * b + std::cos(x * y) * std::sin(x))};
}

Mat2 ManufacturedCase::grad_u(const Vec2& X, double t) const {
  const double x = X.x(), y = X.y(), a = 1.0 - x, b = 1.0 - y, e = std::exp(t);
  const double s = std::sin(a * b), c = std::cos(a * b), sb = std::sin(b), cb = std::cos(b);
  const double S = std::sin(x * y), C = std::cos(x * y), sx = std::sin(x), cx = std::cos(x);
  Mat2 g;
  g(0, 0) = 3 * x * x * std::pow(y, 4) + 2 * x - b * c * cb;
  g(0, 1) = 4 * x * x * x * y * y * y - a * c * cb + s * sb;
  g(1, 0) = -4 * a * a * a * b * b * b - y * S * sx + C * cx;
  g(1, 1) = -3 * std::pow(a, 4) * b * b - 2 * b - x * S * sx;
  return e * g;
}

std::array<double, 6> ManufacturedCase::hess_u(const Vec2& X, double t) const {
  const double x = X.x(), y = X.y(), a = 1.0 - x, b = 1.0 - y, e = std::exp(t);
  const double s = std::sin(a * b), c = std::cos(a * b), sb = std::sin(b), cb = std::cos(b);
  const double S = std::sin(x * y), C = std::cos(x * y), sx = std::sin(x), cx = std::cos(x);
  std::array<double, 6> h;
  h[0] = 6 * x * std::pow(y, 4) + 2 - b * b * s * cb;
  h[1] = 12 * x * x * y * y * y + c * cb - a * b * s * cb - b * c * sb;
  h[2] = 12 * x * x * x * y * y - a * a * s * cb - 2 * a * c * sb - s * cb;
  h[3] = 12 * a * a * b * b * b - y * y * C * sx - 2 * y * S * cx - C * sx;
  h[4] = 12 * a * a * a * b * b - S * sx - x * y * C * sx - x * S * cx;
  h[5] = 6 * std::pow(a, 4) * b + 2 - x * x * C * sx;
  for (double& v : h) v *= e;
  return h;
}

Mat2 ManufacturedCase::sigma(const Vec2& x, double t) const {
  const Mat2 G = grad_u(x, t);
  const Mat2 eps = 0.5 * (G + G.transpose());
  return 2.0 * mu * eps + (lambda * G.trace() - alpha * p(x, t)) * Mat2::Identity();
}

Vec2 ManufacturedCase::div_sigma(const Vec2& x, double t) const {
  const auto h = hess_u(x, t);
  const Vec2 gp = grad_p(x, t);
  return {(2 * mu + lambda) * h[0] + mu * h[2] + (lambda + mu) * h[4] - alpha * gp.x(),
          (2 * mu + lambda) * h[5] + mu * h[3] + (lambda + mu) * h[1] - alpha * gp.y()};
}

double ManufacturedCase::gamma(const Vec2& x, double t) const {
  const Mat2 G = grad_u(x, t);
  return 0.5 * (G(0, 1) - G(1, 0));
}

double ManufacturedCase::g(const Vec2& x, double t) const {
  // every field carries the factor e^t, so d/dt is the identity
  return c0 * p(x, t) + alpha * grad_u(x, t).trace() + div_z(x, t);
}

ProblemData ManufacturedCase::data() const {
  ProblemData d;
  const ManufacturedCase m = *this;
  d.f = [m](const Vec2& x, double t) { return m.f(x, t); };
  d.g = [m](const Vec2& x, double t) { return m.g(x, t); };
  d.g_u = [m](const Vec2& x, double t) { return m.u(x, t); };
  d.g_p = [m](const Vec2& x, double t) { return m.p(x, t); };
  d.traction = [m](const Vec2& x, double t, const Vec2& n) { return Vec2(m.sigma(x, t) * n); };
  d.p0 = [m](const Vec2& x, double t) { return m.p(x, t); };
  return d;
}

ExactSolution ManufacturedCase::exact() const {
  const ManufacturedCase m = *this;
  ExactSolution e;
  e.sigma = [m](const Vec2& x, double t) { return m.sigma(x, t); };
  e.div_sigma = [m](const Vec2& x, double t) { return m.div_sigma(x, t); };
  e.u = [m](const Vec2& x, double t) { return m.u(x, t); };
  e.gamma = [m](const Vec2& x, double t) { return m.gamma(x, t); };
  e.z = [m](const Vec2& x, double t) { return m.z(x, t); };
  e.div_z = [m](const Vec2& x, double t) { return m.div_z(x, t); };
  e.p = [m](const Vec2& x, double t) { return m.p(x, t); };
  return e;
}

}  // namespace biot
