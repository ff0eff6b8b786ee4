#include "biotdd/verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace biot {

void field_norms(const Solver& solver, const State& state, const ExactSolution& ex, double t, int points,
                 VariableNorms& error, VariableNorms& reference) {
  VariableNorms e2, r2;
  const Mesh& mesh = solver.mesh();
  const Rule2d rule = gauss_square(points);
  for (const Subdomain& sd : solver.subdomains()) {
    const SubdomainDofs& d = sd.dofs();
    const Fields& f = state.fields[sd.id()];
    const int nc = d.n_cells(), nz = d.n_z();
    for (int lc = 0; lc < nc; ++lc) {
      const int c = d.cells[lc];
      const CellMap<double> map = cell_map(mesh, c);
      const auto az = cell_coefficients(d, lc, f.z, 0);
      const auto a0 = cell_coefficients(d, lc, f.sigma, 0);
      const auto a1 = cell_coefficients(d, lc, f.sigma, nz);
      const Vec2 uh(f.u(lc), f.u(nc + lc));
      for (int q = 0; q < rule.size(); ++q) {
        const HdivPoint hp = map_hdiv_basis(map, rule.x[q], c);
        const double w = rule.w[q] * hp.det;
        const Vec2& x = hp.x;

        const Vec2 z = ex.z(x, t);
        const double dz = ex.div_z(x, t);
        e2.z += w * ((hp.phi * az - z).squaredNorm() + std::pow(hp.div.dot(az) - dz, 2));
        r2.z += w * (z.squaredNorm() + dz * dz);

        const Mat2 s = ex.sigma(x, t);
        const Vec2 ds = ex.div_sigma(x, t);
        const Vec2 s0 = hp.phi * a0, s1 = hp.phi * a1;
        e2.sigma += w * ((s0 - s.row(0).transpose()).squaredNorm() + (s1 - s.row(1).transpose()).squaredNorm() +
                         std::pow(hp.div.dot(a0) - ds.x(), 2) + std::pow(hp.div.dot(a1) - ds.y(), 2));
        r2.sigma += w * (s.squaredNorm() + ds.squaredNorm());

        const double p = ex.p(x, t);
        e2.p += w * std::pow(f.p(lc) - p, 2);
        r2.p += w * p * p;
        const Vec2 u = ex.u(x, t);
        e2.u += w * (uh - u).squaredNorm();
        r2.u += w * u.squaredNorm();
        const double g = ex.gamma(x, t);
        e2.gamma += w * std::pow(f.gamma(lc) - g, 2);
        r2.gamma += w * g * g;
      }
    }
  }
  error = {std::sqrt(e2.z), std::sqrt(e2.p), std::sqrt(e2.sigma), std::sqrt(e2.u), std::sqrt(e2.gamma)};
  reference = {std::sqrt(r2.z), std::sqrt(r2.p), std::sqrt(r2.sigma), std::sqrt(r2.u), std::sqrt(r2.gamma)};
}

void ErrorTracker::add(const Solver& solver, const State& state) {
  VariableNorms e, r;
  field_norms(solver, state, exact_, state.t, points_, e, r);
  auto up = [](VariableNorms& a, const VariableNorms& b) {
    a.z = std::max(a.z, b.z);
    a.p = std::max(a.p, b.p);
    a.sigma = std::max(a.sigma, b.sigma);
    a.u = std::max(a.u, b.u);
    a.gamma = std::max(a.gamma, b.gamma);
  };
  up(err_, e);
  up(ref_, r);
  ++samples_;
}

VariableNorms ErrorTracker::relative() const {
  if (samples_ == 0) throw std::logic_error("ErrorTracker: no snapshots recorded");
  auto div = [](double a, double b) { return b > 0.0 ? a / b : a; };
  return {div(err_.z, ref_.z), div(err_.p, ref_.p), div(err_.sigma, ref_.sigma), div(err_.u, ref_.u),
          div(err_.gamma, ref_.gamma)};
}

std::vector<double> convergence_rates(const std::vector<double>& h, const std::vector<double>& e) {
  if (h.size() != e.size()) throw std::invalid_argument("convergence_rates: size mismatch");
  std::vector<double> r;
  for (std::size_t k = 0; k + 1 < h.size(); ++k) r.push_back(std::log(e[k] / e[k + 1]) / std::log(h[k] / h[k + 1]));
  return r;
}

double fit_growth(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_growth: size mismatch");
  if (x.size() < 2) throw std::invalid_argument("fit_growth: need at least 2 points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] > 0.0) || !(y[k] > 0.0)) throw std::invalid_argument("fit_growth: data must be positive");
    const double lx = std::log(x[k]), ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw std::invalid_argument("fit_growth: x values coincide");
  return (n * sxy - sx * sy) / den;
}

}  // namespace biot
