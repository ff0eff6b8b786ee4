#include "biotdd/krylov.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace biot {

using Eigen::MatrixXd;
using Eigen::VectorXd;

KrylovResult gmres(const LinearOp& A, const VectorXd& b, const KrylovOptions& opt) {
  if (!(opt.tol > 0.0)) throw std::invalid_argument("gmres: tol must be > 0");
  KrylovResult out;
  out.x = VectorXd::Zero(b.size());
  const double beta = b.norm();
  out.report.residuals.push_back(1.0);
  if (beta == 0.0) {
    out.report.converged = true;
    if (opt.star_norm) out.report.star_residuals.push_back(1.0);
    return out;
  }
  const int m = std::max(1, std::min<int>(opt.max_iter, static_cast<int>(b.size())));
  std::vector<VectorXd> V;
  V.reserve(static_cast<std::size_t>(m + 1));
  V.push_back(b / beta);
  MatrixXd H = MatrixXd::Zero(m + 1, m);
  VectorXd cs = VectorXd::Zero(m), sn = VectorXd::Zero(m);
  VectorXd g = VectorXd::Zero(m + 1);
  g(0) = beta;
  const double star0 = opt.star_norm ? opt.star_norm(b) : 0.0;
  if (opt.star_norm) out.report.star_residuals.push_back(1.0);

  auto solve_upper = [&](int k) {
    VectorXd y = H.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
    VectorXd x = VectorXd::Zero(b.size());
    for (int i = 0; i < k; ++i) x += y(i) * V[i];
    return x;
  };

  int k = 0;
  for (; k < m; ++k) {
    VectorXd w = A(V[k]);
    for (int i = 0; i <= k; ++i) {
      H(i, k) = w.dot(V[i]);
      w -= H(i, k) * V[i];
    }
    H(k + 1, k) = w.norm();
    const bool breakdown = H(k + 1, k) <= 1e-300;
    if (!breakdown) V.push_back(w / H(k + 1, k));
    for (int i = 0; i < k; ++i) {
      const double t = cs(i) * H(i, k) + sn(i) * H(i + 1, k);
      H(i + 1, k) = -sn(i) * H(i, k) + cs(i) * H(i + 1, k);
      H(i, k) = t;
    }
    const double r = std::hypot(H(k, k), H(k + 1, k));
    cs(k) = H(k, k) / r;
    sn(k) = H(k + 1, k) / r;
    H(k, k) = r;
    H(k + 1, k) = 0.0;
    g(k + 1) = -sn(k) * g(k);
    g(k) = cs(k) * g(k);
    const double rel = std::abs(g(k + 1)) / beta;
    out.report.residuals.push_back(rel);
    if (opt.star_norm) {
      const VectorXd xk = solve_upper(k + 1);
      out.report.star_residuals.push_back(opt.star_norm(b - A(xk)) / star0);
    }
    if (rel <= opt.tol || breakdown) {
      ++k;
      out.report.converged = true;
      break;
    }
  }
  out.report.iterations = k;
  out.x = solve_upper(k);
  return out;
}

KrylovResult cg(const LinearOp& A, const VectorXd& b, const KrylovOptions& opt) {
  if (!(opt.tol > 0.0)) throw std::invalid_argument("cg: tol must be > 0");
  KrylovResult out;
  out.x = VectorXd::Zero(b.size());
  const double bnorm = b.norm();
  out.report.residuals.push_back(1.0);
  out.report.energy.push_back(0.0);
  if (bnorm == 0.0) {
    out.report.converged = true;
    return out;
  }
  VectorXd r = b, p = b;
  double rr = r.squaredNorm();
  int k = 0;
  for (; k < opt.max_iter; ++k) {
    const VectorXd Ap = A(p);
    const double pAp = p.dot(Ap);
    if (!(pAp > 0.0)) {
      std::ostringstream os;
      os << "cg: non-positive curvature " << pAp << " at iteration " << k << "; operator is not SPD";
      throw std::runtime_error(os.str());
    }
    const double a = rr / pAp;
    out.x += a * p;
    r -= a * Ap;
    const double rr_new = r.squaredNorm();
    out.report.residuals.push_back(std::sqrt(rr_new) / bnorm);
    // 1/2 x'Ax - b'x drops by a r'r / 2 per step
    out.report.energy.push_back(out.report.energy.back() - 0.5 * a * rr);
    if (std::sqrt(rr_new) / bnorm <= opt.tol) {
      ++k;
      out.report.converged = true;
      break;
    }
    p = r + (rr_new / rr) * p;
    rr = rr_new;
  }
  out.report.iterations = k;
  return out;
}

}  // namespace biot
