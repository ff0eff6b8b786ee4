#pragma once

#include <Eigen/Core>

#include <functional>
#include <vector>

namespace biot {

using LinearOp = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct KrylovOptions {
  double tol = 1e-12;    ///< on the relative Euclidean residual
  int max_iter = 5000;
  /// Optional weighted norm; when set, GMRES also records the weighted
  /// residual of every iterate (one extra operator application per step).
  std::function<double(const Eigen::VectorXd&)> star_norm;
};

struct KrylovReport {
  int iterations = 0;
  bool converged = false;
  std::vector<double> residuals;        ///< r_k / r_0, k = 0..iterations
  std::vector<double> star_residuals;   ///< GMRES with star_norm: |r_k|_* / |r_0|_*
  std::vector<double> energy;           ///< CG: 1/2 x'Ax - b'x, non-increasing
};

struct KrylovResult {
  Eigen::VectorXd x;
  KrylovReport report;
};

/// Non-restarted GMRES from x0 = 0, modified Gram-Schmidt, Givens rotations.
KrylovResult gmres(const LinearOp& A, const Eigen::VectorXd& b, const KrylovOptions& opt = {});

/// Conjugate gradients from x0 = 0.  A non-positive curvature p'Ap <= 0
/// throws std::runtime_error: the operator is not SPD.
KrylovResult cg(const LinearOp& A, const Eigen::VectorXd& b, const KrylovOptions& opt = {});

}  // namespace biot
