#pragma once

#include "biotdd/manufactured.hpp"
#include "biotdd/schemes.hpp"

#include <vector>

namespace biot {

/// Per-variable spatial norms: z and sigma in H(div), the rest in L2.
struct VariableNorms {
  double z = 0.0, p = 0.0, sigma = 0.0, u = 0.0, gamma = 0.0;
};

/// Error and exact-solution norms of one state at time t, using
/// `points` Gauss points per direction.
void field_norms(const Solver& solver, const State& state, const ExactSolution& exact, double t, int points,
                 VariableNorms& error, VariableNorms& reference);

/// Max-over-time-nodes errors divided by max-over-time-nodes exact norms.
class ErrorTracker {
 public:
  ErrorTracker(const ExactSolution& exact, int points) : exact_(exact), points_(points) {}
  void add(const Solver& solver, const State& state);
  VariableNorms relative() const;
  VariableNorms max_error() const { return err_; }
  int samples() const { return samples_; }

 private:
  ExactSolution exact_;
  int points_;
  VariableNorms err_, ref_;
  int samples_ = 0;
};

/// Rates log(e_k / e_{k+1}) / log(h_k / h_{k+1}) between successive entries.
std::vector<double> convergence_rates(const std::vector<double>& h, const std::vector<double>& e);

/// Least-squares slope of log(y) against log(x).  Throws for fewer than 2 points
/// or non-positive data.
double fit_growth(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace biot
