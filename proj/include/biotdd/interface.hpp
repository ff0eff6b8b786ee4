#pragma once

#include "biotdd/krylov.hpp"
#include "biotdd/subdomain.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace biot {

/// Coordinates of the displacement part of the monolithic multiplier:
/// `rate` stores lambda^{u-dot}, `increment` stores dt * lambda^{u-dot},
/// `balanced` stores (w / dt) * ... with w chosen so the displacement and
/// pressure blocks have equal mean diagonal.  The solution is the same in
/// every case; only the Euclidean geometry seen by GMRES changes.
enum class MultiplierScaling { rate, increment, balanced };

const char* to_string(MultiplierScaling s);
MultiplierScaling scaling_from_string(const std::string& s);

/// Interface operator of one subdomain variant.
///
/// Global multiplier layout: (interface edge, slot), slots as in
/// interface_slots().  Applying the operator solves one star problem per
/// subdomain (or uses the precomputed dense local response) and sums the
/// local traces in subdomain order.
class InterfaceOperator {
 public:
  InterfaceOperator(std::vector<Subdomain>& subs, const Decomposition& dec, Variant v, double u_weight = 1.0,
                    bool precompute = true);

  int size() const { return n_; }
  Variant variant() const { return variant_; }
  double u_weight() const { return u_weight_; }
  bool precomputed() const { return !response_.empty(); }

  Vec apply(const Vec& lam) const;
  /// Matrix-free application regardless of precomputation.
  Vec apply_matrix_free(const Vec& lam) const;
  /// g = -sum_i traces(bar_i).
  Vec rhs(const std::vector<Vec>& bar_solutions) const;

  Vec restrict_to(int s, const Vec& lam) const;
  void add_local(int s, const Vec& local, Vec& global) const;
  /// Changes the displacement-slot weight, rescaling stored responses.
  void set_u_weight(double w);
  /// Mean diagonal of the displacement and pressure blocks (biot only).
  std::pair<double, double> block_diagonal_means() const;

  /// Explicit global matrix (column by column through apply).
  Eigen::MatrixXd dense() const;

  LinearOp as_op() const {
    return [this](const Vec& x) { return apply(x); };
  }

 private:
  std::vector<Subdomain>* subs_;
  Variant variant_;
  double u_weight_;
  int slots_;
  int n_;
  std::vector<Eigen::MatrixXd> response_;
};

/// Star norm weights: dt on displacement-rate slots, 1 on pressure slots.
Vec star_weights(int n_edges, double dt);

struct FieldOfValues {
  double min_quotient = 0.0;    ///< min of <A x, x> / <x, x>_* (symmetric part, exact)
  double max_quotient = 0.0;
  double probe_min = 0.0;       ///< min over the random probes
  double probe_max = 0.0;
  int n_probes = 0;
};

/// Extremes of the weighted Rayleigh quotient of the monolithic operator.
/// The exact extremes come from the generalized eigenproblem of the
/// symmetric part; the random probes are reported alongside.
FieldOfValues estimate_field_of_values(const InterfaceOperator& op, int n_probes, double dt,
                                       std::uint64_t seed = 1);

}  // namespace biot
