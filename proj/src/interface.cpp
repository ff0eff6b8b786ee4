#include "biotdd/interface.hpp"

#include "biotdd/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <limits>
#include <random>
#include <stdexcept>

namespace biot {

const char* to_string(MultiplierScaling s) {
  switch (s) {
    case MultiplierScaling::rate: return "rate";
    case MultiplierScaling::increment: return "increment";
    default: return "balanced";
  }
}

MultiplierScaling scaling_from_string(const std::string& s) {
  if (s == "rate") return MultiplierScaling::rate;
  if (s == "increment") return MultiplierScaling::increment;
  if (s == "balanced") return MultiplierScaling::balanced;
  throw std::invalid_argument("unknown multiplier scaling '" + s + "' (expected rate, increment or balanced)");
}

InterfaceOperator::InterfaceOperator(std::vector<Subdomain>& subs, const Decomposition& dec, Variant v,
                                     double u_weight, bool precompute)
    : subs_(&subs), variant_(v), u_weight_(u_weight), slots_(interface_slots(v)) {
  n_ = dec.n_interface_edges() * slots_;
  for (const Subdomain& s : subs)
    if (!s.factorized(v)) throw std::logic_error("InterfaceOperator: subdomain operator not factorized");
  if (precompute) {
    response_.resize(subs.size());
    parallel_for(static_cast<int>(subs.size()), [&](int s) { response_[s] = subs[s].response(v, u_weight); });
  }
}

void InterfaceOperator::set_u_weight(double w) {
  if (!(w > 0.0)) throw std::invalid_argument("InterfaceOperator::set_u_weight: weight must be > 0");
  const int nu = slots_ == 6 ? 4 : (variant_ == Variant::elasticity ? 4 : 0);
  const double f = w / u_weight_;
  for (Eigen::MatrixXd& R : response_)
    for (int k = 0; k < R.cols(); ++k)
      if (k % slots_ < nu) R.col(k) *= f;
  u_weight_ = w;
}

std::pair<double, double> InterfaceOperator::block_diagonal_means() const {
  if (variant_ != Variant::biot) throw std::logic_error("block_diagonal_means: monolithic operator only");
  Vec diag = Vec::Zero(n_);
  const int m = static_cast<int>(subs_->size());
  for (int s = 0; s < m; ++s) {
    const Subdomain& sd = (*subs_)[s];
    Vec local(sd.n_interface_dofs(variant_));
    if (precomputed()) {
      local = response_[s].diagonal();
    } else {
      const Eigen::MatrixXd R = sd.response(variant_, u_weight_);
      local = R.diagonal();
    }
    add_local(s, local, diag);
  }
  double du = 0.0, dp = 0.0;
  for (int i = 0; i < n_; ++i) (i % 6 < 4 ? du : dp) += diag(i);
  const int ne = n_ / 6;
  return {du / (4.0 * ne), dp / (2.0 * ne)};
}

Vec InterfaceOperator::restrict_to(int s, const Vec& lam) const {
  const SubdomainDofs& d = (*subs_)[s].dofs();
  Vec loc(static_cast<int>(d.interface_index.size()) * slots_);
  for (std::size_t k = 0; k < d.interface_index.size(); ++k)
    loc.segment(static_cast<int>(k) * slots_, slots_) = lam.segment(d.interface_index[k] * slots_, slots_);
  return loc;
}

void InterfaceOperator::add_local(int s, const Vec& local, Vec& global) const {
  const SubdomainDofs& d = (*subs_)[s].dofs();
  for (std::size_t k = 0; k < d.interface_index.size(); ++k)
    global.segment(d.interface_index[k] * slots_, slots_) += local.segment(static_cast<int>(k) * slots_, slots_);
}

Vec InterfaceOperator::apply(const Vec& lam) const {
  if (lam.size() != n_) throw std::invalid_argument("InterfaceOperator::apply: size mismatch");
  if (!precomputed()) return apply_matrix_free(lam);
  Vec out = Vec::Zero(n_);
  for (std::size_t s = 0; s < subs_->size(); ++s)
    if (response_[s].size() > 0) add_local(static_cast<int>(s), response_[s] * restrict_to(static_cast<int>(s), lam), out);
  return out;
}

Vec InterfaceOperator::apply_matrix_free(const Vec& lam) const {
  if (lam.size() != n_) throw std::invalid_argument("InterfaceOperator::apply: size mismatch");
  const int m = static_cast<int>(subs_->size());
  std::vector<Vec> local(static_cast<std::size_t>(m));
  parallel_for(m, [&](int s) {
    const Subdomain& sd = (*subs_)[s];
    local[s] = sd.traces(variant_, sd.op(variant_).solve(sd.interface_rhs(variant_, restrict_to(s, lam), u_weight_)));
  });
  Vec out = Vec::Zero(n_);
  for (int s = 0; s < m; ++s) add_local(s, local[s], out);
  return out;
}

Vec InterfaceOperator::rhs(const std::vector<Vec>& bar) const {
  Vec out = Vec::Zero(n_);
  for (std::size_t s = 0; s < subs_->size(); ++s)
    add_local(static_cast<int>(s), -(*subs_)[s].traces(variant_, bar[s]), out);
  return out;
}

Eigen::MatrixXd InterfaceOperator::dense() const {
  Eigen::MatrixXd A(n_, n_);
  Vec e = Vec::Zero(n_);
  for (int k = 0; k < n_; ++k) {
    e(k) = 1.0;
    A.col(k) = apply(e);
    e(k) = 0.0;
  }
  return A;
}

Vec star_weights(int n_edges, double dt) {
  Vec w(6 * n_edges);
  for (int e = 0; e < n_edges; ++e) {
    w.segment(6 * e, 4).setConstant(dt);
    w.segment(6 * e + 4, 2).setConstant(1.0);
  }
  return w;
}

FieldOfValues estimate_field_of_values(const InterfaceOperator& op, int n_probes, double dt, std::uint64_t seed) {
  if (op.variant() != Variant::biot) throw std::invalid_argument("estimate_field_of_values: monolithic operator only");
  if (n_probes < 1) throw std::invalid_argument("estimate_field_of_values: n_probes must be >= 1");
  if (op.size() == 0) throw std::invalid_argument("estimate_field_of_values: no interface (single subdomain)");
  const Vec w = star_weights(op.size() / 6, dt);
  // quotients are taken in rate coordinates: x_op = (dt / u_weight) x_rate on displacement slots
  Vec scale = Vec::Ones(op.size());
  for (int e = 0; e < op.size() / 6; ++e) scale.segment(6 * e, 4).setConstant(dt / op.u_weight());
  const Eigen::MatrixXd A = op.dense() * scale.asDiagonal();
  const Eigen::MatrixXd H = 0.5 * (A + A.transpose());
  // W^{-1/2} H W^{-1/2} has the same quotient extremes
  const Vec s = w.cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd Hs = s.asDiagonal() * H * s.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Hs, Eigen::EigenvaluesOnly);
  FieldOfValues f;
  f.min_quotient = es.eigenvalues().minCoeff();
  f.max_quotient = es.eigenvalues().maxCoeff();
  f.n_probes = n_probes;
  f.probe_min = std::numeric_limits<double>::infinity();
  f.probe_max = -std::numeric_limits<double>::infinity();
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  for (int k = 0; k < n_probes; ++k) {
    Vec x(op.size());
    for (int i = 0; i < x.size(); ++i) x(i) = nd(gen);
    const double q = x.dot(A * x) / x.dot(w.cwiseProduct(x));
    f.probe_min = std::min(f.probe_min, q);
    f.probe_max = std::max(f.probe_max, q);
  }
  return f;
}

}  // namespace biot
