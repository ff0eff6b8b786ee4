#pragma once

#include "biotdd/interface.hpp"
#include "biotdd/problem.hpp"
#include "biotdd/subdomain.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace biot {

enum class Scheme { monolithic, drained_split, fixed_stress };

const char* to_string(Scheme s);
/// Accepts monolithic, ds, fs (and the long names).
Scheme scheme_from_string(const std::string& s);

struct SchemeOptions {
  Scheme scheme = Scheme::monolithic;
  double dt = 1e-3;
  int steps = 100;
  double tol = 1e-12;
  int max_iter = 5000;
  bool precompute = true;                                   ///< dense local interface responses
  MultiplierScaling scaling = MultiplierScaling::balanced;
  bool star_norm = false;                                   ///< record GMRES star-norm residuals
};

/// Per-subdomain fields at one time level plus the displacement multiplier.
struct State {
  int n = 0;
  double t = 0.0;
  std::vector<Fields> fields;
  Vec lambda_u;                  ///< 4 slots per interface edge
  std::vector<Vec> sigma_prev;   ///< sigma^{n-1}, fixed stress only
};

struct StepReport {
  int n = 0;
  int gmres = 0;
  int cg_elasticity = 0;
  int cg_darcy = 0;
  KrylovReport monolithic;
  KrylovReport elasticity;
  KrylovReport darcy;
};

/// Quantities bounded by the split-scheme stability estimates.
struct StabilityMonitor {
  double sum_dp = 0.0;      ///< sum_n c0/dt |p^{n+1} - p^n|^2
  double max_energy = 0.0;  ///< max_n |z|^2 + |p|^2 + |A^1/2 sigma|^2 + |u|^2 + |gamma|^2
  double max_z = 0.0, max_p = 0.0, max_sigma = 0.0, max_u = 0.0, max_gamma = 0.0;   ///< max norms
  double p0 = 0.0, z0 = 0.0;   ///< initial norms

  double lhs() const { return sum_dp + max_energy; }
  /// lhs / (|p0|^2 + |z0|^2), drained split bound.
  double ratio_ds() const;
  /// lhs / |z0|^2, fixed stress bound.
  double ratio_fs() const;
  bool finite() const;
};

struct Norms {
  double z = 0.0, p = 0.0, sigma_a = 0.0, u = 0.0, gamma = 0.0;
};

struct RunSummary {
  std::vector<StepReport> steps;
  double avg_gmres = 0.0;
  double avg_cg_elasticity = 0.0;
  double avg_cg_darcy = 0.0;
  StabilityMonitor monitor;
};

/// Time stepping for the three decomposition schemes on one mesh.
class Solver {
 public:
  Solver(const Mesh& mesh, const Decomposition& dec, const MaterialField& mat, ProblemData data,
         const SchemeOptions& opt, const QuadOptions& q = {});

  /// p^0 by cell averages, sigma^0, u^0, gamma^0, lambda^{u,0} by an
  /// elasticity decomposition solve, z^0 by a global H(div) projection.
  State initialize();
  /// One step; throws naming the step if an interface solve fails.
  StepReport step(State& s);
  /// initialize() then opt.steps steps.  The observer sees every level n = 0..N.
  RunSummary run(const std::function<void(const State&)>& observer = {});

  std::vector<Subdomain>& subdomains() { return subs_; }
  const std::vector<Subdomain>& subdomains() const { return subs_; }
  const Mesh& mesh() const { return *mesh_; }
  const Decomposition& decomposition() const { return *dec_; }
  const SchemeOptions& options() const { return opt_; }
  const ProblemData& data() const { return data_; }
  const MaterialField& material() const { return *mat_; }

  const InterfaceOperator& op(Variant v) const;
  Norms norms(const State& s) const;

  /// Elasticity decomposition solve with pressure p at time t; lambda out optional.
  std::vector<Fields> solve_elasticity(double t, const std::vector<Vec>& p, KrylovReport& rep, Vec* lambda = nullptr);
  /// Darcy decomposition solve at time t.
  std::vector<Fields> solve_darcy(double t, const std::vector<Vec>& p_old, const std::vector<Vec>& dsigma,
                                  KrylovReport& rep);

 private:
  void ensure(Variant v);
  void step_monolithic(State& s, StepReport& r);
  void step_drained(State& s, StepReport& r);
  void step_fixed_stress(State& s, StepReport& r);
  void update_monitor(const State& old_s, const State& new_s);

  const Mesh* mesh_;
  const Decomposition* dec_;
  const MaterialField* mat_;
  ProblemData data_;
  SchemeOptions opt_;
  std::vector<Subdomain> subs_;
  std::array<std::unique_ptr<InterfaceOperator>, 3> ops_;
  StabilityMonitor monitor_;
};

/// Global H(div) solve (K^-1 z, q) = (p, div q) - <g_p, q.n> with the
/// no-flux data, returned per subdomain.
std::vector<Vec> project_velocity(const Mesh& mesh, const Decomposition& dec, const MaterialField& mat,
                                  const std::vector<Subdomain>& subs, const std::vector<Vec>& p,
                                  const ProblemData& data, double t, const QuadOptions& q);

/// Cell averages of f per subdomain.
std::vector<Vec> cell_averages(const std::vector<Subdomain>& subs, const ScalarFn& f, double t);

}  // namespace biot
