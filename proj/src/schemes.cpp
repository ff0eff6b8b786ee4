#include "biotdd/schemes.hpp"

#include "biotdd/parallel.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace biot {

const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::monolithic: return "monolithic";
    case Scheme::drained_split: return "ds";
    default: return "fs";
  }
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "monolithic" || s == "mono") return Scheme::monolithic;
  if (s == "ds" || s == "drained_split" || s == "drained-split") return Scheme::drained_split;
  if (s == "fs" || s == "fixed_stress" || s == "fixed-stress") return Scheme::fixed_stress;
  throw std::invalid_argument("unknown scheme '" + s + "' (expected monolithic, ds or fs)");
}

double StabilityMonitor::ratio_ds() const { return lhs() / (p0 * p0 + z0 * z0); }
double StabilityMonitor::ratio_fs() const { return lhs() / (z0 * z0); }

bool StabilityMonitor::finite() const {
  for (double v : {sum_dp, max_energy, max_z, max_p, max_sigma, max_u, max_gamma, p0, z0})
    if (!std::isfinite(v) || v < 0.0) return false;
  return true;
}

std::vector<Vec> cell_averages(const std::vector<Subdomain>& subs, const ScalarFn& f, double t) {
  std::vector<Vec> out;
  for (const Subdomain& s : subs) {
    if (!f) {
      out.push_back(Vec::Zero(s.dofs().n_cells()));
      continue;
    }
    const Vec integral = cell_integrals(s.mesh(), s.dofs(), f, t, s.quad().cell_points + 1);
    out.push_back(integral.cwiseQuotient(s.blocks().area));
  }
  return out;
}

std::vector<Vec> project_velocity(const Mesh& mesh, const Decomposition& dec, const MaterialField& mat,
                                  const std::vector<Subdomain>& subs, const std::vector<Vec>& p,
                                  const ProblemData& data, double t, const QuadOptions& q) {
  const Decomposition whole = partition(mesh, 1, 1, dec.bc);
  const SubdomainDofs g = build_dofmap(mesh, whole)[0];
  const Blocks b = assemble_blocks(mesh, g, mat, q);
  Vec pg = Vec::Zero(mesh.n_cells());
  for (const Subdomain& s : subs)
    for (int lc = 0; lc < s.dofs().n_cells(); ++lc) pg(s.dofs().cells[lc]) = p[s.id()](lc);
  Vec rhs = b.B_p.transpose() * pg;
  if (data.g_p) rhs -= dirichlet_pressure_functional(mesh, whole, g, data.g_p, t, q.edge_points);

  SpMat M = b.M_z;
  if (!g.noflux_zdofs.empty()) {
    std::vector<char> ess(static_cast<std::size_t>(g.n_z()), 0);
    for (int zd : g.noflux_zdofs) ess[zd] = 1;
    std::vector<Eigen::Triplet<double>> trip;
    for (int k = 0; k < M.outerSize(); ++k)
      for (SpMat::InnerIterator it(M, k); it; ++it)
        if (!ess[it.row()]) trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    for (int zd : g.noflux_zdofs) trip.emplace_back(zd, zd, 1.0);
    M.setFromTriplets(trip.begin(), trip.end());
    const Vec fv = data.flux ? flux_values(mesh, g, data.flux, t, q.edge_points) : Vec::Zero(g.n_z());
    for (int zd : g.noflux_zdofs) rhs(zd) = fv(zd);
  }
  M.makeCompressed();
  Eigen::SparseLU<SpMat> lu(M);
  if (lu.info() != Eigen::Success) throw std::runtime_error("project_velocity: singular H(div) mass matrix");
  const Vec zg = lu.solve(rhs);

  std::vector<Vec> out;
  for (const Subdomain& s : subs) {
    const SubdomainDofs& d = s.dofs();
    Vec z(d.n_z());
    for (int le = 0; le < d.n_edges(); ++le) {
      const int ge = g.local_edge[d.edges[le]];
      for (int m = 0; m < 2; ++m) z(2 * le + m) = d.normal_sign[le] * zg(2 * ge + m);
    }
    out.push_back(z);
  }
  return out;
}

Solver::Solver(const Mesh& mesh, const Decomposition& dec, const MaterialField& mat, ProblemData data,
               const SchemeOptions& opt, const QuadOptions& q)
    : mesh_(&mesh), dec_(&dec), mat_(&mat), data_(std::move(data)), opt_(opt) {
  if (!(opt.dt > 0.0)) throw std::invalid_argument("Solver: dt must be > 0");
  if (opt.steps < 0) throw std::invalid_argument("Solver: steps must be >= 0");
  if (!(opt.tol > 0.0 && opt.tol < 1.0)) throw std::invalid_argument("Solver: tol must lie in (0, 1)");
  validate_material(mat, mesh.n_cells());
  std::vector<SubdomainDofs> dofs = build_dofmap(mesh, dec);
  subs_.reserve(dofs.size());
  for (auto& d : dofs) subs_.emplace_back(mesh, dec, std::move(d), mat, q);
}

void Solver::ensure(Variant v) {
  const int k = static_cast<int>(v);
  if (ops_[k]) return;
  const double dt = v == Variant::elasticity ? 0.0 : opt_.dt;
  parallel_for(static_cast<int>(subs_.size()), [&](int s) { subs_[s].factorize(v, dt); });
  double w = 1.0;
  if (v == Variant::biot && opt_.scaling != MultiplierScaling::increment) w = opt_.dt;
  ops_[k] = std::make_unique<InterfaceOperator>(subs_, *dec_, v, w, opt_.precompute);
  if (v == Variant::biot && opt_.scaling == MultiplierScaling::balanced && ops_[k]->size() > 0) {
    // the displacement columns scale linearly with the weight
    const auto [du, dp] = ops_[k]->block_diagonal_means();
    if (du > 0.0 && dp > 0.0) ops_[k]->set_u_weight(w * dp / du);
  }
}

const InterfaceOperator& Solver::op(Variant v) const {
  const auto& o = ops_[static_cast<int>(v)];
  if (!o) throw std::logic_error("Solver::op: interface operator not built");
  return *o;
}

Norms Solver::norms(const State& st) const {
  double z = 0, p = 0, s = 0, u = 0, g = 0;
  for (const Subdomain& sd : subs_) {
    const Fields& f = st.fields[sd.id()];
    const Blocks& b = sd.blocks();
    const int nc = sd.dofs().n_cells();
    z += f.z.dot(b.M_z0 * f.z);
    s += f.sigma.dot(b.A_ss * f.sigma);
    for (int c = 0; c < nc; ++c) {
      p += b.area(c) * f.p(c) * f.p(c);
      u += b.area(c) * (f.u(c) * f.u(c) + f.u(nc + c) * f.u(nc + c));
      g += b.area(c) * f.gamma(c) * f.gamma(c);
    }
  }
  return {std::sqrt(z), std::sqrt(p), std::sqrt(s), std::sqrt(u), std::sqrt(g)};
}

std::vector<Fields> Solver::solve_elasticity(double t, const std::vector<Vec>& p, KrylovReport& rep, Vec* lambda) {
  ensure(Variant::elasticity);
  const InterfaceOperator& I = op(Variant::elasticity);
  const int m = static_cast<int>(subs_.size());
  std::vector<Vec> rhs(static_cast<std::size_t>(m)), bar(static_cast<std::size_t>(m));
  parallel_for(m, [&](int s) {
    rhs[s] = subs_[s].elasticity_data_rhs(data_, t, p[s]);
    bar[s] = subs_[s].op(Variant::elasticity).solve(rhs[s]);
  });
  KrylovOptions ko;
  ko.tol = opt_.tol;
  ko.max_iter = opt_.max_iter;
  KrylovResult res = cg(I.as_op(), I.rhs(bar), ko);
  rep = res.report;
  if (!rep.converged) throw std::runtime_error("elasticity interface CG did not converge");
  std::vector<Fields> out(static_cast<std::size_t>(m));
  parallel_for(m, [&](int s) {
    const Subdomain& sd = subs_[s];
    const Vec sol =
        sd.op(Variant::elasticity).solve(rhs[s] + sd.interface_rhs(Variant::elasticity, I.restrict_to(s, res.x)));
    out[s] = sd.unpack(Variant::elasticity, sol);
  });
  if (lambda) *lambda = res.x;
  return out;
}

std::vector<Fields> Solver::solve_darcy(double t, const std::vector<Vec>& p_old, const std::vector<Vec>& dsigma,
                                        KrylovReport& rep) {
  ensure(Variant::darcy);
  const InterfaceOperator& I = op(Variant::darcy);
  const int m = static_cast<int>(subs_.size());
  std::vector<Vec> rhs(static_cast<std::size_t>(m)), bar(static_cast<std::size_t>(m));
  parallel_for(m, [&](int s) {
    rhs[s] = subs_[s].darcy_data_rhs(data_, t, p_old[s], dsigma[s]);
    bar[s] = subs_[s].op(Variant::darcy).solve(rhs[s]);
  });
  KrylovOptions ko;
  ko.tol = opt_.tol;
  ko.max_iter = opt_.max_iter;
  KrylovResult res = cg(I.as_op(), I.rhs(bar), ko);
  rep = res.report;
  if (!rep.converged) throw std::runtime_error("Darcy interface CG did not converge");
  std::vector<Fields> out(static_cast<std::size_t>(m));
  parallel_for(m, [&](int s) {
    const Subdomain& sd = subs_[s];
    const Vec sol = sd.op(Variant::darcy).solve(rhs[s] + sd.interface_rhs(Variant::darcy, I.restrict_to(s, res.x)));
    out[s] = sd.unpack(Variant::darcy, sol);
  });
  return out;
}

State Solver::initialize() {
  State st;
  st.n = 0;
  st.t = 0.0;
  const std::vector<Vec> p0 = cell_averages(subs_, data_.p0, 0.0);
  KrylovReport rep;
  Vec lam;
  std::vector<Fields> el = solve_elasticity(0.0, p0, rep, &lam);
  const std::vector<Vec> z0 = project_velocity(*mesh_, *dec_, *mat_, subs_, p0, data_, 0.0, subs_.front().quad());
  st.fields.resize(subs_.size());
  for (std::size_t s = 0; s < subs_.size(); ++s) {
    Fields& f = st.fields[s];
    f.sigma = el[s].sigma;
    f.u = el[s].u;
    f.gamma = el[s].gamma;
    f.z = z0[s];
    f.p = p0[s];
  }
  st.lambda_u = lam;
  if (opt_.scheme == Scheme::fixed_stress)
    for (const Fields& f : st.fields) st.sigma_prev.push_back(f.sigma);
  if (opt_.scheme == Scheme::monolithic) ensure(Variant::biot);
  if (opt_.scheme != Scheme::monolithic) ensure(Variant::darcy);

  monitor_ = StabilityMonitor{};
  const Norms nm = norms(st);
  monitor_.p0 = nm.p;
  monitor_.z0 = nm.z;
  return st;
}

void Solver::step_monolithic(State& st, StepReport& r) {
  ensure(Variant::biot);
  const InterfaceOperator& I = op(Variant::biot);
  const double dt = opt_.dt, t_old = st.t, t_new = st.t + dt;
  const int m = static_cast<int>(subs_.size());
  std::vector<Vec> rhs(static_cast<std::size_t>(m)), bar(static_cast<std::size_t>(m));
  parallel_for(m, [&](int s) {
    rhs[s] = subs_[s].biot_data_rhs(data_, t_old, t_new, st.fields[s]);
    bar[s] = subs_[s].op(Variant::biot).solve(rhs[s]);
  });
  KrylovOptions ko;
  ko.tol = opt_.tol;
  ko.max_iter = opt_.max_iter;
  if (opt_.star_norm) {
    const Vec w = star_weights(dec_->n_interface_edges(), dt);
    // residual slots are functionals; the star norm weights their Riesz representers by 1/w
    ko.star_norm = [w](const Vec& x) { return std::sqrt(x.dot(x.cwiseQuotient(w))); };
  }
  KrylovResult res = gmres(I.as_op(), I.rhs(bar), ko);
  r.monolithic = res.report;
  r.gmres = res.report.iterations;
  if (!res.report.converged) throw std::runtime_error("monolithic interface GMRES did not converge");
  std::vector<Fields> sol(static_cast<std::size_t>(m));
  parallel_for(m, [&](int s) {
    const Subdomain& sd = subs_[s];
    const Vec x = sd.op(Variant::biot).solve(rhs[s] + sd.interface_rhs(Variant::biot, I.restrict_to(s, res.x), I.u_weight()));
    sol[s] = sd.unpack(Variant::biot, x);
  });
  for (int s = 0; s < m; ++s) {
    Fields& f = st.fields[s];
    f.sigma = sol[s].sigma;
    f.u += dt * sol[s].u;
    f.gamma += dt * sol[s].gamma;
    f.z = sol[s].z;
    f.p = sol[s].p;
  }
  for (int e = 0; e < dec_->n_interface_edges(); ++e)
    st.lambda_u.segment(4 * e, 4) += I.u_weight() * res.x.segment(6 * e, 4);
}

void Solver::step_drained(State& st, StepReport& r) {
  const int m = static_cast<int>(subs_.size());
  const double t_new = st.t + opt_.dt;
  std::vector<Vec> p_old(static_cast<std::size_t>(m));
  for (int s = 0; s < m; ++s) p_old[s] = st.fields[s].p;
  std::vector<Fields> el = solve_elasticity(t_new, p_old, r.elasticity, &st.lambda_u);
  std::vector<Vec> ds(static_cast<std::size_t>(m));
  for (int s = 0; s < m; ++s) ds[s] = el[s].sigma - st.fields[s].sigma;
  std::vector<Fields> da = solve_darcy(t_new, p_old, ds, r.darcy);
  for (int s = 0; s < m; ++s) {
    Fields& f = st.fields[s];
    f.sigma = el[s].sigma;
    f.u = el[s].u;
    f.gamma = el[s].gamma;
    f.z = da[s].z;
    f.p = da[s].p;
  }
  r.cg_elasticity = r.elasticity.iterations;
  r.cg_darcy = r.darcy.iterations;
}

void Solver::step_fixed_stress(State& st, StepReport& r) {
  const int m = static_cast<int>(subs_.size());
  const double t_new = st.t + opt_.dt;
  std::vector<Vec> p_old(static_cast<std::size_t>(m)), ds(static_cast<std::size_t>(m));
  for (int s = 0; s < m; ++s) {
    p_old[s] = st.fields[s].p;
    ds[s] = st.fields[s].sigma - st.sigma_prev[s];
  }
  std::vector<Fields> da = solve_darcy(t_new, p_old, ds, r.darcy);
  std::vector<Vec> p_new(static_cast<std::size_t>(m));
  for (int s = 0; s < m; ++s) p_new[s] = da[s].p;
  std::vector<Fields> el = solve_elasticity(t_new, p_new, r.elasticity, &st.lambda_u);
  for (int s = 0; s < m; ++s) {
    Fields& f = st.fields[s];
    st.sigma_prev[s] = f.sigma;
    f.sigma = el[s].sigma;
    f.u = el[s].u;
    f.gamma = el[s].gamma;
    f.z = da[s].z;
    f.p = da[s].p;
  }
  r.cg_elasticity = r.elasticity.iterations;
  r.cg_darcy = r.darcy.iterations;
}

void Solver::update_monitor(const State& old_s, const State& new_s) {
  for (const Subdomain& sd : subs_) {
    const Vec dp = new_s.fields[sd.id()].p - old_s.fields[sd.id()].p;
    monitor_.sum_dp += (sd.blocks().M_p.array() * dp.array().square()).sum() / opt_.dt;
  }
  const Norms nm = norms(new_s);
  const double e = nm.z * nm.z + nm.p * nm.p + nm.sigma_a * nm.sigma_a + nm.u * nm.u + nm.gamma * nm.gamma;
  monitor_.max_energy = std::max(monitor_.max_energy, e);
  monitor_.max_z = std::max(monitor_.max_z, nm.z);
  monitor_.max_p = std::max(monitor_.max_p, nm.p);
  monitor_.max_sigma = std::max(monitor_.max_sigma, nm.sigma_a);
  monitor_.max_u = std::max(monitor_.max_u, nm.u);
  monitor_.max_gamma = std::max(monitor_.max_gamma, nm.gamma);
}

StepReport Solver::step(State& st) {
  StepReport r;
  r.n = st.n + 1;
  const State before = st;
  try {
    switch (opt_.scheme) {
      case Scheme::monolithic: step_monolithic(st, r); break;
      case Scheme::drained_split: step_drained(st, r); break;
      case Scheme::fixed_stress: step_fixed_stress(st, r); break;
    }
  } catch (const std::exception& e) {
    std::ostringstream os;
    os << "step " << r.n << ": " << e.what();
    throw std::runtime_error(os.str());
  }
  st.n += 1;
  st.t = before.t + opt_.dt;
  update_monitor(before, st);
  return r;
}

RunSummary Solver::run(const std::function<void(const State&)>& observer) {
  RunSummary sum;
  State st = initialize();
  if (observer) observer(st);
  for (int k = 0; k < opt_.steps; ++k) {
    sum.steps.push_back(step(st));
    if (observer) observer(st);
  }
  if (!sum.steps.empty()) {
    for (const StepReport& r : sum.steps) {
      sum.avg_gmres += r.gmres;
      sum.avg_cg_elasticity += r.cg_elasticity;
      sum.avg_cg_darcy += r.cg_darcy;
    }
    const double n = static_cast<double>(sum.steps.size());
    sum.avg_gmres /= n;
    sum.avg_cg_elasticity /= n;
    sum.avg_cg_darcy /= n;
  }
  sum.monitor = monitor_;
  return sum;
}

}  // namespace biot
