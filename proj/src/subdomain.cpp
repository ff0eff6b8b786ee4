#include "biotdd/subdomain.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace biot {

const char* to_string(Variant v) {
  switch (v) {
    case Variant::biot: return "biot";
    case Variant::elasticity: return "elasticity";
    default: return "darcy";
  }
}

int interface_slots(Variant v) {
  switch (v) {
    case Variant::biot: return 6;
    case Variant::elasticity: return 4;
    default: return 2;
  }
}

Fields Fields::zeros(const SubdomainDofs& d) {
  Fields f;
  f.sigma = Vec::Zero(d.n_sigma());
  f.u = Vec::Zero(d.n_u());
  f.gamma = Vec::Zero(d.n_gamma());
  f.z = Vec::Zero(d.n_z());
  f.p = Vec::Zero(d.n_p());
  return f;
}

namespace {

using Trip = Eigen::Triplet<double>;

void add_block(std::vector<Trip>& t, const SpMat& m, int r0, int c0, double s, bool transpose = false) {
  for (int k = 0; k < m.outerSize(); ++k)
    for (SpMat::InnerIterator it(m, k); it; ++it) {
      const int r = static_cast<int>(transpose ? it.col() : it.row());
      const int c = static_cast<int>(transpose ? it.row() : it.col());
      t.emplace_back(r0 + r, c0 + c, s * it.value());
    }
}

void add_diag(std::vector<Trip>& t, const Vec& d, int r0, int c0) {
  for (int i = 0; i < d.size(); ++i) t.emplace_back(r0 + i, c0 + i, d(i));
}

struct Layout {
  int sigma = -1, u = -1, gamma = -1, z = -1, p = -1, n = 0;
};

Layout layout(const SubdomainDofs& d, Variant v) {
  Layout l;
  const int nz = d.n_z(), nc = d.n_cells();
  switch (v) {
    case Variant::biot:
      l = {0, 2 * nz, 2 * nz + 2 * nc, 2 * nz + 3 * nc, 3 * nz + 3 * nc, d.n_total()};
      break;
    case Variant::elasticity:
      l = {0, 2 * nz, 2 * nz + 2 * nc, -1, -1, 2 * nz + 3 * nc};
      break;
    case Variant::darcy:
      l = {-1, -1, -1, 0, nz, nz + nc};
      break;
  }
  return l;
}

std::vector<int> essential_rows(const SubdomainDofs& d, const Layout& l) {
  std::vector<int> rows;
  if (l.sigma >= 0)
    for (int zd : d.traction_zdofs)
      for (int r = 0; r < 2; ++r) rows.push_back(l.sigma + r * d.n_z() + zd);
  if (l.z >= 0)
    for (int zd : d.noflux_zdofs) rows.push_back(l.z + zd);
  return rows;
}

}  // namespace

SubdomainOperator::SubdomainOperator(const SubdomainDofs& dofs, const Blocks& b, Variant v, double dt)
    : variant_(v), dt_(dt) {
  if (v != Variant::elasticity && !(dt > 0.0)) throw std::invalid_argument("SubdomainOperator: dt must be > 0");
  const Layout l = layout(dofs, v);
  std::vector<Trip> t;
  switch (v) {
    case Variant::biot:
      add_block(t, b.A_ss, l.sigma, l.sigma, 1.0);
      add_block(t, b.B_u, l.sigma, l.u, dt, true);
      add_block(t, b.B_g, l.sigma, l.gamma, dt, true);
      add_block(t, b.A_sp, l.sigma, l.p, 1.0);
      add_block(t, b.B_u, l.u, l.sigma, 1.0);
      add_block(t, b.B_g, l.gamma, l.sigma, 1.0);
      add_block(t, b.M_z, l.z, l.z, 1.0);
      add_block(t, b.B_p, l.z, l.p, -1.0, true);
      add_block(t, b.A_sp, l.p, l.sigma, 1.0, true);
      add_block(t, b.B_p, l.p, l.z, dt);
      add_diag(t, b.M_p + b.S_pp, l.p, l.p);
      break;
    case Variant::elasticity:
      add_block(t, b.A_ss, l.sigma, l.sigma, 1.0);
      add_block(t, b.B_u, l.sigma, l.u, 1.0, true);
      add_block(t, b.B_g, l.sigma, l.gamma, 1.0, true);
      add_block(t, b.B_u, l.u, l.sigma, 1.0);
      add_block(t, b.B_g, l.gamma, l.sigma, 1.0);
      break;
    case Variant::darcy:
      add_block(t, b.M_z, l.z, l.z, 1.0);
      add_block(t, b.B_p, l.z, l.p, -1.0, true);
      add_block(t, b.B_p, l.p, l.z, dt);
      add_diag(t, b.M_p + b.S_pp, l.p, l.p);
      break;
  }
  std::vector<char> ess(static_cast<std::size_t>(l.n), 0);
  for (int r : essential_rows(dofs, l)) ess[r] = 1;
  std::vector<Trip> kept;
  kept.reserve(t.size() + ess.size());
  for (const Trip& x : t)
    if (!ess[x.row()]) kept.push_back(x);
  for (int r = 0; r < l.n; ++r)
    if (ess[r]) kept.emplace_back(r, r, 1.0);
  K_.resize(l.n, l.n);
  K_.setFromTriplets(kept.begin(), kept.end());
  K_.makeCompressed();

  lu_.analyzePattern(K_);
  lu_.factorize(K_);
  if (lu_.info() != Eigen::Success) {
    std::ostringstream os;
    os << "subdomain " << dofs.id << ": " << to_string(v) << " matrix is singular (" << lu_.lastErrorMessage()
       << ")";
    throw std::runtime_error(os.str());
  }
}

Vec SubdomainOperator::solve(const Vec& rhs) const {
  if (rhs.size() != K_.rows()) throw std::invalid_argument("SubdomainOperator::solve: size mismatch");
  Vec x = lu_.solve(rhs);
  return x;
}

Eigen::MatrixXd SubdomainOperator::solve_many(const Eigen::MatrixXd& rhs) const {
  if (rhs.rows() != K_.rows()) throw std::invalid_argument("SubdomainOperator::solve: size mismatch");
  Eigen::MatrixXd x = lu_.solve(rhs);
  return x;
}

Subdomain::Subdomain(const Mesh& mesh, const Decomposition& dec, SubdomainDofs dofs, const MaterialField& mat,
                     const QuadOptions& q)
    : mesh_(&mesh), dec_(&dec), dofs_(std::move(dofs)), quad_(q) {
  blocks_ = assemble_blocks(mesh, dofs_, mat, q);
}

void Subdomain::factorize(Variant v, double dt) {
  auto& slot = ops_[static_cast<int>(v)];
  if (slot && (v == Variant::elasticity || slot->dt() == dt)) return;
  slot = std::make_unique<SubdomainOperator>(dofs_, blocks_, v, dt);
}

const SubdomainOperator& Subdomain::op(Variant v) const {
  const auto& slot = ops_[static_cast<int>(v)];
  if (!slot) {
    std::ostringstream os;
    os << "subdomain " << id() << ": " << to_string(v) << " operator not factorized";
    throw std::logic_error(os.str());
  }
  return *slot;
}

Vec Subdomain::interface_rhs(Variant v, const Vec& lam, double u_weight) const {
  const int S = interface_slots(v);
  if (lam.size() != n_interface_edges() * S)
    throw std::invalid_argument("interface_rhs: multiplier size does not match the subdomain interface");
  const Layout l = layout(dofs_, v);
  Vec rhs = Vec::Zero(l.n);
  for (int k = 0; k < n_interface_edges(); ++k) {
    const int le = dofs_.interface_edges[k];
    const double inv = 1.0 / std::sqrt(mesh_->edges[dofs_.edges[le]].length);
    int s = 0;
    if (l.sigma >= 0)
      for (int r = 0; r < 2; ++r)
        for (int m = 0; m < 2; ++m, ++s) rhs(l.sigma + r * dofs_.n_z() + 2 * le + m) += u_weight * inv * lam(k * S + s);
    if (l.z >= 0)
      for (int m = 0; m < 2; ++m, ++s) rhs(l.z + 2 * le + m) -= inv * lam(k * S + s);
  }
  return rhs;
}

Vec Subdomain::traces(Variant v, const Vec& sol) const {
  const int S = interface_slots(v);
  const Layout l = layout(dofs_, v);
  Vec out(n_interface_edges() * S);
  for (int k = 0; k < n_interface_edges(); ++k) {
    const int le = dofs_.interface_edges[k];
    const double inv = 1.0 / std::sqrt(mesh_->edges[dofs_.edges[le]].length);
    int s = 0;
    if (l.sigma >= 0)
      for (int r = 0; r < 2; ++r)
        for (int m = 0; m < 2; ++m, ++s) out(k * S + s) = inv * sol(l.sigma + r * dofs_.n_z() + 2 * le + m);
    if (l.z >= 0)
      for (int m = 0; m < 2; ++m, ++s) out(k * S + s) = -inv * sol(l.z + 2 * le + m);
  }
  return out;
}

Eigen::MatrixXd Subdomain::response(Variant v, double u_weight) const {
  const int n = n_interface_dofs(v);
  const SubdomainOperator& K = op(v);
  Eigen::MatrixXd rhs(K.size(), n);
  Vec e = Vec::Zero(n);
  for (int k = 0; k < n; ++k) {
    e(k) = 1.0;
    rhs.col(k) = interface_rhs(v, e, u_weight);
    e(k) = 0.0;
  }
  const Eigen::MatrixXd sol = K.solve_many(rhs);
  Eigen::MatrixXd R(n, n);
  for (int k = 0; k < n; ++k) R.col(k) = traces(v, sol.col(k));
  return R;
}

Vec Subdomain::biot_data_rhs(const ProblemData& data, double t_old, double t_new, const Fields& prev) const {
  const SubdomainOperator& K = op(Variant::biot);
  const double dt = K.dt();
  const Layout l = layout(dofs_, Variant::biot);
  const int nz = dofs_.n_z(), nc = dofs_.n_cells();
  const int ep = quad_.edge_points, cp = quad_.cell_points;
  Vec rhs = Vec::Zero(l.n);

  // (A(sigma^n + alpha p^n I), tau) and its trace counterpart in the mass row
  rhs.segment(l.sigma, 2 * nz) = blocks_.A_ss * prev.sigma + blocks_.A_sp * prev.p;
  if (data.g_u)
    rhs.segment(l.sigma, 2 * nz) += dirichlet_displacement_functional(*mesh_, *dec_, dofs_, data.g_u, t_new, ep) -
                                    dirichlet_displacement_functional(*mesh_, *dec_, dofs_, data.g_u, t_old, ep);
  if (data.f) rhs.segment(l.u, 2 * nc) = -cell_integrals(*mesh_, dofs_, data.f, t_new, cp);
  if (data.g_p) rhs.segment(l.z, nz) = -dirichlet_pressure_functional(*mesh_, *dec_, dofs_, data.g_p, t_new, ep);
  rhs.segment(l.p, nc) = blocks_.A_sp.transpose() * prev.sigma +
                         ((blocks_.M_p + blocks_.S_pp).array() * prev.p.array()).matrix();
  if (data.g) rhs.segment(l.p, nc) += dt * cell_integrals(*mesh_, dofs_, data.g, t_new, cp);

  if (!dofs_.traction_zdofs.empty()) {
    const Vec tv = data.traction ? traction_values(*mesh_, dofs_, data.traction, t_new, ep) : Vec::Zero(2 * nz);
    for (int zd : dofs_.traction_zdofs)
      for (int r = 0; r < 2; ++r) rhs(l.sigma + r * nz + zd) = tv(r * nz + zd);
  }
  if (!dofs_.noflux_zdofs.empty()) {
    const Vec fv = data.flux ? flux_values(*mesh_, dofs_, data.flux, t_new, ep) : Vec::Zero(nz);
    for (int zd : dofs_.noflux_zdofs) rhs(l.z + zd) = fv(zd);
  }
  return rhs;
}

Vec Subdomain::elasticity_data_rhs(const ProblemData& data, double t, const Vec& p) const {
  const Layout l = layout(dofs_, Variant::elasticity);
  const int nz = dofs_.n_z(), nc = dofs_.n_cells();
  const int ep = quad_.edge_points, cp = quad_.cell_points;
  Vec rhs = Vec::Zero(l.n);
  rhs.segment(l.sigma, 2 * nz) = -(blocks_.A_sp * p);
  if (data.g_u) rhs.segment(l.sigma, 2 * nz) += dirichlet_displacement_functional(*mesh_, *dec_, dofs_, data.g_u, t, ep);
  if (data.f) rhs.segment(l.u, 2 * nc) = -cell_integrals(*mesh_, dofs_, data.f, t, cp);
  if (!dofs_.traction_zdofs.empty()) {
    const Vec tv = data.traction ? traction_values(*mesh_, dofs_, data.traction, t, ep) : Vec::Zero(2 * nz);
    for (int zd : dofs_.traction_zdofs)
      for (int r = 0; r < 2; ++r) rhs(l.sigma + r * nz + zd) = tv(r * nz + zd);
  }
  return rhs;
}

Vec Subdomain::darcy_data_rhs(const ProblemData& data, double t, const Vec& p_old, const Vec& dsigma) const {
  const double dt = op(Variant::darcy).dt();
  const Layout l = layout(dofs_, Variant::darcy);
  const int nz = dofs_.n_z(), nc = dofs_.n_cells();
  const int ep = quad_.edge_points, cp = quad_.cell_points;
  Vec rhs = Vec::Zero(l.n);
  if (data.g_p) rhs.segment(l.z, nz) = -dirichlet_pressure_functional(*mesh_, *dec_, dofs_, data.g_p, t, ep);
  rhs.segment(l.p, nc) = ((blocks_.M_p + blocks_.S_pp).array() * p_old.array()).matrix() -
                         blocks_.A_sp.transpose() * dsigma;
  if (data.g) rhs.segment(l.p, nc) += dt * cell_integrals(*mesh_, dofs_, data.g, t, cp);
  if (!dofs_.noflux_zdofs.empty()) {
    const Vec fv = data.flux ? flux_values(*mesh_, dofs_, data.flux, t, ep) : Vec::Zero(nz);
    for (int zd : dofs_.noflux_zdofs) rhs(l.z + zd) = fv(zd);
  }
  return rhs;
}

Fields Subdomain::unpack(Variant v, const Vec& sol) const {
  const Layout l = layout(dofs_, v);
  if (sol.size() != l.n) throw std::invalid_argument("unpack: solution size mismatch");
  const int nz = dofs_.n_z(), nc = dofs_.n_cells();
  Fields f;
  if (l.sigma >= 0) f.sigma = sol.segment(l.sigma, 2 * nz);
  if (l.u >= 0) f.u = sol.segment(l.u, 2 * nc);
  if (l.gamma >= 0) f.gamma = sol.segment(l.gamma, nc);
  if (l.z >= 0) f.z = sol.segment(l.z, nz);
  if (l.p >= 0) f.p = sol.segment(l.p, nc);
  return f;
}

}  // namespace biot
