#pragma once
// Shared fixtures and the undecomposed reference solver used by several tests.

#include "biotdd/assembly.hpp"
#include "biotdd/manufactured.hpp"
#include "biotdd/schemes.hpp"
#include "biotdd/spaces.hpp"

#include <Eigen/SparseLU>

#include <random>
#include <stdexcept>
#include <vector>

namespace testing_support {

using namespace biot;

struct Case {
  Mesh mesh;
  Decomposition dec;
  MaterialField mat;
};

inline Case make_setup(int n, int px, int py, double perturb = 0.0, const CellMaterial& m = {},
                        const BcMap& bc = {}) {
  Case s;
  Perturbation pt;
  pt.fraction = perturb;
  s.mesh = build_grid(n, n, pt);
  s.dec = partition(s.mesh, px, py, bc);
  s.mat = uniform_material(s.mesh.n_cells(), m);
  return s;
}

inline CellMaterial example1_material(double c0 = 1.0) {
  CellMaterial m;
  m.mu = 100.0;
  m.lambda = 100.0;
  m.c0 = c0;
  m.alpha = 1.0;
  return m;
}

inline Vec random_vec(int n, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = d(g);
  return v;
}

/// Fields of the undecomposed problem in the single-subdomain numbering.
struct GlobalState {
  Vec sigma, u, gamma, z, p;
};

/// Backward Euler for the five-field system on the whole domain, written in
/// the original (non-differentiated) variables and solved directly.
class GlobalReference {
 public:
  GlobalReference(const Mesh& mesh, const BcMap& bc, const MaterialField& mat, ProblemData data, double dt)
      : mesh_(mesh), dt_(dt), data_(std::move(data)) {
    dec_ = partition(mesh_, 1, 1, bc);
    dofs_ = build_dofmap(mesh_, dec_)[0];
    b_ = assemble_blocks(mesh_, dofs_, mat);
    nz_ = dofs_.n_z();
    nc_ = dofs_.n_cells();
  }

  const SubdomainDofs& dofs() const { return dofs_; }

  /// p^0 = cell averages of p0, then an elasticity solve at t = 0 for sigma, u, gamma.
  GlobalState initial() {
    GlobalState s;
    s.p = Vec::Zero(nc_);
    if (data_.p0) s.p = cell_integrals(mesh_, dofs_, data_.p0, 0.0, 4).cwiseQuotient(b_.area);
    const int n = 2 * nz_ + 3 * nc_;
    std::vector<Eigen::Triplet<double>> t;
    add(t, b_.A_ss, 0, 0, 1.0, false);
    add(t, b_.B_u, 0, 2 * nz_, 1.0, true);
    add(t, b_.B_g, 0, 2 * nz_ + 2 * nc_, 1.0, true);
    add(t, b_.B_u, 2 * nz_, 0, 1.0, false);
    add(t, b_.B_g, 2 * nz_ + 2 * nc_, 0, 1.0, false);
    Vec rhs = Vec::Zero(n);
    rhs.head(2 * nz_) = -(b_.A_sp * s.p);
    if (data_.g_u) rhs.head(2 * nz_) += dirichlet_displacement_functional(mesh_, dec_, dofs_, data_.g_u, 0.0, 3);
    if (data_.f) rhs.segment(2 * nz_, 2 * nc_) = -cell_integrals(mesh_, dofs_, data_.f, 0.0, 3);
    constrain_stress(t, rhs, 0, 0.0);
    const Vec x = solve(t, rhs, n);
    s.sigma = x.head(2 * nz_);
    s.u = x.segment(2 * nz_, 2 * nc_);
    s.gamma = x.segment(2 * nz_ + 2 * nc_, nc_);
    s.z = Vec::Zero(nz_);
    return s;
  }

  GlobalState step(const GlobalState& prev, double t_new) {
    const int os = 0, ou = 2 * nz_, og = 2 * nz_ + 2 * nc_, oz = 2 * nz_ + 3 * nc_, op = 3 * nz_ + 3 * nc_;
    const int n = op + nc_;
    std::vector<Eigen::Triplet<double>> t;
    // (A(sigma + alpha p I), tau) + (u, div tau) + (gamma, tau) = <g_u, tau n>
    add(t, b_.A_ss, os, os, 1.0, false);
    add(t, b_.A_sp, os, op, 1.0, false);
    add(t, b_.B_u, os, ou, 1.0, true);
    add(t, b_.B_g, os, og, 1.0, true);
    // (div sigma, v) = -(f, v);  (sigma, xi) = 0
    add(t, b_.B_u, ou, os, 1.0, false);
    add(t, b_.B_g, og, os, 1.0, false);
    // (K^-1 z, q) - (p, div q) = -<g_p, q.n>
    add(t, b_.M_z, oz, oz, 1.0, false);
    add(t, b_.B_p, oz, op, -1.0, true);
    // c0 (p - p^n) + alpha (A(sigma + alpha p I) - A(...)^n, I) + dt (div z, w) = dt (g, w)
    add(t, b_.A_sp, op, os, 1.0, true);
    add(t, b_.B_p, op, oz, dt_, false);
    for (int i = 0; i < nc_; ++i) t.emplace_back(op + i, op + i, b_.M_p(i) + b_.S_pp(i));

    Vec rhs = Vec::Zero(n);
    if (data_.g_u) rhs.head(2 * nz_) = dirichlet_displacement_functional(mesh_, dec_, dofs_, data_.g_u, t_new, 3);
    if (data_.f) rhs.segment(ou, 2 * nc_) = -cell_integrals(mesh_, dofs_, data_.f, t_new, 3);
    if (data_.g_p) rhs.segment(oz, nz_) = -dirichlet_pressure_functional(mesh_, dec_, dofs_, data_.g_p, t_new, 3);
    rhs.segment(op, nc_) = b_.A_sp.transpose() * prev.sigma + (b_.M_p + b_.S_pp).cwiseProduct(prev.p);
    if (data_.g) rhs.segment(op, nc_) += dt_ * cell_integrals(mesh_, dofs_, data_.g, t_new, 3);
    constrain_stress(t, rhs, os, t_new);
    if (!dofs_.noflux_zdofs.empty()) {
      const Vec fv = data_.flux ? flux_values(mesh_, dofs_, data_.flux, t_new, 3) : Vec::Zero(nz_);
      for (int zd : dofs_.noflux_zdofs) set_row(t, rhs, oz + zd, fv(zd));
    }
    const Vec x = solve(t, rhs, n);
    GlobalState s;
    s.sigma = x.segment(os, 2 * nz_);
    s.u = x.segment(ou, 2 * nc_);
    s.gamma = x.segment(og, nc_);
    s.z = x.segment(oz, nz_);
    s.p = x.segment(op, nc_);
    return s;
  }

  /// Maps a decomposed state onto the global numbering (H(div) DOFs
  /// reoriented to the mesh edge normal).  Interior DOFs shared by two
  /// subdomains are taken from the lower one.
  GlobalState gather(const std::vector<Subdomain>& subs, const State& st) const {
    GlobalState g{Vec::Zero(2 * nz_), Vec::Zero(2 * nc_), Vec::Zero(nc_), Vec::Zero(nz_), Vec::Zero(nc_)};
    std::vector<char> seen(static_cast<std::size_t>(nz_ / 2), 0);
    for (std::size_t s = 0; s < subs.size(); ++s) {
      const SubdomainDofs& d = subs[s].dofs();
      const Fields& f = st.fields[s];
      const int nzl = d.n_z(), ncl = d.n_cells();
      for (int lc = 0; lc < ncl; ++lc) {
        const int c = d.cells[static_cast<std::size_t>(lc)];
        g.u(c) = f.u(lc);
        g.u(nc_ + c) = f.u(ncl + lc);
        g.gamma(c) = f.gamma(lc);
        g.p(c) = f.p(lc);
      }
      for (int le = 0; le < d.n_edges(); ++le) {
        const int ge = dofs_.local_edge[d.edges[static_cast<std::size_t>(le)]];
        if (seen[static_cast<std::size_t>(ge)]) continue;
        seen[static_cast<std::size_t>(ge)] = 1;
        const double sg = d.normal_sign[static_cast<std::size_t>(le)];
        for (int m = 0; m < 2; ++m) {
          g.z(2 * ge + m) = sg * f.z(2 * le + m);
          for (int r = 0; r < 2; ++r) g.sigma(r * nz_ + 2 * ge + m) = sg * f.sigma(r * nzl + 2 * le + m);
        }
      }
    }
    return g;
  }

 private:
  static void add(std::vector<Eigen::Triplet<double>>& t, const SpMat& m, int r0, int c0, double s, bool tr) {
    for (int k = 0; k < m.outerSize(); ++k)
      for (SpMat::InnerIterator it(m, k); it; ++it) {
        const int r = static_cast<int>(tr ? it.col() : it.row()), c = static_cast<int>(tr ? it.row() : it.col());
        t.emplace_back(r0 + r, c0 + c, s * it.value());
      }
  }

  static void set_row(std::vector<Eigen::Triplet<double>>& t, Vec& rhs, int row, double value) {
    std::erase_if(t, [row](const Eigen::Triplet<double>& x) { return x.row() == row; });
    t.emplace_back(row, row, 1.0);
    rhs(row) = value;
  }

  void constrain_stress(std::vector<Eigen::Triplet<double>>& t, Vec& rhs, int os, double time) const {
    if (dofs_.traction_zdofs.empty()) return;
    const Vec tv = data_.traction ? traction_values(mesh_, dofs_, data_.traction, time, 3) : Vec::Zero(2 * nz_);
    for (int zd : dofs_.traction_zdofs)
      for (int r = 0; r < 2; ++r) set_row(t, rhs, os + r * nz_ + zd, tv(r * nz_ + zd));
  }

  static Vec solve(const std::vector<Eigen::Triplet<double>>& t, const Vec& rhs, int n) {
    SpMat K(n, n);
    K.setFromTriplets(t.begin(), t.end());
    K.makeCompressed();
    Eigen::SparseLU<SpMat> lu(K);
    if (lu.info() != Eigen::Success) throw std::runtime_error("reference system singular");
    return lu.solve(rhs);
  }

  const Mesh& mesh_;
  double dt_;
  ProblemData data_;
  Decomposition dec_;
  SubdomainDofs dofs_;
  Blocks b_;
  int nz_ = 0, nc_ = 0;
};

inline double rel_diff(const Vec& a, const Vec& b) {
  const double s = std::max(b.norm(), 1e-300);
  return (a - b).norm() / s;
}

inline double max_rel(const GlobalState& a, const GlobalState& b) {
  return std::max({rel_diff(a.sigma, b.sigma), rel_diff(a.u, b.u), rel_diff(a.gamma, b.gamma), rel_diff(a.z, b.z),
                   rel_diff(a.p, b.p)});
}

}  // namespace testing_support
