#include "biotdd/assembly.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace biot {

MaterialField uniform_material(int n_cells, const CellMaterial& m) {
  return MaterialField(static_cast<std::size_t>(n_cells), m);
}

void validate_material(const MaterialField& mat, int n_cells) {
  if (static_cast<int>(mat.size()) != n_cells) {
    std::ostringstream os;
    os << "material field has " << mat.size() << " cells, mesh has " << n_cells;
    throw std::invalid_argument(os.str());
  }
  auto fail = [](int c, const char* field) {
    std::ostringstream os;
    os << "material: cell " << c << " has invalid " << field;
    throw std::invalid_argument(os.str());
  };
  for (int c = 0; c < n_cells; ++c) {
    const CellMaterial& m = mat[c];
    if (!(m.mu > 0.0)) fail(c, "mu");
    if (!(m.lambda >= 0.0)) fail(c, "lambda");
    if (!(m.c0 >= 0.0)) fail(c, "c0");
    if (!(m.alpha > 0.0 && m.alpha <= 1.0)) fail(c, "alpha");
    if (std::abs(m.K(0, 1) - m.K(1, 0)) > 1e-14 * m.K.norm()) fail(c, "K (not symmetric)");
    if (!(m.K.determinant() > 0.0 && m.K(0, 0) > 0.0)) fail(c, "K (not positive definite)");
  }
}

Mat2 compliance(const Mat2& tau, double mu, double lambda) {
  return (tau - lambda / (2.0 * mu + 2.0 * lambda) * tau.trace() * Mat2::Identity()) / (2.0 * mu);
}

namespace {

using Trip = Eigen::Triplet<double>;

SpMat from_triplets(int rows, int cols, const std::vector<Trip>& t) {
  SpMat m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

}  // namespace

Blocks assemble_blocks(const Mesh& mesh, const SubdomainDofs& dofs, const MaterialField& mat, const QuadOptions& q) {
  const int nz = dofs.n_z(), nc = dofs.n_cells();
  const Rule2d rule = gauss_square(q.cell_points);
  std::vector<Trip> tss, tsp, tu, tg, tz, tz0, tp;
  Blocks b;
  b.M_p.resize(nc);
  b.S_pp.resize(nc);
  b.area.resize(nc);

  for (int lc = 0; lc < nc; ++lc) {
    const int c = dofs.cells[lc];
    const CellMaterial& m = mat[c];
    const CellMap<double> map = cell_map(mesh, c);
    const Mat2 Kinv = m.K.inverse();
    const double shear = 1.0 / (2.0 * m.mu);
    const double vol = m.lambda / (2.0 * m.mu + 2.0 * m.lambda);

    Eigen::Matrix<double, 8, 8> mass = Eigen::Matrix<double, 8, 8>::Zero();
    Eigen::Matrix<double, 8, 8> kmass = Eigen::Matrix<double, 8, 8>::Zero();
    Eigen::Matrix<double, 8, 8> comp[2][2];   // (phi_i[r] phi_j[s])
    for (auto& row : comp)
      for (auto& x : row) x.setZero();
    Eigen::Matrix<double, 8, 1> divint = Eigen::Matrix<double, 8, 1>::Zero();
    Eigen::Matrix<double, 8, 2> compint = Eigen::Matrix<double, 8, 2>::Zero();
    double area = 0.0;
    for (int k = 0; k < rule.size(); ++k) {
      const HdivPoint hp = map_hdiv_basis(map, rule.x[k], c);
      const double w = rule.w[k] * hp.det;
      area += w;
      mass += w * hp.phi.transpose() * hp.phi;
      kmass += w * hp.phi.transpose() * Kinv * hp.phi;
      for (int r = 0; r < 2; ++r)
        for (int s = 0; s < 2; ++s) comp[r][s] += w * hp.phi.row(r).transpose() * hp.phi.row(s);
      divint += w * hp.div.transpose();
      compint += w * hp.phi.transpose();
    }
    b.area(lc) = area;
    b.M_p(lc) = m.c0 * area;
    b.S_pp(lc) = m.alpha * m.alpha / (m.mu + m.lambda) * area;

    const auto& sg = dofs.cell_sign[lc];
    std::array<int, 8> zd;
    for (int k = 0; k < 4; ++k)
      for (int mm = 0; mm < 2; ++mm) zd[2 * k + mm] = 2 * dofs.cell_edges[lc][k] + mm;

    for (int i = 0; i < 8; ++i) {
      for (int j = 0; j < 8; ++j) {
        const double sij = sg[i] * sg[j];
        for (int r = 0; r < 2; ++r)
          for (int s = 0; s < 2; ++s) {
            double v = -vol * comp[r][s](i, j);
            if (r == s) v += mass(i, j);
            tss.emplace_back(dofs.sigma(r, zd[i]), dofs.sigma(s, zd[j]), sij * shear * v);
          }
        tz.emplace_back(zd[i], zd[j], sij * kmass(i, j));
        tz0.emplace_back(zd[i], zd[j], sij * mass(i, j));
      }
      for (int r = 0; r < 2; ++r) {
        // tr(tau) for row r picks component r
        tsp.emplace_back(dofs.sigma(r, zd[i]), lc, sg[i] * m.alpha / (2.0 * (m.mu + m.lambda)) * compint(i, r));
        tu.emplace_back(r * nc + lc, dofs.sigma(r, zd[i]), sg[i] * divint(i));
      }
      // (gamma, tau) = gamma (tau_01 - tau_10)
      tg.emplace_back(lc, dofs.sigma(0, zd[i]), sg[i] * compint(i, 1));
      tg.emplace_back(lc, dofs.sigma(1, zd[i]), -sg[i] * compint(i, 0));
      tp.emplace_back(lc, zd[i], sg[i] * divint(i));
    }
  }
  b.A_ss = from_triplets(2 * nz, 2 * nz, tss);
  b.A_sp = from_triplets(2 * nz, nc, tsp);
  b.B_u = from_triplets(2 * nc, 2 * nz, tu);
  b.B_g = from_triplets(nc, 2 * nz, tg);
  b.M_z = from_triplets(nz, nz, tz);
  b.M_z0 = from_triplets(nz, nz, tz0);
  b.B_p = from_triplets(nc, nz, tp);
  return b;
}

Vec cell_integrals(const Mesh& mesh, const SubdomainDofs& dofs, const ScalarFn& f, double t, int points) {
  const Rule2d rule = gauss_square(points);
  Vec out = Vec::Zero(dofs.n_cells());
  for (int lc = 0; lc < dofs.n_cells(); ++lc) {
    const CellMap<double> map = cell_map(mesh, dofs.cells[lc]);
    for (int k = 0; k < rule.size(); ++k)
      out(lc) += rule.w[k] * map.jacobian(rule.x[k]).determinant() * f(map(rule.x[k]), t);
  }
  return out;
}

Vec cell_integrals(const Mesh& mesh, const SubdomainDofs& dofs, const VectorFn& f, double t, int points) {
  const Rule2d rule = gauss_square(points);
  const int nc = dofs.n_cells();
  Vec out = Vec::Zero(2 * nc);
  for (int lc = 0; lc < nc; ++lc) {
    const CellMap<double> map = cell_map(mesh, dofs.cells[lc]);
    for (int k = 0; k < rule.size(); ++k) {
      const Vec2 v = rule.w[k] * map.jacobian(rule.x[k]).determinant() * f(map(rule.x[k]), t);
      out(lc) += v.x();
      out(nc + lc) += v.y();
    }
  }
  return out;
}

std::array<double, 2> edge_moments(const Mesh& mesh, int edge, const std::function<double(const Vec2&)>& f,
                                   int points) {
  const Rule1d g = gauss_1d(points);
  const Edge& e = mesh.edges[edge];
  const Vec2 a = mesh.vertices[e.v[0]], b = mesh.vertices[e.v[1]];
  std::array<double, 2> m{0.0, 0.0};
  for (int k = 0; k < g.size(); ++k) {
    const double v = g.w[k] * f(a + g.x[k] * (b - a));
    m[0] += v * legendre01(0, g.x[k]);
    m[1] += v * legendre01(1, g.x[k]);
  }
  return m;
}

Vec dirichlet_pressure_functional(const Mesh& mesh, const Decomposition& dec, const SubdomainDofs& dofs,
                                  const ScalarFn& gp, double t, int points) {
  Vec out = Vec::Zero(dofs.n_z());
  for (int le = 0; le < dofs.n_edges(); ++le) {
    if (dofs.kind[le] != EdgeKind::boundary) continue;
    if (dec.bc[static_cast<std::size_t>(dofs.side[le])].flow != FlowBc::pressure) continue;
    // basis normal trace is l_m / |e|, so <g, q.n> = int_0^1 g l_m dt
    const auto mo = edge_moments(mesh, dofs.edges[le], [&](const Vec2& x) { return gp(x, t); }, points);
    out(2 * le) = mo[0];
    out(2 * le + 1) = mo[1];
  }
  return out;
}

Vec dirichlet_displacement_functional(const Mesh& mesh, const Decomposition& dec, const SubdomainDofs& dofs,
                                      const VectorFn& gu, double t, int points) {
  const int nz = dofs.n_z();
  Vec out = Vec::Zero(2 * nz);
  for (int le = 0; le < dofs.n_edges(); ++le) {
    if (dofs.kind[le] != EdgeKind::boundary) continue;
    if (dec.bc[static_cast<std::size_t>(dofs.side[le])].mech != MechBc::displacement) continue;
    for (int r = 0; r < 2; ++r) {
      const auto mo = edge_moments(mesh, dofs.edges[le], [&](const Vec2& x) { return gu(x, t)(r); }, points);
      out(r * nz + 2 * le) = mo[0];
      out(r * nz + 2 * le + 1) = mo[1];
    }
  }
  return out;
}

Vec traction_values(const Mesh& mesh, const SubdomainDofs& dofs, const TractionFn& tr, double t, int points) {
  const int nz = dofs.n_z();
  Vec out = Vec::Zero(2 * nz);
  for (int zd : dofs.traction_zdofs) {
    if (zd % 2 != 0) continue;
    const int le = zd / 2;
    const Edge& e = mesh.edges[dofs.edges[le]];
    for (int r = 0; r < 2; ++r) {
      const auto mo =
          edge_moments(mesh, dofs.edges[le], [&](const Vec2& x) { return tr(x, t, e.normal)(r); }, points);
      out(r * nz + 2 * le) = e.length * mo[0];
      out(r * nz + 2 * le + 1) = e.length * mo[1];
    }
  }
  return out;
}

Vec flux_values(const Mesh& mesh, const SubdomainDofs& dofs, const ScalarFn& flux, double t, int points) {
  Vec out = Vec::Zero(dofs.n_z());
  for (int zd : dofs.noflux_zdofs) {
    if (zd % 2 != 0) continue;
    const int le = zd / 2;
    const Edge& e = mesh.edges[dofs.edges[le]];
    const auto mo = edge_moments(mesh, dofs.edges[le], [&](const Vec2& x) { return flux(x, t); }, points);
    out(2 * le) = e.length * mo[0];
    out(2 * le + 1) = e.length * mo[1];
  }
  return out;
}

Eigen::Matrix<double, 8, 1> cell_coefficients(const SubdomainDofs& dofs, int lc, const Vec& x, int offset) {
  Eigen::Matrix<double, 8, 1> a;
  for (int k = 0; k < 4; ++k)
    for (int m = 0; m < 2; ++m) {
      const int i = 2 * k + m;
      a(i) = dofs.cell_sign[lc][i] * x(offset + 2 * dofs.cell_edges[lc][k] + m);
    }
  return a;
}

}  // namespace biot
