#include "biotdd/spaces.hpp"

#include "biotdd/quadrature.hpp"

#include <sstream>
#include <stdexcept>

namespace biot {

void throw_nonpositive_jacobian(int cell) {
  std::ostringstream os;
  os << "non-positive Jacobian in cell " << cell;
  throw std::runtime_error(os.str());
}

RefBdm1::RefBdm1() {
  const Rule1d g = gauss_1d(3);
  Eigen::Matrix<double, 8, 8> D = Eigen::Matrix<double, 8, 8>::Zero();
  for (int k = 0; k < 4; ++k)
    for (int m = 0; m < 2; ++m)
      for (int j = 0; j < 8; ++j)
        for (int q = 0; q < g.size(); ++q) {
          const Vec2 p = ref_edge_point<double>(k, g.x[q]);
          D(2 * k + m, j) += g.w[q] * prime<double>(j, p).dot(ref_edge_normal(k)) * legendre01(m, g.x[q]);
        }
  coef_ = D.inverse();
}

const RefBdm1& RefBdm1::get() {
  static const RefBdm1 instance;
  return instance;
}

HdivPoint map_hdiv_basis(const CellMap<double>& map, const Vec2& xi, int cell) {
  HdivPoint out;
  const Mat2 J = map.jacobian(xi);
  out.det = J.determinant();
  if (!(out.det > 0.0)) throw_nonpositive_jacobian(cell);
  out.x = map(xi);
  const RefBdm1& ref = RefBdm1::get();
  for (int i = 0; i < 8; ++i) {
    out.phi.col(i) = J * ref.value<double>(i, xi) / out.det;
    out.div(i) = ref.div(i) / out.det;
  }
  return out;
}

std::vector<SubdomainDofs> build_dofmap(const Mesh& mesh, const Decomposition& dec) {
  if (static_cast<int>(dec.subdomain_of_cell.size()) != mesh.n_cells())
    throw std::invalid_argument("build_dofmap: decomposition does not match mesh");
  std::vector<SubdomainDofs> out(static_cast<std::size_t>(dec.n_subdomains()));
  for (int s = 0; s < dec.n_subdomains(); ++s) {
    SubdomainDofs& d = out[s];
    d.id = s;
    d.cells = dec.cells_of_subdomain[s];
    d.local_edge.assign(mesh.edges.size(), -1);
    for (int c : d.cells)
      for (int e : mesh.cell_edges[c]) d.local_edge[e] = 0;
    for (int e = 0; e < mesh.n_edges(); ++e)
      if (d.local_edge[e] == 0) {
        d.local_edge[e] = d.n_edges();
        d.edges.push_back(e);
      }
    d.kind.resize(d.edges.size());
    d.side.assign(d.edges.size(), -1);
    d.normal_sign.assign(d.edges.size(), 1.0);
    for (int le = 0; le < d.n_edges(); ++le) {
      const Edge& e = mesh.edges[d.edges[le]];
      if (e.on_boundary()) {
        d.kind[le] = EdgeKind::boundary;
        d.side[le] = e.side;
      } else if (dec.interface_of_edge[d.edges[le]] >= 0) {
        d.kind[le] = EdgeKind::interface;
        // outward for this subdomain
        d.normal_sign[le] = dec.subdomain_of_cell[e.cells[0]] == s ? 1.0 : -1.0;
      } else {
        d.kind[le] = EdgeKind::interior;
      }
    }
    for (int le = 0; le < d.n_edges(); ++le)
      if (d.kind[le] == EdgeKind::interface) {
        d.interface_edges.push_back(le);
        d.interface_index.push_back(dec.interface_of_edge[d.edges[le]]);
      }

    d.cell_edges.resize(d.cells.size());
    d.cell_sign.resize(d.cells.size());
    for (int lc = 0; lc < d.n_cells(); ++lc) {
      const int c = d.cells[lc];
      const auto& verts = mesh.cells[c];
      for (int k = 0; k < 4; ++k) {
        const int ge = mesh.cell_edges[c][k];
        const int le = d.local_edge[ge];
        d.cell_edges[lc][k] = le;
        const Edge& e = mesh.edges[ge];
        // outward normal of this cell agrees with the DOF normal?
        const double nsign = d.kind[le] == EdgeKind::interior ? (e.cells[0] == c ? 1.0 : -1.0) : 1.0;
        const int a = verts[kRefEdgeVertices[k][0]], b = verts[kRefEdgeVertices[k][1]];
        const double dsign = a < b ? 1.0 : -1.0;
        d.cell_sign[lc][2 * k] = nsign;
        d.cell_sign[lc][2 * k + 1] = nsign * dsign;
      }
    }

    for (int le = 0; le < d.n_edges(); ++le) {
      if (d.kind[le] != EdgeKind::boundary) continue;
      const SideBc bc = dec.bc[static_cast<std::size_t>(d.side[le])];
      for (int m = 0; m < 2; ++m) {
        if (bc.mech == MechBc::traction) d.traction_zdofs.push_back(2 * le + m);
        if (bc.flow == FlowBc::noflux) d.noflux_zdofs.push_back(2 * le + m);
      }
    }
  }
  return out;
}

}  // namespace biot
