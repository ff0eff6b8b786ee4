#include "biotdd/mesh.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace biot {

std::array<Vec2, 4> Mesh::cell_vertices(int c) const {
  const auto& cv = cells[static_cast<std::size_t>(c)];
  return {vertices[cv[0]], vertices[cv[1]], vertices[cv[2]], vertices[cv[3]]};
}

double Mesh::cell_area(int c) const {
  const auto x = cell_vertices(c);
  // shoelace
  double a = 0.0;
  for (int k = 0; k < 4; ++k) {
    const Vec2& p = x[k];
    const Vec2& q = x[(k + 1) % 4];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * a;
}

double jacobian_det(const std::array<Vec2, 4>& x, const Vec2& xi) {
  const double s = xi.x(), t = xi.y();
  const Vec2 dxi = (1 - t) * (x[1] - x[0]) + t * (x[2] - x[3]);
  const Vec2 deta = (1 - s) * (x[3] - x[0]) + s * (x[2] - x[1]);
  return dxi.x() * deta.y() - dxi.y() * deta.x();
}

namespace {

double unit_draw(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

void check_divides(int n, int p, const char* what) {
  if (p < 1 || n % p != 0) {
    std::ostringstream os;
    os << what << ": " << p << " does not divide " << n;
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

Mesh build_grid(int nx, int ny, const Perturbation& perturb) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("build_grid: nx and ny must be >= 1");
  if (perturb.fraction < 0.0 || perturb.fraction > 0.3)
    throw std::invalid_argument("build_grid: perturbation fraction must lie in [0, 0.3]");

  Mesh m;
  m.nx = nx;
  m.ny = ny;
  m.vertices.resize(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      m.vertices[m.vertex_id(i, j)] = Vec2(double(i) / nx, double(j) / ny);

  if (perturb.fraction > 0.0) {
    const int cnx = perturb.coarse_nx > 0 ? perturb.coarse_nx : nx;
    const int cny = perturb.coarse_ny > 0 ? perturb.coarse_ny : ny;
    check_divides(nx, cnx, "build_grid x refinement");
    check_divides(ny, cny, "build_grid y refinement");
    check_divides(cnx, perturb.px, "build_grid x blocks");
    check_divides(cny, perturb.py, "build_grid y blocks");
    const int bx = cnx / perturb.px, by = cny / perturb.py;
    std::set<int> chosen(perturb.blocks.begin(), perturb.blocks.end());

    std::vector<Vec2> coarse(static_cast<std::size_t>((cnx + 1) * (cny + 1)));
    std::mt19937_64 gen(perturb.seed);
    for (int J = 0; J <= cny; ++J)
      for (int I = 0; I <= cnx; ++I) {
        Vec2 x(double(I) / cnx, double(J) / cny);
        // draws are taken for every vertex so the pattern does not depend on the selection
        const double dx = 2.0 * unit_draw(gen) - 1.0;
        const double dy = 2.0 * unit_draw(gen) - 1.0;
        const bool inside = I % bx != 0 && J % by != 0;
        const int block = (J / by) * perturb.px + I / bx;
        if (inside && (chosen.empty() || chosen.count(block))) {
          x.x() += perturb.fraction * dx / cnx;
          x.y() += perturb.fraction * dy / cny;
        }
        coarse[static_cast<std::size_t>(J * (cnx + 1) + I)] = x;
      }

    const int rx = nx / cnx, ry = ny / cny;
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i) {
        const int I = std::min(i / rx, cnx - 1), J = std::min(j / ry, cny - 1);
        const double s = double(i - I * rx) / rx, t = double(j - J * ry) / ry;
        auto C = [&](int a, int b) { return coarse[static_cast<std::size_t>(b * (cnx + 1) + a)]; };
        m.vertices[m.vertex_id(i, j)] = (1 - s) * (1 - t) * C(I, J) + s * (1 - t) * C(I + 1, J) +
                                        s * t * C(I + 1, J + 1) + (1 - s) * t * C(I, J + 1);
      }
  }

  m.cells.resize(static_cast<std::size_t>(nx * ny));
  m.cell_edges.resize(m.cells.size());
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int c = m.cell_id(i, j);
      m.cells[c] = {m.vertex_id(i, j), m.vertex_id(i + 1, j), m.vertex_id(i + 1, j + 1),
                    m.vertex_id(i, j + 1)};
      m.cell_edges[c] = {m.hedge_id(i, j), m.vedge_id(i + 1, j), m.hedge_id(i, j + 1),
                         m.vedge_id(i, j)};
    }

  m.edges.resize(static_cast<std::size_t>(nx * (ny + 1) + (nx + 1) * ny));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i < nx; ++i) {
      Edge& e = m.edges[m.hedge_id(i, j)];
      e.v = {m.vertex_id(i, j), m.vertex_id(i + 1, j)};
      const int below = j > 0 ? m.cell_id(i, j - 1) : -1;
      const int above = j < ny ? m.cell_id(i, j) : -1;
      e.cells = below >= 0 && above >= 0 ? std::array<int, 2>{below, above}
                                         : std::array<int, 2>{std::max(below, above), -1};
      if (j == 0) e.side = int(Side::bottom);
      if (j == ny) e.side = int(Side::top);
    }
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      Edge& e = m.edges[m.vedge_id(i, j)];
      e.v = {m.vertex_id(i, j), m.vertex_id(i, j + 1)};
      const int west = i > 0 ? m.cell_id(i - 1, j) : -1;
      const int east = i < nx ? m.cell_id(i, j) : -1;
      e.cells = west >= 0 && east >= 0 ? std::array<int, 2>{west, east}
                                       : std::array<int, 2>{std::max(west, east), -1};
      if (i == 0) e.side = int(Side::left);
      if (i == nx) e.side = int(Side::right);
    }

  for (int c = 0; c < m.n_cells(); ++c) {
    const auto x = m.cell_vertices(c);
    for (const Vec2& xi : {Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)})
      if (jacobian_det(x, xi) <= 0.0) {
        std::ostringstream os;
        os << "build_grid: cell " << c << " is degenerate after perturbation";
        throw std::runtime_error(os.str());
      }
  }

  // normals: rotate the tangent, then orient away from cells[0]
  for (Edge& e : m.edges) {
    const Vec2 a = m.vertices[e.v[0]], b = m.vertices[e.v[1]];
    const Vec2 t = b - a;
    e.length = t.norm();
    Vec2 n(t.y(), -t.x());
    n /= e.length;
    Vec2 centre = Vec2::Zero();
    for (int k : m.cells[e.cells[0]]) centre += 0.25 * m.vertices[k];
    if (n.dot(0.5 * (a + b) - centre) < 0) n = -n;
    e.normal = n;
  }
  return m;
}

Decomposition partition(const Mesh& mesh, int px, int py, const BcMap& bc) {
  if (px < 1 || mesh.nx % px != 0) {
    std::ostringstream os;
    os << "partition: x direction, " << px << " subdomains do not divide " << mesh.nx << " cells";
    throw std::invalid_argument(os.str());
  }
  if (py < 1 || mesh.ny % py != 0) {
    std::ostringstream os;
    os << "partition: y direction, " << py << " subdomains do not divide " << mesh.ny << " cells";
    throw std::invalid_argument(os.str());
  }
  Decomposition d;
  d.px = px;
  d.py = py;
  d.bc = bc;
  const int sx = mesh.nx / px, sy = mesh.ny / py;
  d.subdomain_of_cell.resize(mesh.cells.size());
  d.cells_of_subdomain.assign(static_cast<std::size_t>(px * py), {});
  for (int j = 0; j < mesh.ny; ++j)
    for (int i = 0; i < mesh.nx; ++i) {
      const int s = (j / sy) * px + i / sx;
      d.subdomain_of_cell[mesh.cell_id(i, j)] = s;
    }
  for (int c = 0; c < mesh.n_cells(); ++c) d.cells_of_subdomain[d.subdomain_of_cell[c]].push_back(c);

  d.interface_of_edge.assign(mesh.edges.size(), -1);
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const Edge& ed = mesh.edges[e];
    if (ed.on_boundary()) continue;
    const int a = d.subdomain_of_cell[ed.cells[0]], b = d.subdomain_of_cell[ed.cells[1]];
    if (a == b) continue;
    InterfaceEdge ie;
    ie.edge = e;
    ie.i = std::min(a, b);
    ie.j = std::max(a, b);
    ie.normal = a < b ? ed.normal : Vec2(-ed.normal);
    d.interface_of_edge[e] = d.n_interface_edges();
    d.interface_edges.push_back(ie);
  }
  return d;
}

}  // namespace biot
