#include "biotdd/mesh.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace biot;

TEST(Grid, SingleCellCounts) {
  const Mesh m = build_grid(1, 1);
  EXPECT_EQ(m.n_cells(), 1);
  EXPECT_EQ(m.n_vertices(), 4);
  EXPECT_EQ(m.n_edges(), 4);
  for (const Edge& e : m.edges) EXPECT_TRUE(e.on_boundary());
}

TEST(Grid, FourByFourCounts) {
  const Mesh m = build_grid(4, 4);
  EXPECT_EQ(m.n_cells(), 16);
  EXPECT_EQ(m.n_vertices(), 25);
  EXPECT_EQ(m.n_edges(), 40);
  int boundary = 0;
  for (const Edge& e : m.edges) boundary += e.on_boundary();
  EXPECT_EQ(boundary, 16);
}

TEST(Grid, EdgeAdjacencyAndNormals) {
  Perturbation p;
  p.fraction = 0.25;
  const Mesh m = build_grid(8, 8, p);
  std::vector<int> uses(m.edges.size(), 0);
  for (const auto& ce : m.cell_edges)
    for (int e : ce) ++uses[e];
  for (int e = 0; e < m.n_edges(); ++e) {
    const Edge& E = m.edges[e];
    EXPECT_EQ(uses[e], E.on_boundary() ? 1 : 2);
    EXPECT_NEAR(E.normal.norm(), 1.0, 1e-14);
    const Vec2 t = m.vertices[E.v[1]] - m.vertices[E.v[0]];
    EXPECT_NEAR(E.normal.dot(t), 0.0, 1e-14);
    EXPECT_NEAR(E.length, t.norm(), 1e-15);
    // normal leaves cells[0]
    Vec2 c = Vec2::Zero();
    for (int v : m.cells[E.cells[0]]) c += 0.25 * m.vertices[v];
    EXPECT_GT(E.normal.dot(0.5 * (m.vertices[E.v[0]] + m.vertices[E.v[1]]) - c), 0.0);
    if (!E.on_boundary()) EXPECT_LT(E.cells[0], E.cells[1]);
  }
}

TEST(Grid, UnperturbedVerticesAreUniform) {
  const Mesh m = build_grid(4, 2);
  EXPECT_DOUBLE_EQ(m.vertices[m.vertex_id(3, 1)].x(), 0.75);
  EXPECT_DOUBLE_EQ(m.vertices[m.vertex_id(3, 1)].y(), 0.5);
  EXPECT_DOUBLE_EQ(m.cell_area(0), 0.125);
}

TEST(Perturbation, SelectedBlocksOnlyAndBoundariesFixed) {
  Perturbation p;
  p.fraction = 0.25;
  p.seed = 7;
  p.coarse_nx = p.coarse_ny = 4;
  p.px = p.py = 2;
  p.blocks = {0, 3};
  const Mesh m = build_grid(64, 64, p);
  const Mesh u = build_grid(64, 64);
  const Decomposition d = partition(m, 2, 2);
  for (int c = 0; c < m.n_cells(); ++c) {
    const auto x = m.cell_vertices(c);
    for (double s : {0.0, 0.5, 1.0})
      for (double t : {0.0, 0.5, 1.0}) EXPECT_GT(jacobian_det(x, Vec2(s, t)), 0.0);
  }
  int moved = 0;
  for (int j = 0; j <= 64; ++j)
    for (int i = 0; i <= 64; ++i) {
      const Vec2 a = m.vertices[m.vertex_id(i, j)], b = u.vertices[u.vertex_id(i, j)];
      const bool on_line = i == 0 || j == 0 || i == 64 || j == 64 || i == 32 || j == 32;
      if (on_line) {
        EXPECT_EQ(a, b) << i << "," << j;
        continue;
      }
      const bool selected = (i < 32 && j < 32) || (i > 32 && j > 32);
      if (!selected) EXPECT_EQ(a, b);
      moved += (a != b);
    }
  EXPECT_GT(moved, 0);
  // interface edges are straight pieces of the lines x = 1/2, y = 1/2
  for (const InterfaceEdge& ie : d.interface_edges) {
    const Edge& e = m.edges[ie.edge];
    const Vec2 a = m.vertices[e.v[0]], b = m.vertices[e.v[1]];
    EXPECT_TRUE((a.x() == 0.5 && b.x() == 0.5) || (a.y() == 0.5 && b.y() == 0.5));
  }
}

TEST(Perturbation, SeedReproducesCoordinates) {
  Perturbation p;
  p.fraction = 0.2;
  p.seed = 42;
  const Mesh a = build_grid(16, 16, p), b = build_grid(16, 16, p);
  for (int v = 0; v < a.n_vertices(); ++v) EXPECT_EQ(a.vertices[v], b.vertices[v]);
  p.seed = 43;
  const Mesh c = build_grid(16, 16, p);
  bool differs = false;
  for (int v = 0; v < a.n_vertices(); ++v) differs |= a.vertices[v] != c.vertices[v];
  EXPECT_TRUE(differs);
}

TEST(Perturbation, DisplacementBounded) {
  Perturbation p;
  p.fraction = 0.3;
  const Mesh m = build_grid(10, 10, p), u = build_grid(10, 10);
  for (int v = 0; v < m.n_vertices(); ++v) {
    EXPECT_LE(std::abs(m.vertices[v].x() - u.vertices[v].x()), 0.3 / 10 + 1e-15);
    EXPECT_LE(std::abs(m.vertices[v].y() - u.vertices[v].y()), 0.3 / 10 + 1e-15);
  }
}

TEST(Perturbation, RejectsBadInput) {
  Perturbation p;
  p.fraction = 0.5;
  EXPECT_THROW(build_grid(4, 4, p), std::invalid_argument);
  p.fraction = 0.1;
  p.coarse_nx = p.coarse_ny = 3;
  EXPECT_THROW(build_grid(4, 4, p), std::invalid_argument);
  EXPECT_THROW(build_grid(0, 4), std::invalid_argument);
}

TEST(Partition, TwoByTwoOnFourByFour) {
  const Mesh m = build_grid(4, 4);
  const Decomposition d = partition(m, 2, 2);
  EXPECT_EQ(d.n_subdomains(), 4);
  for (const auto& cells : d.cells_of_subdomain) EXPECT_EQ(cells.size(), 4u);
  EXPECT_EQ(d.n_interface_edges(), 8);
  int vertical = 0, horizontal = 0;
  for (const InterfaceEdge& ie : d.interface_edges) {
    EXPECT_LT(ie.i, ie.j);
    const Edge& e = m.edges[ie.edge];
    const Vec2 mid = 0.5 * (m.vertices[e.v[0]] + m.vertices[e.v[1]]);
    vertical += mid.x() == 0.5;
    horizontal += mid.y() == 0.5;
    // normal points from subdomain i into subdomain j
    const int ci = d.subdomain_of_cell[e.cells[0]] == ie.i ? e.cells[0] : e.cells[1];
    Vec2 c = Vec2::Zero();
    for (int v : m.cells[ci]) c += 0.25 * m.vertices[v];
    EXPECT_GT(ie.normal.dot(mid - c), 0.0);
    EXPECT_EQ(d.interface_of_edge[ie.edge], &ie - d.interface_edges.data());
  }
  EXPECT_EQ(vertical, 4);
  EXPECT_EQ(horizontal, 4);
}

TEST(Partition, TilesTheDomain) {
  const Mesh m = build_grid(12, 12);
  const Decomposition d = partition(m, 3, 2);
  std::set<int> all;
  std::size_t total = 0;
  for (const auto& cells : d.cells_of_subdomain) {
    total += cells.size();
    all.insert(cells.begin(), cells.end());
    EXPECT_EQ(cells.size(), 24u);
  }
  EXPECT_EQ(total, static_cast<std::size_t>(m.n_cells()));
  EXPECT_EQ(all.size(), static_cast<std::size_t>(m.n_cells()));
  for (int c = 0; c < m.n_cells(); ++c)
    EXPECT_NE(std::find(d.cells_of_subdomain[d.subdomain_of_cell[c]].begin(),
                        d.cells_of_subdomain[d.subdomain_of_cell[c]].end(), c),
              d.cells_of_subdomain[d.subdomain_of_cell[c]].end());
}

TEST(Partition, SingleSubdomainHasNoInterface) {
  const Decomposition d = partition(build_grid(8, 8), 1, 1);
  EXPECT_EQ(d.n_subdomains(), 1);
  EXPECT_EQ(d.n_interface_edges(), 0);
}

TEST(Partition, Example3Layout) {
  const Decomposition d = partition(build_grid(128, 128), 4, 4);
  EXPECT_EQ(d.n_subdomains(), 16);
  for (const auto& cells : d.cells_of_subdomain) EXPECT_EQ(cells.size(), 32u * 32u);
  EXPECT_EQ(d.n_interface_edges(), 2 * 3 * 128);
}

TEST(Partition, NonDivisibleNamesDirection) {
  const Mesh m = build_grid(6, 4);
  try {
    partition(m, 4, 2);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("x direction"), std::string::npos);
  }
  try {
    partition(m, 2, 3);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("y direction"), std::string::npos);
  }
}

TEST(Partition, BoundaryTagsFollowTheMap) {
  BcMap bc;
  bc[static_cast<int>(Side::left)] = {MechBc::traction, FlowBc::noflux};
  const Mesh m = build_grid(4, 4);
  const Decomposition d = partition(m, 2, 2, bc);
  for (const Edge& e : m.edges) {
    if (!e.on_boundary()) continue;
    const SideBc s = d.edge_bc(e);
    const bool left = e.side == static_cast<int>(Side::left);
    EXPECT_EQ(s.mech == MechBc::traction, left);
    EXPECT_EQ(s.flow == FlowBc::noflux, left);
  }
}
