#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <vector>

namespace biot {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Sides of the unit square, numbered like the reference edges of a cell.
enum class Side : int { bottom = 0, right = 1, top = 2, left = 3 };

struct Edge {
  std::array<int, 2> v{};       ///< vertex ids, v[0] < v[1]
  std::array<int, 2> cells{};   ///< cells[0] < cells[1]; cells[1] == -1 on the boundary
  Vec2 normal = Vec2::Zero();   ///< unit, from cells[0] into cells[1] (outward on the boundary)
  double length = 0.0;
  int side = -1;                ///< Side of the unit square for boundary edges, else -1

  bool on_boundary() const { return cells[1] < 0; }
};

/// Structured quadrilateral grid of the unit square.
///
/// Vertex (i, j) has id j*(nx+1)+i, cell (i, j) has id j*nx+i and lists its
/// vertices counter-clockwise from the lower-left corner.  Horizontal edges
/// come first (id j*nx+i), then vertical ones.
struct Mesh {
  int nx = 0;
  int ny = 0;
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 4>> cells;
  /// Edge ids per cell in reference order: bottom, right, top, left.
  std::vector<std::array<int, 4>> cell_edges;
  std::vector<Edge> edges;

  int n_cells() const { return static_cast<int>(cells.size()); }
  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }
  int vertex_id(int i, int j) const { return j * (nx + 1) + i; }
  int cell_id(int i, int j) const { return j * nx + i; }
  int hedge_id(int i, int j) const { return j * nx + i; }
  int vedge_id(int i, int j) const { return nx * (ny + 1) + j * (nx + 1) + i; }
  std::array<Vec2, 4> cell_vertices(int c) const;
  double cell_area(int c) const;
};

/// Random interior displacement of grid vertices.
///
/// The displacement is drawn on a coarse grid of `coarse_nx` x `coarse_ny`
/// cells and carried to the fine grid by the bilinear map of each coarse
/// cell, so refined cells tend to parallelograms.  `coarse_nx = 0` means the
/// fine grid itself is perturbed.  Only coarse vertices strictly inside the
/// selected blocks of a `px` x `py` block layout move.
struct Perturbation {
  double fraction = 0.0;         ///< max shift per coordinate, in units of the coarse h
  std::uint64_t seed = 7;
  int coarse_nx = 0;
  int coarse_ny = 0;
  int px = 1;
  int py = 1;
  std::vector<int> blocks;       ///< block ids (j*px+i); empty selects all
};

Mesh build_grid(int nx, int ny, const Perturbation& perturb = {});

/// Determinant of the bilinear cell map at reference point xi.
double jacobian_det(const std::array<Vec2, 4>& x, const Vec2& xi);

/// Boundary condition type per side of the unit square.
enum class MechBc { displacement, traction };
enum class FlowBc { pressure, noflux };

struct SideBc {
  MechBc mech = MechBc::displacement;
  FlowBc flow = FlowBc::pressure;
};

using BcMap = std::array<SideBc, 4>;

struct InterfaceEdge {
  int edge = -1;
  int i = -1;               ///< lower subdomain
  int j = -1;               ///< higher subdomain
  Vec2 normal = Vec2::Zero();  ///< unit, from subdomain i into subdomain j
};

struct Decomposition {
  int px = 1;
  int py = 1;
  BcMap bc{};
  std::vector<int> subdomain_of_cell;
  std::vector<std::vector<int>> cells_of_subdomain;
  std::vector<InterfaceEdge> interface_edges;
  std::vector<int> interface_of_edge;   ///< index into interface_edges or -1

  int n_subdomains() const { return px * py; }
  int n_interface_edges() const { return static_cast<int>(interface_edges.size()); }
  SideBc edge_bc(const Edge& e) const { return bc[static_cast<std::size_t>(e.side)]; }
};

Decomposition partition(const Mesh& mesh, int px, int py, const BcMap& bc = {});

}  // namespace biot
