#pragma once

#include "biotdd/mesh.hpp"

#include <Eigen/Core>
#include <Eigen/LU>

#include <array>
#include <cmath>
#include <vector>

namespace biot {

template <class S>
using V2 = Eigen::Matrix<S, 2, 1>;
template <class S>
using M2 = Eigen::Matrix<S, 2, 2>;

/// Edge moment weights, orthonormal on [0, 1].
template <class S>
S legendre01(int m, const S& t) {
  return m == 0 ? S(1.0) : S(std::sqrt(3.0)) * (S(2.0) * t - S(1.0));
}

/// Reference-edge endpoints (local vertex numbers) and parametrisation.
inline constexpr std::array<std::array<int, 2>, 4> kRefEdgeVertices{{{0, 1}, {1, 2}, {3, 2}, {0, 3}}};

template <class S>
V2<S> ref_edge_point(int k, const S& t) {
  switch (k) {
    case 0: return {t, S(0.0)};
    case 1: return {S(1.0), t};
    case 2: return {t, S(1.0)};
    default: return {S(0.0), t};
  }
}

inline Vec2 ref_edge_normal(int k) {
  static const std::array<Vec2, 4> n{Vec2(0, -1), Vec2(1, 0), Vec2(0, 1), Vec2(-1, 0)};
  return n[static_cast<std::size_t>(k)];
}

/// BDM1 on the reference square.  Local DOF 2k+m is the moment of the
/// outward normal component on reference edge k against legendre01(m).
class RefBdm1 {
 public:
  static const RefBdm1& get();

  /// Spanning set: (1,0) (x,0) (y,0) (0,1) (0,x) (0,y) (x^2,-2xy) (2xy,-y^2).
  template <class S>
  static V2<S> prime(int j, const V2<S>& p) {
    const S& x = p.x();
    const S& y = p.y();
    switch (j) {
      case 0: return {S(1.0), S(0.0)};
      case 1: return {x, S(0.0)};
      case 2: return {y, S(0.0)};
      case 3: return {S(0.0), S(1.0)};
      case 4: return {S(0.0), x};
      case 5: return {S(0.0), y};
      case 6: return {x * x, S(-2.0) * x * y};
      default: return {S(2.0) * x * y, -(y * y)};
    }
  }

  template <class S>
  V2<S> value(int i, const V2<S>& p) const {
    V2<S> v(S(0.0), S(0.0));
    for (int j = 0; j < 8; ++j) v += S(coef_(j, i)) * prime<S>(j, p);
    return v;
  }

  /// Reference divergence; constant on the square.
  double div(int i) const { return coef_(1, i) + coef_(5, i); }

  const Eigen::Matrix<double, 8, 8>& coef() const { return coef_; }

 private:
  RefBdm1();
  Eigen::Matrix<double, 8, 8> coef_;
};

/// Bilinear map of the reference square onto a convex quadrilateral.
template <class S>
struct CellMap {
  std::array<V2<S>, 4> x;

  V2<S> operator()(const V2<S>& xi) const {
    const S s = xi.x(), t = xi.y();
    return (S(1.0) - s) * (S(1.0) - t) * x[0] + s * (S(1.0) - t) * x[1] + s * t * x[2] +
           (S(1.0) - s) * t * x[3];
  }
  M2<S> jacobian(const V2<S>& xi) const {
    const S s = xi.x(), t = xi.y();
    M2<S> J;
    J.col(0) = (S(1.0) - t) * (x[1] - x[0]) + t * (x[2] - x[3]);
    J.col(1) = (S(1.0) - s) * (x[3] - x[0]) + s * (x[2] - x[1]);
    return J;
  }
};

inline CellMap<double> cell_map(const Mesh& mesh, int c) {
  const auto v = mesh.cell_vertices(c);
  return CellMap<double>{{v[0], v[1], v[2], v[3]}};
}

/// Contravariant Piola values of the 8 BDM1 shape functions at one point.
struct HdivPoint {
  Eigen::Matrix<double, 2, 8> phi;
  Eigen::Matrix<double, 1, 8> div;
  double det = 0.0;
  Vec2 x = Vec2::Zero();
};

/// phi = J phi_hat / det J, div phi = div_hat phi_hat / det J.
/// Throws if det J <= 0; `cell` is only used for the diagnostic.
template <class S>
void piola(const CellMap<S>& map, const V2<S>& xi, int i, V2<S>& value, S& divergence, int cell = -1);

HdivPoint map_hdiv_basis(const CellMap<double>& map, const Vec2& xi, int cell = -1);

enum class EdgeKind { interior, boundary, interface };

/// Local numbering of one subdomain's five fields.
///
/// Unknown layout: stress row 0, stress row 1 (n_z each), displacement
/// component 0, component 1 (n_cells each), rotation, velocity, pressure.
/// Velocity and stress-row DOF 2e+m belongs to local edge e, moment m.
struct SubdomainDofs {
  int id = 0;
  std::vector<int> cells;                 ///< global cell ids, ascending
  std::vector<int> edges;                 ///< global edge ids, ascending
  std::vector<int> local_edge;            ///< global edge -> local edge or -1
  std::vector<EdgeKind> kind;             ///< per local edge
  std::vector<int> side;                  ///< per local edge, Side on the outer boundary else -1
  std::vector<double> normal_sign;        ///< orientation of the DOF normal relative to mesh Edge::normal
  std::vector<std::array<int, 4>> cell_edges;    ///< local edge per reference edge
  std::vector<std::array<double, 8>> cell_sign;  ///< shape function -> DOF sign
  std::vector<int> interface_edges;       ///< local edges on the interface, by interface index
  std::vector<int> interface_index;       ///< parallel to interface_edges

  int n_cells() const { return static_cast<int>(cells.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }
  int n_z() const { return 2 * n_edges(); }
  int n_sigma() const { return 2 * n_z(); }
  int n_u() const { return 2 * n_cells(); }
  int n_gamma() const { return n_cells(); }
  int n_p() const { return n_cells(); }
  int n_total() const { return n_sigma() + n_u() + n_gamma() + n_z() + n_p(); }

  int sigma(int row, int zdof) const { return row * n_z() + zdof; }
  int u(int comp, int lc) const { return n_sigma() + comp * n_cells() + lc; }
  int gamma(int lc) const { return n_sigma() + n_u() + lc; }
  int z(int zdof) const { return n_sigma() + n_u() + n_gamma() + zdof; }
  int p(int lc) const { return n_sigma() + n_u() + n_gamma() + n_z() + lc; }

  /// Essential normal-trace DOFs (velocity-space numbering).
  std::vector<int> traction_zdofs;   ///< on outer traction sides, apply to both stress rows
  std::vector<int> noflux_zdofs;     ///< on outer no-flux sides
};

std::vector<SubdomainDofs> build_dofmap(const Mesh& mesh, const Decomposition& dec);

// ---------------------------------------------------------------------------

[[noreturn]] void throw_nonpositive_jacobian(int cell);

template <class S>
void piola(const CellMap<S>& map, const V2<S>& xi, int i, V2<S>& value, S& divergence, int cell) {
  const M2<S> J = map.jacobian(xi);
  const S det = J.determinant();
  if (!(det > S(0.0))) throw_nonpositive_jacobian(cell);
  const RefBdm1& ref = RefBdm1::get();
  value = J * ref.value<S>(i, xi) / det;
  divergence = S(ref.div(i)) / det;
}

}  // namespace biot
