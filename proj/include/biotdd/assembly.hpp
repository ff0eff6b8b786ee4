#pragma once

#include "biotdd/mesh.hpp"
#include "biotdd/quadrature.hpp"
#include "biotdd/spaces.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <array>
#include <functional>
#include <vector>

namespace biot {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

struct CellMaterial {
  double mu = 0.5;
  double lambda = 0.0;
  Mat2 K = Mat2::Identity();
  double c0 = 1.0;
  double alpha = 1.0;
};

/// Per global cell.
using MaterialField = std::vector<CellMaterial>;

MaterialField uniform_material(int n_cells, const CellMaterial& m);

/// Throws naming the first cell and field that violate mu > 0, lambda >= 0,
/// K SPD, c0 >= 0, 0 < alpha <= 1.
void validate_material(const MaterialField& mat, int n_cells);

/// Compliance A tau = (tau - lambda/(2 mu + 2 lambda) tr(tau) I) / (2 mu).
Mat2 compliance(const Mat2& tau, double mu, double lambda);

struct QuadOptions {
  int cell_points = 3;   ///< Gauss points per direction on cells
  int edge_points = 3;   ///< Gauss points on edges
};

/// Subdomain bilinear forms, Delta t independent.
struct Blocks {
  SpMat A_ss;   ///< (A sigma, tau), 2nz x 2nz
  SpMat A_sp;   ///< (A alpha p I, tau), 2nz x nc
  SpMat B_u;    ///< (v, div tau), 2nc x 2nz
  SpMat B_g;    ///< (xi, tau), nc x 2nz
  SpMat M_z;    ///< (K^-1 z, q), nz x nz
  SpMat M_z0;   ///< (z, q), nz x nz
  SpMat B_p;    ///< (w, div q), nc x nz
  Vec M_p;      ///< c0 (p, w), diagonal
  Vec S_pp;     ///< (A alpha p I, alpha w I), diagonal
  Vec area;     ///< cell areas
};

Blocks assemble_blocks(const Mesh& mesh, const SubdomainDofs& dofs, const MaterialField& mat,
                       const QuadOptions& q = {});

using ScalarFn = std::function<double(const Vec2&, double)>;
using VectorFn = std::function<Vec2(const Vec2&, double)>;

/// Integral of f over each subdomain cell.
Vec cell_integrals(const Mesh& mesh, const SubdomainDofs& dofs, const ScalarFn& f, double t, int points);
/// Component-major integrals of a vector field (length 2 n_cells).
Vec cell_integrals(const Mesh& mesh, const SubdomainDofs& dofs, const VectorFn& f, double t, int points);

/// Moments int_0^1 f(x(t)) l_m(t) dt along a mesh edge, t running from v[0] to v[1].
std::array<double, 2> edge_moments(const Mesh& mesh, int edge, const std::function<double(const Vec2&)>& f,
                                   int points);

/// Boundary data functionals, in velocity-DOF numbering (length n_z):
/// <g, q.n> on outer edges of the requested kind.  For displacement data the
/// result holds both stress rows (length 2 n_z).
Vec dirichlet_pressure_functional(const Mesh& mesh, const Decomposition& dec, const SubdomainDofs& dofs,
                                  const ScalarFn& gp, double t, int points);
Vec dirichlet_displacement_functional(const Mesh& mesh, const Decomposition& dec, const SubdomainDofs& dofs,
                                      const VectorFn& gu, double t, int points);

/// Prescribed normal-trace DOF values on traction sides (stress rows, length
/// 2 n_z, only traction DOFs meaningful) for sigma n = traction(x, t, n).
using TractionFn = std::function<Vec2(const Vec2&, double, const Vec2&)>;
Vec traction_values(const Mesh& mesh, const SubdomainDofs& dofs, const TractionFn& tr, double t, int points);
/// Prescribed z.n DOF values on no-flux sides (length n_z).
Vec flux_values(const Mesh& mesh, const SubdomainDofs& dofs, const ScalarFn& flux, double t, int points);

/// Signed coefficients of the 8 local shape functions of cell lc for an
/// H(div) field stored in velocity-DOF numbering starting at `offset`.
Eigen::Matrix<double, 8, 1> cell_coefficients(const SubdomainDofs& dofs, int lc, const Vec& x, int offset);

}  // namespace biot
