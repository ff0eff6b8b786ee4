#pragma once

#include "biotdd/assembly.hpp"
#include "biotdd/problem.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseLU>

#include <array>
#include <memory>

namespace biot {

/// Which subdomain system: coupled Biot in rate form, elasticity only, Darcy only.
enum class Variant { biot = 0, elasticity = 1, darcy = 2 };

const char* to_string(Variant v);

/// Interface slots per edge: two moments of each displacement(-rate) component
/// and/or two pressure moments.
int interface_slots(Variant v);

/// Field values of one subdomain in its local numbering; unused parts stay empty.
struct Fields {
  Vec sigma;   ///< 2 n_z, row-major stress rows
  Vec u;       ///< 2 n_cells, component-major
  Vec gamma;   ///< n_cells
  Vec z;       ///< n_z
  Vec p;       ///< n_cells

  static Fields zeros(const SubdomainDofs& d);
};

/// Assembled and factorized subdomain matrix.
///
/// biot rows/cols follow SubdomainDofs; elasticity keeps the (sigma, u,
/// gamma) prefix; darcy is (z, p).  Rows of essential normal-trace DOFs are
/// replaced by identity rows.
class SubdomainOperator {
 public:
  SubdomainOperator(const SubdomainDofs& dofs, const Blocks& blocks, Variant v, double dt);

  Vec solve(const Vec& rhs) const;
  /// Several right-hand sides at once.
  Eigen::MatrixXd solve_many(const Eigen::MatrixXd& rhs) const;
  const SpMat& matrix() const { return K_; }
  Variant variant() const { return variant_; }
  double dt() const { return dt_; }
  int size() const { return static_cast<int>(K_.rows()); }

 private:
  Variant variant_;
  double dt_;
  SpMat K_;
  Eigen::SparseLU<SpMat> lu_;
};

class Subdomain {
 public:
  Subdomain(const Mesh& mesh, const Decomposition& dec, SubdomainDofs dofs, const MaterialField& mat,
            const QuadOptions& q = {});

  const SubdomainDofs& dofs() const { return dofs_; }
  const Blocks& blocks() const { return blocks_; }
  const Mesh& mesh() const { return *mesh_; }
  const QuadOptions& quad() const { return quad_; }
  int id() const { return dofs_.id; }

  /// Builds and factorizes the variant's matrix (once per variant and dt).
  void factorize(Variant v, double dt);
  bool factorized(Variant v) const { return ops_[static_cast<int>(v)] != nullptr; }
  const SubdomainOperator& op(Variant v) const;

  int n_interface_edges() const { return static_cast<int>(dofs_.interface_edges.size()); }
  int n_interface_dofs(Variant v) const { return n_interface_edges() * interface_slots(v); }

  /// Right-hand side carrying interface data only.  `lam` is ordered by
  /// (local interface edge, slot) in the L2-orthonormal edge basis.  The
  /// displacement slots are multiplied by `u_weight`.
  Vec interface_rhs(Variant v, const Vec& lam, double u_weight = 1.0) const;

  /// Interface output of a solution: +sigma n moments in the displacement
  /// slots and -z.n moments in the pressure slots, same basis as `lam`.
  Vec traces(Variant v, const Vec& sol) const;

  /// Dense local interface response: traces(solve(interface_rhs(e_k))).
  Eigen::MatrixXd response(Variant v, double u_weight = 1.0) const;

  /// Rate-form Biot data: increments of displacement data, sources at t_new
  /// and the previous state (sigma^n, p^n).
  Vec biot_data_rhs(const ProblemData& data, double t_old, double t_new, const Fields& prev) const;
  /// Elasticity data with a given pressure as coupling term.
  Vec elasticity_data_rhs(const ProblemData& data, double t, const Vec& p) const;
  /// Darcy data with previous pressure and the stress increment feeding the
  /// coupling term -alpha (A dsigma, w I).
  Vec darcy_data_rhs(const ProblemData& data, double t, const Vec& p_old, const Vec& dsigma) const;

  /// Splits a solution of the variant into fields.
  Fields unpack(Variant v, const Vec& sol) const;

 private:
  const Mesh* mesh_;
  const Decomposition* dec_;
  SubdomainDofs dofs_;
  QuadOptions quad_;
  Blocks blocks_;
  std::array<std::unique_ptr<SubdomainOperator>, 3> ops_;
};

}  // namespace biot
