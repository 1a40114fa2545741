#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <string>
#include <vector>

namespace geoflow {

/// Coefficients of an element of a metric Lie algebra in its basis.
using AlgebraVector = Eigen::VectorXd;

/// One structure constant: [e_i, e_j] contains coefficient `c` on e_k.
struct StructureEntry {
  int i = 0;
  int j = 0;
  int k = 0;
  double c = 0.0;
};

/// A finite-dimensional anticommutative algebra with a positive-definite inner product.
///
/// The structure table is stored in fully expanded antisymmetric form. The
/// Cholesky factor of the metric is computed once at construction and reused
/// by every operation that needs G^{-1}. Instances are immutable.
class MetricLieAlgebra {
 public:
  /// `entries` may list each pair once (either order) or both orders; entries
  /// listed for both (i,j) and (j,i) must be exact negatives. Repeated entries
  /// for the same (i,j,k) are summed.
  ///
  /// Throws InvalidArgument on a non-antisymmetric table, an out-of-range
  /// index, a non-symmetric metric, or a metric that is not positive definite
  /// (any Cholesky pivot below 1e-12 times the largest diagonal entry).
  MetricLieAlgebra(int dim, std::vector<StructureEntry> entries, Eigen::MatrixXd metric,
                   std::string label, bool jacobi_exact);

  int dim() const noexcept { return dim_; }
  const std::string& label() const noexcept { return label_; }
  bool jacobi_exact() const noexcept { return jacobi_exact_; }
  const Eigen::MatrixXd& metric() const noexcept { return metric_; }
  bool metric_is_diagonal() const noexcept { return diagonal_; }

  /// Expanded antisymmetric table, one entry per nonzero c^k_ij with i != j.
  const std::vector<StructureEntry>& entries() const noexcept { return entries_; }

  /// Entries with i < j only (the canonical serialization form).
  std::vector<StructureEntry> canonical_entries() const;

  /// Lower-triangular Cholesky factor L with G = L L^T.
  Eigen::MatrixXd cholesky_factor() const;

  /// Solves G x = y.
  AlgebraVector solve_metric(const AlgebraVector& y) const;

  /// Throws DimensionMismatch unless `v` has length dim().
  void check_conforms(const AlgebraVector& v) const;

  /// (ad_u)^T y, i.e. the vector with components sum_{i,k} u_i c^k_ij y_k.
  AlgebraVector ad_transpose(const AlgebraVector& u, const AlgebraVector& y) const;

  /// Dense matrix of ad_u (column j is [u, e_j]).
  Eigen::MatrixXd ad_matrix(const AlgebraVector& u) const;

 private:
  int dim_;
  std::vector<StructureEntry> entries_;
  Eigen::MatrixXd metric_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd inverse_diagonal_;
  bool diagonal_ = false;
  std::string label_;
  bool jacobi_exact_;
};

/// Standard basis vector e_i of the algebra.
AlgebraVector basis_vector(const MetricLieAlgebra& algebra, int i);

/// [u, v] = sum_ij u_i v_j c^k_ij e_k.
AlgebraVector bracket(const MetricLieAlgebra& algebra, const AlgebraVector& u,
                      const AlgebraVector& v);

/// G(u, v) = u^T G v.
double inner(const MetricLieAlgebra& algebra, const AlgebraVector& u, const AlgebraVector& v);

/// The metric norm sqrt(G(u, u)).
double norm(const MetricLieAlgebra& algebra, const AlgebraVector& u);

/// Deformation operator applied to v: the unique vector with
/// G(ũv, w) = G([u,v], w) + G(v, [u,w]) for all w. Zero when G is ad-invariant.
AlgebraVector deformation(const MetricLieAlgebra& algebra, const AlgebraVector& u,
                          const AlgebraVector& v);

/// Levi-Civita derivative of the left-invariant metric at the identity,
/// D_u v = ½([u,v] − ũv − ṽu).
AlgebraVector covariant_derivative(const MetricLieAlgebra& algebra, const AlgebraVector& u,
                                   const AlgebraVector& v);

/// Right-hand side of the algebraic geodesic equation dv/dt = −D_v v = ṽv.
AlgebraVector geodesic_rhs(const MetricLieAlgebra& algebra, const AlgebraVector& v);

/// Curvature biquadratic
/// R(u,v) = ¼|[u,v] + ṽu − ũv|² + G(ũv, ṽu) − G(ũu, ṽv).
double curvature_biquadratic(const MetricLieAlgebra& algebra, const AlgebraVector& u,
                             const AlgebraVector& v);

/// Squared area of the parallelogram spanned by u and v: G(u,u)G(v,v) − G(u,v)².
double gram_determinant(const MetricLieAlgebra& algebra, const AlgebraVector& u,
                        const AlgebraVector& v);

/// R(u,v) divided by the Gram determinant. Throws DegeneratePlane when the
/// Gram determinant is at most 1e-12 |u|²|v|².
double sectional_curvature(const MetricLieAlgebra& algebra, const AlgebraVector& u,
                           const AlgebraVector& v);

/// Full Riemann tensor r(u,v,w,x) recovered from the biquadratic by polarization.
/// The mixed s-t derivative of the biquadratic is read off exactly with the
/// four-point stencil at s,t = ±1.
double riemann_polarize(const MetricLieAlgebra& algebra, const AlgebraVector& u,
                        const AlgebraVector& v, const AlgebraVector& w, const AlgebraVector& x);

/// G-orthonormal basis built by modified Gram-Schmidt on e_0, e_1, ... in order.
std::vector<AlgebraVector> orthonormal_basis(const MetricLieAlgebra& algebra);

/// Ricci quadratic form r(u) = sum_i R(u, f_i) over a G-orthonormal basis.
double ricci_quadratic(const MetricLieAlgebra& algebra, const AlgebraVector& u);

/// Jacobiator [u,[v,w]] + [v,[w,u]] + [w,[u,v]].
AlgebraVector jacobiator(const MetricLieAlgebra& algebra, const AlgebraVector& u,
                         const AlgebraVector& v, const AlgebraVector& w);

}  // namespace geoflow
