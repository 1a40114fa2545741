#include "geoflow/metric_lie_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "geoflow/errors.hpp"

namespace geoflow {

namespace {

constexpr double kPivotTolerance = 1e-12;
constexpr double kDegeneratePlaneTolerance = 1e-12;

std::vector<StructureEntry> expand_antisymmetric(int dim, const std::vector<StructureEntry>& raw) {
  using Key = std::tuple<int, int, int>;
  std::map<Key, double> table;
  for (const auto& e : raw) {
    if (e.i < 0 || e.j < 0 || e.k < 0 || e.i >= dim || e.j >= dim || e.k >= dim) {
      throw InvalidArgument("structure constant index out of range");
    }
    if (!std::isfinite(e.c)) throw InvalidArgument("structure constant is not finite");
    if (e.c == 0.0) continue;
    if (e.i == e.j) throw InvalidArgument("structure constant c^k_ii must vanish");
    table[{e.i, e.j, e.k}] += e.c;
  }

  std::map<Key, double> full;
  for (const auto& [key, c] : table) {
    const auto [i, j, k] = key;
    const auto mirror = table.find({j, i, k});
    if (mirror != table.end()) {
      const double scale = std::max(std::abs(c), std::abs(mirror->second));
      if (std::abs(c + mirror->second) > 1e-14 * scale) {
        throw InvalidArgument("structure constants are not antisymmetric");
      }
    }
    full[{i, j, k}] = c;
    full[{j, i, k}] = -c;
  }

  std::vector<StructureEntry> out;
  out.reserve(full.size());
  for (const auto& [key, c] : full) {
    const auto [i, j, k] = key;
    out.push_back({i, j, k, c});
  }
  return out;
}

}  // namespace

MetricLieAlgebra::MetricLieAlgebra(int dim, std::vector<StructureEntry> entries,
                                   Eigen::MatrixXd metric, std::string label, bool jacobi_exact)
    : dim_(dim), metric_(std::move(metric)), label_(std::move(label)), jacobi_exact_(jacobi_exact) {
  if (dim_ <= 0) throw InvalidArgument("algebra dimension must be positive");
  if (metric_.rows() != dim_ || metric_.cols() != dim_) {
    throw DimensionMismatch(static_cast<std::size_t>(dim_), static_cast<std::size_t>(metric_.rows()));
  }
  if (!metric_.allFinite()) throw InvalidArgument("metric has non-finite entries");
  const double max_abs = metric_.cwiseAbs().maxCoeff();
  if (!(metric_ - metric_.transpose()).isZero(1e-14 * std::max(1.0, max_abs))) {
    throw InvalidArgument("metric is not symmetric");
  }

  entries_ = expand_antisymmetric(dim_, entries);

  const double max_diag = metric_.diagonal().maxCoeff();
  if (!(max_diag > 0.0)) throw InvalidArgument("metric is not positive definite");
  llt_.compute(metric_);
  if (llt_.info() != Eigen::Success) throw InvalidArgument("metric is not positive definite");
  const Eigen::VectorXd pivots = Eigen::MatrixXd(llt_.matrixL()).diagonal().array().square();
  if (pivots.minCoeff() < kPivotTolerance * max_diag) {
    throw InvalidArgument("metric is numerically singular");
  }

  Eigen::MatrixXd off = metric_;
  off.diagonal().setZero();
  diagonal_ = off.isZero(0.0);
  if (diagonal_) inverse_diagonal_ = metric_.diagonal().cwiseInverse();
}

std::vector<StructureEntry> MetricLieAlgebra::canonical_entries() const {
  std::vector<StructureEntry> out;
  for (const auto& e : entries_) {
    if (e.i < e.j) out.push_back(e);
  }
  return out;
}

Eigen::MatrixXd MetricLieAlgebra::cholesky_factor() const { return llt_.matrixL(); }

AlgebraVector MetricLieAlgebra::solve_metric(const AlgebraVector& y) const {
  check_conforms(y);
  if (diagonal_) return y.cwiseProduct(inverse_diagonal_);
  return llt_.solve(y);
}

void MetricLieAlgebra::check_conforms(const AlgebraVector& v) const {
  if (v.size() != dim_) {
    throw DimensionMismatch(static_cast<std::size_t>(dim_), static_cast<std::size_t>(v.size()));
  }
}

AlgebraVector MetricLieAlgebra::ad_transpose(const AlgebraVector& u, const AlgebraVector& y) const {
  check_conforms(u);
  check_conforms(y);
  AlgebraVector out = AlgebraVector::Zero(dim_);
  for (const auto& e : entries_) out[e.j] += u[e.i] * e.c * y[e.k];
  return out;
}

Eigen::MatrixXd MetricLieAlgebra::ad_matrix(const AlgebraVector& u) const {
  check_conforms(u);
  Eigen::MatrixXd ad = Eigen::MatrixXd::Zero(dim_, dim_);
  for (const auto& e : entries_) ad(e.k, e.j) += u[e.i] * e.c;
  return ad;
}

AlgebraVector basis_vector(const MetricLieAlgebra& algebra, int i) {
  if (i < 0 || i >= algebra.dim()) throw InvalidArgument("basis index out of range");
  return AlgebraVector::Unit(algebra.dim(), i);
}

AlgebraVector bracket(const MetricLieAlgebra& algebra, const AlgebraVector& u,
                      const AlgebraVector& v) {
  algebra.check_conforms(u);
  algebra.check_conforms(v);
  AlgebraVector out = AlgebraVector::Zero(algebra.dim());
  for (const auto& e : algebra.entries()) out[e.k] += u[e.i] * v[e.j] * e.c;
  return out;
}

double inner(const MetricLieAlgebra& algebra, const AlgebraVector& u, const AlgebraVector& v) {
  algebra.check_conforms(u);
  algebra.check_conforms(v);
  if (algebra.metric_is_diagonal()) {
    return (u.array() * algebra.metric().diagonal().array() * v.array()).sum();
  }
  return u.dot(algebra.metric() * v);
}

double norm(const MetricLieAlgebra& algebra, const AlgebraVector& u) {
  return std::sqrt(inner(algebra, u, u));
}

namespace {

AlgebraVector metric_apply(const MetricLieAlgebra& algebra, const AlgebraVector& v) {
  if (algebra.metric_is_diagonal()) return algebra.metric().diagonal().cwiseProduct(v);
  return algebra.metric() * v;
}

}  // namespace

AlgebraVector deformation(const MetricLieAlgebra& algebra, const AlgebraVector& u,
                          const AlgebraVector& v) {
  AlgebraVector out = bracket(algebra, u, v);
  out += algebra.solve_metric(algebra.ad_transpose(u, metric_apply(algebra, v)));
  return out;
}

AlgebraVector covariant_derivative(const MetricLieAlgebra& algebra, const AlgebraVector& u,
                                   const AlgebraVector& v) {
  return 0.5 * (bracket(algebra, u, v) - deformation(algebra, u, v) - deformation(algebra, v, u));
}

AlgebraVector geodesic_rhs(const MetricLieAlgebra& algebra, const AlgebraVector& v) {
  // [v,v] = 0, so ṽv reduces to G^{-1} ad_v^T G v.
  algebra.check_conforms(v);
  return algebra.solve_metric(algebra.ad_transpose(v, metric_apply(algebra, v)));
}

double curvature_biquadratic(const MetricLieAlgebra& algebra, const AlgebraVector& u,
                             const AlgebraVector& v) {
  const AlgebraVector uv = deformation(algebra, u, v);
  const AlgebraVector vu = deformation(algebra, v, u);
  const AlgebraVector uu = geodesic_rhs(algebra, u);
  const AlgebraVector vv = geodesic_rhs(algebra, v);
  const AlgebraVector square = bracket(algebra, u, v) + vu - uv;
  return 0.25 * inner(algebra, square, square) + inner(algebra, uv, vu) - inner(algebra, uu, vv);
}

double gram_determinant(const MetricLieAlgebra& algebra, const AlgebraVector& u,
                        const AlgebraVector& v) {
  const double uu = inner(algebra, u, u);
  const double vv = inner(algebra, v, v);
  const double uv = inner(algebra, u, v);
  return uu * vv - uv * uv;
}

double sectional_curvature(const MetricLieAlgebra& algebra, const AlgebraVector& u,
                           const AlgebraVector& v) {
  const double area = gram_determinant(algebra, u, v);
  const double scale = inner(algebra, u, u) * inner(algebra, v, v);
  if (!(area > kDegeneratePlaneTolerance * scale)) {
    throw DegeneratePlane("sectional curvature requested on a degenerate plane");
  }
  // K depends only on the plane; evaluate R on a G-orthonormal basis of it.
  const double uu = inner(algebra, u, u);
  const AlgebraVector e1 = u / std::sqrt(uu);
  AlgebraVector w = v - inner(algebra, e1, v) * e1;
  w -= inner(algebra, e1, w) * e1;
  const AlgebraVector e2 = w / norm(algebra, w);
  return curvature_biquadratic(algebra, e1, e2);
}

double riemann_polarize(const MetricLieAlgebra& algebra, const AlgebraVector& u,
                        const AlgebraVector& v, const AlgebraVector& w, const AlgebraVector& x) {
  algebra.check_conforms(w);
  algebra.check_conforms(x);
  // f(s,t) is a polynomial of degree <= 2 in each of s and t, so the stencil
  // picks out the s*t coefficient with no truncation error.
  auto mixed = [&](const AlgebraVector& a, const AlgebraVector& b) {
    auto f = [&](double s, double t) {
      return curvature_biquadratic(algebra, u + s * a, v + t * b);
    };
    return 0.25 * (f(1, 1) - f(1, -1) - f(-1, 1) + f(-1, -1));
  };
  return (mixed(w, x) - mixed(x, w)) / 6.0;
}

std::vector<AlgebraVector> orthonormal_basis(const MetricLieAlgebra& algebra) {
  std::vector<AlgebraVector> basis;
  basis.reserve(static_cast<std::size_t>(algebra.dim()));
  for (int i = 0; i < algebra.dim(); ++i) {
    AlgebraVector f = basis_vector(algebra, i);
    for (const auto& b : basis) f -= inner(algebra, f, b) * b;
    f /= norm(algebra, f);
    basis.push_back(std::move(f));
  }
  return basis;
}

double ricci_quadratic(const MetricLieAlgebra& algebra, const AlgebraVector& u) {
  algebra.check_conforms(u);
  double sum = 0.0;
  for (const auto& f : orthonormal_basis(algebra)) sum += curvature_biquadratic(algebra, u, f);
  return sum;
}

AlgebraVector jacobiator(const MetricLieAlgebra& algebra, const AlgebraVector& u,
                         const AlgebraVector& v, const AlgebraVector& w) {
  return bracket(algebra, u, bracket(algebra, v, w)) + bracket(algebra, v, bracket(algebra, w, u)) +
         bracket(algebra, w, bracket(algebra, u, v));
}

}  // namespace geoflow
