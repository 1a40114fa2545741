#pragma once

#include <random>
#include <string>
#include <vector>

#include "geoflow/metric_lie_algebra.hpp"
#include "geoflow/model_zoo.hpp"

namespace geoflow::testing {

struct NamedAlgebra {
  std::string name;
  MetricLieAlgebra algebra;
};

/// so(3) bracket with a dense (non-diagonal) positive-definite metric.
inline MetricLieAlgebra make_so3_dense_metric() {
  Eigen::Matrix3d a;
  a << 1.0, 0.3, -0.2, 0.0, 1.5, 0.4, 0.0, 0.0, 0.8;
  const Eigen::Matrix3d g = a.transpose() * a + 0.1 * Eigen::Matrix3d::Identity();
  return MetricLieAlgebra(3, {{1, 2, 0, 1.0}, {2, 0, 1, 1.0}, {0, 1, 2, 1.0}}, g, "so3-dense", true);
}

/// Every algebra the property suites run on.
inline std::vector<NamedAlgebra> registered_algebras() {
  std::vector<NamedAlgebra> out;
  out.push_back({"so3(1,2,3)", make_so3(1.0, 2.0, 3.0)});
  out.push_back({"so3(1,1,1)", make_so3(1.0, 1.0, 1.0)});
  out.push_back({"so3(0.4,2.5,7)", make_so3(0.4, 2.5, 7.0)});
  out.push_back({"so3-dense", make_so3_dense_metric()});
  out.push_back({"affine2", make_affine2()});
  out.push_back({"vect_s1(3)", make_vect_s1(3)});
  out.push_back({"sdiff_t2(2)", make_sdiff_t2(2)});
  return out;
}

inline AlgebraVector random_vector(const MetricLieAlgebra& algebra, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  AlgebraVector v(algebra.dim());
  for (int i = 0; i < algebra.dim(); ++i) v[i] = normal(rng);
  return v;
}

/// Random vector of unit metric length.
inline AlgebraVector random_unit(const MetricLieAlgebra& algebra, std::mt19937_64& rng) {
  AlgebraVector v = random_vector(algebra, rng);
  return v / norm(algebra, v);
}

}  // namespace geoflow::testing
