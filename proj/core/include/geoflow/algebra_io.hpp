#pragma once

#include <nlohmann/json.hpp>

#include "geoflow/metric_lie_algebra.hpp"

namespace geoflow {

/// {dim, structure: [[i,j,k,c], ...] (i < j), metric: row-major array, label, jacobi_exact}
nlohmann::json algebra_to_json(const MetricLieAlgebra& algebra);

/// Inverse of algebra_to_json. Unknown keys are rejected.
MetricLieAlgebra algebra_from_json(const nlohmann::json& doc);

}  // namespace geoflow
