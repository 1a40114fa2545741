#include "geoflow/algebra_io.hpp"

#include <set>
#include <string>

#include "geoflow/errors.hpp"

namespace geoflow {

nlohmann::json algebra_to_json(const MetricLieAlgebra& algebra) {
  nlohmann::json structure = nlohmann::json::array();
  for (const auto& e : algebra.canonical_entries()) {
    structure.push_back({e.i, e.j, e.k, e.c});
  }
  nlohmann::json metric = nlohmann::json::array();
  for (int r = 0; r < algebra.dim(); ++r) {
    for (int c = 0; c < algebra.dim(); ++c) metric.push_back(algebra.metric()(r, c));
  }
  return {{"dim", algebra.dim()},
          {"structure", std::move(structure)},
          {"metric", std::move(metric)},
          {"label", algebra.label()},
          {"jacobi_exact", algebra.jacobi_exact()}};
}

MetricLieAlgebra algebra_from_json(const nlohmann::json& doc) {
  static const std::set<std::string> known = {"dim", "structure", "metric", "label", "jacobi_exact"};
  if (!doc.is_object()) throw InvalidArgument("algebra document must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!known.contains(key)) throw InvalidArgument("unknown key in algebra document: " + key);
  }
  try {
    const int dim = doc.at("dim").get<int>();
    if (dim <= 0) throw InvalidArgument("algebra dimension must be positive");
    std::vector<StructureEntry> entries;
    for (const auto& row : doc.at("structure")) {
      if (!row.is_array() || row.size() != 4) {
        throw InvalidArgument("structure rows must have the form [i, j, k, c]");
      }
      entries.push_back({row[0].get<int>(), row[1].get<int>(), row[2].get<int>(), row[3].get<double>()});
    }
    const auto& flat = doc.at("metric");
    if (!flat.is_array() || flat.size() != static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim)) {
      throw InvalidArgument("metric must be a row-major array of dim*dim numbers");
    }
    Eigen::MatrixXd metric(dim, dim);
    for (int r = 0; r < dim; ++r) {
      for (int c = 0; c < dim; ++c) metric(r, c) = flat[static_cast<std::size_t>(r * dim + c)].get<double>();
    }
    return MetricLieAlgebra(dim, std::move(entries), std::move(metric), doc.at("label").get<std::string>(),
                            doc.at("jacobi_exact").get<bool>());
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed algebra document: ") + e.what());
  }
}

}  // namespace geoflow
