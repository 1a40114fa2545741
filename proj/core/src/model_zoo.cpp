#include "geoflow/model_zoo.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <utility>

#include "geoflow/errors.hpp"

namespace geoflow {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

// A real basis function written as a sum of complex exponentials.
template <class Mode>
using ExpTerms = std::vector<std::pair<Mode, cplx>>;

template <class Mode>
ExpTerms<Mode> cos_terms(const Mode& k) {
  return {{k, 0.5}, {-k, 0.5}};
}

template <class Mode>
ExpTerms<Mode> sin_terms(const Mode& k) {
  return {{k, -0.5 * kI}, {-k, 0.5 * kI}};
}

void push_entry(std::vector<StructureEntry>& entries, int i, int j, int k, double c) {
  if (std::abs(c) > 1e-15) entries.push_back({i, j, k, c});
}

}  // namespace

MetricLieAlgebra make_so3(double g1, double g2, double g3) {
  if (!(g1 > 0.0) || !(g2 > 0.0) || !(g3 > 0.0)) {
    throw InvalidArgument("so3 metric entries must be positive");
  }
  std::vector<StructureEntry> entries = {{1, 2, 0, 1.0}, {2, 0, 1, 1.0}, {0, 1, 2, 1.0}};
  Eigen::MatrixXd metric = Eigen::Vector3d(g1, g2, g3).asDiagonal();
  return MetricLieAlgebra(3, std::move(entries), std::move(metric), "so3", true);
}

MetricLieAlgebra make_affine2() {
  return MetricLieAlgebra(2, {{0, 1, 1, 1.0}}, Eigen::MatrixXd::Identity(2, 2), "affine2", true);
}

int vect_s1_constant_index() { return 0; }
int vect_s1_cos_index(int n) { return 2 * n - 1; }
int vect_s1_sin_index(int n) { return 2 * n; }

MetricLieAlgebra make_vect_s1(int cutoff) {
  if (cutoff < 1) throw InvalidArgument("vect_s1 cutoff must be at least 1");
  const int dim = 2 * cutoff + 1;

  std::vector<ExpTerms<int>> basis(static_cast<std::size_t>(dim));
  basis[0] = {{0, 1.0}};
  for (int n = 1; n <= cutoff; ++n) {
    basis[static_cast<std::size_t>(vect_s1_cos_index(n))] = cos_terms(n);
    basis[static_cast<std::size_t>(vect_s1_sin_index(n))] = sin_terms(n);
  }

  std::vector<StructureEntry> entries;
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      // [e^{imx}, e^{inx}] = i (n - m) e^{i(m+n)x}
      std::map<int, cplx> out;
      for (const auto& [m, a] : basis[static_cast<std::size_t>(i)]) {
        for (const auto& [n, b] : basis[static_cast<std::size_t>(j)]) {
          out[m + n] += a * b * kI * static_cast<double>(n - m);
        }
      }
      for (const auto& [mode, c] : out) {
        if (mode == 0) {
          push_entry(entries, i, j, 0, c.real());
        } else if (mode > 0 && mode <= cutoff) {
          push_entry(entries, i, j, vect_s1_cos_index(mode), 2.0 * c.real());
          push_entry(entries, i, j, vect_s1_sin_index(mode), -2.0 * c.imag());
        }
      }
    }
  }

  Eigen::VectorXd diag = Eigen::VectorXd::Constant(dim, kPi);
  diag[0] = 2.0 * kPi;
  return MetricLieAlgebra(dim, std::move(entries), diag.asDiagonal().toDenseMatrix(),
                          "vect_s1(N=" + std::to_string(cutoff) + ")", false);
}

int Mode2D::sup_norm() const { return std::max(std::abs(k1), std::abs(k2)); }

TorusModeBasis::TorusModeBasis(int cutoff) : cutoff_(cutoff) {
  if (cutoff < 1) throw InvalidArgument("torus cutoff must be at least 1");
  const int side = 2 * cutoff + 1;
  lookup_.assign(static_cast<std::size_t>(side * side), -1);
  for (int k1 = 0; k1 <= cutoff; ++k1) {
    for (int k2 = -cutoff; k2 <= cutoff; ++k2) {
      const Mode2D k{k1, k2};
      if (!is_representative(k)) continue;
      const int m = static_cast<int>(reps_.size());
      reps_.push_back(k);
      lookup_[static_cast<std::size_t>((k1 + cutoff) * side + (k2 + cutoff))] = m;
      lookup_[static_cast<std::size_t>((-k1 + cutoff) * side + (-k2 + cutoff))] = m;
    }
  }
}

bool TorusModeBasis::in_cutoff(const Mode2D& k) const {
  return !k.is_zero() && k.sup_norm() <= cutoff_;
}

bool TorusModeBasis::is_representative(const Mode2D& k) {
  return k.k1 > 0 || (k.k1 == 0 && k.k2 > 0);
}

std::optional<int> TorusModeBasis::pair_index(const Mode2D& k) const {
  if (!in_cutoff(k)) return std::nullopt;
  const int side = 2 * cutoff_ + 1;
  return lookup_[static_cast<std::size_t>((k.k1 + cutoff_) * side + (k.k2 + cutoff_))];
}

int TorusModeBasis::cos_index(const Mode2D& rep) const {
  const auto m = pair_index(rep);
  if (!m || !is_representative(rep)) throw InvalidArgument("not a representative mode in the cutoff");
  return 2 * *m;
}

int TorusModeBasis::sin_index(const Mode2D& rep) const { return cos_index(rep) + 1; }

MetricLieAlgebra make_sdiff_t2(int cutoff) {
  const TorusModeBasis modes(cutoff);
  const int dim = modes.dim();
  const auto& reps = modes.representatives();

  std::vector<ExpTerms<Mode2D>> basis;
  basis.reserve(static_cast<std::size_t>(dim));
  for (const auto& k : reps) {
    basis.push_back(cos_terms(k));
    basis.push_back(sin_terms(k));
  }

  auto key = [](const Mode2D& m) { return std::pair{m.k1, m.k2}; };
  std::vector<StructureEntry> entries;
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      std::map<std::pair<int, int>, cplx> out;
      for (const auto& [p, a] : basis[static_cast<std::size_t>(i)]) {
        for (const auto& [q, b] : basis[static_cast<std::size_t>(j)]) {
          const int jac = cross(p, q);
          if (jac == 0) continue;
          out[key(p + q)] += a * b * static_cast<double>(kTorusBracketSign * jac);
        }
      }
      for (const auto& [mk, c] : out) {
        const Mode2D m{mk.first, mk.second};
        // The zero mode is central and dropped; modes beyond the cutoff are
        // projected out. Conjugate partners carry the same information.
        if (!modes.in_cutoff(m) || !TorusModeBasis::is_representative(m)) continue;
        push_entry(entries, i, j, modes.cos_index(m), 2.0 * c.real());
        push_entry(entries, i, j, modes.sin_index(m), -2.0 * c.imag());
      }
    }
  }

  Eigen::VectorXd diag(dim);
  const double area = 4.0 * kPi * kPi;
  for (std::size_t m = 0; m < reps.size(); ++m) {
    const double g = 0.5 * reps[m].norm_squared() * area;
    diag[static_cast<Eigen::Index>(2 * m)] = g;
    diag[static_cast<Eigen::Index>(2 * m + 1)] = g;
  }
  return MetricLieAlgebra(dim, std::move(entries), diag.asDiagonal().toDenseMatrix(),
                          "sdiff_t2(N=" + std::to_string(cutoff) + ")", false);
}

std::complex<double> torus_complex_amplitude(const TorusModeBasis& basis, const AlgebraVector& coeffs,
                                             const Mode2D& k) {
  if (coeffs.size() != basis.dim()) {
    throw DimensionMismatch(static_cast<std::size_t>(basis.dim()), static_cast<std::size_t>(coeffs.size()));
  }
  const auto m = basis.pair_index(k);
  if (!m) return {0.0, 0.0};
  const cplx c{0.5 * coeffs[2 * *m], -0.5 * coeffs[2 * *m + 1]};
  return TorusModeBasis::is_representative(k) ? c : std::conj(c);
}

namespace {

InertiaParameters from_moments(const std::array<double, 3>& M) {
  InertiaParameters out;
  out.M = M;
  out.G = {M[1] + M[2], M[0] + M[2], M[0] + M[1]};
  for (int i = 0; i < 3; ++i) out.mu[static_cast<std::size_t>(i)] = 1.0 / M[static_cast<std::size_t>(i)];
  return out;
}

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw InvalidArgument(std::string("degenerate shape: ") + what + " must be positive");
  }
}

}  // namespace

InertiaParameters inertia_from_shape(const RigidBodySpec& spec) {
  return std::visit(
      [](const auto& s) -> InertiaParameters {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Cylinder>) {
          require_positive(s.r, "r");
          require_positive(s.h, "h");
          return from_moments({s.r * s.r / 4.0, s.r * s.r / 4.0, s.h * s.h / 12.0});
        } else if constexpr (std::is_same_v<T, Box>) {
          require_positive(s.a, "a");
          require_positive(s.b, "b");
          require_positive(s.c, "c");
          return from_moments({s.a * s.a / 12.0, s.b * s.b / 12.0, s.c * s.c / 12.0});
        } else {
          require_positive(s.a, "a");
          require_positive(s.b, "b");
          require_positive(s.c, "c");
          return from_moments({s.a * s.a / 5.0, s.b * s.b / 5.0, s.c * s.c / 5.0});
        }
      },
      spec);
}

InertiaParameters inertia_from_reciprocal_moments(const std::array<double, 3>& mu) {
  std::array<double, 3> M{};
  for (std::size_t i = 0; i < 3; ++i) {
    require_positive(mu[i], "mu");
    M[i] = 1.0 / mu[i];
  }
  InertiaParameters out = from_moments(M);
  out.mu = mu;
  return out;
}

RigidBodySpec parse_shape_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("shape")) {
    throw InvalidArgument("shape spec must be an object with a \"shape\" key");
  }
  const std::string shape = doc.at("shape").get<std::string>();
  std::set<std::string> allowed;
  if (shape == "cylinder") {
    allowed = {"shape", "r", "h"};
  } else if (shape == "box" || shape == "ellipsoid") {
    allowed = {"shape", "a", "b", "c"};
  } else {
    throw InvalidArgument("unknown shape: " + shape);
  }
  for (const auto& [key, value] : doc.items()) {
    if (!allowed.contains(key)) throw InvalidArgument("unknown key in shape spec: " + key);
  }
  try {
    RigidBodySpec spec;
    if (shape == "cylinder") {
      spec = Cylinder{doc.at("r").get<double>(), doc.at("h").get<double>()};
    } else if (shape == "box") {
      spec = Box{doc.at("a").get<double>(), doc.at("b").get<double>(), doc.at("c").get<double>()};
    } else {
      spec = Ellipsoid{doc.at("a").get<double>(), doc.at("b").get<double>(), doc.at("c").get<double>()};
    }
    inertia_from_shape(spec);  // validates lengths
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed shape spec: ") + e.what());
  }
}

}  // namespace geoflow
