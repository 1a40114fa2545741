#include "geoflow/rigid_stability.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "geoflow/errors.hpp"
#include "geoflow/metric_lie_algebra.hpp"
#include "geoflow/model_zoo.hpp"

namespace geoflow {

std::string to_string(Verdict v) { return v == Verdict::Stable ? "stable" : "unstable"; }

std::string to_string(AxisClassification c) {
  switch (c) {
    case AxisClassification::ExponentialUnstable:
      return "exponential-unstable";
    case AxisClassification::Oscillatory:
      return "oscillatory";
    case AxisClassification::Marginal:
      return "marginal";
  }
  return "marginal";
}

nlohmann::json to_json(const StabilityReport& r) {
  auto nullable = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); };
  nlohmann::json generic = nlohmann::json::array();
  for (double k : r.sectional_generic) generic.push_back(nullable(k));
  return {{"mu", r.mu},
          {"triangle_ok", r.triangle_ok},
          {"sectional", {{"K12", r.sectional[0]}, {"K23", r.sectional[1]}, {"K31", r.sectional[2]}}},
          {"sectional_generic", generic},
          {"min_random_K", nullable(r.min_random_K)},
          {"verdict", to_string(r.verdict)}};
}

namespace {

void require_positive3(double a, double b, double c, const char* what) {
  if (!(a > 0.0) || !(b > 0.0) || !(c > 0.0) || !std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) {
    throw InvalidArgument(std::string(what) + " must be positive and finite");
  }
}

Verdict verdict_from(const std::array<double, 3>& k) {
  return std::all_of(k.begin(), k.end(), [](double x) { return x > 0.0; }) ? Verdict::Stable : Verdict::Unstable;
}

}  // namespace

StabilityReport triangle_stability(double mu1, double mu2, double mu3) {
  require_positive3(mu1, mu2, mu3, "reciprocal moments");
  StabilityReport r;
  r.mu = {mu1, mu2, mu3};
  r.triangle_ok = {mu1 + mu2 > mu3, mu2 + mu3 > mu1, mu3 + mu1 > mu2};

  const InertiaParameters p = inertia_from_reciprocal_moments(r.mu);
  const auto& G = p.G;
  // Coefficient of [u_j v_k − u_k v_j]² is (mu_j+mu_k−mu_i)/(mu_i(mu_j+mu_k));
  // dividing by G_j G_k gives the sectional curvature of the jk-plane.
  auto coeff = [](double mi, double mj, double mk) { return (mj + mk - mi) / (mi * (mj + mk)); };
  r.sectional = {coeff(mu3, mu1, mu2) / (G[0] * G[1]), coeff(mu1, mu2, mu3) / (G[1] * G[2]),
                 coeff(mu2, mu3, mu1) / (G[2] * G[0])};
  r.sectional_generic.fill(std::numeric_limits<double>::quiet_NaN());
  r.verdict = std::all_of(r.triangle_ok.begin(), r.triangle_ok.end(), [](bool b) { return b; }) ? Verdict::Stable
                                                                                                  : Verdict::Unstable;
  return r;
}

double coin_threshold(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("radius must be positive");
  return std::sqrt(1.5) * r;
}

std::array<double, 3> so3_axis_curvatures(double g1, double g2, double g3) {
  require_positive3(g1, g2, g3, "moments of inertia");
  // K_jk with i the remaining axis.
  auto k = [](double gi, double gj, double gk) {
    return ((gj - gk) * (gj - gk) + 2.0 * gi * (gj + gk) - 3.0 * gi * gi) / (4.0 * gi * gj * gk);
  };
  return {k(g3, g1, g2), k(g1, g2, g3), k(g2, g3, g1)};
}

StabilityReport sectional_table(double g1, double g2, double g3, int samples, std::uint64_t seed) {
  require_positive3(g1, g2, g3, "moments of inertia");
  if (samples < 0) throw InvalidArgument("sample count must be non-negative");
  const MetricLieAlgebra so3 = make_so3(g1, g2, g3);

  StabilityReport r;
  r.sectional = so3_axis_curvatures(g1, g2, g3);
  const std::array<std::pair<int, int>, 3> planes = {{{0, 1}, {1, 2}, {2, 0}}};
  double scale = 0.0;
  double worst = 0.0;
  for (std::size_t p = 0; p < 3; ++p) {
    r.sectional_generic[p] =
        sectional_curvature(so3, basis_vector(so3, planes[p].first), basis_vector(so3, planes[p].second));
    scale = std::max(scale, std::abs(r.sectional[p]));
    worst = std::max(worst, std::abs(r.sectional[p] - r.sectional_generic[p]));
  }
  // Curvature scales like 1/G; normalise the comparison to that scale.
  scale = std::max(scale, 1.0 / std::max({g1, g2, g3}));
  if (worst > 1e-10 * scale) {
    throw NumericalFailure("closed-form and generic axis-plane curvatures disagree", 0);
  }

  const double m1 = 0.5 * (g2 + g3 - g1);
  const double m2 = 0.5 * (g3 + g1 - g2);
  const double m3 = 0.5 * (g1 + g2 - g3);
  r.mu = {1.0 / m1, 1.0 / m2, 1.0 / m3};
  r.triangle_ok = {r.mu[0] + r.mu[1] > r.mu[2], r.mu[1] + r.mu[2] > r.mu[0], r.mu[2] + r.mu[0] > r.mu[1]};
  r.verdict = verdict_from(r.sectional);

  if (samples > 0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    double min_k = std::numeric_limits<double>::infinity();
    for (int s = 0; s < samples; ++s) {
      AlgebraVector u(3), v(3);
      for (int i = 0; i < 3; ++i) u[i] = normal(rng);
      for (int i = 0; i < 3; ++i) v[i] = normal(rng);
      u /= norm(so3, u);
      v -= inner(so3, v, u) * u;
      const double nv = norm(so3, v);
      if (!(nv > 1e-8)) continue;
      v /= nv;
      min_k = std::min(min_k, curvature_biquadratic(so3, u, v));
    }
    r.min_random_K = min_k;
  }
  return r;
}

AxisSpectrum middle_axis_spectrum(double g1, double g2, double g3, int axis, double omega) {
  require_positive3(g1, g2, g3, "moments of inertia");
  if (axis < 1 || axis > 3) throw InvalidArgument("axis must be 1, 2 or 3");
  if (!std::isfinite(omega)) throw InvalidArgument("angular velocity must be finite");

  const std::array<double, 3> g = {g1, g2, g3};
  const auto i = static_cast<std::size_t>(axis - 1);
  const std::size_t j = (i + 1) % 3;
  const std::size_t k = (i + 2) % 3;

  AxisSpectrum out;
  out.lambda_squared = omega * omega * (g[i] - g[k]) * (g[j] - g[i]) / (g[j] * g[k]);

  const MetricLieAlgebra so3 = make_so3(g1, g2, g3);
  if (omega != 0.0) {
    const double h = 1e-6 * std::abs(omega);
    AlgebraVector steady = AlgebraVector::Zero(3);
    steady[static_cast<Eigen::Index>(i)] = omega;
    Eigen::Matrix3d jac;
    for (int c = 0; c < 3; ++c) {
      AlgebraVector dp = steady, dm = steady;
      dp[c] += h;
      dm[c] -= h;
      jac.col(c) = (geodesic_rhs(so3, dp) - geodesic_rhs(so3, dm)) / (2.0 * h);
    }
    // Spectrum is {0, λ, −λ}, so tr(J²) = 2λ².
    out.lambda_squared_numeric = 0.5 * (jac * jac).trace();
  }

  if (out.lambda_squared > 0.0) {
    out.classification = AxisClassification::ExponentialUnstable;
  } else if (out.lambda_squared < 0.0) {
    out.classification = AxisClassification::Oscillatory;
  } else {
    out.classification = AxisClassification::Marginal;
  }
  return out;
}

}  // namespace geoflow
