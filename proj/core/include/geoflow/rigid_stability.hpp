#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string>

#include <nlohmann/json.hpp>

namespace geoflow {

enum class Verdict { Stable, Unstable };

std::string to_string(Verdict v);

/// Curvature-based stability summary of a rigid body.
///
/// `sectional` holds K12, K23, K31 in that order. `verdict` is Stable iff all
/// three axis-plane curvatures are positive, which for a physical body is the
/// same as the three strict triangle inequalities on the reciprocal moments.
struct StabilityReport {
  std::array<double, 3> mu{};
  std::array<bool, 3> triangle_ok{};  ///< mu1+mu2>mu3, mu2+mu3>mu1, mu3+mu1>mu2
  std::array<double, 3> sectional{};
  std::array<double, 3> sectional_generic{};  ///< same planes, generic curvature formula (NaN if not computed)
  double min_random_K = std::numeric_limits<double>::quiet_NaN();
  Verdict verdict = Verdict::Stable;
};

nlohmann::json to_json(const StabilityReport& report);

/// Triangle-inequality criterion on reciprocal moments, with the axis-plane
/// sectional curvatures from the reciprocal-moment form of the biquadratic.
StabilityReport triangle_stability(double mu1, double mu2, double mu3);

/// Critical height sqrt(3/2)·r of a uniform cylinder: flatter cylinders
/// have a negative sectional curvature in the plane of two diameters.
double coin_threshold(double r);

/// Closed-form K_{23} = ((G2−G3)² + 2G1(G2+G3) − 3G1²)/(4G1G2G3) and its cyclic
/// images, in the order K12, K23, K31.
std::array<double, 3> so3_axis_curvatures(double g1, double g2, double g3);

/// Axis-plane curvatures in closed form and via the generic metric-Lie-algebra
/// formula; throws NumericalFailure if they disagree beyond 1e-10 (relative to
/// the curvature scale). Also samples `samples` random planes and records the
/// minimum sectional curvature.
StabilityReport sectional_table(double g1, double g2, double g3, int samples, std::uint64_t seed = 42);

enum class AxisClassification { ExponentialUnstable, Oscillatory, Marginal };

std::string to_string(AxisClassification c);

struct AxisSpectrum {
  double lambda_squared = 0.0;          ///< analytic
  double lambda_squared_numeric = 0.0;  ///< from a central-difference Jacobian
  AxisClassification classification = AxisClassification::Marginal;
};

/// Linearizes the rigid-body geodesic flow about steady rotation Omega·e_axis
/// (axis in {1,2,3}). For axis 1, λ² = Ω²(G1−G3)(G2−G1)/(G2G3), cyclic.
AxisSpectrum middle_axis_spectrum(double g1, double g2, double g3, int axis, double omega);

}  // namespace geoflow
