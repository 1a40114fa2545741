#pragma once

#include <Eigen/Core>
#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "geoflow/metric_lie_algebra.hpp"

namespace geoflow {

/// Point of the half-plane group {(x0, x1) : x0 > 0}.
using HalfPlanePoint = Eigen::Vector2d;
/// Body-frame attitude in SO(3).
using Rotation = Eigen::Matrix3d;
using GroupPoint = std::variant<Rotation, HalfPlanePoint>;

/// Groups for which a multiplication law is registered.
enum class GroupModel { SO3, Affine2 };

/// Looks up the group model from the algebra label ("so3" or "affine2").
/// Throws UnsupportedModel otherwise.
GroupModel group_model_for(const MetricLieAlgebra& algebra);

/// A scalar function of the algebra velocity logged along a trajectory.
struct NamedInvariant {
  std::string name;
  std::function<double(const AlgebraVector&)> value;
};

struct GeodesicTrajectory {
  std::vector<double> times;
  std::vector<AlgebraVector> velocities;
  std::vector<GroupPoint> group_points;  ///< empty unless reconstructed
  std::map<std::string, std::vector<double>> invariant_log;
};

struct IntegrationOptions {
  std::vector<NamedInvariant> invariants;  ///< logged in addition to "energy"
  int record_every = 1;                    ///< keep every n-th step (the final step is always kept)
};

/// Number of RK4 steps used to cover [0, T] with step dt: steps of exactly dt,
/// except that T/dt within 1e-9 of an integer is rounded to it.
long step_count(double dt, double T);

/// Integrates dv/dt = geodesic_rhs(v) with classical RK4 and fixed step dt up to
/// time T. Logs energy ½G(v,v) at every recorded sample. The last step is
/// shortened when T is not a multiple of dt.
/// Throws InvalidArgument when dt <= 0 or T < dt; NumericalFailure on a
/// non-finite state.
GeodesicTrajectory integrate_geodesic(const MetricLieAlgebra& algebra, const AlgebraVector& v0, double dt,
                                      double T, const IntegrationOptions& options = {});

/// Hat map: the skew matrix of the cross product with v.
Eigen::Matrix3d hat(const Eigen::Vector3d& v);

/// Nearest rotation in the Frobenius norm (orthogonal polar factor).
Rotation polar_orthonormalize(const Eigen::Matrix3d& m);

/// Co-integrates dg/dt = g v with RK4 on the time grid of `trajectory`,
/// starting from v = trajectory.velocities.front() and g = start. For so(3)
/// the attitude obeys dR/dt = R hat(v) and is re-orthonormalized after every
/// step; for affine2 dx0/dt = x0 v0, dx1/dt = x0 v1.
/// Pass an unstrided trajectory: each recorded interval is one RK4 step.
GeodesicTrajectory reconstruct_group(const MetricLieAlgebra& algebra, const GeodesicTrajectory& trajectory,
                                     const GroupPoint& start);

/// Killing charges of the half-plane geodesic flow.
struct KillingCharges {
  double f0 = 0.0;
  double f1 = 0.0;
  double fm1 = 0.0;

  /// F0² − F1 F−1, equal to v0² + v1².
  double casimir() const { return f0 * f0 - f1 * fm1; }
};

KillingCharges halfplane_invariants(const HalfPlanePoint& x, const AlgebraVector& v);

/// Least-squares circle x0² + (x1 − B)² = A² centred on the x0 = 0 axis.
struct SemicircleFit {
  double radius = 0.0;     ///< A
  double center = 0.0;     ///< B
  double residual = 0.0;   ///< max |dist(x, (0,B)) − A|
};

SemicircleFit fit_semicircle(const std::vector<HalfPlanePoint>& points);

/// Riemannian distance between group points, for models with a closed form:
/// the Poincaré half plane, and SO(3) with a bi-invariant metric G·Id.
double group_distance(const MetricLieAlgebra& algebra, const GroupPoint& a, const GroupPoint& b);

/// Result of fitting |y(t)|² on the deviation samples.
struct DeviationFit {
  std::vector<double> times;
  std::vector<double> y_squared;  ///< (distance/eps)² at each time
  std::vector<double> coefficients;
  std::vector<int> powers;        ///< coefficients[i] multiplies t^powers[i]
  double rms_residual = 0.0;

  double coefficient(int power) const;
};

/// Default fit window: n points evenly spaced in (0, 0.1/|v|].
std::vector<double> default_deviation_grid(const MetricLieAlgebra& algebra, const AlgebraVector& v,
                                           int points = 20);

/// Launches geodesics from the identity with velocities v and v + eps·u,
/// evaluates y(t) = distance/eps on `t_grid`, and least-squares fits
/// |y(t)|² = a t² + b t³. Powers {2, 3}; `coefficient(3)` is the fitted cubic term.
/// Throws UnsupportedModel without a distance oracle, InvalidArgument when eps is
/// outside (0, 1e-2] or the grid is empty or non-positive.
DeviationFit deviation_expansion(const MetricLieAlgebra& algebra, const AlgebraVector& v,
                                 const AlgebraVector& u, double eps, const std::vector<double>& t_grid);

/// Same sampling as deviation_expansion with a caller-chosen set of powers.
DeviationFit deviation_fit(const MetricLieAlgebra& algebra, const AlgebraVector& v, const AlgebraVector& u,
                           double eps, const std::vector<double>& t_grid, const std::vector<int>& powers);

}  // namespace geoflow
