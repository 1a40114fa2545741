#include "geoflow/geodesic_flow.hpp"

#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "geoflow/errors.hpp"
#include "geoflow/rk4.hpp"

namespace geoflow {

GroupModel group_model_for(const MetricLieAlgebra& algebra) {
  if (algebra.label() == "so3" && algebra.dim() == 3) return GroupModel::SO3;
  if (algebra.label() == "affine2" && algebra.dim() == 2) return GroupModel::Affine2;
  throw UnsupportedModel("no group model registered for algebra '" + algebra.label() + "'");
}

long step_count(double dt, double T) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("time step must be positive");
  if (!(T >= dt) || !std::isfinite(T)) throw InvalidArgument("final time must be at least one step");
  const double ratio = T / dt;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio)) return static_cast<long>(nearest);
  return static_cast<long>(std::ceil(ratio));
}

namespace {

void record(GeodesicTrajectory& traj, const MetricLieAlgebra& algebra, const IntegrationOptions& options,
            double t, const AlgebraVector& v) {
  traj.times.push_back(t);
  traj.velocities.push_back(v);
  traj.invariant_log["energy"].push_back(0.5 * inner(algebra, v, v));
  for (const auto& inv : options.invariants) traj.invariant_log[inv.name].push_back(inv.value(v));
}

}  // namespace

GeodesicTrajectory integrate_geodesic(const MetricLieAlgebra& algebra, const AlgebraVector& v0, double dt,
                                      double T, const IntegrationOptions& options) {
  algebra.check_conforms(v0);
  if (!v0.allFinite()) throw InvalidArgument("initial velocity is not finite");
  if (options.record_every < 1) throw InvalidArgument("record_every must be at least 1");
  const long steps = step_count(dt, T);

  GeodesicTrajectory traj;
  const auto reserve = static_cast<std::size_t>(steps / options.record_every + 2);
  traj.times.reserve(reserve);
  traj.velocities.reserve(reserve);
  record(traj, algebra, options, 0.0, v0);

  const auto rhs = [&algebra](const AlgebraVector& v) { return geodesic_rhs(algebra, v); };
  AlgebraVector v = v0;
  for (long n = 1; n <= steps; ++n) {
    const double t_prev = static_cast<double>(n - 1) * dt;
    const double t = (n == steps) ? T : static_cast<double>(n) * dt;
    v = rk4_step(rhs, v, t - t_prev);
    if (!v.allFinite()) throw NumericalFailure("non-finite velocity in geodesic integration", static_cast<std::size_t>(n));
    if (n % options.record_every == 0 || n == steps) record(traj, algebra, options, t, v);
  }
  return traj;
}

Eigen::Matrix3d hat(const Eigen::Vector3d& v) {
  Eigen::Matrix3d m;
  m << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return m;
}

Rotation polar_orthonormalize(const Eigen::Matrix3d& m) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Rotation r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0.0) {
    Eigen::Matrix3d u = svd.matrixU();
    u.col(2) *= -1.0;
    r = u * svd.matrixV().transpose();
  }
  return r;
}

namespace {

// Coupled (velocity, group point) state packed into one vector.
struct GroupStepper {
  const MetricLieAlgebra& algebra;
  GroupModel model;

  int group_size() const { return model == GroupModel::SO3 ? 9 : 2; }

  Eigen::VectorXd pack(const AlgebraVector& v, const GroupPoint& g) const {
    Eigen::VectorXd y(algebra.dim() + group_size());
    y.head(algebra.dim()) = v;
    if (model == GroupModel::SO3) {
      y.tail(9) = Eigen::Map<const Eigen::VectorXd>(std::get<Rotation>(g).data(), 9);
    } else {
      y.tail(2) = std::get<HalfPlanePoint>(g);
    }
    return y;
  }

  AlgebraVector velocity(const Eigen::VectorXd& y) const { return y.head(algebra.dim()); }

  GroupPoint point(const Eigen::VectorXd& y) const {
    if (model == GroupModel::SO3) {
      Rotation r = Eigen::Map<const Eigen::Matrix3d>(y.tail(9).data());
      return r;
    }
    return HalfPlanePoint(y.tail(2));
  }

  Eigen::VectorXd rhs(const Eigen::VectorXd& y) const {
    Eigen::VectorXd dy(y.size());
    const AlgebraVector v = velocity(y);
    dy.head(algebra.dim()) = geodesic_rhs(algebra, v);
    if (model == GroupModel::SO3) {
      const Eigen::Map<const Eigen::Matrix3d> r(y.tail(9).data());
      const Eigen::Matrix3d dr = r * hat(Eigen::Vector3d(v));
      dy.tail(9) = Eigen::Map<const Eigen::VectorXd>(dr.data(), 9);
    } else {
      const double x0 = y[algebra.dim()];
      dy[algebra.dim()] = x0 * v[0];
      dy[algebra.dim() + 1] = x0 * v[1];
    }
    return dy;
  }

  Eigen::VectorXd step(const Eigen::VectorXd& y, double dt) const {
    Eigen::VectorXd next = rk4_step([this](const Eigen::VectorXd& s) { return rhs(s); }, y, dt);
    if (model == GroupModel::SO3) {
      const Rotation r = polar_orthonormalize(Eigen::Map<const Eigen::Matrix3d>(next.tail(9).data()));
      next.tail(9) = Eigen::Map<const Eigen::VectorXd>(r.data(), 9);
    }
    return next;
  }
};

void check_group_point(GroupModel model, const GroupPoint& g) {
  if (model == GroupModel::SO3) {
    if (!std::holds_alternative<Rotation>(g)) throw InvalidArgument("so3 requires a rotation matrix start");
    const Rotation& r = std::get<Rotation>(g);
    if (!(r.transpose() * r - Eigen::Matrix3d::Identity()).isZero(1e-8) || r.determinant() < 0.0) {
      throw InvalidArgument("start point is not a rotation matrix");
    }
  } else {
    if (!std::holds_alternative<HalfPlanePoint>(g)) throw InvalidArgument("affine2 requires a half-plane point");
    if (!(std::get<HalfPlanePoint>(g)[0] > 0.0)) throw InvalidArgument("half-plane point must have x0 > 0");
  }
}

GroupPoint identity_point(GroupModel model) {
  if (model == GroupModel::SO3) return Rotation(Rotation::Identity());
  return HalfPlanePoint(1.0, 0.0);
}

}  // namespace

GeodesicTrajectory reconstruct_group(const MetricLieAlgebra& algebra, const GeodesicTrajectory& trajectory,
                                     const GroupPoint& start) {
  const GroupModel model = group_model_for(algebra);
  check_group_point(model, start);
  if (trajectory.times.empty() || trajectory.velocities.size() != trajectory.times.size()) {
    throw InvalidArgument("trajectory is empty or inconsistent");
  }
  const GroupStepper stepper{algebra, model};

  GeodesicTrajectory out;
  out.times = trajectory.times;
  out.velocities.reserve(trajectory.times.size());
  out.group_points.reserve(trajectory.times.size());

  Eigen::VectorXd y = stepper.pack(trajectory.velocities.front(), start);
  out.velocities.push_back(stepper.velocity(y));
  out.group_points.push_back(start);
  for (std::size_t n = 1; n < trajectory.times.size(); ++n) {
    const double dt = trajectory.times[n] - trajectory.times[n - 1];
    if (!(dt > 0.0)) throw InvalidArgument("trajectory times must be strictly increasing");
    y = stepper.step(y, dt);
    if (!y.allFinite()) throw NumericalFailure("non-finite state in group reconstruction", n);
    out.velocities.push_back(stepper.velocity(y));
    out.group_points.push_back(stepper.point(y));
  }

  out.invariant_log["energy"].reserve(out.velocities.size());
  for (const auto& v : out.velocities) out.invariant_log["energy"].push_back(0.5 * inner(algebra, v, v));
  if (model == GroupModel::Affine2) {
    auto& f0 = out.invariant_log["F0"];
    auto& f1 = out.invariant_log["F1"];
    auto& fm1 = out.invariant_log["F-1"];
    for (std::size_t n = 0; n < out.velocities.size(); ++n) {
      const auto q = halfplane_invariants(std::get<HalfPlanePoint>(out.group_points[n]), out.velocities[n]);
      f0.push_back(q.f0);
      f1.push_back(q.f1);
      fm1.push_back(q.fm1);
    }
  }
  return out;
}

KillingCharges halfplane_invariants(const HalfPlanePoint& x, const AlgebraVector& v) {
  if (!(x[0] > 0.0)) throw InvalidArgument("half-plane point must have x0 > 0");
  if (v.size() != 2) throw DimensionMismatch(2, static_cast<std::size_t>(v.size()));
  const double x0 = x[0];
  const double x1 = x[1];
  return {v[0] + (x1 / x0) * v[1], v[1] / x0, ((x1 * x1 - x0 * x0) / x0) * v[1] + 2.0 * x1 * v[0]};
}

SemicircleFit fit_semicircle(const std::vector<HalfPlanePoint>& points) {
  if (points.size() < 3) throw InvalidArgument("semicircle fit needs at least three points");
  // x0² + x1² = 2 B x1 + C with C = A² − B².
  Eigen::MatrixXd a(static_cast<Eigen::Index>(points.size()), 2);
  Eigen::VectorXd b(static_cast<Eigen::Index>(points.size()));
  for (std::size_t n = 0; n < points.size(); ++n) {
    const auto row = static_cast<Eigen::Index>(n);
    a(row, 0) = 2.0 * points[n][1];
    a(row, 1) = 1.0;
    b[row] = points[n].squaredNorm();
  }
  const Eigen::Vector2d sol = a.colPivHouseholderQr().solve(b);
  SemicircleFit fit;
  fit.center = sol[0];
  fit.radius = std::sqrt(sol[1] + sol[0] * sol[0]);
  for (const auto& p : points) {
    const double d = std::hypot(p[0], p[1] - fit.center);
    fit.residual = std::max(fit.residual, std::abs(d - fit.radius));
  }
  return fit;
}

double group_distance(const MetricLieAlgebra& algebra, const GroupPoint& a, const GroupPoint& b) {
  const GroupModel model = group_model_for(algebra);
  check_group_point(model, a);
  check_group_point(model, b);
  if (model == GroupModel::Affine2) {
    // Left-invariant metric on the half plane is the Poincaré metric:
    // cosh d = 1 + |Δx|² / (2 x0 x0'), i.e. d = 2 asinh(|Δx| / (2 sqrt(x0 x0'))).
    const auto& p = std::get<HalfPlanePoint>(a);
    const auto& q = std::get<HalfPlanePoint>(b);
    return 2.0 * std::asinh((p - q).norm() / (2.0 * std::sqrt(p[0] * q[0])));
  }
  const Eigen::MatrixXd& g = algebra.metric();
  const double g0 = g(0, 0);
  if (!algebra.metric_is_diagonal() || std::abs(g(1, 1) - g0) > 1e-12 * g0 || std::abs(g(2, 2) - g0) > 1e-12 * g0) {
    throw UnsupportedModel("so3 distance oracle requires a bi-invariant metric G·Id");
  }
  const Eigen::Matrix3d rel = std::get<Rotation>(a).transpose() * std::get<Rotation>(b);
  const Eigen::Vector3d axial(rel(2, 1) - rel(1, 2), rel(0, 2) - rel(2, 0), rel(1, 0) - rel(0, 1));
  const double angle = std::atan2(0.5 * axial.norm(), 0.5 * (rel.trace() - 1.0));
  return std::sqrt(g0) * angle;
}

double DeviationFit::coefficient(int power) const {
  for (std::size_t i = 0; i < powers.size(); ++i) {
    if (powers[i] == power) return coefficients[i];
  }
  throw InvalidArgument("power not part of the fit");
}

std::vector<double> default_deviation_grid(const MetricLieAlgebra& algebra, const AlgebraVector& v, int points) {
  const double speed = norm(algebra, v);
  if (!(speed > 0.0)) throw InvalidArgument("deviation base velocity must be nonzero");
  if (points < 2) throw InvalidArgument("deviation grid needs at least two points");
  std::vector<double> grid;
  const double t_max = 0.1 / speed;
  for (int i = 1; i <= points; ++i) grid.push_back(t_max * i / points);
  return grid;
}

DeviationFit deviation_fit(const MetricLieAlgebra& algebra, const AlgebraVector& v, const AlgebraVector& u,
                           double eps, const std::vector<double>& t_grid, const std::vector<int>& powers) {
  const GroupModel model = group_model_for(algebra);
  algebra.check_conforms(v);
  algebra.check_conforms(u);
  if (!(eps > 0.0) || eps > 1e-2) throw InvalidArgument("eps must lie in (0, 1e-2]");
  if (t_grid.empty() || powers.empty() || t_grid.size() < powers.size()) {
    throw InvalidArgument("deviation grid must have at least as many points as fitted powers");
  }
  std::vector<double> grid = t_grid;
  std::sort(grid.begin(), grid.end());
  if (!(grid.front() > 0.0)) throw InvalidArgument("deviation grid must exclude t <= 0");

  const GroupPoint origin = identity_point(model);
  // Probe the distance oracle before integrating.
  group_distance(algebra, origin, origin);

  const GroupStepper stepper{algebra, model};
  Eigen::VectorXd base = stepper.pack(v, origin);
  Eigen::VectorXd other = stepper.pack(v + eps * u, origin);
  const double h_max = grid.back() / 4000.0;

  DeviationFit fit;
  fit.powers = powers;
  double t = 0.0;
  for (double target : grid) {
    const double span = target - t;
    if (span > 0.0) {
      const long sub = std::max(1L, static_cast<long>(std::ceil(span / h_max)));
      const double h = span / static_cast<double>(sub);
      for (long s = 0; s < sub; ++s) {
        base = stepper.step(base, h);
        other = stepper.step(other, h);
      }
      t = target;
    }
    const double y = group_distance(algebra, stepper.point(base), stepper.point(other)) / eps;
    fit.times.push_back(target);
    fit.y_squared.push_back(y * y);
  }

  // Columns scaled by (t/t_max)^p for conditioning.
  const double t_max = grid.back();
  const auto rows = static_cast<Eigen::Index>(fit.times.size());
  const auto cols = static_cast<Eigen::Index>(powers.size());
  Eigen::MatrixXd a(rows, cols);
  Eigen::VectorXd b(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const double s = fit.times[static_cast<std::size_t>(r)] / t_max;
    for (Eigen::Index c = 0; c < cols; ++c) a(r, c) = std::pow(s, powers[static_cast<std::size_t>(c)]);
    b[r] = fit.y_squared[static_cast<std::size_t>(r)];
  }
  const Eigen::VectorXd scaled = a.colPivHouseholderQr().solve(b);
  fit.rms_residual = std::sqrt((a * scaled - b).squaredNorm() / static_cast<double>(rows));
  for (Eigen::Index c = 0; c < cols; ++c) {
    fit.coefficients.push_back(scaled[c] / std::pow(t_max, powers[static_cast<std::size_t>(c)]));
  }
  return fit;
}

DeviationFit deviation_expansion(const MetricLieAlgebra& algebra, const AlgebraVector& v, const AlgebraVector& u,
                                 double eps, const std::vector<double>& t_grid) {
  return deviation_fit(algebra, v, u, eps, t_grid, {2, 3});
}

}  // namespace geoflow
