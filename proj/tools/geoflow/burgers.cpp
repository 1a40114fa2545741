#include "burgers.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "geoflow/errors.hpp"
#include "geoflow/geodesic_flow.hpp"
#include "geoflow/model_zoo.hpp"

namespace geoflow::cli {

double burgers_shock_time(double amplitude) {
  if (amplitude == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / (3.0 * std::abs(amplitude));
}

double burgers_characteristics(double amplitude, double x, double t) {
  if (!(t < burgers_shock_time(amplitude))) throw InvalidArgument("characteristics cross after the shock time");
  const double c = 3.0 * t * amplitude;
  double xi = x;
  for (int it = 0; it < 100; ++it) {
    const double g = xi + c * std::sin(xi) - x;
    const double dg = 1.0 + c * std::cos(xi);
    const double step = g / dg;
    xi -= step;
    if (std::abs(step) < 1e-15 * (1.0 + std::abs(xi))) break;
  }
  return amplitude * std::sin(xi);
}

BurgersComparison burgers_compare(int cutoff, double amplitude, double T, double dt, int points) {
  if (cutoff < 1) throw InvalidArgument("cutoff must be at least 1");
  if (points < 2) throw InvalidArgument("need at least two sample points");
  if (!std::isfinite(amplitude) || amplitude == 0.0) throw InvalidArgument("amplitude must be finite and nonzero");

  BurgersComparison out;
  out.shock_time = burgers_shock_time(amplitude);
  if (T > 0.9 * out.shock_time * (1.0 + 1e-12)) {
    throw InvalidArgument("T must not exceed 0.9 of the shock time t* = " + std::to_string(out.shock_time));
  }

  const auto algebra = make_vect_s1(cutoff);
  AlgebraVector v0 = AlgebraVector::Zero(algebra.dim());
  v0[vect_s1_sin_index(1)] = amplitude;
  IntegrationOptions opts;
  opts.record_every = std::numeric_limits<int>::max();
  const auto traj = integrate_geodesic(algebra, v0, dt, T, opts);
  const AlgebraVector& v = traj.velocities.back();

  for (int j = 0; j < points; ++j) {
    const double x = 2.0 * std::numbers::pi * j / points;
    double g = v[vect_s1_constant_index()];
    for (int n = 1; n <= cutoff; ++n) {
      g += v[vect_s1_cos_index(n)] * std::cos(n * x) + v[vect_s1_sin_index(n)] * std::sin(n * x);
    }
    const double c = burgers_characteristics(amplitude, x, T);
    out.x.push_back(x);
    out.geodesic.push_back(g);
    out.characteristics.push_back(c);
    out.sup_error = std::max(out.sup_error, std::abs(g - c));
  }
  return out;
}

}  // namespace geoflow::cli
