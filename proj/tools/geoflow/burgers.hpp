#pragma once

#include <vector>

namespace geoflow::cli {

/// Truncated geodesic flow on make_vect_s1(N) from v0 = A sin x, compared with
/// the method of characteristics for v_t + 3 v v_x = 0.
struct BurgersComparison {
  std::vector<double> x;
  std::vector<double> geodesic;
  std::vector<double> characteristics;
  double sup_error = 0.0;
  double shock_time = 0.0;
};

/// Shock time 1/(3 max(-v0')) of v0 = A sin x.
double burgers_shock_time(double amplitude);

/// Characteristics solution at (x, t): v = A sin ξ with x = ξ + 3 t A sin ξ,
/// solved by Newton's method. Requires t below the shock time.
double burgers_characteristics(double amplitude, double x, double t);

/// Refuses T > 0.9 t* (up to 1e-12 relative).
BurgersComparison burgers_compare(int cutoff, double amplitude, double T, double dt, int points);

}  // namespace geoflow::cli
