#include "geoflow/euler2d_spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "geoflow/errors.hpp"
#include "geoflow/geodesic_flow.hpp"
#include "geoflow/rk4.hpp"

namespace geoflow {

namespace {

using cplx = std::complex<double>;
constexpr double kArea = 4.0 * std::numbers::pi * std::numbers::pi;

Mode2D mode_at(int cutoff, std::size_t idx) {
  const int side = 2 * cutoff + 1;
  const int i = static_cast<int>(idx);
  return {i / side - cutoff, i % side - cutoff};
}

}  // namespace

SpectralField2D::SpectralField2D(int cutoff) : cutoff_(cutoff) {
  if (cutoff < 1) throw InvalidArgument("spectral cutoff must be at least 1");
  coeffs_ = Eigen::VectorXcd::Zero(side() * side());
}

std::size_t SpectralField2D::index(const Mode2D& k) const {
  if (k.sup_norm() > cutoff_) throw InvalidArgument("mode outside the cutoff");
  return static_cast<std::size_t>((k.k1 + cutoff_) * side() + (k.k2 + cutoff_));
}

cplx SpectralField2D::operator[](const Mode2D& k) const {
  if (k.sup_norm() > cutoff_) return {0.0, 0.0};
  return coeffs_[static_cast<Eigen::Index>(index(k))];
}

void SpectralField2D::set_mode(const Mode2D& k, cplx c) {
  if (!in_cutoff(k)) throw InvalidArgument("mode is zero or outside the cutoff");
  coeffs_[static_cast<Eigen::Index>(index(k))] = c;
  coeffs_[static_cast<Eigen::Index>(index(-k))] = std::conj(c);
}

double SpectralField2D::symmetry_defect() const {
  double defect = std::abs(coeffs_[static_cast<Eigen::Index>(index({0, 0}))]);
  for (std::size_t i = 0; i < static_cast<std::size_t>(coeffs_.size()); ++i) {
    const Mode2D k = mode_at(cutoff_, i);
    defect = std::max(defect, std::abs(coeffs_[static_cast<Eigen::Index>(index(-k))] -
                                       std::conj(coeffs_[static_cast<Eigen::Index>(i)])));
  }
  return defect;
}

void SpectralField2D::check_symmetric() const {
  const double scale = std::max(1.0, coeffs_.cwiseAbs().maxCoeff());
  if (symmetry_defect() > 1e-14 * scale) {
    throw InvalidArgument("spectral field violates conjugate symmetry or has a k = 0 component");
  }
}

std::vector<Mode2D> SpectralField2D::modes() const {
  std::vector<Mode2D> out;
  for (std::size_t i = 0; i < static_cast<std::size_t>(coeffs_.size()); ++i) {
    const Mode2D k = mode_at(cutoff_, i);
    if (!k.is_zero()) out.push_back(k);
  }
  return out;
}

Eigen::VectorXcd poisson_convolution(int cutoff, const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  const int side = 2 * cutoff + 1;
  if (a.size() != side * side || b.size() != side * side) {
    throw DimensionMismatch(static_cast<std::size_t>(side * side), static_cast<std::size_t>(a.size()));
  }
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(side * side);
  for (int p1 = -cutoff; p1 <= cutoff; ++p1) {
    for (int p2 = -cutoff; p2 <= cutoff; ++p2) {
      const cplx ap = a[(p1 + cutoff) * side + (p2 + cutoff)];
      if (ap == 0.0) continue;
      // q ranges so that k = p + q stays inside the cutoff.
      const int q1_lo = std::max(-cutoff, -cutoff - p1), q1_hi = std::min(cutoff, cutoff - p1);
      const int q2_lo = std::max(-cutoff, -cutoff - p2), q2_hi = std::min(cutoff, cutoff - p2);
      for (int q1 = q1_lo; q1 <= q1_hi; ++q1) {
        const int k1 = p1 + q1;
        for (int q2 = q2_lo; q2 <= q2_hi; ++q2) {
          const int jac = p1 * q2 - p2 * q1;
          if (jac == 0) continue;
          const int k2 = p2 + q2;
          out[(k1 + cutoff) * side + (k2 + cutoff)] +=
              static_cast<double>(kTorusBracketSign * jac) * ap * b[(q1 + cutoff) * side + (q2 + cutoff)];
        }
      }
    }
  }
  out[cutoff * side + cutoff] = 0.0;
  return out;
}

SpectralField2D stream_function(const SpectralField2D& omega) {
  SpectralField2D chi(omega.cutoff());
  for (const auto& k : omega.modes()) {
    chi.coefficients()[static_cast<Eigen::Index>(chi.index(k))] = omega[k] / static_cast<double>(k.norm_squared());
  }
  return chi;
}

namespace {

Eigen::VectorXcd rhs_coefficients(int cutoff, const Eigen::VectorXcd& omega) {
  const int side = 2 * cutoff + 1;
  Eigen::VectorXcd chi = omega;
  for (int i = 0; i < side * side; ++i) {
    const Mode2D k = mode_at(cutoff, static_cast<std::size_t>(i));
    chi[i] = k.is_zero() ? cplx{0.0, 0.0} : omega[i] / static_cast<double>(k.norm_squared());
  }
  return -poisson_convolution(cutoff, chi, omega);
}

}  // namespace

SpectralField2D vorticity_rhs(const SpectralField2D& omega) {
  omega.check_symmetric();
  SpectralField2D out(omega.cutoff());
  out.coefficients() = rhs_coefficients(omega.cutoff(), omega.coefficients());
  return out;
}

double flow_energy(const SpectralField2D& omega) {
  double sum = 0.0;
  for (const auto& k : omega.modes()) sum += std::norm(omega[k]) / static_cast<double>(k.norm_squared());
  return 0.5 * kArea * sum;
}

double flow_enstrophy(const SpectralField2D& omega) {
  double sum = 0.0;
  for (const auto& k : omega.modes()) sum += std::norm(omega[k]);
  return 0.5 * kArea * sum;
}

FlowSeries evolve(const SpectralField2D& omega0, double dt, double T, const FlowObserver& observer,
                  int record_every) {
  omega0.check_symmetric();
  if (record_every < 1) throw InvalidArgument("record_every must be at least 1");
  const long steps = step_count(dt, T);
  const int cutoff = omega0.cutoff();

  FlowSeries series;
  SpectralField2D state = omega0;
  auto log = [&](double t) {
    series.times.push_back(t);
    series.energy.push_back(flow_energy(state));
    series.enstrophy.push_back(flow_enstrophy(state));
    if (observer) observer(t, state);
  };
  log(0.0);

  const auto rhs = [cutoff](const Eigen::VectorXcd& w) { return rhs_coefficients(cutoff, w); };
  for (long n = 1; n <= steps; ++n) {
    const double t_prev = static_cast<double>(n - 1) * dt;
    const double t = (n == steps) ? T : static_cast<double>(n) * dt;
    state.coefficients() = rk4_step(rhs, Eigen::VectorXcd(state.coefficients()), t - t_prev);
    if (!state.coefficients().allFinite()) {
      throw NumericalFailure("non-finite vorticity", static_cast<std::size_t>(n));
    }
    if (n % record_every == 0 || n == steps) log(t);
  }
  series.final_state = state;
  return series;
}

AlgebraVector to_stream_coefficients(const SpectralField2D& omega) {
  const TorusModeBasis basis(omega.cutoff());
  return torus_real_coefficients(basis, [&omega](const Mode2D& k) {
    return omega[k] / static_cast<double>(k.norm_squared());
  });
}

SpectralField2D from_stream_coefficients(int cutoff, const AlgebraVector& chi) {
  const TorusModeBasis basis(cutoff);
  SpectralField2D omega(cutoff);
  for (const auto& k : basis.representatives()) {
    omega.set_mode(k, torus_complex_amplitude(basis, chi, k) * static_cast<double>(k.norm_squared()));
  }
  return omega;
}

double equivalence_vs_geodesic(int cutoff, const SpectralField2D& omega0, double dt, double T) {
  if (cutoff > 4) throw InvalidArgument("equivalence check is limited to N <= 4");
  if (omega0.cutoff() != cutoff) {
    throw DimensionMismatch(static_cast<std::size_t>(cutoff), static_cast<std::size_t>(omega0.cutoff()));
  }
  std::vector<Eigen::VectorXcd> direct;
  evolve(omega0, dt, T, [&direct](double, const SpectralField2D& w) { direct.push_back(w.coefficients()); });

  const MetricLieAlgebra algebra = make_sdiff_t2(cutoff);
  const GeodesicTrajectory traj = integrate_geodesic(algebra, to_stream_coefficients(omega0), dt, T);
  if (traj.velocities.size() != direct.size()) throw NumericalFailure("sample counts differ", direct.size());

  double deviation = 0.0;
  for (std::size_t n = 0; n < direct.size(); ++n) {
    const SpectralField2D mapped = from_stream_coefficients(cutoff, traj.velocities[n]);
    deviation = std::max(deviation, (mapped.coefficients() - direct[n]).cwiseAbs().maxCoeff());
  }
  return deviation;
}

SpectralField2D random_vorticity(int cutoff, std::uint64_t seed, double amplitude) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  SpectralField2D omega(cutoff);
  const TorusModeBasis basis(cutoff);
  for (const auto& k : basis.representatives()) {
    const double scale = amplitude / static_cast<double>(k.norm_squared());
    const double re = normal(rng);
    const double im = normal(rng);
    omega.set_mode(k, scale * cplx{re, im});
  }
  return omega;
}

SpectralField2D field_from_json(int cutoff, const nlohmann::json& modes) {
  if (!modes.is_array()) throw InvalidArgument("mode list must be a JSON array");
  SpectralField2D omega(cutoff);
  std::set<std::pair<int, int>> seen;
  try {
    for (const auto& entry : modes) {
      if (!entry.is_object()) throw InvalidArgument("mode entries must be objects");
      for (const auto& [key, value] : entry.items()) {
        if (key != "k" && key != "re" && key != "im") throw InvalidArgument("unknown key in mode entry: " + key);
      }
      const auto& k = entry.at("k");
      if (!k.is_array() || k.size() != 2) throw InvalidArgument("mode label k must have two integers");
      const Mode2D mode{k[0].get<int>(), k[1].get<int>()};
      const Mode2D rep = TorusModeBasis::is_representative(mode) ? mode : -mode;
      if (!seen.insert({rep.k1, rep.k2}).second) throw InvalidArgument("mode listed twice (k and -k share a pair)");
      const cplx c{entry.value("re", 0.0), entry.value("im", 0.0)};
      omega.set_mode(mode, c);
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed mode list: ") + e.what());
  }
  return omega;
}

namespace {

std::vector<Mode2D> support(const SpectralField2D& f) {
  std::vector<Mode2D> out;
  for (const auto& k : f.modes()) {
    if (std::abs(f[k]) > 0.0) out.push_back(k);
  }
  return out;
}

// Velocity of a stream function: v1 = ∂2χ, v2 = −∂1χ.
struct Velocity2D {
  SpectralField2D c1;
  SpectralField2D c2;
};

Velocity2D velocity_of(const SpectralField2D& chi) {
  Velocity2D v{SpectralField2D(chi.cutoff()), SpectralField2D(chi.cutoff())};
  for (const auto& k : chi.modes()) {
    const auto idx = static_cast<Eigen::Index>(chi.index(k));
    v.c1.coefficients()[idx] = cplx{0.0, static_cast<double>(k.k2)} * chi[k];
    v.c2.coefficients()[idx] = cplx{0.0, static_cast<double>(-k.k1)} * chi[k];
  }
  return v;
}

// (a·∇)b, evaluated exactly on the modes of the cutoff (the caller guarantees
// that all products fit).
std::array<Eigen::VectorXcd, 2> advect(const Velocity2D& a, const Velocity2D& b) {
  const int cutoff = a.c1.cutoff();
  const int side = 2 * cutoff + 1;
  std::array<Eigen::VectorXcd, 2> out = {Eigen::VectorXcd::Zero(side * side), Eigen::VectorXcd::Zero(side * side)};
  const auto modes = a.c1.modes();
  for (const auto& p : modes) {
    const cplx a1 = a.c1[p];
    const cplx a2 = a.c2[p];
    if (a1 == 0.0 && a2 == 0.0) continue;
    for (const auto& q : modes) {
      const Mode2D k = p + q;
      if (k.sup_norm() > cutoff) continue;
      const cplx d = a1 * cplx{0.0, static_cast<double>(q.k1)} + a2 * cplx{0.0, static_cast<double>(q.k2)};
      const auto idx = static_cast<Eigen::Index>((k.k1 + cutoff) * side + (k.k2 + cutoff));
      out[0][idx] += d * b.c1[q];
      out[1][idx] += d * b.c2[q];
    }
  }
  return out;
}

// L² product of the gradient parts: (2π)² Σ_{k≠0} conj(k·â_k)(k·b̂_k)/|k|².
double longitudinal_product(int cutoff, const std::array<Eigen::VectorXcd, 2>& a,
                            const std::array<Eigen::VectorXcd, 2>& b) {
  const int side = 2 * cutoff + 1;
  cplx sum = 0.0;
  for (int i = 0; i < side * side; ++i) {
    const Mode2D k = mode_at(cutoff, static_cast<std::size_t>(i));
    if (k.is_zero()) continue;
    const cplx ka = static_cast<double>(k.k1) * a[0][i] + static_cast<double>(k.k2) * a[1][i];
    const cplx kb = static_cast<double>(k.k1) * b[0][i] + static_cast<double>(k.k2) * b[1][i];
    sum += std::conj(ka) * kb / static_cast<double>(k.norm_squared());
  }
  return kArea * sum.real();
}

}  // namespace

bool curvature_support_ok(int cutoff, const SpectralField2D& u_stream, const SpectralField2D& v_stream) {
  std::vector<Mode2D> modes = support(u_stream);
  const auto sv = support(v_stream);
  modes.insert(modes.end(), sv.begin(), sv.end());
  for (const auto& p : modes) {
    for (const auto& q : modes) {
      if (2 * (p + q).sup_norm() > cutoff) return false;
    }
  }
  return true;
}

double fluid_biquadratic_projection(const SpectralField2D& u_stream, const SpectralField2D& v_stream) {
  const int cutoff = u_stream.cutoff();
  const Velocity2D u = velocity_of(u_stream);
  const Velocity2D v = velocity_of(v_stream);
  // Flat torus: the averaged curvature of the base vanishes.
  const double r_bar = 0.0;
  return r_bar + longitudinal_product(cutoff, advect(u, u), advect(v, v)) -
         longitudinal_product(cutoff, advect(v, u), advect(u, v));
}

FluidCurvature fluid_curvature(int cutoff, const SpectralField2D& u_stream, const SpectralField2D& v_stream) {
  if (u_stream.cutoff() != cutoff || v_stream.cutoff() != cutoff) {
    throw DimensionMismatch(static_cast<std::size_t>(cutoff), static_cast<std::size_t>(u_stream.cutoff()));
  }
  u_stream.check_symmetric();
  v_stream.check_symmetric();
  if (!curvature_support_ok(cutoff, u_stream, v_stream)) {
    throw InvalidArgument("mode-support condition violated: pairwise mode sums must lie within N/2");
  }
  const MetricLieAlgebra algebra = make_sdiff_t2(cutoff);
  const TorusModeBasis basis(cutoff);
  const AlgebraVector u = torus_real_coefficients(basis, [&](const Mode2D& k) { return u_stream[k]; });
  const AlgebraVector v = torus_real_coefficients(basis, [&](const Mode2D& k) { return v_stream[k]; });

  FluidCurvature out;
  out.generic = sectional_curvature(algebra, u, v);
  out.projection = fluid_biquadratic_projection(u_stream, v_stream) / gram_determinant(algebra, u, v);
  return out;
}

std::vector<CurvatureScanEntry> curvature_mode_scan(int cutoff, double max_norm) {
  const MetricLieAlgebra algebra = make_sdiff_t2(cutoff);
  const TorusModeBasis basis(cutoff);
  struct Element {
    Mode2D k;
    bool sine;
    int index;
  };
  std::vector<Element> elements;
  for (const auto& k : basis.representatives()) {
    if (std::sqrt(static_cast<double>(k.norm_squared())) > max_norm + 1e-12) continue;
    elements.push_back({k, false, basis.cos_index(k)});
    elements.push_back({k, true, basis.sin_index(k)});
  }
  std::vector<CurvatureScanEntry> out;
  for (std::size_t a = 0; a < elements.size(); ++a) {
    for (std::size_t b = a + 1; b < elements.size(); ++b) {
      const auto& ea = elements[a];
      const auto& eb = elements[b];
      const double K = sectional_curvature(algebra, basis_vector(algebra, ea.index), basis_vector(algebra, eb.index));
      out.push_back({ea.k, eb.k, ea.sine, eb.sine, K});
    }
  }
  return out;
}

}  // namespace geoflow
