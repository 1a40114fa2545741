#pragma once

#include <Eigen/Core>
#include <complex>
#include <functional>
#include <vector>

#include <nlohmann/json.hpp>

#include "geoflow/metric_lie_algebra.hpp"
#include "geoflow/model_zoo.hpp"

namespace geoflow {

/// Complex Fourier coefficients of a real zero-mean field on [0, 2π]² with
/// sup-norm cutoff N, stored on the full (2N+1)² grid of modes.
class SpectralField2D {
 public:
  explicit SpectralField2D(int cutoff);

  int cutoff() const noexcept { return cutoff_; }
  int side() const noexcept { return 2 * cutoff_ + 1; }

  bool in_cutoff(const Mode2D& k) const { return !k.is_zero() && k.sup_norm() <= cutoff_; }
  std::size_t index(const Mode2D& k) const;

  std::complex<double> operator[](const Mode2D& k) const;
  /// Sets ω_k = c and ω_{−k} = conj(c).
  void set_mode(const Mode2D& k, std::complex<double> c);

  const Eigen::VectorXcd& coefficients() const noexcept { return coeffs_; }
  Eigen::VectorXcd& coefficients() noexcept { return coeffs_; }

  /// Largest |ω_{−k} − conj(ω_k)| plus any k = 0 content.
  double symmetry_defect() const;
  /// Throws InvalidArgument when the defect exceeds 1e-14 relative to max|ω_k| (absolute floor 1e-14).
  void check_symmetric() const;

  /// All modes in the cutoff, in storage order.
  std::vector<Mode2D> modes() const;

 private:
  int cutoff_;
  Eigen::VectorXcd coeffs_;
};

/// c_k = σ Σ_{p+q=k} (p1 q2 − p2 q1) a_p b_q over p, q, k in the cutoff:
/// the truncated Poisson bracket {a, b} of two spectral fields.
Eigen::VectorXcd poisson_convolution(int cutoff, const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

/// Stream function χ = Kω, χ_k = ω_k / |k|².
SpectralField2D stream_function(const SpectralField2D& omega);

/// dω/dt = −{Kω, ω}, truncated to the cutoff. Throws on asymmetric input.
SpectralField2D vorticity_rhs(const SpectralField2D& omega);

/// E = ½ (2π)² Σ |ω_k|²/|k|²
double flow_energy(const SpectralField2D& omega);
/// Z = ½ (2π)² Σ |ω_k|²
double flow_enstrophy(const SpectralField2D& omega);

struct FlowSeries {
  std::vector<double> times;
  std::vector<double> energy;
  std::vector<double> enstrophy;
  SpectralField2D final_state{1};
};

using FlowObserver = std::function<void(double t, const SpectralField2D& omega)>;

/// RK4 evolution of the truncated vorticity equation. Energy and enstrophy are
/// logged every `record_every` steps and at the end; `observer` sees the same samples.
FlowSeries evolve(const SpectralField2D& omega0, double dt, double T, const FlowObserver& observer = {},
                  int record_every = 1);

/// Maps ω to stream-function coefficients in the make_sdiff_t2 real basis.
AlgebraVector to_stream_coefficients(const SpectralField2D& omega);
/// Inverse of to_stream_coefficients.
SpectralField2D from_stream_coefficients(int cutoff, const AlgebraVector& chi);

/// Runs evolve and the generic geodesic integrator on make_sdiff_t2(N) from
/// the same data and returns the sup-norm deviation of the vorticity
/// coefficients over all steps. Requires N <= 4.
double equivalence_vs_geodesic(int cutoff, const SpectralField2D& omega0, double dt, double T);

/// Random conjugate-symmetric vorticity with amplitudes decaying like 1/|k|².
SpectralField2D random_vorticity(int cutoff, std::uint64_t seed, double amplitude = 1.0);

/// Mode list JSON [{"k":[k1,k2],"re":..,"im":..}, ...]: each entry sets ω_k
/// and its conjugate partner. Unknown keys and repeated pairs are rejected.
SpectralField2D field_from_json(int cutoff, const nlohmann::json& modes);

struct FluidCurvature {
  double generic = 0.0;     ///< sectional curvature on make_sdiff_t2(N)
  double projection = 0.0;  ///< flat-torus formula via longitudinal projections
};

/// Sectional curvature of the plane spanned by two stream functions, computed
/// by the generic metric-Lie-algebra formula and by
/// R(u,v) = S(∇_u u, ∇_v v) − S(∇_v u, ∇_u v) with S the L² product of
/// gradient parts. Requires |p ± q|∞ <= N/2 for all modes p, q in the supports.
/// Throws InvalidArgument when that condition fails, DegeneratePlane when u ∥ v.
FluidCurvature fluid_curvature(int cutoff, const SpectralField2D& u_stream, const SpectralField2D& v_stream);

/// Whether the supports of the two stream functions satisfy the condition above.
bool curvature_support_ok(int cutoff, const SpectralField2D& u_stream, const SpectralField2D& v_stream);

/// Curvature biquadratic by the projection formula only (no normalisation).
double fluid_biquadratic_projection(const SpectralField2D& u_stream, const SpectralField2D& v_stream);

struct CurvatureScanEntry {
  Mode2D k_u;
  Mode2D k_v;
  bool u_sine = false;  ///< cos(k·x) when false
  bool v_sine = false;
  double K = 0.0;
};

/// Sectional curvature of every independent pair of single real modes
/// cos/sin(k·x) with 0 < |k|₂ <= max_norm (one representative per ±k),
/// evaluated on make_sdiff_t2(cutoff).
std::vector<CurvatureScanEntry> curvature_mode_scan(int cutoff, double max_norm);

}  // namespace geoflow
