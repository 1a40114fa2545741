#pragma once

#include <array>
#include <complex>
#include <optional>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "geoflow/metric_lie_algebra.hpp"

namespace geoflow {

/// so(3) with the cross product and the diagonal metric diag(G1, G2, G3).
MetricLieAlgebra make_so3(double g1, double g2, double g3);

/// The non-abelian two-dimensional algebra [e0, e1] = e1 with the identity metric.
MetricLieAlgebra make_affine2();

/// Galerkin truncation of the vector fields on the circle with the L² metric.
/// Basis: index 0 is the constant field, 2n-1 is cos(nx), 2n is sin(nx) for
/// 1 <= n <= N. Bracket [u,v] = uv' - vu' projected onto the basis.
MetricLieAlgebra make_vect_s1(int cutoff);

int vect_s1_constant_index();
int vect_s1_cos_index(int n);
int vect_s1_sin_index(int n);

/// Fourier label on the 2D torus.
struct Mode2D {
  int k1 = 0;
  int k2 = 0;

  friend bool operator==(const Mode2D&, const Mode2D&) = default;
  Mode2D operator-() const { return {-k1, -k2}; }
  Mode2D operator+(const Mode2D& o) const { return {k1 + o.k1, k2 + o.k2}; }
  Mode2D operator-(const Mode2D& o) const { return {k1 - o.k1, k2 - o.k2}; }
  int sup_norm() const;
  int norm_squared() const { return k1 * k1 + k2 * k2; }
  bool is_zero() const { return k1 == 0 && k2 == 0; }
};

/// p1 q2 - p2 q1.
inline int cross(const Mode2D& p, const Mode2D& q) { return p.k1 * q.k2 - p.k2 * q.k1; }

/// Real cos/sin basis of zero-mean stream functions on the torus [0, 2π]² with
/// sup-norm cutoff N. One representative k per ±k pair (k1 > 0, or k1 = 0 and
/// k2 > 0); coefficient 2m is cos(k_m·x) and 2m+1 is sin(k_m·x).
class TorusModeBasis {
 public:
  explicit TorusModeBasis(int cutoff);

  int cutoff() const noexcept { return cutoff_; }
  int dim() const noexcept { return static_cast<int>(2 * reps_.size()); }
  const std::vector<Mode2D>& representatives() const noexcept { return reps_; }

  bool in_cutoff(const Mode2D& k) const;
  static bool is_representative(const Mode2D& k);
  /// Index m of the representative pair containing k (k or -k), if in the cutoff.
  std::optional<int> pair_index(const Mode2D& k) const;

  int cos_index(const Mode2D& rep) const;
  int sin_index(const Mode2D& rep) const;

 private:
  int cutoff_;
  std::vector<Mode2D> reps_;
  std::vector<int> lookup_;  // (2N+1)² grid -> representative index or -1
};

/// Sign of the Poisson bracket on exponentials for {f,g} = ∂₂f∂₁g − ∂₁f∂₂g:
/// {e^{ip·x}, e^{iq·x}} = sigma (p1 q2 − p2 q1) e^{i(p+q)·x}.
inline constexpr int kTorusBracketSign = +1;

/// Galerkin truncation of the Poisson-bracket algebra of stream functions on
/// the 2D torus with the kinetic-energy metric G(χ,ψ) = ∫ ∇χ·∇ψ dx.
MetricLieAlgebra make_sdiff_t2(int cutoff);

/// Real basis coefficients from complex stream-function amplitudes c_k (only
/// representative modes are read; conjugate symmetry is assumed).
template <class Amplitude>
AlgebraVector torus_real_coefficients(const TorusModeBasis& basis, Amplitude&& amplitude) {
  AlgebraVector out(basis.dim());
  for (std::size_t m = 0; m < basis.representatives().size(); ++m) {
    const std::complex<double> c = amplitude(basis.representatives()[m]);
    out[static_cast<Eigen::Index>(2 * m)] = 2.0 * c.real();
    out[static_cast<Eigen::Index>(2 * m + 1)] = -2.0 * c.imag();
  }
  return out;
}

/// Complex amplitude of e^{ik·x} in the function represented by `coeffs`.
std::complex<double> torus_complex_amplitude(const TorusModeBasis& basis, const AlgebraVector& coeffs,
                                             const Mode2D& k);

struct Cylinder {
  double r = 0.0;
  double h = 0.0;
};
struct Box {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};
struct Ellipsoid {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

/// Uniform-density body, unit mass. Cylinder axis is the third axis; box
/// lengths are full side lengths; ellipsoid lengths are semi-axes.
using RigidBodySpec = std::variant<Cylinder, Box, Ellipsoid>;

struct InertiaParameters {
  std::array<double, 3> M{};   ///< principal second moments per unit mass
  std::array<double, 3> G{};   ///< principal moments of inertia, G1 = M2 + M3 (cyclic)
  std::array<double, 3> mu{};  ///< reciprocal moments 1/M_i
};

InertiaParameters inertia_from_shape(const RigidBodySpec& spec);

/// Inertia parameters from reciprocal moments via M_i = 1/mu_i.
InertiaParameters inertia_from_reciprocal_moments(const std::array<double, 3>& mu);

/// {"shape":"cylinder","r":1,"h":0.5} | {"shape":"box","a":..,"b":..,"c":..} |
/// {"shape":"ellipsoid","a":..,"b":..,"c":..}. Unknown keys are rejected.
RigidBodySpec parse_shape_json(const nlohmann::json& doc);

}  // namespace geoflow
