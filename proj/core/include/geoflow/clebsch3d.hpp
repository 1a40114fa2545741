#pragma once

#include <array>
#include <complex>
#include <vector>

#include <nlohmann/json.hpp>

#include "geoflow/spectral_ops3d.hpp"

namespace geoflow {

/// Incompressible flow on the 3D torus in Clebsch variables: v = ∇λ + q∇p.
struct ClebschState {
  int n = 0;
  ScalarField3D p;
  ScalarField3D q;
  ScalarField3D lambda;  ///< zero-mean gauge
  VectorField3D v;
};

struct ClebschVelocity {
  VectorField3D v;
  ScalarField3D lambda;
};

/// Solves Δλ = −div(q∇p) spectrally and returns v = ∇λ + q∇p (products pointwise).
/// Throws DimensionMismatch when p, q do not match the grid.
ClebschVelocity velocity_from_clebsch(const SpectralOps3D& ops, const ScalarField3D& p, const ScalarField3D& q);

/// Builds a state with the derived velocity and gauge field.
ClebschState make_clebsch_state(const SpectralOps3D& ops, ScalarField3D p, ScalarField3D q);

/// One RK4 step of ∂p/∂t + v·∇p = 0, ∂q/∂t + v·∇q = 0 with v rebuilt from
/// (p, q) at every stage. Throws NumericalFailure on non-finite fields.
ClebschState clebsch_step(const SpectralOps3D& ops, const ClebschState& state, double dt);

/// sup |∇×v − ∇q×∇p| with spectral derivatives and pointwise products.
double curl_check(const SpectralOps3D& ops, const ClebschState& state);

/// sup |div v| with spectral derivatives.
double divergence_sup(const SpectralOps3D& ops, const VectorField3D& v);

/// ½ ∫ |v|² dx by the grid rule.
double kinetic_energy(const SpectralOps3D& ops, const VectorField3D& v);

/// 3D Fourier mode with complex amplitude: contributes c e^{ik·x} + conj(c) e^{−ik·x}.
struct Mode3DAmplitude {
  std::array<int, 3> k{};
  std::complex<double> c;
};

ScalarField3D field_from_modes(const SpectralOps3D& ops, const std::vector<Mode3DAmplitude>& modes);

/// Mode list JSON [{"k":[k1,k2,k3],"re":..,"im":..}, ...]. Unknown keys are rejected.
std::vector<Mode3DAmplitude> modes3d_from_json(const nlohmann::json& modes);

struct ClebschDiagnostics {
  double t = 0.0;
  double energy = 0.0;
  double divergence = 0.0;
  double curl_discrepancy = 0.0;
};

ClebschDiagnostics diagnose(const SpectralOps3D& ops, const ClebschState& state, double t);

}  // namespace geoflow
