#pragma once

#include <array>
#include <complex>
#include <memory>
#include <vector>

namespace geoflow {

/// Real scalar field on the periodic grid of n³ points with spacing 2π/n,
/// stored with the last index fastest: index = (i*n + j)*n + l.
using ScalarField3D = std::vector<double>;
using VectorField3D = std::array<ScalarField3D, 3>;

/// Pseudo-spectral derivative operators on the 3D torus [0, 2π]³.
///
/// First derivatives multiply by i·k with the Nyquist wavenumber set to zero;
/// the Poisson solve and the Leray projection use the same wavenumbers, so
/// the discrete divergence of a projected field vanishes to rounding.
/// Owns FFTW plans; not copyable, and not safe to share between threads.
class SpectralOps3D {
 public:
  explicit SpectralOps3D(int n);
  ~SpectralOps3D();
  SpectralOps3D(const SpectralOps3D&) = delete;
  SpectralOps3D& operator=(const SpectralOps3D&) = delete;
  SpectralOps3D(SpectralOps3D&&) noexcept;
  SpectralOps3D& operator=(SpectralOps3D&&) noexcept;

  int n() const noexcept;
  std::size_t size() const noexcept;
  double cell_volume() const noexcept;

  VectorField3D gradient(const ScalarField3D& f) const;
  ScalarField3D divergence(const VectorField3D& v) const;
  VectorField3D curl(const VectorField3D& v) const;

  /// Zero-mean solution of Δλ = rhs (the mean of rhs is ignored).
  ScalarField3D solve_poisson(const ScalarField3D& rhs) const;

  /// Grid coordinate of index i along an axis: 2π i / n.
  double coordinate(int i) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

double sup_norm(const ScalarField3D& f);
double sup_norm(const VectorField3D& v);

}  // namespace geoflow
