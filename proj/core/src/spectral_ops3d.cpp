#include "geoflow/spectral_ops3d.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "geoflow/errors.hpp"

namespace geoflow {

namespace {
using cplx = std::complex<double>;
}

struct SpectralOps3D::Impl {
  int n;
  int nh;  // n/2 + 1 complex points along the last axis
  std::size_t real_size;
  std::size_t spec_size;
  double* real_buf = nullptr;
  fftw_complex* spec_buf = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  std::vector<double> kx, ky, kz;  // derivative wavenumbers per spectral index

  explicit Impl(int n_) : n(n_), nh(n_ / 2 + 1) {
    real_size = static_cast<std::size_t>(n) * n * n;
    spec_size = static_cast<std::size_t>(n) * n * nh;
    real_buf = fftw_alloc_real(real_size);
    spec_buf = fftw_alloc_complex(spec_size);
    forward = fftw_plan_dft_r2c_3d(n, n, n, real_buf, spec_buf, FFTW_ESTIMATE);
    backward = fftw_plan_dft_c2r_3d(n, n, n, spec_buf, real_buf, FFTW_ESTIMATE);

    auto wave = [this](int i) {
      if (2 * i == n) return 0.0;  // Nyquist: odd derivatives vanish
      return static_cast<double>(i <= n / 2 ? i : i - n);
    };
    kx.resize(spec_size);
    ky.resize(spec_size);
    kz.resize(spec_size);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int l = 0; l < nh; ++l) {
          const std::size_t idx = (static_cast<std::size_t>(i) * n + j) * nh + l;
          kx[idx] = wave(i);
          ky[idx] = wave(j);
          kz[idx] = wave(l);
        }
      }
    }
  }

  ~Impl() {
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
    if (real_buf) fftw_free(real_buf);
    if (spec_buf) fftw_free(spec_buf);
  }

  std::vector<cplx> to_spectral(const ScalarField3D& f) const {
    std::copy(f.begin(), f.end(), real_buf);
    fftw_execute(forward);
    std::vector<cplx> out(spec_size);
    const double scale = 1.0 / static_cast<double>(real_size);
    for (std::size_t i = 0; i < spec_size; ++i) out[i] = cplx{spec_buf[i][0], spec_buf[i][1]} * scale;
    return out;
  }

  ScalarField3D to_physical(const std::vector<cplx>& s) const {
    for (std::size_t i = 0; i < spec_size; ++i) {
      spec_buf[i][0] = s[i].real();
      spec_buf[i][1] = s[i].imag();
    }
    fftw_execute(backward);  // destroys spec_buf, which is scratch
    return ScalarField3D(real_buf, real_buf + real_size);
  }

  const std::vector<double>& wave(int axis) const { return axis == 0 ? kx : (axis == 1 ? ky : kz); }
};

SpectralOps3D::SpectralOps3D(int n) {
  if (n < 8) throw InvalidArgument("grid must have at least 8 points per axis");
  if (n % 2 != 0) throw InvalidArgument("grid size must be even");
  impl_ = std::make_unique<Impl>(n);
}

SpectralOps3D::~SpectralOps3D() = default;
SpectralOps3D::SpectralOps3D(SpectralOps3D&&) noexcept = default;
SpectralOps3D& SpectralOps3D::operator=(SpectralOps3D&&) noexcept = default;

int SpectralOps3D::n() const noexcept { return impl_->n; }
std::size_t SpectralOps3D::size() const noexcept { return impl_->real_size; }

double SpectralOps3D::cell_volume() const noexcept {
  const double h = 2.0 * std::numbers::pi / impl_->n;
  return h * h * h;
}

double SpectralOps3D::coordinate(int i) const { return 2.0 * std::numbers::pi * i / impl_->n; }

VectorField3D SpectralOps3D::gradient(const ScalarField3D& f) const {
  if (f.size() != size()) throw DimensionMismatch(size(), f.size());
  const auto s = impl_->to_spectral(f);
  VectorField3D out;
  for (int axis = 0; axis < 3; ++axis) {
    const auto& k = impl_->wave(axis);
    std::vector<cplx> d(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) d[i] = cplx{0.0, k[i]} * s[i];
    out[static_cast<std::size_t>(axis)] = impl_->to_physical(d);
  }
  return out;
}

ScalarField3D SpectralOps3D::divergence(const VectorField3D& v) const {
  std::vector<cplx> acc(impl_->spec_size, cplx{0.0, 0.0});
  for (int axis = 0; axis < 3; ++axis) {
    const auto& comp = v[static_cast<std::size_t>(axis)];
    if (comp.size() != size()) throw DimensionMismatch(size(), comp.size());
    const auto s = impl_->to_spectral(comp);
    const auto& k = impl_->wave(axis);
    for (std::size_t i = 0; i < s.size(); ++i) acc[i] += cplx{0.0, k[i]} * s[i];
  }
  return impl_->to_physical(acc);
}

VectorField3D SpectralOps3D::curl(const VectorField3D& v) const {
  std::array<std::vector<cplx>, 3> s;
  for (std::size_t axis = 0; axis < 3; ++axis) {
    if (v[axis].size() != size()) throw DimensionMismatch(size(), v[axis].size());
    s[axis] = impl_->to_spectral(v[axis]);
  }
  VectorField3D out;
  for (int c = 0; c < 3; ++c) {
    const int a = (c + 1) % 3;
    const int b = (c + 2) % 3;
    // (curl v)_c = ∂_a v_b − ∂_b v_a
    const auto& ka = impl_->wave(a);
    const auto& kb = impl_->wave(b);
    std::vector<cplx> d(impl_->spec_size);
    for (std::size_t i = 0; i < d.size(); ++i) {
      d[i] = cplx{0.0, ka[i]} * s[static_cast<std::size_t>(b)][i] - cplx{0.0, kb[i]} * s[static_cast<std::size_t>(a)][i];
    }
    out[static_cast<std::size_t>(c)] = impl_->to_physical(d);
  }
  return out;
}

ScalarField3D SpectralOps3D::solve_poisson(const ScalarField3D& rhs) const {
  if (rhs.size() != size()) throw DimensionMismatch(size(), rhs.size());
  auto s = impl_->to_spectral(rhs);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double k2 = impl_->kx[i] * impl_->kx[i] + impl_->ky[i] * impl_->ky[i] + impl_->kz[i] * impl_->kz[i];
    s[i] = k2 > 0.0 ? -s[i] / k2 : cplx{0.0, 0.0};
  }
  return impl_->to_physical(s);
}

double sup_norm(const ScalarField3D& f) {
  double m = 0.0;
  for (double x : f) m = std::max(m, std::abs(x));
  return m;
}

double sup_norm(const VectorField3D& v) {
  return std::max({sup_norm(v[0]), sup_norm(v[1]), sup_norm(v[2])});
}

}  // namespace geoflow
