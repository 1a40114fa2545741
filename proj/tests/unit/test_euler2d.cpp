#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "geoflow/errors.hpp"
#include "geoflow/euler2d_spectral.hpp"
#include "geoflow/metric_lie_algebra.hpp"
#include "geoflow/model_zoo.hpp"
#include "geoflow/rk4.hpp"

namespace geoflow {
namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

double max_abs(const Eigen::VectorXcd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

// Physical-space oracle for dω/dt = −{χ, ω}, {f,g} = ∂₂f∂₁g − ∂₁f∂₂g, with
// χ_k = ω_k/|k|². Fields are sampled on an M×M grid with M > 3N, so the
// projection of the degree-2N product back onto |k|∞ <= N is exact.
SpectralField2D physical_rhs(const SpectralField2D& omega) {
  const int n = omega.cutoff();
  const int m = 4 * n + 2;
  const auto modes = omega.modes();
  std::vector<double> chi1(static_cast<std::size_t>(m * m)), chi2(chi1.size()), om1(chi1.size()),
      om2(chi1.size());
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const double x1 = 2 * kPi * i / m, x2 = 2 * kPi * j / m;
      cplx c1 = 0, c2 = 0, o1 = 0, o2 = 0;
      for (const Mode2D& k : modes) {
        const cplx w = omega[k] * std::exp(cplx(0, k.k1 * x1 + k.k2 * x2));
        const cplx dw1 = cplx(0, k.k1) * w, dw2 = cplx(0, k.k2) * w;
        o1 += dw1;
        o2 += dw2;
        c1 += dw1 / static_cast<double>(k.norm_squared());
        c2 += dw2 / static_cast<double>(k.norm_squared());
      }
      const auto idx = static_cast<std::size_t>(i * m + j);
      chi1[idx] = c1.real();
      chi2[idx] = c2.real();
      om1[idx] = o1.real();
      om2[idx] = o2.real();
    }
  }
  SpectralField2D out(n);
  for (const Mode2D& k : modes) {
    cplx acc = 0;
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        const auto idx = static_cast<std::size_t>(i * m + j);
        const double bracket = chi2[idx] * om1[idx] - chi1[idx] * om2[idx];
        acc += -bracket * std::exp(cplx(0, -(k.k1 * 2 * kPi * i / m + k.k2 * 2 * kPi * j / m)));
      }
    }
    out.coefficients()[static_cast<Eigen::Index>(out.index(k))] = acc / static_cast<double>(m * m);
  }
  return out;
}

TEST(Field, StorageAndSymmetry) {
  SpectralField2D f(2);
  EXPECT_EQ(f.side(), 5);
  EXPECT_EQ(f.modes().size(), 24u);
  f.set_mode({1, -2}, cplx(0.5, 0.25));
  EXPECT_EQ(f[(Mode2D{-1, 2})], cplx(0.5, -0.25));
  EXPECT_EQ(f.symmetry_defect(), 0.0);
  EXPECT_NO_THROW(f.check_symmetric());
  f.coefficients()[static_cast<Eigen::Index>(f.index({2, 2}))] = 1.0;
  EXPECT_THROW(f.check_symmetric(), InvalidArgument);
  EXPECT_THROW(vorticity_rhs(f), InvalidArgument);
  EXPECT_THROW(f.set_mode({0, 0}, 1.0), InvalidArgument);
  EXPECT_THROW(f.set_mode({3, 0}, 1.0), InvalidArgument);
}

TEST(VorticityRhs, SingleModeIsSteady) {
  for (const Mode2D k : {Mode2D{1, 0}, Mode2D{2, -1}, Mode2D{3, 3}}) {
    SpectralField2D w(4);
    w.set_mode(k, cplx(0.7, -0.2));
    EXPECT_LT(max_abs(vorticity_rhs(w).coefficients()), 1e-15);
  }
}

TEST(VorticityRhs, TwoModeHandConvolution) {
  // ω = cos x1 + cos 2x2: χ = cos x1 + ¼ cos 2x2 and −{χ,ω} = (3/2) sin x1 sin 2x2.
  SpectralField2D w(3);
  w.set_mode({1, 0}, 0.5);
  w.set_mode({0, 2}, 0.5);
  const auto rhs = vorticity_rhs(w);
  SpectralField2D expected(3);
  expected.set_mode({1, 2}, -3.0 / 8);
  expected.set_mode({1, -2}, 3.0 / 8);
  EXPECT_LT(max_abs(rhs.coefficients() - expected.coefficients()), 1e-15);
  EXPECT_LT(max_abs(physical_rhs(w).coefficients() - expected.coefficients()), 1e-13);
}

TEST(VorticityRhs, MatchesPhysicalSpaceOracle) {
  for (int n : {1, 2, 3}) {
    const auto w = random_vorticity(n, 40 + static_cast<std::uint64_t>(n));
    EXPECT_LT(max_abs(vorticity_rhs(w).coefficients() - physical_rhs(w).coefficients()), 1e-12) << n;
  }
}

TEST(VorticityRhs, QuadraticInvariantsAndSymmetry) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto w = random_vorticity(6, seed);
    const auto rhs = vorticity_rhs(w);
    cplx enstrophy_rate = 0, energy_rate = 0;
    double scale = 0.0;
    for (const Mode2D& k : w.modes()) {
      enstrophy_rate += std::conj(w[k]) * rhs[k];
      energy_rate += std::conj(w[k]) * rhs[k] / static_cast<double>(k.norm_squared());
      scale += std::abs(w[k]) * std::abs(rhs[k]);
    }
    EXPECT_LT(std::abs(enstrophy_rate), 1e-14 * std::max(1.0, scale));
    EXPECT_LT(std::abs(energy_rate), 1e-14 * std::max(1.0, scale));
    EXPECT_LT(rhs.symmetry_defect(), 1e-14);
  }
}

TEST(PoissonConvolution, KernelAntisymmetry) {
  const auto a = random_vorticity(4, 1);
  const auto b = random_vorticity(4, 2);
  const Eigen::VectorXcd ab = poisson_convolution(4, a.coefficients(), b.coefficients());
  const Eigen::VectorXcd ba = poisson_convolution(4, b.coefficients(), a.coefficients());
  EXPECT_LT(max_abs(ab + ba), 1e-14);
  EXPECT_LT(max_abs(poisson_convolution(4, a.coefficients(), a.coefficients())), 1e-15);
  // On stream functions the kernel is the Galerkin bracket of sdiff_t2.
  const auto algebra = make_sdiff_t2(4);
  const AlgebraVector direct = bracket(algebra, to_stream_coefficients(a), to_stream_coefficients(b));
  SpectralField2D conv(4);
  conv.coefficients() =
      poisson_convolution(4, stream_function(a).coefficients(), stream_function(b).coefficients());
  const TorusModeBasis basis(4);
  const AlgebraVector via_conv = torus_real_coefficients(basis, [&](const Mode2D& k) { return conv[k]; });
  EXPECT_LT((direct - via_conv).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Invariants, EnergyAndEnstrophyFormulas) {
  SpectralField2D w(2);
  w.set_mode({1, 1}, 1.0);  // ω = 2 cos(x1 + x2)
  // Z = ½∫ω² = ½·4·2π², E = ½∫|∇χ|² = Z/|k|².
  EXPECT_NEAR(flow_enstrophy(w), 4 * kPi * kPi, 1e-12);
  EXPECT_NEAR(flow_energy(w), 2 * kPi * kPi, 1e-12);
  const auto chi = stream_function(w);
  EXPECT_NEAR(std::abs(chi[(Mode2D{1, 1})]), 0.5, 1e-15);
}

TEST(Evolve, SingleModeConstant) {
  SpectralField2D w(3);
  w.set_mode({2, 1}, cplx(0.3, 0.4));
  const auto series = evolve(w, 1e-2, 1.0);
  EXPECT_EQ(series.final_state.coefficients(), w.coefficients());
  EXPECT_EQ(series.times.back(), 1.0);
}

TEST(Evolve, TwoModeMatchesOracleIntegration) {
  const int n = 2;
  SpectralField2D w(n);
  w.set_mode({1, 0}, 0.5);
  w.set_mode({0, 2}, 0.5);
  const double dt = 1e-2, T = 1.0;
  const auto series = evolve(w, dt, T);

  using State = Eigen::VectorXcd;
  State y = w.coefficients();
  const auto f = [&](const State& s) {
    SpectralField2D tmp(n);
    tmp.coefficients() = s;
    return State(physical_rhs(tmp).coefficients());
  };
  for (int step = 0; step < 1000; ++step) y = rk4_step(f, y, dt / 10);
  EXPECT_LT(max_abs(series.final_state.coefficients() - y), 1e-8);
}

TEST(Evolve, ConservesEnergyAndEnstrophy) {
  const auto w = random_vorticity(8, 42);
  const auto series = evolve(w, 1e-3, 1.0, {}, 10);
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    EXPECT_LT(std::abs(series.energy[i] / series.energy.front() - 1), 1e-8);
    EXPECT_LT(std::abs(series.enstrophy[i] / series.enstrophy.front() - 1), 1e-8);
  }
  EXPECT_LT(series.final_state.symmetry_defect(), 1e-14);
}

TEST(Evolve, ConvergesUnderRefinement) {
  const auto w = random_vorticity(4, 43);
  const auto coarse = evolve(w, 1e-3, 0.5);
  const auto fine = evolve(w, 1e-4, 0.5);
  EXPECT_LT(max_abs(coarse.final_state.coefficients() - fine.final_state.coefficients()), 1e-10);
}

TEST(Evolve, ObserverAndValidation) {
  const auto w = random_vorticity(2, 3);
  int calls = 0;
  evolve(w, 0.1, 1.0, [&](double, const SpectralField2D&) { ++calls; }, 5);
  EXPECT_EQ(calls, 3);  // t = 0, 0.5, 1.0
  EXPECT_THROW(evolve(w, 0.0, 1.0), InvalidArgument);
}

TEST(StreamCoefficients, RoundTrip) {
  const auto w = random_vorticity(3, 9);
  const auto back = from_stream_coefficients(3, to_stream_coefficients(w));
  EXPECT_LT(max_abs(back.coefficients() - w.coefficients()), 1e-15);
  EXPECT_THROW(from_stream_coefficients(3, AlgebraVector::Zero(5)), DimensionMismatch);
}

TEST(Equivalence, RandomDataAllCutoffs) {
  for (int n : {1, 2, 3, 4}) {
    EXPECT_LT(equivalence_vs_geodesic(n, random_vorticity(n, 7), 1e-2, 0.5), 1e-10) << n;
  }
}

TEST(Equivalence, SingleAndTwoMode) {
  SpectralField2D single(2);
  single.set_mode({1, 1}, 0.8);
  EXPECT_EQ(equivalence_vs_geodesic(2, single, 1e-2, 0.5), 0.0);

  SpectralField2D two(3);
  two.set_mode({1, 0}, 0.5);
  two.set_mode({0, 2}, 0.5);
  EXPECT_LT(equivalence_vs_geodesic(3, two, 1e-2, 0.5), 1e-10);
  EXPECT_THROW(equivalence_vs_geodesic(5, random_vorticity(5, 1), 1e-2, 0.5), InvalidArgument);
  EXPECT_THROW(equivalence_vs_geodesic(3, random_vorticity(2, 1), 1e-2, 0.5), DimensionMismatch);
}

TEST(FieldJson, Parses) {
  const auto w = field_from_json(3, nlohmann::json::parse(R"([{"k":[1,0],"re":0.5},{"k":[0,-2],"re":0.5,"im":1}])"));
  EXPECT_EQ(w[(Mode2D{-1, 0})], cplx(0.5, 0));
  EXPECT_EQ(w[(Mode2D{0, 2})], cplx(0.5, -1));
}

TEST(FieldJson, Rejects) {
  const char* bad[] = {
      R"([{"k":[1,0],"re":0.5,"phase":1}])",
      R"([{"k":[1,0],"re":0.5},{"k":[-1,0],"re":0.5}])",
      R"([{"k":[0,0],"re":1}])",
      R"([{"k":[4,0],"re":1}])",
      R"([{"k":[1],"re":1}])",
      R"({"k":[1,0]})",
  };
  for (const char* doc : bad) EXPECT_THROW(field_from_json(3, nlohmann::json::parse(doc)), InvalidArgument) << doc;
}

TEST(RandomVorticity, Deterministic) {
  EXPECT_EQ(random_vorticity(4, 5).coefficients(), random_vorticity(4, 5).coefficients());
  EXPECT_NE(random_vorticity(4, 5).coefficients(), random_vorticity(4, 6).coefficients());
  EXPECT_EQ(random_vorticity(4, 5).symmetry_defect(), 0.0);
}

SpectralField2D single_stream(int n, Mode2D k, cplx c) {
  SpectralField2D f(n);
  f.set_mode(k, c);
  return f;
}

TEST(FluidCurvature, AxisModes) {
  for (int n : {4, 6}) {
    const auto c = fluid_curvature(n, single_stream(n, {1, 0}, 0.5), single_stream(n, {0, 1}, 0.5));
    EXPECT_NEAR(c.generic, c.projection, 1e-8) << n;
  }
}

TEST(FluidCurvature, AgreesOnSupportedPairs) {
  const int n = 8;
  const std::vector<Mode2D> small = {{1, 0}, {0, 1}, {1, 1}, {1, -1}, {2, 0}, {0, 2}, {2, 1}, {1, -2}, {2, 2}};
  std::mt19937_64 rng(44);
  std::normal_distribution<double> normal;
  int checked = 0;
  for (const Mode2D& a : small) {
    for (const Mode2D& b : small) {
      const auto u = single_stream(n, a, cplx(normal(rng), normal(rng)));
      const auto v = single_stream(n, b, cplx(normal(rng), normal(rng)));
      ASSERT_TRUE(curvature_support_ok(n, u, v));
      const auto c = fluid_curvature(n, u, v);
      EXPECT_NEAR(c.generic, c.projection, 1e-8 * std::max(1.0, std::abs(c.generic)));
      ++checked;
    }
  }
  // Few-mode fields.
  for (int trial = 0; trial < 5; ++trial) {
    SpectralField2D u(n), v(n);
    for (const Mode2D& k : {Mode2D{1, 0}, Mode2D{1, 1}, Mode2D{0, 2}}) u.set_mode(k, cplx(normal(rng), normal(rng)));
    for (const Mode2D& k : {Mode2D{0, 1}, Mode2D{2, -1}, Mode2D{1, 0}}) v.set_mode(k, cplx(normal(rng), normal(rng)));
    const auto c = fluid_curvature(n, u, v);
    EXPECT_NEAR(c.generic, c.projection, 1e-8 * std::max(1.0, std::abs(c.generic)));
  }
  EXPECT_EQ(checked, 81);
}

TEST(FluidCurvature, Rejections) {
  EXPECT_THROW(fluid_curvature(4, single_stream(4, {2, 1}, 1.0), single_stream(4, {1, 1}, 1.0)), InvalidArgument);
  EXPECT_FALSE(curvature_support_ok(4, single_stream(4, {2, 1}, 1.0), single_stream(4, {1, 1}, 1.0)));
  EXPECT_THROW(fluid_curvature(4, single_stream(4, {1, 0}, 1.0), single_stream(4, {1, 0}, 2.0)), DegeneratePlane);
  EXPECT_NEAR(fluid_biquadratic_projection(single_stream(4, {1, 0}, 1.0), single_stream(4, {1, 0}, 2.0)), 0.0,
              1e-12);
}

TEST(FluidCurvature, NegativePlanesExist) {
  const auto scan = curvature_mode_scan(8, 2.0);
  // |k| <= 2 gives 6 representatives, 12 real modes, 66 planes.
  EXPECT_EQ(scan.size(), 66u);
  int negative = 0;
  for (const auto& e : scan) negative += e.K < 0.0;
  EXPECT_GT(negative, 0);
}

}  // namespace
}  // namespace geoflow
