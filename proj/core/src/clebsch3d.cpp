#include "geoflow/clebsch3d.hpp"

#include <cmath>

#include "geoflow/errors.hpp"

namespace geoflow {

namespace {

void check_grid(const SpectralOps3D& ops, const ScalarField3D& f) {
  if (f.size() != ops.size()) throw DimensionMismatch(ops.size(), f.size());
}

bool all_finite(const ScalarField3D& f) {
  for (double x : f) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

// −v·∇f
ScalarField3D transport_rate(const SpectralOps3D& ops, const VectorField3D& v, const ScalarField3D& f) {
  const VectorField3D grad = ops.gradient(f);
  ScalarField3D out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    out[i] = -(v[0][i] * grad[0][i] + v[1][i] * grad[1][i] + v[2][i] * grad[2][i]);
  }
  return out;
}

ScalarField3D axpy(const ScalarField3D& y, double a, const ScalarField3D& x) {
  ScalarField3D out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] + a * x[i];
  return out;
}

}  // namespace

ClebschVelocity velocity_from_clebsch(const SpectralOps3D& ops, const ScalarField3D& p, const ScalarField3D& q) {
  check_grid(ops, p);
  check_grid(ops, q);
  VectorField3D flux = ops.gradient(p);
  for (auto& comp : flux) {
    for (std::size_t i = 0; i < comp.size(); ++i) comp[i] *= q[i];
  }
  ScalarField3D rhs = ops.divergence(flux);
  for (double& x : rhs) x = -x;

  ClebschVelocity out;
  out.lambda = ops.solve_poisson(rhs);
  const VectorField3D grad_lambda = ops.gradient(out.lambda);
  for (std::size_t c = 0; c < 3; ++c) {
    out.v[c].resize(ops.size());
    for (std::size_t i = 0; i < ops.size(); ++i) out.v[c][i] = grad_lambda[c][i] + flux[c][i];
  }
  return out;
}

ClebschState make_clebsch_state(const SpectralOps3D& ops, ScalarField3D p, ScalarField3D q) {
  ClebschVelocity vel = velocity_from_clebsch(ops, p, q);
  return {ops.n(), std::move(p), std::move(q), std::move(vel.lambda), std::move(vel.v)};
}

ClebschState clebsch_step(const SpectralOps3D& ops, const ClebschState& state, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
  check_grid(ops, state.p);
  check_grid(ops, state.q);

  struct Rate {
    ScalarField3D dp, dq;
  };
  auto rate = [&ops](const ScalarField3D& p, const ScalarField3D& q) {
    const VectorField3D v = velocity_from_clebsch(ops, p, q).v;
    return Rate{transport_rate(ops, v, p), transport_rate(ops, v, q)};
  };

  const Rate k1 = rate(state.p, state.q);
  const Rate k2 = rate(axpy(state.p, 0.5 * dt, k1.dp), axpy(state.q, 0.5 * dt, k1.dq));
  const Rate k3 = rate(axpy(state.p, 0.5 * dt, k2.dp), axpy(state.q, 0.5 * dt, k2.dq));
  const Rate k4 = rate(axpy(state.p, dt, k3.dp), axpy(state.q, dt, k3.dq));

  ScalarField3D p(state.p.size()), q(state.q.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = state.p[i] + dt / 6.0 * (k1.dp[i] + 2.0 * k2.dp[i] + 2.0 * k3.dp[i] + k4.dp[i]);
    q[i] = state.q[i] + dt / 6.0 * (k1.dq[i] + 2.0 * k2.dq[i] + 2.0 * k3.dq[i] + k4.dq[i]);
  }
  if (!all_finite(p) || !all_finite(q)) throw NumericalFailure("non-finite Clebsch fields", 0);
  return make_clebsch_state(ops, std::move(p), std::move(q));
}

double curl_check(const SpectralOps3D& ops, const ClebschState& state) {
  const VectorField3D curl_v = ops.curl(state.v);
  const VectorField3D gq = ops.gradient(state.q);
  const VectorField3D gp = ops.gradient(state.p);
  double worst = 0.0;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const double c0 = gq[1][i] * gp[2][i] - gq[2][i] * gp[1][i];
    const double c1 = gq[2][i] * gp[0][i] - gq[0][i] * gp[2][i];
    const double c2 = gq[0][i] * gp[1][i] - gq[1][i] * gp[0][i];
    worst = std::max({worst, std::abs(curl_v[0][i] - c0), std::abs(curl_v[1][i] - c1), std::abs(curl_v[2][i] - c2)});
  }
  return worst;
}

double divergence_sup(const SpectralOps3D& ops, const VectorField3D& v) { return sup_norm(ops.divergence(v)); }

double kinetic_energy(const SpectralOps3D& ops, const VectorField3D& v) {
  double sum = 0.0;
  for (std::size_t i = 0; i < ops.size(); ++i) sum += v[0][i] * v[0][i] + v[1][i] * v[1][i] + v[2][i] * v[2][i];
  return 0.5 * sum * ops.cell_volume();
}

ScalarField3D field_from_modes(const SpectralOps3D& ops, const std::vector<Mode3DAmplitude>& modes) {
  const int n = ops.n();
  ScalarField3D f(ops.size(), 0.0);
  for (const auto& m : modes) {
    for (int a : m.k) {
      if (2 * std::abs(a) >= n) throw InvalidArgument("mode is not resolved by the grid");
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int l = 0; l < n; ++l) {
          const double phase = m.k[0] * ops.coordinate(i) + m.k[1] * ops.coordinate(j) + m.k[2] * ops.coordinate(l);
          // c e^{iθ} + conj(c) e^{−iθ} = 2 (Re c cos θ − Im c sin θ)
          f[(static_cast<std::size_t>(i) * n + j) * n + l] +=
              2.0 * (m.c.real() * std::cos(phase) - m.c.imag() * std::sin(phase));
        }
      }
    }
  }
  return f;
}

std::vector<Mode3DAmplitude> modes3d_from_json(const nlohmann::json& modes) {
  if (!modes.is_array()) throw InvalidArgument("mode list must be a JSON array");
  std::vector<Mode3DAmplitude> out;
  try {
    for (const auto& entry : modes) {
      if (!entry.is_object()) throw InvalidArgument("mode entries must be objects");
      for (const auto& [key, value] : entry.items()) {
        if (key != "k" && key != "re" && key != "im") throw InvalidArgument("unknown key in mode entry: " + key);
      }
      const auto& k = entry.at("k");
      if (!k.is_array() || k.size() != 3) throw InvalidArgument("3D mode label k must have three integers");
      out.push_back({{k[0].get<int>(), k[1].get<int>(), k[2].get<int>()},
                     {entry.value("re", 0.0), entry.value("im", 0.0)}});
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed mode list: ") + e.what());
  }
  return out;
}

ClebschDiagnostics diagnose(const SpectralOps3D& ops, const ClebschState& state, double t) {
  return {t, kinetic_energy(ops, state.v), divergence_sup(ops, state.v), curl_check(ops, state)};
}

}  // namespace geoflow
