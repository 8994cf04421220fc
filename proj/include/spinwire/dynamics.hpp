#pragma once

#include <stdexcept>

#include "spinwire/grid.hpp"
#include "spinwire/noise.hpp"

namespace spinwire {

struct PhysParams {
  double alpha = 1.0;  // damping, > 0
  double gamma = 0.0;  // non-adiabatic coefficient

  PhysParams() = default;
  PhysParams(double a, double g) : alpha(a), gamma(g) {
    if (!(alpha > 0.0)) throw std::invalid_argument("PhysParams: alpha must be > 0");
  }
};

/// Transport + exchange drift:
///   u x (u x v du) + gamma u x v du - u x (lap u + alpha u x lap u).
/// For nodewise unit fields <drift(u), u> = 0 at every node.
inline VectorField drift(const VectorField& u, const ScalarField& v_now,
                         const PhysParams& p, const WireGrid& g) {
  detail::require_match(u.rows(), g, "drift");
  detail::require_match(v_now.rows(), g, "drift(v)");
  const VectorField du = forward_diff(u, g);
  const VectorField lap = discrete_laplacian(u, g);
  const VectorField v_du = scale_rows(v_now, du);
  const VectorField u_x_vdu = cross(u, v_du);
  const VectorField u_x_lap = cross(u, lap);
  return cross(u, u_x_vdu) + p.gamma * u_x_vdu - u_x_lap - p.alpha * cross(u, u_x_lap);
}

/// Per-unit-noise diffusion field u x (u x du) + gamma u x du; always orthogonal to u.
inline VectorField diffusion(const VectorField& u, const PhysParams& p,
                             const WireGrid& g) {
  detail::require_match(u.rows(), g, "diffusion");
  const VectorField du = forward_diff(u, g);
  const VectorField u_x_du = cross(u, du);
  return cross(u, u_x_du) + p.gamma * u_x_du;
}

/// Stratonovich-to-Ito correction drift. For nodewise unit fields
/// <strat_correction(u), u> = -kappa^2 |diffusion(u)|^2 at every node.
inline VectorField strat_correction(const VectorField& u, const NoiseModel& noise,
                                    const PhysParams& p, const WireGrid& g) {
  detail::require_match(u.rows(), g, "strat_correction");
  detail::require_match(noise.kappa_sq.rows(), g, "strat_correction(noise)");
  const double gamma = p.gamma;
  const VectorField du = forward_diff(u, g);
  const VectorField du_minus = backward_diff(u, g);
  const VectorField lap = discrete_laplacian(u, g);
  const ScalarField u_sq = squared_norms(u);
  const VectorField u_x_du = cross(u, du);
  const VectorField u_x_lap = cross(u, lap);

  // G1 = (gamma^2 - |u|^2) u x (u x lap u) - 2 gamma |u|^2 u x lap u
  const VectorField g1 = scale_rows((gamma * gamma - u_sq.array()).matrix(),
                                    cross(u, u_x_lap)) -
                         2.0 * gamma * scale_rows(u_sq, u_x_lap);
  // G2 = -gamma^2 du x (u x du) - |u x du|^2 u
  const VectorField g2 =
      -gamma * gamma * cross(du, u_x_du) - scale_rows(squared_norms(u_x_du), u);
  // G3 = 2 gamma <u, du^-> u x du
  const VectorField g3 = 2.0 * gamma * scale_rows(dot(u, du_minus), u_x_du);

  const ScalarField k2 = noise.kappa_sq;
  const ScalarField k2_minus = shifted(k2, g, -1);
  const VectorField gk = scale_rows(0.5 * (k2_minus + k2), g1) + scale_rows(k2, g2) +
                         scale_rows(k2_minus, g3);

  const VectorField gu = cross(u, u_x_du) + gamma * u_x_du;
  const VectorField u_x_gu = cross(u, gu);
  return gk + scale_rows(noise.kappa_kappa_prime, cross(u, u_x_gu) + gamma * u_x_gu);
}

/// drift + 1/2 strat_correction; on unit fields
/// <full_drift(u), u> = -1/2 kappa^2 |diffusion(u)|^2 nodewise.
inline VectorField full_drift(const VectorField& u, const ScalarField& v_now,
                              const NoiseModel& noise, const PhysParams& p,
                              const WireGrid& g) {
  return drift(u, v_now, p, g) + 0.5 * strat_correction(u, noise, p, g);
}

struct SimplifiedTriple {
  VectorField drift;       // F
  VectorField correction;  // S
  VectorField diffusion;   // G
};

/// On-sphere simplified continuum coefficients, evaluated from exact spatial
/// derivatives of a nodewise unit field; used as a consistency oracle against
/// the general discrete formulas.
inline SimplifiedTriple continuous_simplified(const VectorField& u, const VectorField& Du,
                                              const VectorField& D2u,
                                              const ScalarField& v_now,
                                              const ScalarField& kappa_sq,
                                              const ScalarField& kappa_kappa_prime,
                                              const PhysParams& p,
                                              double unit_tol = 1e-8) {
  const ScalarField dev = (node_norms(u).array() - 1.0).abs().matrix();
  if (dev.maxCoeff() > unit_tol)
    throw std::invalid_argument("continuous_simplified: input field is not nodewise unit");

  const double gamma = p.gamma;
  const VectorField u_x_Du = cross(u, Du);
  const VectorField u_x_D2u = cross(u, D2u);
  const ScalarField Du_sq = squared_norms(Du);

  SimplifiedTriple t;
  t.drift = -scale_rows(v_now, Du - gamma * u_x_Du) - u_x_D2u + p.alpha * D2u +
            p.alpha * scale_rows(Du_sq, u);
  t.correction =
      scale_rows(kappa_sq, (1.0 - gamma * gamma) * D2u -
                               2.0 * gamma * gamma * scale_rows(Du_sq, u) -
                               2.0 * gamma * u_x_D2u) +
      scale_rows(kappa_kappa_prime, (1.0 - gamma * gamma) * Du - 2.0 * gamma * u_x_Du);
  t.diffusion = -Du + gamma * u_x_Du;
  return t;
}

}  // namespace spinwire
