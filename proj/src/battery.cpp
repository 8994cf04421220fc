#include "spinwire/battery.hpp"

#include <cmath>

#include "spinwire/interpolation.hpp"

namespace spinwire {

VectorField random_field(const WireGrid& grid, NoiseStream& rng) {
  VectorField u(grid.n, 3);
  for (Eigen::Index k = 0; k < grid.n; ++k)
    for (int c = 0; c < 3; ++c) u(k, c) = rng.normal();
  return u;
}

VectorField random_unit_field(const WireGrid& grid, NoiseStream& rng) {
  VectorField u = random_field(grid, rng);
  for (Eigen::Index k = 0; k < grid.n; ++k) {
    double norm = u.row(k).norm();
    while (norm < 1e-3) {  // resample near-zero rows before normalizing
      for (int c = 0; c < 3; ++c) u(k, c) = rng.normal();
      norm = u.row(k).norm();
    }
    u.row(k) /= norm;
  }
  return u;
}

namespace {

constexpr double kTiny = 1e-300;

double rel(double residual, double scale) { return residual / (scale + kTiny); }

}  // namespace

std::vector<IdentityResult> identity_battery(const SimConfig& config, int field_count) {
  const WireGrid grid = WireGrid::periodic(config.h, config.n, config.origin);
  const NoiseModel noise =
      build_noise(config.noise_family, config.noise_modes, config.noise_law, grid);
  const PhysParams& params = config.params;
  const ScalarField v_now = config.velocity.field_at(0.0, grid);
  NoiseStream rng(config.seed, 0xBA77E51ULL);

  double r_drift = 0.0, r_diff = 0.0, r_corr = 0.0;
  double r_ibp = 0.0, r_udelu = 0.0, r_udu = 0.0, r_ddu = 0.0;
  double r_d2bar = 0.0, r_knots = 0.0, r_recon = 0.0, r_dbar = 0.0, r_supbar = 0.0;

  for (int trial = 0; trial < field_count; ++trial) {
    const VectorField u = random_unit_field(grid, rng);
    const VectorField w = random_field(grid, rng);

    const VectorField F = drift(u, v_now, params, grid);
    const VectorField G = diffusion(u, params, grid);
    const VectorField S = strat_correction(u, noise, params, grid);
    const ScalarField g_sq = squared_norms(G);
    r_drift = std::max(r_drift, rel(dot(F, u).array().abs().maxCoeff(),
                                    node_norms(F).maxCoeff()));
    r_diff = std::max(r_diff, rel(dot(G, u).array().abs().maxCoeff(),
                                  node_norms(G).maxCoeff()));
    const ScalarField s_defect =
        dot(S, u) + noise.kappa_sq.cwiseProduct(g_sq);
    r_corr = std::max(r_corr, rel(s_defect.array().abs().maxCoeff(),
                                  noise.kappa_sq.cwiseProduct(g_sq).maxCoeff()));

    const VectorField du = forward_diff(u, grid);
    const VectorField dw = forward_diff(w, grid);
    const VectorField lap = discrete_laplacian(u, grid);
    const double lhs = inner(du, dw, grid);
    r_ibp = std::max(r_ibp, rel(std::abs(lhs + inner(lap, w, grid)), std::abs(lhs)));

    const ScalarField du_sq = squared_norms(du);
    const ScalarField dum_sq = squared_norms(VectorField(backward_diff(u, grid)));
    const ScalarField lhs_udelu = dot(u, lap) + 0.5 * (du_sq + dum_sq);
    r_udelu = std::max(r_udelu, rel(lhs_udelu.array().abs().maxCoeff(),
                                    (0.5 * (du_sq + dum_sq)).maxCoeff()));
    const ScalarField lhs_udu = dot(u, du) + 0.5 * grid.h * du_sq;
    r_udu = std::max(r_udu, rel(lhs_udu.array().abs().maxCoeff(),
                                (0.5 * grid.h * du_sq).maxCoeff()));

    const VectorField ddw = forward_diff(VectorField(forward_diff(w, grid)), grid);
    const VectorField lap_w_plus = shifted(VectorField(discrete_laplacian(w, grid)), grid, +1);
    r_ddu = std::max(r_ddu, rel((ddw - lap_w_plus).array().abs().maxCoeff(),
                                ddw.array().abs().maxCoeff()));

    const PiecewiseQuadratic q = quad_interp(w, grid);
    const InterpNorms norms = interp_norms(q);
    const double lap_w = lp_norm(VectorField(discrete_laplacian(w, grid)), grid, 2.0);
    r_d2bar = std::max(r_d2bar, rel(std::abs(norms.second_l2 - lap_w), lap_w));

    const double dw_norm = lp_norm(VectorField(forward_diff(w, grid)), grid, 2.0);
    r_dbar = std::max(r_dbar, std::max(0.0, norms.deriv_l2 - 3.0 * dw_norm) /
                                  (dw_norm + kTiny));
    const double sup_w = node_norms(w).maxCoeff();
    r_supbar = std::max(r_supbar,
                        std::max(0.0, norms.sup - 5.0 * sup_w) / (sup_w + kTiny));

    const double field_scale = sup_w + kTiny;
    for (Eigen::Index k = 0; k < q.cells; ++k) {
      const Eigen::Index prev = k == 0 ? q.cells - 1 : k - 1;
      const double vjump =
          (q.value_local(prev, grid.h) - q.value_local(k, 0.0)).norm();
      const double djump =
          (q.derivative_local(prev, grid.h) - q.derivative_local(k, 0.0)).norm();
      r_knots = std::max(r_knots, vjump / field_scale);
      r_knots = std::max(r_knots, djump / (field_scale / grid.h));
    }

    const PiecewiseConstant hat = const_interp(w, grid);
    for (Eigen::Index k = 0; k < q.cells; ++k) {
      for (int i = 0; i < 4; ++i) {
        const double s = grid.h * static_cast<double>(i) / 4.0;
        const Vec3 recon =
            q.value_local(k, s) - remainder_local(q, k, s, Remainder::R0);
        r_recon = std::max(
            r_recon, (recon - hat.values.row(k).transpose()).norm() / field_scale);
      }
    }
  }

  const double tol = 1e-10;
  const auto result = [tol](const char* name, double residual) {
    return IdentityResult{name, residual, tol, residual <= tol};
  };
  return {
      result("drift orthogonality <F(u),u> = 0", r_drift),
      result("diffusion orthogonality <G(u),u> = 0", r_diff),
      result("correction identity <S(u),u> = -kappa^2 |G(u)|^2", r_corr),
      result("integration by parts <du,dv> = -<lap u, v>", r_ibp),
      result("unit-field expansion <u, lap u>", r_udelu),
      result("unit-field expansion <u, du>", r_udu),
      result("dd u equals shifted laplacian", r_ddu),
      result("|D2 ubar|_L2 = |lap u|_Lh2", r_d2bar),
      result("C1 continuity at knots", r_knots),
      result("reconstruction uhat = ubar - R0 ubar", r_recon),
      result("|D ubar|_L2 <= 3 |du|_Lh2", r_dbar),
      result("|ubar|_inf <= 5 |u|_inf", r_supbar),
  };
}

}  // namespace spinwire
