#pragma once

#include <string>
#include <vector>

#include "spinwire/grid.hpp"
#include "spinwire/rng.hpp"

namespace spinwire {

/// One truncated Q-Wiener mode: amplitude q_j and grid samples of f_j, f_j', f_j''.
struct NoiseMode {
  double q = 0.0;
  ScalarField f;
  ScalarField f_prime;
  ScalarField f_double_prime;
};

struct NoiseFamilySpec {
  enum class Kind { None, GaussianBumps, FourierEnvelope };
  Kind kind = Kind::None;

  // GaussianBumps: f_j(x) = exp(-(x - c_j)^2 / (2 width^2)), c_j = center + (j-1) spacing.
  double width = 1.0;
  double spacing = 1.0;
  double center = 0.0;

  // FourierEnvelope: f_j(x) = exp(-x^2 / (2 envelope_width^2)) * trig(omega_j x),
  // alternating cos/sin with omega_j = omega0 * ceil(j/2).
  double envelope_width = 4.0;
  double omega0 = 1.0;
};

/// Amplitude law q_j; must stay square-summable as a family.
struct AmplitudeLaw {
  enum class Kind { Geometric, Power };
  Kind kind = Kind::Geometric;
  double amp = 0.0;       // q_1
  double ratio = 0.5;     // geometric: q_j = amp * ratio^(j-1), needs ratio < 1
  double exponent = 1.0;  // power: q_j = amp * j^-exponent, needs exponent > 1/2

  double q_at(int j) const;  // 1-based
};

/// Truncated Q-Wiener data on a grid plus the derived intensity fields.
struct NoiseModel {
  std::vector<NoiseMode> modes;
  ScalarField kappa_sq;           // kappa^2(x) = sum q_j^2 f_j^2(x)
  ScalarField kappa_kappa_prime;  // (kappa^2)'/2 = sum q_j^2 f_j f_j'
  double c_kappa = 0.0;           // grid max of the defining sup
  double q_total_sq = 0.0;

  int mode_count() const { return static_cast<int>(modes.size()); }
};

NoiseModel build_noise(const NoiseFamilySpec& family, int mode_count,
                       const AmplitudeLaw& law, const WireGrid& grid);

/// Grid-independent mode increments xi_j for one step, in fixed j-order.
Eigen::VectorXd draw_mode_normals(NoiseStream& rng, int mode_count);

/// dW(x) = sum_j q_j xi_j sqrt(dt) f_j(x) for given xi.
ScalarField assemble_increment(const NoiseModel& noise, const Eigen::VectorXd& xi,
                               double dt);

/// Draws fresh xi from rng and assembles the increment field.
ScalarField sample_increment(const NoiseModel& noise, double dt, NoiseStream& rng);

/// Feasibility constants for the uniform estimates at exponent p.
struct SmallnessReport {
  double n1p = 0.0;
  double n2p = 0.0;
  bool n1_positive = false;
  bool n2_positive = false;
  double c_kappa = 0.0;
  double c_kappa_ceiling = 0.0;  // sufficient bound on C_kappa
  bool ceiling_satisfied = false;
};

SmallnessReport check_smallness(const NoiseModel& noise, double alpha, double gamma,
                                double p, double delta, double b_p);

/// Spin-velocity field, spatially uniform; c_v() = sup_t |v(t)|.
struct SpinVelocity {
  enum class Kind { Constant, Pulse, Tabulated };
  Kind kind = Kind::Constant;
  double value = 0.0;
  double t_on = 0.0;   // pulse window [t_on, t_off)
  double t_off = 0.0;
  std::vector<double> times;   // tabulated: piecewise constant from the left
  std::vector<double> values;

  double at(double t) const;
  ScalarField field_at(double t, const WireGrid& grid) const {
    return ScalarField::Constant(grid.n, at(t));
  }
  double c_v() const;
  bool is_zero() const;
};

}  // namespace spinwire
