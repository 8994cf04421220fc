#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinwire/dynamics.hpp"

namespace spinwire {

enum class Scheme { EulerMaruyamaIto, HeunStratonovich };

inline constexpr double kCflSafety = 0.2;  // dt <= kCflSafety * h^2

struct SimConfig {
  PhysParams params;

  double h = 0.1;
  Eigen::Index n = 128;
  double origin = 0.0;
  Boundary boundary = Boundary::Clamped;

  double dt = 1e-3;
  double T = 1.0;
  long long snapshot_stride = 1;

  Scheme scheme = Scheme::EulerMaruyamaIto;
  bool projection = true;
  bool cfl_override = false;

  NoiseFamilySpec noise_family;
  int noise_modes = 0;
  AmplitudeLaw noise_law;

  SpinVelocity velocity;

  std::uint64_t seed = 0;
  double wall_width = 1.0;

  WireGrid make_grid() const { return WireGrid(h, n, origin, boundary); }
  double cfl_limit() const { return kCflSafety * h * h; }
  long long step_count() const;

  /// Throws std::invalid_argument on any violated invariant.
  void validate() const;

  SimConfig refined() const;  // h/2 on the same window, nodes nested
};

struct SimulationError : std::runtime_error {
  long long step;
  SimulationError(const std::string& what, long long step_)
      : std::runtime_error(what), step(step_) {}
};

/// Deterministic mode increments for step k, derived positionally from
/// (seed, stream). aggregate > 1 sums that many base-resolution draws per
/// step (rescaled to unit variance), which couples runs across dt refinement.
class IncrementSource {
 public:
  IncrementSource(std::uint64_t seed, std::uint64_t stream, int mode_count,
                  int aggregate = 1)
      : rng_(seed, stream), modes_(mode_count), aggregate_(aggregate) {
    if (mode_count < 0) throw std::invalid_argument("IncrementSource: modes >= 0");
    if (aggregate < 1) throw std::invalid_argument("IncrementSource: aggregate >= 1");
  }

  int mode_count() const { return modes_; }

  Eigen::VectorXd xi(long long step) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(modes_);
    const double scale = 1.0 / std::sqrt(static_cast<double>(aggregate_));
    for (int i = 0; i < aggregate_; ++i) {
      const std::uint64_t base =
          (static_cast<std::uint64_t>(step) * aggregate_ + i) * modes_;
      for (int j = 0; j < modes_; ++j) out[j] += scale * rng_.normal_at(base + j);
    }
    return out;
  }

 private:
  NoiseStream rng_;
  int modes_;
  int aggregate_;
};

/// m0(x) = (tanh(x/w0), sech(x/w0), 0); nodewise unit by construction.
VectorField initial_domain_wall(const WireGrid& grid, double w0);

/// Nodewise m/|m|; throws SimulationError if any |m| < 1e-8.
VectorField project_to_sphere(const VectorField& m);

/// Explicit Euler-Maruyama step on the Ito form:
/// m + (F + S/2) dt + G dW, optional projection.
VectorField step_em_ito(const VectorField& m, double t, double dt, const ScalarField& dW,
                        const WireGrid& grid, const NoiseModel& noise,
                        const SpinVelocity& velocity, const PhysParams& params,
                        bool projection);

/// Two-stage predictor/corrector step: predictor from (a, b) at the current
/// state, corrector from averaged stage values. Classical Heun in the
/// deterministic limit.
template <class DriftFn, class DiffFn>
VectorField heun_step(const VectorField& m, double dt, const ScalarField& dW, DriftFn a,
                      DiffFn b) {
  const VectorField am = a(m);
  const VectorField bm = b(m);
  const VectorField predictor = m + dt * am + scale_rows(dW, bm);
  return m + 0.5 * dt * (am + a(predictor)) +
         scale_rows(dW, VectorField(0.5 * (bm + b(predictor))));
}

/// Heun step on the Stratonovich form: a(u) = -u x (lap u + alpha u x lap u)
/// + v G(u), b(u) = G(u). v is frozen at the step's left endpoint.
VectorField step_heun_strat(const VectorField& m, double t, double dt,
                            const ScalarField& dW, const WireGrid& grid,
                            const SpinVelocity& velocity, const PhysParams& params,
                            bool projection);

/// Time-indexed states (strided by snapshot_stride) plus per-step diagnostics
/// at full resolution.
struct Trajectory {
  WireGrid grid;
  double dt = 0.0;
  long long steps = 0;

  std::vector<double> snapshot_times;
  std::vector<VectorField> snapshots;

  // One entry per step boundary, k = 0..steps.
  std::vector<double> energy;         // 1/2 |d m|^2_{L_h^2}
  std::vector<double> sphere_dev;     // max_x | |m(x)| - 1 |
  std::vector<double> cross_lap_sq;   // |m x lap m|^2_{L_h^2}
  std::vector<double> lap_sq;         // |lap m|^2_{L_h^2}
  std::vector<double> mh_increment;   // <lap m, G(m) dW>_{L_h^2} over the step into k

  bool smallness_warning = false;

  double time_at(long long k) const { return dt * static_cast<double>(k); }
  const VectorField& final_state() const { return snapshots.back(); }
  double sup_energy() const;
  double max_sphere_dev() const;
  /// Left-endpoint time integral of a per-step series.
  double integrate(const std::vector<double>& series) const;
};

Trajectory simulate(const SimConfig& config);
Trajectory simulate(const SimConfig& config, const IncrementSource& increments,
                    const VectorField* initial_override = nullptr);

}  // namespace spinwire
