#pragma once

#include <vector>

#include "spinwire/interpolation.hpp"

namespace spinwire {

/// Trajectory-level estimate monitor: the tracked energies together with the
/// feasibility constants for the configured (p, epsilon, delta, b_p).
struct EstimateReport {
  double sup_energy = 0.0;          // sup_t 1/2 |d m|^2
  double cross_lap_integral = 0.0;  // int_0^T |m x lap m|^2 dt, left endpoint
  double lap_integral = 0.0;        // int_0^T |lap m|^2 dt
  double max_sphere_dev = 0.0;

  double p = 1.0;
  double epsilon = 0.0;
  double delta = 0.0;
  double b_p = 0.0;

  double n1p = 0.0;
  double n2p = 0.0;
  double c1_eps = 0.0;
  double c2_eps = 0.0;
  bool damping_margin_positive = false;  // 2 alpha - C_{2,eps} > 0
};

EstimateReport monitor(const Trajectory& traj, const NoiseModel& noise,
                       const SpinVelocity& velocity, const PhysParams& params, double p,
                       double epsilon, double delta, double b_p);

struct UniformHRow {
  double h = 0.0;
  Eigen::Index n = 0;
  int paths = 0;
  int aborted = 0;
  double mean_sup_energy = 0.0;
  double se_sup_energy = 0.0;
  double mean_cross_lap = 0.0;
  double se_cross_lap = 0.0;
};

/// Monte Carlo means of (sup energy, cross-Laplacian integral) per h, with
/// mode increments shared across h levels path by path.
std::vector<UniformHRow> uniform_in_h_study(const SimConfig& base,
                                            const std::vector<double>& h_list, int paths);

struct ConvergenceRow {
  double h_coarse = 0.0;
  double h_fine = 0.0;
  double sup_l2w = 0.0;   // sup over snapshots of the weighted L2 distance
  double l2t_h1w = 0.0;   // time-integrated weighted H1 distance
};

/// Coupled-noise refinement study over a nested h list (each entry half the
/// previous); distances measured between quadratic interpolations on the
/// finer grid with the w = 1 weight.
std::vector<ConvergenceRow> convergence_study(const SimConfig& base,
                                              const std::vector<double>& h_list);

struct UniquenessReport {
  std::vector<double> times;
  std::vector<double> distances;  // |m1 - m2|_{L2_{w=1}} at snapshot times
  double final_distance = 0.0;
  double growth_rate = 0.0;  // slope of a least-squares fit of log distance
};

/// Two runs driven by the identical noise path: equal initial data must give
/// identically zero distance; a perturbed initial state gives a bounded
/// distance series.
UniquenessReport uniqueness_check(const SimConfig& config, double perturbation);

/// Domain wall with a localized perturbation of the given size, reprojected.
VectorField perturbed_domain_wall(const WireGrid& grid, double w0, double perturbation);

/// Weighted nodewise L2 distance between two grid fields on the same grid.
double weighted_l2_distance(const VectorField& u, const VectorField& v,
                            const WireGrid& grid, const WeightProfile& weight);

}  // namespace spinwire
