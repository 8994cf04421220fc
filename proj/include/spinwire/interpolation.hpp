#pragma once

#include <functional>
#include <map>
#include <vector>

#include "spinwire/integrator.hpp"

namespace spinwire {

/// C^1 piecewise-quadratic extension of a grid function. On the cell
/// [x_k, x_{k+1}) with s = x - x_k:
///   value(x)  = a_k + b_k s + c_k s^2,
///   a_k = (u(x_k)+u(x_{k-1}))/2, b_k = backward difference at x_k,
///   c_k = lap u(x_k)/2.
/// Periodic grids carry n cells (the last wraps); clamped grids carry n-1.
struct PiecewiseQuadratic {
  WireGrid grid;
  Eigen::Index cells = 0;
  VectorField a, b, c;

  double cell_left(Eigen::Index k) const { return grid.coord(k); }
  double domain_length() const { return grid.h * static_cast<double>(cells); }

  Eigen::Index locate(double x) const;

  Vec3 value(double x) const;
  Vec3 derivative(double x) const;
  Vec3 second_derivative(double x) const;

  Vec3 value_local(Eigen::Index k, double s) const {
    return a.row(k).transpose() + s * b.row(k).transpose() + s * s * c.row(k).transpose();
  }
  Vec3 derivative_local(Eigen::Index k, double s) const {
    return b.row(k).transpose() + 2.0 * s * c.row(k).transpose();
  }
  Vec3 second_derivative_local(Eigen::Index k) const {
    return 2.0 * c.row(k).transpose();
  }
};

/// Piecewise-constant extension: cell value equals the left node value.
struct PiecewiseConstant {
  WireGrid grid;
  Eigen::Index cells = 0;
  VectorField values;

  Eigen::Index locate(double x) const;
  Vec3 value(double x) const;
};

PiecewiseQuadratic quad_interp(const VectorField& u, const WireGrid& grid);
PiecewiseConstant const_interp(const VectorField& u, const WireGrid& grid);

/// Exact per-cell Gauss quadrature (all integrands are degree <= 4 polynomials),
/// except sup which is a dense sampled maximum.
struct InterpNorms {
  double sup = 0.0;        // |ubar|_Linf (sampled)
  double l2 = 0.0;         // |ubar|_L2
  double deriv_l2 = 0.0;   // |D ubar|_L2
  double second_l2 = 0.0;  // |D^2 ubar|_L2
  double deriv_l4 = 0.0;   // |D ubar|_L4
};

InterpNorms interp_norms(const PiecewiseQuadratic& q);

enum class Remainder { R0, R1, P1, P2, P3, P4, P5, Q1, Q2 };

/// Remainder operator applied to the interpolation, at local coordinate s in
/// cell k. Exactly the printed per-cell formulas.
Vec3 remainder_local(const PiecewiseQuadratic& q, Eigen::Index k, double s,
                     Remainder which);

/// All remainder fields sampled on the refined grid x_k + i h / refine,
/// i = 0..refine-1 per cell.
std::map<Remainder, VectorField> remainders(const PiecewiseQuadratic& q, int refine);

/// L2 norm of a remainder field over the covered window, composite Gauss
/// quadrature with `subdiv` panels per cell.
double remainder_l2(const PiecewiseQuadratic& q, Remainder which, int subdiv = 4);

/// Weak pairing <f ubar, phi>_{L2} against a smooth test function.
double weak_pairing(const PiecewiseQuadratic& q, Remainder which,
                    const std::function<Vec3(double)>& phi, int subdiv = 4);

/// Smooth compactly supported bump, support (center-width, center+width),
/// pointing along a fixed direction.
std::function<Vec3(double)> bump_test_function(double center, double width,
                                               const Vec3& direction);

/// integral | |ubar(x)| - 1 |^2 dx over the covered window.
double sphere_deviation_slice(const VectorField& u, const WireGrid& grid,
                              int subdiv = 8);

/// Per-snapshot sphere deviation of the quadratic interpolation.
std::vector<double> sphere_recovery(const Trajectory& traj, int subdiv = 8);

}  // namespace spinwire
