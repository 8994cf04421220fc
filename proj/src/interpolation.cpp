#include "spinwire/interpolation.hpp"

#include <cmath>

namespace spinwire {

namespace {

// 3-point Gauss-Legendre on [0, 1]; exact for polynomials of degree <= 5.
constexpr double kGaussNode[3] = {0.1127016653792583, 0.5, 0.8872983346207417};
constexpr double kGaussWeight[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

Eigen::Index locate_in(const WireGrid& g, Eigen::Index cells, double x) {
  double y = x - g.origin;
  if (g.boundary == Boundary::Periodic) {
    const double period = g.h * static_cast<double>(cells);
    y -= period * std::floor(y / period);
  }
  Eigen::Index k = static_cast<Eigen::Index>(std::floor(y / g.h));
  if (k < 0) k = 0;
  if (k >= cells) k = cells - 1;
  return k;
}

}  // namespace

Eigen::Index PiecewiseQuadratic::locate(double x) const {
  return locate_in(grid, cells, x);
}

Vec3 PiecewiseQuadratic::value(double x) const {
  const Eigen::Index k = locate(x);
  double y = x - grid.origin;
  if (grid.boundary == Boundary::Periodic) {
    const double period = domain_length();
    y -= period * std::floor(y / period);
  }
  return value_local(k, y - static_cast<double>(k) * grid.h);
}

Vec3 PiecewiseQuadratic::derivative(double x) const {
  const Eigen::Index k = locate(x);
  double y = x - grid.origin;
  if (grid.boundary == Boundary::Periodic) {
    const double period = domain_length();
    y -= period * std::floor(y / period);
  }
  return derivative_local(k, y - static_cast<double>(k) * grid.h);
}

Vec3 PiecewiseQuadratic::second_derivative(double x) const {
  return second_derivative_local(locate(x));
}

Eigen::Index PiecewiseConstant::locate(double x) const {
  return locate_in(grid, cells, x);
}

Vec3 PiecewiseConstant::value(double x) const { return values.row(locate(x)).transpose(); }

PiecewiseQuadratic quad_interp(const VectorField& u, const WireGrid& grid) {
  detail::require_match(u.rows(), grid, "quad_interp");
  PiecewiseQuadratic q;
  q.grid = grid;
  q.cells = grid.boundary == Boundary::Periodic ? grid.n : grid.n - 1;
  const VectorField u_minus = shifted(u, grid, -1);
  const VectorField a_all = 0.5 * (u + u_minus);
  const VectorField b_all = backward_diff(u, grid);
  const VectorField c_all = 0.5 * discrete_laplacian(u, grid);
  q.a = a_all.topRows(q.cells);
  q.b = b_all.topRows(q.cells);
  q.c = c_all.topRows(q.cells);
  return q;
}

PiecewiseConstant const_interp(const VectorField& u, const WireGrid& grid) {
  detail::require_match(u.rows(), grid, "const_interp");
  PiecewiseConstant p;
  p.grid = grid;
  p.cells = grid.boundary == Boundary::Periodic ? grid.n : grid.n - 1;
  p.values = u.topRows(p.cells);
  return p;
}

InterpNorms interp_norms(const PiecewiseQuadratic& q) {
  InterpNorms out;
  const double h = q.grid.h;
  double l2 = 0.0, dl2 = 0.0, d2l2 = 0.0, dl4 = 0.0, sup = 0.0;
  for (Eigen::Index k = 0; k < q.cells; ++k) {
    for (int g = 0; g < 3; ++g) {
      const double s = kGaussNode[g] * h;
      const double w = kGaussWeight[g] * h;
      const double v2 = q.value_local(k, s).squaredNorm();
      const double d2 = q.derivative_local(k, s).squaredNorm();
      l2 += w * v2;
      dl2 += w * d2;
      dl4 += w * d2 * d2;
    }
    d2l2 += h * q.second_derivative_local(k).squaredNorm();
    for (int i = 0; i <= 8; ++i)
      sup = std::max(sup, q.value_local(k, h * static_cast<double>(i) / 8.0).norm());
  }
  out.sup = sup;
  out.l2 = std::sqrt(l2);
  out.deriv_l2 = std::sqrt(dl2);
  out.second_l2 = std::sqrt(d2l2);
  out.deriv_l4 = std::pow(dl4, 0.25);
  return out;
}

Vec3 remainder_local(const PiecewiseQuadratic& q, Eigen::Index k, double s,
                     Remainder which) {
  const double h = q.grid.h;
  const Vec3 u = q.value_local(k, s);
  const Vec3 Du = q.derivative_local(k, s);
  const Vec3 D2u = q.second_derivative_local(k);

  const Vec3 r0 = (Du - D2u * s) * (s - 0.5 * h) + 0.5 * D2u * s * s;
  if (which == Remainder::R0) return r0;
  const Vec3 r1 = D2u * (s - h);
  if (which == Remainder::R1) return r1;
  const Vec3 p1 = r0.cross(Du) + (u - r0).cross(r1);
  if (which == Remainder::P1) return p1;

  const Vec3 u_x_du = u.cross(Du);
  switch (which) {
    case Remainder::P2:
      return u.cross(p1) + r0.cross(u_x_du - p1);
    case Remainder::P3:
      return (2.0 * u_x_du - p1).dot(p1) * u + (u_x_du - p1).squaredNorm() * r0;
    case Remainder::P4:
      return r1.cross(u_x_du) + (Du - r1).cross(p1);
    case Remainder::P5:
      return (r0.dot(Du) + (u - r0).dot(D2u * s)) * u_x_du +
             (u - r0).dot(Du - D2u * s) * p1;
    case Remainder::Q1:
      return r0.cross(D2u);
    case Remainder::Q2:
      return u.cross(r0.cross(D2u)) + r0.cross((u - r0).cross(D2u));
    default:
      return r0;  // unreachable
  }
}

std::map<Remainder, VectorField> remainders(const PiecewiseQuadratic& q, int refine) {
  if (refine < 2) throw std::invalid_argument("remainders: refinement factor must be >= 2");
  static const Remainder all[] = {Remainder::R0, Remainder::R1, Remainder::P1,
                                  Remainder::P2, Remainder::P3, Remainder::P4,
                                  Remainder::P5, Remainder::Q1, Remainder::Q2};
  std::map<Remainder, VectorField> out;
  const Eigen::Index rows = q.cells * refine;
  for (Remainder r : all) out.emplace(r, VectorField(rows, 3));
  for (Eigen::Index k = 0; k < q.cells; ++k) {
    for (int i = 0; i < refine; ++i) {
      const double s = q.grid.h * static_cast<double>(i) / refine;
      const Eigen::Index row = k * refine + i;
      for (Remainder r : all)
        out.at(r).row(row) = remainder_local(q, k, s, r).transpose();
    }
  }
  return out;
}

double remainder_l2(const PiecewiseQuadratic& q, Remainder which, int subdiv) {
  const double h = q.grid.h;
  double acc = 0.0;
  for (Eigen::Index k = 0; k < q.cells; ++k) {
    for (int p = 0; p < subdiv; ++p) {
      const double left = h * static_cast<double>(p) / subdiv;
      const double width = h / subdiv;
      for (int g = 0; g < 3; ++g) {
        const double s = left + kGaussNode[g] * width;
        acc += kGaussWeight[g] * width * remainder_local(q, k, s, which).squaredNorm();
      }
    }
  }
  return std::sqrt(acc);
}

double weak_pairing(const PiecewiseQuadratic& q, Remainder which,
                    const std::function<Vec3(double)>& phi, int subdiv) {
  const double h = q.grid.h;
  double acc = 0.0;
  for (Eigen::Index k = 0; k < q.cells; ++k) {
    const double x_left = q.cell_left(k);
    for (int p = 0; p < subdiv; ++p) {
      const double left = h * static_cast<double>(p) / subdiv;
      const double width = h / subdiv;
      for (int g = 0; g < 3; ++g) {
        const double s = left + kGaussNode[g] * width;
        acc += kGaussWeight[g] * width *
               remainder_local(q, k, s, which).dot(phi(x_left + s));
      }
    }
  }
  return acc;
}

std::function<Vec3(double)> bump_test_function(double center, double width,
                                               const Vec3& direction) {
  const Vec3 dir = direction.normalized();
  return [center, width, dir](double x) -> Vec3 {
    const double r = (x - center) / width;
    if (std::abs(r) >= 1.0) return Vec3::Zero();
    return std::exp(-1.0 / (1.0 - r * r)) * dir;
  };
}

double sphere_deviation_slice(const VectorField& u, const WireGrid& grid, int subdiv) {
  const PiecewiseQuadratic q = quad_interp(u, grid);
  const double h = grid.h;
  double acc = 0.0;
  for (Eigen::Index k = 0; k < q.cells; ++k) {
    for (int p = 0; p < subdiv; ++p) {
      const double left = h * static_cast<double>(p) / subdiv;
      const double width = h / subdiv;
      for (int g = 0; g < 3; ++g) {
        const double s = left + kGaussNode[g] * width;
        const double d = q.value_local(k, s).norm() - 1.0;
        acc += kGaussWeight[g] * width * d * d;
      }
    }
  }
  return acc;
}

std::vector<double> sphere_recovery(const Trajectory& traj, int subdiv) {
  std::vector<double> out;
  out.reserve(traj.snapshots.size());
  for (const VectorField& m : traj.snapshots)
    out.push_back(sphere_deviation_slice(m, traj.grid, subdiv));
  return out;
}

}  // namespace spinwire
