#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "spinwire/fields.hpp"

namespace spinwire {

enum class Boundary { Periodic, Clamped };

/// Truncated uniform 1D lattice. Node k sits at origin + k*h.
///
/// Periodic closure wraps index arithmetic mod n; Clamped closure extends the
/// field by its nearest boundary value, so the forward difference vanishes in
/// the outermost cell on the extended side.
struct WireGrid {
  double h = 1.0;
  Eigen::Index n = 3;
  double origin = 0.0;
  Boundary boundary = Boundary::Periodic;

  WireGrid() = default;
  WireGrid(double h_, Eigen::Index n_, double origin_, Boundary b)
      : h(h_), n(n_), origin(origin_), boundary(b) {
    if (!(h > 0.0)) throw std::invalid_argument("WireGrid: h must be > 0");
    if (n < 3) throw std::invalid_argument("WireGrid: n must be >= 3");
  }

  static WireGrid periodic(double h, Eigen::Index n, double origin = 0.0) {
    return WireGrid(h, n, origin, Boundary::Periodic);
  }
  static WireGrid clamped(double h, Eigen::Index n, double origin = 0.0) {
    return WireGrid(h, n, origin, Boundary::Clamped);
  }

  double coord(Eigen::Index k) const { return origin + static_cast<double>(k) * h; }

  ScalarField coords() const {
    ScalarField x(n);
    for (Eigen::Index k = 0; k < n; ++k) x[k] = coord(k);
    return x;
  }

  /// Index of the neighbor at offset d (|d| = 1), resolved by the closure.
  Eigen::Index neighbor(Eigen::Index k, int d) const {
    Eigen::Index j = k + d;
    if (boundary == Boundary::Periodic) {
      if (j < 0) j += n;
      if (j >= n) j -= n;
      return j;
    }
    if (j < 0) return 0;
    if (j >= n) return n - 1;
    return j;
  }

  bool same_shape(const WireGrid& other) const {
    return n == other.n && h == other.h && origin == other.origin &&
           boundary == other.boundary;
  }
};

namespace detail {
inline void require_match(Eigen::Index rows, const WireGrid& g, const char* op) {
  if (rows != g.n)
    throw std::invalid_argument(std::string(op) + ": field length does not match grid");
}
}  // namespace detail

/// u^+ (direction +1) or u^- (direction -1) under the grid's closure.
template <typename Derived>
typename Derived::PlainObject shifted(const Eigen::MatrixBase<Derived>& u,
                                      const WireGrid& g, int direction) {
  detail::require_match(u.rows(), g, "shifted");
  if (direction != 1 && direction != -1)
    throw std::invalid_argument("shifted: direction must be +1 or -1");
  typename Derived::PlainObject out(u.rows(), u.cols());
  for (Eigen::Index k = 0; k < g.n; ++k) out.row(k) = u.row(g.neighbor(k, direction));
  return out;
}

/// (u^+ - u)/h nodewise.
template <typename Derived>
typename Derived::PlainObject forward_diff(const Eigen::MatrixBase<Derived>& u,
                                           const WireGrid& g) {
  return (shifted(u, g, +1) - u) / g.h;
}

/// (u - u^-)/h nodewise; equals the forward difference of the shifted field.
template <typename Derived>
typename Derived::PlainObject backward_diff(const Eigen::MatrixBase<Derived>& u,
                                            const WireGrid& g) {
  return (u - shifted(u, g, -1)) / g.h;
}

/// (u^+ - 2u + u^-)/h^2 nodewise.
template <typename Derived>
typename Derived::PlainObject discrete_laplacian(const Eigen::MatrixBase<Derived>& u,
                                                 const WireGrid& g) {
  return (shifted(u, g, +1) - 2.0 * u + shifted(u, g, -1)) / (g.h * g.h);
}

/// Polynomial weight rho_w(x) = (1+x^2)^-w sampled on the grid, values in (0,1].
struct WeightProfile {
  double w = 0.0;
  ScalarField values;

  static WeightProfile make(const WireGrid& g, double w) {
    if (w < 0.0) throw std::invalid_argument("WeightProfile: w must be >= 0");
    WeightProfile p;
    p.w = w;
    p.values = (1.0 + g.coords().array().square()).pow(-w).matrix();
    return p;
  }
};

/// |u|_{L_h^p} with the Euclidean node norm; p = inf gives sup_x |u(x)| (no h factor).
inline double lp_norm(const VectorField& u, const WireGrid& g, double p) {
  detail::require_match(u.rows(), g, "lp_norm");
  if (p < 1.0) throw std::invalid_argument("lp_norm: p must be in [1, inf]");
  const ScalarField r = node_norms(u);
  if (std::isinf(p)) return r.maxCoeff();
  if (p == 2.0) return std::sqrt(g.h * r.squaredNorm());
  return std::pow(g.h * r.array().pow(p).sum(), 1.0 / p);
}

inline double lp_norm(const ScalarField& u, const WireGrid& g, double p) {
  detail::require_match(u.rows(), g, "lp_norm");
  if (p < 1.0) throw std::invalid_argument("lp_norm: p must be in [1, inf]");
  if (std::isinf(p)) return u.array().abs().maxCoeff();
  if (p == 2.0) return std::sqrt(g.h * u.squaredNorm());
  return std::pow(g.h * u.array().abs().pow(p).sum(), 1.0 / p);
}

/// h * sum_x <u(x), v(x)> rho(x); rho == 1 when no weight is given.
inline double inner(const VectorField& u, const VectorField& v, const WireGrid& g,
                    const WeightProfile* weight = nullptr) {
  detail::require_match(u.rows(), g, "inner");
  detail::require_match(v.rows(), g, "inner");
  const ScalarField d = dot(u, v);
  if (weight == nullptr) return g.h * d.sum();
  detail::require_match(weight->values.rows(), g, "inner(weight)");
  return g.h * d.cwiseProduct(weight->values).sum();
}

/// |u|_{H_h^1}^2 = |u|_{L_h^2}^2 + |du|_{L_h^2}^2.
inline double h1_norm(const VectorField& u, const WireGrid& g) {
  const double a = lp_norm(u, g, 2.0);
  const double b = lp_norm(VectorField(forward_diff(u, g)), g, 2.0);
  return std::sqrt(a * a + b * b);
}

/// |u|_{E_h}^2 = |u|_{L_h^inf}^2 + |du|_{L_h^2}^2.
inline double eh_norm(const VectorField& u, const WireGrid& g) {
  const double a = lp_norm(u, g, std::numeric_limits<double>::infinity());
  const double b = lp_norm(VectorField(forward_diff(u, g)), g, 2.0);
  return std::sqrt(a * a + b * b);
}

/// Dirichlet energy 1/2 |du|_{L_h^2}^2.
inline double gradient_energy(const VectorField& u, const WireGrid& g) {
  const double b = lp_norm(VectorField(forward_diff(u, g)), g, 2.0);
  return 0.5 * b * b;
}

}  // namespace spinwire
