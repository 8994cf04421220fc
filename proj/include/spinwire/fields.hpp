#pragma once

#include <Eigen/Dense>

namespace spinwire {

/// A map grid -> R^3, one row per node.
using VectorField = Eigen::Matrix<double, Eigen::Dynamic, 3>;

/// A map grid -> R, one entry per node.
using ScalarField = Eigen::VectorXd;

using Vec3 = Eigen::Vector3d;

/// Rowwise cross product of two n x 3 fields.
inline VectorField cross(const VectorField& a, const VectorField& b) {
  VectorField c(a.rows(), 3);
  c.col(0) = a.col(1).cwiseProduct(b.col(2)) - a.col(2).cwiseProduct(b.col(1));
  c.col(1) = a.col(2).cwiseProduct(b.col(0)) - a.col(0).cwiseProduct(b.col(2));
  c.col(2) = a.col(0).cwiseProduct(b.col(1)) - a.col(1).cwiseProduct(b.col(0));
  return c;
}

/// Rowwise inner product <a(x), b(x)>.
inline ScalarField dot(const VectorField& a, const VectorField& b) {
  return (a.array() * b.array()).rowwise().sum();
}

/// Rowwise |u(x)|^2.
inline ScalarField squared_norms(const VectorField& u) {
  return u.rowwise().squaredNorm();
}

/// Rowwise |u(x)| (Euclidean node norm).
inline ScalarField node_norms(const VectorField& u) {
  return u.rowwise().norm();
}

/// Nodewise scalar multiple s(x) * u(x).
inline VectorField scale_rows(const ScalarField& s, const VectorField& u) {
  return u.array().colwise() * s.array();
}

}  // namespace spinwire
