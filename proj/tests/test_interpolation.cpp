#include <doctest.h>

#include <cmath>

#include "spinwire/battery.hpp"
#include "spinwire/interpolation.hpp"

using namespace spinwire;

namespace {

// Smooth unit field localized inside the window; used for rate studies.
VectorField smooth_unit_field(const WireGrid& g) {
  VectorField m(g.n, 3);
  for (Eigen::Index k = 0; k < g.n; ++k) {
    const double x = g.coord(k);
    const double th = 0.9 * std::tanh(x) + 0.3 * std::exp(-0.25 * x * x);
    m.row(k) << std::cos(th), std::sin(th), 0.0;
  }
  return m;
}

// Piecewise-constant quantities assembled directly from node values: the
// independent side of the decomposition identities.
struct HatSide {
  Vec3 u, du, du_minus, lap;
};

HatSide hat_side(const VectorField& u, const WireGrid& g, Eigen::Index cell) {
  HatSide s;
  const Eigen::Index kp = g.neighbor(cell, +1);
  const Eigen::Index km = g.neighbor(cell, -1);
  s.u = u.row(cell).transpose();
  s.du = (u.row(kp) - u.row(cell)).transpose() / g.h;
  s.du_minus = (u.row(cell) - u.row(km)).transpose() / g.h;
  s.lap = (u.row(kp) - 2.0 * u.row(cell) + u.row(km)).transpose() / (g.h * g.h);
  return s;
}

}  // namespace

TEST_CASE("quadratic interpolation knot values and constants") {
  const WireGrid g = WireGrid::periodic(0.5, 16);
  NoiseStream rng(3, 0);
  const VectorField u = random_field(g, rng);
  const PiecewiseQuadratic q = quad_interp(u, g);

  for (Eigen::Index k = 0; k < q.cells; ++k) {
    const Eigen::Index km = g.neighbor(k, -1);
    const Vec3 expected = 0.5 * (u.row(k) + u.row(km)).transpose();
    CHECK((q.value_local(k, 0.0) - expected).norm() < 1e-14);
  }

  VectorField c = VectorField::Constant(g.n, 3, 2.5);
  const PiecewiseQuadratic qc = quad_interp(c, g);
  for (Eigen::Index k = 0; k < qc.cells; ++k) {
    CHECK((qc.value_local(k, 0.3 * g.h) - Vec3::Constant(2.5)).norm() < 1e-15);
    CHECK(qc.derivative_local(k, 0.3 * g.h).norm() == 0.0);
  }
}

TEST_CASE("interpolation is C1 across knots") {
  const WireGrid g = WireGrid::periodic(0.25, 32);
  NoiseStream rng(7, 0);
  const VectorField u = random_field(g, rng);
  const PiecewiseQuadratic q = quad_interp(u, g);
  const double scale = node_norms(u).maxCoeff();
  for (Eigen::Index k = 0; k < q.cells; ++k) {
    const Eigen::Index prev = k == 0 ? q.cells - 1 : k - 1;
    CHECK((q.value_local(prev, g.h) - q.value_local(k, 0.0)).norm() < 1e-12 * scale);
    CHECK((q.derivative_local(prev, g.h) - q.derivative_local(k, 0.0)).norm() <
          1e-12 * scale / g.h);
  }
}

TEST_CASE("interpolation norm identities and inequalities") {
  const WireGrid g = WireGrid::periodic(0.2, 64);
  NoiseStream rng(11, 0);

  SUBCASE("constant field has zero curvature") {
    const VectorField c = VectorField::Constant(g.n, 3, 1.0);
    const InterpNorms norms = interp_norms(quad_interp(c, g));
    CHECK(norms.second_l2 == 0.0);
    CHECK(norms.deriv_l2 == 0.0);
  }

  SUBCASE("second-derivative norm equals the discrete Laplacian norm") {
    const VectorField u = random_field(g, rng);
    const InterpNorms norms = interp_norms(quad_interp(u, g));
    const double lap = lp_norm(VectorField(discrete_laplacian(u, g)), g, 2.0);
    CHECK(std::abs(norms.second_l2 - lap) < 1e-12 * lap);
  }

  SUBCASE("derivative and sup bounds hold strictly") {
    const VectorField u = random_unit_field(g, rng);
    const InterpNorms norms = interp_norms(quad_interp(u, g));
    CHECK(norms.deriv_l2 <= 3.0 * lp_norm(VectorField(forward_diff(u, g)), g, 2.0));
    CHECK(norms.sup <= 5.0 * node_norms(u).maxCoeff());
  }
}

TEST_CASE("reconstruction identity uhat = ubar - R0 ubar") {
  const WireGrid g = WireGrid::periodic(0.3, 24);
  NoiseStream rng(13, 0);
  const VectorField u = random_field(g, rng);
  const PiecewiseQuadratic q = quad_interp(u, g);
  const PiecewiseConstant hat = const_interp(u, g);
  const double scale = node_norms(u).maxCoeff();

  const auto fields = remainders(q, 5);
  const VectorField& r0 = fields.at(Remainder::R0);
  for (Eigen::Index k = 0; k < q.cells; ++k) {
    for (int i = 0; i < 5; ++i) {
      const double s = g.h * static_cast<double>(i) / 5.0;
      const Vec3 recon = q.value_local(k, s) - r0.row(k * 5 + i).transpose();
      CHECK((recon - hat.values.row(k).transpose()).norm() < 1e-12 * scale);
    }
  }

  // all remainders of a constant field vanish
  const VectorField c = VectorField::Constant(g.n, 3, -1.7);
  for (const auto& [which, field] : remainders(quad_interp(c, g), 4))
    CHECK(field.cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(remainders(q, 1), std::invalid_argument);
}

TEST_CASE("remainder operators reproduce the hat-field decompositions") {
  // Every operator is checked against an independent assembly of the
  // piecewise-constant side at off-knot sample points.
  const WireGrid g = WireGrid::periodic(0.4, 20);
  NoiseStream rng(17, 0);
  const VectorField u = random_unit_field(g, rng);
  const PiecewiseQuadratic q = quad_interp(u, g);

  for (Eigen::Index k = 0; k < q.cells; ++k) {
    const HatSide hs = hat_side(u, g, k);
    for (double frac : {0.15, 0.5, 0.85}) {
      const double s = frac * g.h;
      const Vec3 ub = q.value_local(k, s);
      const Vec3 du = q.derivative_local(k, s);
      const Vec3 d2 = q.second_derivative_local(k);
      const auto rem = [&](Remainder which) { return remainder_local(q, k, s, which); };

      CHECK((hs.u - (ub - rem(Remainder::R0))).norm() < 1e-12);
      CHECK((hs.du - (du - rem(Remainder::R1))).norm() < 1e-12);
      CHECK((hs.u.cross(hs.du) - (ub.cross(du) - rem(Remainder::P1))).norm() < 1e-12);
      CHECK((hs.u.cross(hs.u.cross(hs.du)) -
             (ub.cross(ub.cross(du)) - rem(Remainder::P2)))
                .norm() < 1e-12);
      CHECK((hs.u.cross(hs.du).squaredNorm() * hs.u -
             (ub.cross(du).squaredNorm() * ub - rem(Remainder::P3)))
                .norm() < 1e-12);
      CHECK((hs.du.cross(hs.u.cross(hs.du)) -
             (du.cross(ub.cross(du)) - rem(Remainder::P4)))
                .norm() < 1e-12);
      CHECK((hs.u.dot(hs.du_minus) * hs.u.cross(hs.du) -
             (ub.dot(du) * ub.cross(du) - rem(Remainder::P5)))
                .norm() < 1e-12);
      CHECK((hs.u.cross(hs.lap) - (ub.cross(d2) - rem(Remainder::Q1))).norm() < 1e-12);
      CHECK((hs.u.cross(hs.u.cross(hs.lap)) -
             (ub.cross(ub.cross(d2)) - rem(Remainder::Q2)))
                .norm() < 1e-12);
    }
  }
}

TEST_CASE("strong remainders decay at first order on a frozen smooth field") {
  double r0_err[3], r1_err[3], p1_err[3], p2_err[3];
  int idx = 0;
  for (Eigen::Index n : {81, 161, 321}) {
    const double h = 16.0 / static_cast<double>(n - 1);
    const WireGrid g = WireGrid::clamped(h, n, -8.0);
    const PiecewiseQuadratic q = quad_interp(smooth_unit_field(g), g);
    r0_err[idx] = remainder_l2(q, Remainder::R0);
    r1_err[idx] = remainder_l2(q, Remainder::R1);
    p1_err[idx] = remainder_l2(q, Remainder::P1);
    p2_err[idx] = remainder_l2(q, Remainder::P2);
    ++idx;
  }
  for (int i = 0; i + 1 < 3; ++i) {
    CHECK(std::log2(r0_err[i] / r0_err[i + 1]) >= 0.9);
    CHECK(std::log2(r1_err[i] / r1_err[i + 1]) >= 0.9);
    CHECK(std::log2(p1_err[i] / p1_err[i + 1]) >= 0.9);
    CHECK(std::log2(p2_err[i] / p2_err[i + 1]) >= 0.9);
  }
}

TEST_CASE("remainders of simulated trajectories decay in h") {
  // L2-in-time remainder norms of the interpolated trajectory across three
  // coupled refinements.
  SimConfig cfg;
  cfg.h = 0.2;
  cfg.n = 64;
  cfg.origin = -6.3;
  cfg.boundary = Boundary::Clamped;
  cfg.dt = 4e-4;
  cfg.T = 0.1;
  cfg.snapshot_stride = 25;
  cfg.seed = 31;
  cfg.noise_family.kind = NoiseFamilySpec::Kind::GaussianBumps;
  cfg.noise_family.width = 1.5;
  cfg.noise_family.spacing = 2.0;
  cfg.noise_family.center = -2.0;
  cfg.noise_modes = 2;
  cfg.noise_law.amp = 0.03;
  cfg.noise_law.ratio = 0.8;

  const Remainder ops[4] = {Remainder::R0, Remainder::R1, Remainder::P1,
                            Remainder::P2};
  double norms[3][4];
  SimConfig level_cfg = cfg;
  for (int level = 0; level < 3; ++level) {
    const IncrementSource source(cfg.seed, 0, cfg.noise_modes);
    const Trajectory traj = simulate(level_cfg, source);
    const double dt_snap = traj.snapshot_times[1] - traj.snapshot_times[0];
    for (int op = 0; op < 4; ++op) {
      double acc = 0.0;
      for (std::size_t s = 0; s + 1 < traj.snapshots.size(); ++s) {
        const double r =
            remainder_l2(quad_interp(traj.snapshots[s], traj.grid), ops[op]);
        acc += r * r * dt_snap;
      }
      norms[level][op] = std::sqrt(acc);
    }
    level_cfg = level_cfg.refined();
  }
  for (int op = 0; op < 4; ++op)
    for (int level = 0; level + 1 < 3; ++level)
      CHECK(std::log2(norms[level][op] / norms[level + 1][op]) >= 0.9);
}

TEST_CASE("weak pairings against a fixed bump decay") {
  const auto phi = bump_test_function(0.5, 3.0, Vec3(1.0, -0.5, 0.25));
  double q1_pair[3];
  int idx = 0;
  for (Eigen::Index n : {81, 161, 321}) {
    const double h = 16.0 / static_cast<double>(n - 1);
    const WireGrid g = WireGrid::clamped(h, n, -8.0);
    const PiecewiseQuadratic q = quad_interp(smooth_unit_field(g), g);
    q1_pair[idx++] = std::abs(weak_pairing(q, Remainder::Q1, phi));
  }
  for (int i = 0; i + 1 < 3; ++i)
    CHECK(std::log2(q1_pair[i] / q1_pair[i + 1]) >= 0.9);
}

TEST_CASE("sphere recovery of the interpolated field") {
  SUBCASE("constant unit field has zero deviation") {
    const WireGrid g = WireGrid::periodic(0.5, 8);
    VectorField c = VectorField::Zero(g.n, 3);
    c.col(0).setOnes();
    CHECK(sphere_deviation_slice(c, g) == 0.0);
  }

  SUBCASE("frozen domain wall deviation decays at order two") {
    double dev[3];
    int idx = 0;
    for (Eigen::Index n : {101, 201, 401}) {
      const double h = 20.0 / static_cast<double>(n - 1);
      const WireGrid g = WireGrid::clamped(h, n, -10.0);
      dev[idx++] = sphere_deviation_slice(initial_domain_wall(g, 1.0), g);
    }
    for (int i = 0; i + 1 < 3; ++i) CHECK(std::log2(dev[i] / dev[i + 1]) >= 1.9);
  }

  SUBCASE("single random slice obeys the gradient bound") {
    const WireGrid g = WireGrid::periodic(0.25, 64);
    NoiseStream rng(23, 0);
    const VectorField u = random_unit_field(g, rng);
    const double grad = lp_norm(VectorField(forward_diff(u, g)), g, 2.0);
    CHECK(sphere_deviation_slice(u, g) <=
          (2.0 / 3.0) * g.h * g.h * grad * grad * 1.1);
  }

  SUBCASE("per-snapshot series from a trajectory") {
    SimConfig cfg;
    cfg.h = 0.2;
    cfg.n = 64;
    cfg.origin = -6.3;
    cfg.dt = 4e-4;
    cfg.T = 0.01;
    const Trajectory traj = simulate(cfg);
    const std::vector<double> series = sphere_recovery(traj);
    CHECK(series.size() == traj.snapshots.size());
    for (double d : series) CHECK(d >= 0.0);
  }
}
