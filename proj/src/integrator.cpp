#include "spinwire/integrator.hpp"

#include <algorithm>
#include <cmath>

namespace spinwire {

long long SimConfig::step_count() const {
  const double raw = T / dt;
  const long long k = std::llround(raw);
  return std::max<long long>(1, k);
}

void SimConfig::validate() const {
  if (!(params.alpha > 0.0)) throw std::invalid_argument("config: alpha must be > 0");
  if (!(h > 0.0)) throw std::invalid_argument("config: h must be > 0");
  if (n < 3) throw std::invalid_argument("config: n must be >= 3");
  if (!(dt > 0.0)) throw std::invalid_argument("config: dt must be > 0");
  if (!(T > 0.0)) throw std::invalid_argument("config: T must be > 0");
  if (dt > T * (1.0 + 1e-12)) throw std::invalid_argument("config: dt must be <= T");
  if (snapshot_stride < 1)
    throw std::invalid_argument("config: snapshot_stride must be >= 1");
  if (!(wall_width > 0.0)) throw std::invalid_argument("config: wall_width must be > 0");
  const double steps = T / dt;
  if (std::abs(steps - std::llround(steps)) > 1e-6 * std::max(1.0, steps))
    throw std::invalid_argument("config: T must be an integer multiple of dt");
  if (!cfl_override && dt > cfl_limit() * (1.0 + 1e-12))
    throw std::invalid_argument(
        "config: dt exceeds the stability gate dt <= 0.2 h^2; reduce dt or set "
        "cfl_override = true");
}

SimConfig SimConfig::refined() const {
  SimConfig fine = *this;
  fine.h = 0.5 * h;
  fine.n = boundary == Boundary::Periodic ? 2 * n : 2 * n - 1;
  return fine;
}

VectorField initial_domain_wall(const WireGrid& grid, double w0) {
  if (!(w0 > 0.0)) throw std::invalid_argument("initial_domain_wall: w0 must be > 0");
  VectorField m(grid.n, 3);
  for (Eigen::Index k = 0; k < grid.n; ++k) {
    const double s = grid.coord(k) / w0;
    m(k, 0) = std::tanh(s);
    m(k, 1) = 1.0 / std::cosh(s);
    m(k, 2) = 0.0;
  }
  return m;
}

VectorField project_to_sphere(const VectorField& m) {
  const ScalarField norms = node_norms(m);
  if (norms.minCoeff() < 1e-8)
    throw SimulationError("projection failed: node norm below 1e-8", -1);
  return scale_rows(norms.cwiseInverse(), m);
}

VectorField step_em_ito(const VectorField& m, double t, double dt, const ScalarField& dW,
                        const WireGrid& grid, const NoiseModel& noise,
                        const SpinVelocity& velocity, const PhysParams& params,
                        bool projection) {
  const ScalarField v_now = velocity.field_at(t, grid);
  VectorField next = m + dt * full_drift(m, v_now, noise, params, grid) +
                     scale_rows(dW, diffusion(m, params, grid));
  if (projection) next = project_to_sphere(next);
  return next;
}

VectorField step_heun_strat(const VectorField& m, double t, double dt,
                            const ScalarField& dW, const WireGrid& grid,
                            const SpinVelocity& velocity, const PhysParams& params,
                            bool projection) {
  const ScalarField v_now = velocity.field_at(t, grid);
  const auto a = [&](const VectorField& u) -> VectorField {
    const VectorField lap = discrete_laplacian(u, grid);
    const VectorField u_x_lap = cross(u, lap);
    return -u_x_lap - params.alpha * cross(u, u_x_lap) +
           scale_rows(v_now, diffusion(u, params, grid));
  };
  const auto b = [&](const VectorField& u) -> VectorField {
    return diffusion(u, params, grid);
  };
  VectorField next = heun_step(m, dt, dW, a, b);
  if (projection) next = project_to_sphere(next);
  return next;
}

double Trajectory::sup_energy() const {
  return *std::max_element(energy.begin(), energy.end());
}

double Trajectory::max_sphere_dev() const {
  return *std::max_element(sphere_dev.begin(), sphere_dev.end());
}

double Trajectory::integrate(const std::vector<double>& series) const {
  double acc = 0.0;
  for (long long k = 0; k < steps; ++k) acc += series[static_cast<std::size_t>(k)] * dt;
  return acc;
}

namespace {

void record_diagnostics(Trajectory& traj, const VectorField& m, const WireGrid& grid) {
  const VectorField lap = discrete_laplacian(m, grid);
  const VectorField m_x_lap = cross(m, lap);
  traj.energy.push_back(gradient_energy(m, grid));
  traj.sphere_dev.push_back((node_norms(m).array() - 1.0).abs().maxCoeff());
  const double cl = lp_norm(m_x_lap, grid, 2.0);
  const double ll = lp_norm(lap, grid, 2.0);
  traj.cross_lap_sq.push_back(cl * cl);
  traj.lap_sq.push_back(ll * ll);
}

}  // namespace

Trajectory simulate(const SimConfig& config) {
  const IncrementSource source(config.seed, 0, config.noise_modes);
  return simulate(config, source, nullptr);
}

Trajectory simulate(const SimConfig& config, const IncrementSource& increments,
                    const VectorField* initial_override) {
  config.validate();
  if (increments.mode_count() != config.noise_modes)
    throw std::invalid_argument("simulate: increment source mode count mismatch");

  const WireGrid grid = config.make_grid();
  const NoiseModel noise =
      build_noise(config.noise_family, config.noise_modes, config.noise_law, grid);

  Trajectory traj;
  traj.grid = grid;
  traj.dt = config.dt;
  traj.steps = config.step_count();

  if (config.noise_modes > 0) {
    const SmallnessReport rep =
        check_smallness(noise, config.params.alpha, config.params.gamma, 1.0, 0.01, 4.0);
    traj.smallness_warning = !(rep.n1_positive && rep.n2_positive);
  }

  VectorField m = initial_override != nullptr
                      ? *initial_override
                      : initial_domain_wall(grid, config.wall_width);
  if (m.rows() != grid.n)
    throw std::invalid_argument("simulate: initial state does not match grid");

  const long long steps = traj.steps;
  traj.energy.reserve(steps + 1);
  traj.sphere_dev.reserve(steps + 1);
  traj.cross_lap_sq.reserve(steps + 1);
  traj.lap_sq.reserve(steps + 1);
  traj.mh_increment.reserve(steps + 1);

  record_diagnostics(traj, m, grid);
  traj.mh_increment.push_back(0.0);
  traj.snapshot_times.push_back(0.0);
  traj.snapshots.push_back(m);

  for (long long k = 0; k < steps; ++k) {
    const double t = traj.time_at(k);
    ScalarField dW;
    if (config.noise_modes > 0)
      dW = assemble_increment(noise, increments.xi(k), config.dt);
    else
      dW = ScalarField::Zero(grid.n);

    const double mh_inc =
        config.noise_modes > 0
            ? inner(VectorField(discrete_laplacian(m, grid)),
                    scale_rows(dW, diffusion(m, config.params, grid)), grid)
            : 0.0;

    try {
      if (config.scheme == Scheme::EulerMaruyamaIto)
        m = step_em_ito(m, t, config.dt, dW, grid, noise, config.velocity, config.params,
                        config.projection);
      else
        m = step_heun_strat(m, t, config.dt, dW, grid, config.velocity, config.params,
                            config.projection);
    } catch (const SimulationError& e) {
      throw SimulationError(e.what(), k);
    }
    if (!m.allFinite())
      throw SimulationError("simulate: non-finite state", k);

    record_diagnostics(traj, m, grid);
    traj.mh_increment.push_back(mh_inc);
    if ((k + 1) % config.snapshot_stride == 0 || k + 1 == steps) {
      traj.snapshot_times.push_back(traj.time_at(k + 1));
      traj.snapshots.push_back(m);
    }
  }
  return traj;
}

}  // namespace spinwire
