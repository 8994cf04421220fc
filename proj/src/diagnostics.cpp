#include "spinwire/diagnostics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

namespace spinwire {

EstimateReport monitor(const Trajectory& traj, const NoiseModel& noise,
                       const SpinVelocity& velocity, const PhysParams& params, double p,
                       double epsilon, double delta, double b_p) {
  EstimateReport r;
  r.sup_energy = traj.sup_energy();
  r.cross_lap_integral = traj.integrate(traj.cross_lap_sq);
  r.lap_integral = traj.integrate(traj.lap_sq);
  r.max_sphere_dev = traj.max_sphere_dev();
  r.p = p;
  r.epsilon = epsilon;
  r.delta = delta;
  r.b_p = b_p;

  const SmallnessReport s =
      check_smallness(noise, params.alpha, params.gamma, p, delta, b_p);
  r.n1p = s.n1p;
  r.n2p = s.n2p;

  const double ck2 = noise.c_kappa * noise.c_kappa;
  const double g = params.gamma;
  const double cv = velocity.c_v();
  const double e2 = epsilon * epsilon;
  r.c1_eps = ((g * g + 1.0) * (g * g + 1.0) * ck2 * ck2 + 4.0 * std::abs(g) * ck2 +
              2.0 * cv * cv * (1.0 + g * g)) /
                 (2.0 * e2) +
             2.0 * (1.0 + g * g) * ck2;
  r.c2_eps = (4.0 * g * g + 2.0) * ck2 + e2 * (3.0 + 2.0 * std::abs(g) * ck2);
  r.damping_margin_positive = 2.0 * params.alpha - r.c2_eps > 0.0;
  return r;
}

namespace {

// Same physical window as the base config, re-gridded at spacing h.
SimConfig regrid(const SimConfig& base, double h) {
  SimConfig c = base;
  const double window = base.boundary == Boundary::Periodic
                            ? base.h * static_cast<double>(base.n)
                            : base.h * static_cast<double>(base.n - 1);
  const double count = window / h;
  const long long cells = std::llround(count);
  if (std::abs(count - static_cast<double>(cells)) > 1e-9 * std::max(1.0, count))
    throw std::invalid_argument("study: h does not tile the base window");
  c.h = h;
  c.n = base.boundary == Boundary::Periodic ? cells : cells + 1;
  return c;
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& xs) {
  MeanSe r;
  if (xs.empty()) return r;
  const double n = static_cast<double>(xs.size());
  for (double x : xs) r.mean += x;
  r.mean /= n;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - r.mean) * (x - r.mean);
    r.se = std::sqrt(ss / (n - 1.0) / n);
  }
  return r;
}

}  // namespace

namespace {

struct PathResult {
  double sup_energy = 0.0;
  double cross_lap = 0.0;
  bool ok = false;
};

// Fan the paths out to workers; stream-per-path increments make the result
// independent of scheduling, and the reduction runs in path order.
std::vector<PathResult> run_paths(const SimConfig& cfg, std::uint64_t seed, int modes,
                                  int paths) {
  std::vector<PathResult> results(static_cast<std::size_t>(paths));
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  const auto worker = [&]() {
    for (int path = next.fetch_add(1); path < paths; path = next.fetch_add(1)) {
      const IncrementSource source(seed, static_cast<std::uint64_t>(path), modes);
      try {
        const Trajectory traj = simulate(cfg, source);
        results[path].sup_energy = traj.sup_energy();
        results[path].cross_lap = traj.integrate(traj.cross_lap_sq);
        results[path].ok = true;
      } catch (const SimulationError&) {
        results[path].ok = false;
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned count = std::min<unsigned>(hw, static_cast<unsigned>(paths));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < count; ++i) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return results;
}

}  // namespace

std::vector<UniformHRow> uniform_in_h_study(const SimConfig& base,
                                            const std::vector<double>& h_list,
                                            int paths) {
  if (paths < 1) throw std::invalid_argument("uniform_in_h_study: paths must be >= 1");
  std::vector<UniformHRow> rows;
  for (double h : h_list) {
    const SimConfig cfg = regrid(base, h);
    cfg.validate();
    UniformHRow row;
    row.h = cfg.h;
    row.n = cfg.n;
    row.paths = paths;
    std::vector<double> sup_e, cross;
    for (const PathResult& r : run_paths(cfg, base.seed, base.noise_modes, paths)) {
      if (!r.ok) {
        ++row.aborted;
        continue;
      }
      sup_e.push_back(r.sup_energy);
      cross.push_back(r.cross_lap);
    }
    const MeanSe e = mean_se(sup_e);
    const MeanSe c = mean_se(cross);
    row.mean_sup_energy = e.mean;
    row.se_sup_energy = e.se;
    row.mean_cross_lap = c.mean;
    row.se_cross_lap = c.se;
    rows.push_back(row);
  }
  return rows;
}

double weighted_l2_distance(const VectorField& u, const VectorField& v,
                            const WireGrid& grid, const WeightProfile& weight) {
  const VectorField d = u - v;
  return std::sqrt(inner(d, d, grid, &weight));
}

namespace {

// Both interpolations evaluated at the fine-grid nodes; weighted L2 and H1
// distances under rho_w on that grid.
struct InterpDistance {
  double l2 = 0.0;
  double h1 = 0.0;
};

InterpDistance interp_distance(const VectorField& coarse, const WireGrid& gc,
                               const VectorField& fine, const WireGrid& gf, double w) {
  const PiecewiseQuadratic qc = quad_interp(coarse, gc);
  const PiecewiseQuadratic qf = quad_interp(fine, gf);
  const WeightProfile rho = WeightProfile::make(gf, w);
  double l2 = 0.0, h1 = 0.0;
  for (Eigen::Index k = 0; k < gf.n; ++k) {
    const double x = gf.coord(k);
    const double dv = (qc.value(x) - qf.value(x)).squaredNorm();
    const double dd = (qc.derivative(x) - qf.derivative(x)).squaredNorm();
    l2 += gf.h * rho.values[k] * dv;
    h1 += gf.h * rho.values[k] * (dv + dd);
  }
  InterpDistance out;
  out.l2 = std::sqrt(l2);
  out.h1 = std::sqrt(h1);
  return out;
}

}  // namespace

std::vector<ConvergenceRow> convergence_study(const SimConfig& base,
                                              const std::vector<double>& h_list) {
  if (h_list.size() < 2) return {};
  for (std::size_t i = 1; i < h_list.size(); ++i) {
    const bool halved = std::abs(h_list[i] - 0.5 * h_list[i - 1]) <= 1e-12 * h_list[i - 1];
    const bool repeated = std::abs(h_list[i] - h_list[i - 1]) <= 1e-12 * h_list[i - 1];
    if (!halved && !repeated)
      throw std::invalid_argument("convergence_study: h list must be nested (h, h/2, ...)");
  }

  std::vector<Trajectory> runs;
  std::vector<SimConfig> cfgs;
  for (double h : h_list) {
    SimConfig cfg = regrid(base, h);
    cfg.validate();
    const IncrementSource source(base.seed, 0, base.noise_modes);
    runs.push_back(simulate(cfg, source));
    cfgs.push_back(cfg);
  }

  std::vector<ConvergenceRow> rows;
  for (std::size_t i = 0; i + 1 < runs.size(); ++i) {
    const Trajectory& tc = runs[i];
    const Trajectory& tf = runs[i + 1];
    const std::size_t slices = std::min(tc.snapshots.size(), tf.snapshots.size());
    ConvergenceRow row;
    row.h_coarse = cfgs[i].h;
    row.h_fine = cfgs[i + 1].h;
    const double dt_snap =
        slices > 1 ? tc.snapshot_times[1] - tc.snapshot_times[0] : tc.dt;
    for (std::size_t s = 0; s < slices; ++s) {
      const InterpDistance d = interp_distance(tc.snapshots[s], tc.grid,
                                               tf.snapshots[s], tf.grid, 1.0);
      row.sup_l2w = std::max(row.sup_l2w, d.l2);
      if (s + 1 < slices) row.l2t_h1w += d.h1 * d.h1 * dt_snap;
    }
    row.l2t_h1w = std::sqrt(row.l2t_h1w);
    rows.push_back(row);
  }
  return rows;
}

VectorField perturbed_domain_wall(const WireGrid& grid, double w0, double perturbation) {
  VectorField m = initial_domain_wall(grid, w0);
  if (perturbation == 0.0) return m;
  for (Eigen::Index k = 0; k < grid.n; ++k) {
    const double x = grid.coord(k);
    m(k, 2) += perturbation * std::exp(-x * x);
  }
  return project_to_sphere(m);
}

UniquenessReport uniqueness_check(const SimConfig& config, double perturbation) {
  config.validate();
  const WireGrid grid = config.make_grid();
  const IncrementSource source(config.seed, 0, config.noise_modes);

  const VectorField ic1 = initial_domain_wall(grid, config.wall_width);
  const VectorField ic2 = perturbed_domain_wall(grid, config.wall_width, perturbation);
  const Trajectory t1 = simulate(config, source, &ic1);
  const Trajectory t2 = simulate(config, source, &ic2);

  const WeightProfile rho = WeightProfile::make(grid, 1.0);
  UniquenessReport rep;
  rep.times = t1.snapshot_times;
  rep.distances.reserve(t1.snapshots.size());
  for (std::size_t s = 0; s < t1.snapshots.size(); ++s)
    rep.distances.push_back(
        weighted_l2_distance(t1.snapshots[s], t2.snapshots[s], grid, rho));
  rep.final_distance = rep.distances.back();

  // Least-squares slope of log distance over positive entries.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int count = 0;
  for (std::size_t s = 0; s < rep.distances.size(); ++s) {
    if (rep.distances[s] <= 0.0) continue;
    const double x = rep.times[s];
    const double y = std::log(rep.distances[s]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count >= 2 && sxx * count - sx * sx > 0.0)
    rep.growth_rate = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  return rep;
}

}  // namespace spinwire
