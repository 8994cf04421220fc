#include "spinwire/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <vector>

#include "spinwire/battery.hpp"
#include "spinwire/config.hpp"
#include "spinwire/csv.hpp"
#include "spinwire/diagnostics.hpp"
#include "spinwire/manifest.hpp"

namespace spinwire {

namespace fs = std::filesystem;

std::string default_out_dir() {
  const char* env = std::getenv("SPINWIRE_OUT_DIR");
  return env != nullptr && *env != '\0' ? std::string(env) : std::string(".");
}

namespace {

void write_snapshots_csv(const fs::path& path, const Trajectory& traj) {
  std::ofstream out(path, std::ios::binary);
  out << "t,x,mx,my,mz\n";
  for (std::size_t s = 0; s < traj.snapshots.size(); ++s) {
    const std::string t = format_double(traj.snapshot_times[s]);
    const VectorField& m = traj.snapshots[s];
    for (Eigen::Index k = 0; k < traj.grid.n; ++k) {
      out << t << ',' << format_double(traj.grid.coord(k)) << ','
          << format_double(m(k, 0)) << ',' << format_double(m(k, 1)) << ','
          << format_double(m(k, 2)) << '\n';
    }
  }
}

void write_diagnostics_csv(const fs::path& path, const Trajectory& traj) {
  std::ofstream out(path, std::ios::binary);
  out << "t,energy,sphere_dev,cross_lap_sq,lap_sq,m_h_increment\n";
  for (std::size_t k = 0; k < traj.energy.size(); ++k) {
    out << format_double(traj.time_at(static_cast<long long>(k))) << ','
        << format_double(traj.energy[k]) << ',' << format_double(traj.sphere_dev[k])
        << ',' << format_double(traj.cross_lap_sq[k]) << ','
        << format_double(traj.lap_sq[k]) << ',' << format_double(traj.mh_increment[k])
        << '\n';
  }
}

// Packed snapshots: magic "SWSN", u32 version, u64 n, f64 h, f64 origin,
// u64 slice count; then per slice f64 t followed by n*3 f64, little endian.
void write_snapshots_binary(const fs::path& path, const Trajectory& traj) {
  std::ofstream out(path, std::ios::binary);
  const auto put = [&out](const void* p, std::size_t bytes) {
    out.write(static_cast<const char*>(p), static_cast<std::streamsize>(bytes));
  };
  out.write("SWSN", 4);
  const std::uint32_t version = 1;
  put(&version, sizeof version);
  const std::uint64_t n = static_cast<std::uint64_t>(traj.grid.n);
  put(&n, sizeof n);
  put(&traj.grid.h, sizeof traj.grid.h);
  put(&traj.grid.origin, sizeof traj.grid.origin);
  const std::uint64_t count = traj.snapshots.size();
  put(&count, sizeof count);
  for (std::size_t s = 0; s < traj.snapshots.size(); ++s) {
    put(&traj.snapshot_times[s], sizeof(double));
    for (Eigen::Index k = 0; k < traj.grid.n; ++k)
      for (int c = 0; c < 3; ++c) put(&traj.snapshots[s](k, c), sizeof(double));
  }
}

std::vector<double> halved_h_list(double h0, int levels) {
  std::vector<double> hs;
  double h = h0;
  for (int i = 0; i < levels; ++i) {
    hs.push_back(h);
    h *= 0.5;
  }
  return hs;
}

}  // namespace

int run_simulate(const std::string& config_path, const std::string& out_dir,
                 bool binary_snapshots) {
  SimConfig cfg;
  std::string config_text;
  try {
    config_text = read_file(config_path);
    cfg = parse_config_text(config_text);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitValidation;
  }

  const auto start = std::chrono::steady_clock::now();
  Trajectory traj;
  try {
    traj = simulate(cfg);
  } catch (const SimulationError& e) {
    std::cerr << "simulation aborted at step " << e.step << ": " << e.what() << "\n";
    return kExitRuntime;
  }
  if (traj.smallness_warning)
    std::cerr << "warning: noise fails the p=1 smallness condition; uniform "
                 "estimates are not guaranteed\n";

  fs::create_directories(out_dir);
  std::vector<std::string> outputs;
  write_snapshots_csv(fs::path(out_dir) / "snapshots.csv", traj);
  outputs.push_back("snapshots.csv");
  write_diagnostics_csv(fs::path(out_dir) / "diagnostics.csv", traj);
  outputs.push_back("diagnostics.csv");
  if (binary_snapshots) {
    write_snapshots_binary(fs::path(out_dir) / "snapshots.bin", traj);
    outputs.push_back("snapshots.bin");
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(out_dir, config_text, cfg.seed, outputs, elapsed);
  std::cout << "wrote " << outputs.size() << " output files to " << out_dir << "\n";
  return kExitOk;
}

int run_check(const std::string& config_path) {
  SimConfig cfg;
  try {
    cfg = parse_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitValidation;
  }

  const std::vector<IdentityResult> results = identity_battery(cfg, 50);
  bool all_pass = true;
  for (const IdentityResult& r : results) {
    std::cout << (r.pass ? "PASS" : "FAIL") << "  max residual " << format_double(r.residual)
              << "  " << r.name << "\n";
    all_pass = all_pass && r.pass;
  }
  return all_pass ? kExitOk : kExitIdentity;
}

int run_study(const std::string& config_path, const std::string& kind,
              const std::string& out_dir, const StudyOptions& options) {
  SimConfig cfg;
  std::string config_text;
  try {
    config_text = read_file(config_path);
    cfg = parse_config_text(config_text);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitValidation;
  }

  const auto start = std::chrono::steady_clock::now();
  fs::create_directories(out_dir);
  std::vector<std::string> outputs;
  try {
    if (kind == "uniform_h") {
      const auto rows =
          uniform_in_h_study(cfg, halved_h_list(cfg.h, options.levels), options.paths);
      std::ofstream out(fs::path(out_dir) / "study_uniform_h.csv", std::ios::binary);
      out << "h,n,paths,aborted,mean_sup_energy,se_sup_energy,mean_cross_lap,se_cross_lap\n";
      for (const auto& r : rows)
        out << format_double(r.h) << ',' << format_int(r.n) << ','
            << format_int(r.paths) << ',' << format_int(r.aborted) << ','
            << format_double(r.mean_sup_energy) << ',' << format_double(r.se_sup_energy)
            << ',' << format_double(r.mean_cross_lap) << ','
            << format_double(r.se_cross_lap) << '\n';
      outputs.push_back("study_uniform_h.csv");
    } else if (kind == "convergence") {
      const auto rows = convergence_study(cfg, halved_h_list(cfg.h, options.levels));
      std::ofstream out(fs::path(out_dir) / "study_convergence.csv", std::ios::binary);
      out << "h_coarse,h_fine,sup_l2w,l2t_h1w\n";
      for (const auto& r : rows)
        out << format_double(r.h_coarse) << ',' << format_double(r.h_fine) << ','
            << format_double(r.sup_l2w) << ',' << format_double(r.l2t_h1w) << '\n';
      outputs.push_back("study_convergence.csv");
    } else if (kind == "uniqueness") {
      const UniquenessReport rep = uniqueness_check(cfg, options.perturbation);
      std::ofstream out(fs::path(out_dir) / "study_uniqueness.csv", std::ios::binary);
      out << "t,distance\n";
      for (std::size_t s = 0; s < rep.times.size(); ++s)
        out << format_double(rep.times[s]) << ',' << format_double(rep.distances[s])
            << '\n';
      outputs.push_back("study_uniqueness.csv");
    } else {
      std::cerr << "unknown study kind '" << kind
                << "' (expected uniform_h, convergence or uniqueness)\n";
      return kExitValidation;
    }
  } catch (const SimulationError& e) {
    std::cerr << "study aborted at step " << e.step << ": " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::invalid_argument& e) {
    std::cerr << "study error: " << e.what() << "\n";
    return kExitValidation;
  }

  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(out_dir, config_text, cfg.seed, outputs, elapsed);
  std::cout << "wrote " << outputs.size() << " study files to " << out_dir << "\n";
  return kExitOk;
}

}  // namespace spinwire
