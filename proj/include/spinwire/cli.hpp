#pragma once

#include <string>

namespace spinwire {

// Exit codes: 0 success, 1 validation error, 2 runtime abort, 3 identity failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;
inline constexpr int kExitIdentity = 3;

struct StudyOptions {
  int levels = 3;          // h refinements for uniform_h / convergence
  int paths = 8;           // Monte Carlo paths for uniform_h
  double perturbation = 1e-8;  // initial-condition perturbation for uniqueness
};

/// Output directory fallback: SPINWIRE_OUT_DIR or the current directory.
std::string default_out_dir();

int run_simulate(const std::string& config_path, const std::string& out_dir,
                 bool binary_snapshots);
int run_check(const std::string& config_path);
int run_study(const std::string& config_path, const std::string& kind,
              const std::string& out_dir, const StudyOptions& options);

}  // namespace spinwire
