#include <CLI11.hpp>

#include "spinwire/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"spinwire: stochastic Landau-Lifshitz-Slonczewski dynamics on a 1D wire"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = spinwire::default_out_dir();
  bool binary = false;

  auto* sim = app.add_subcommand("simulate", "run one trajectory and write outputs");
  sim->add_option("config", config_path, "config file")->required();
  sim->add_option("-o,--out", out_dir, "output directory");
  sim->add_flag("--binary", binary, "also write packed binary snapshots");

  auto* check = app.add_subcommand("check", "run the structural identity battery");
  check->add_option("config", config_path, "config file")->required();

  std::string kind;
  spinwire::StudyOptions opts;
  auto* study = app.add_subcommand("study", "run a diagnostic study");
  study->add_option("config", config_path, "config file")->required();
  study->add_option("--kind", kind, "uniform_h | convergence | uniqueness")->required();
  study->add_option("-o,--out", out_dir, "output directory");
  study->add_option("--levels", opts.levels, "number of h levels (halving)");
  study->add_option("--paths", opts.paths, "Monte Carlo paths (uniform_h)");
  study->add_option("--perturbation", opts.perturbation,
                    "initial-condition perturbation (uniqueness)");

  CLI11_PARSE(app, argc, argv);

  if (sim->parsed()) return spinwire::run_simulate(config_path, out_dir, binary);
  if (check->parsed()) return spinwire::run_check(config_path);
  return spinwire::run_study(config_path, kind, out_dir, opts);
}
