#include <doctest.h>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "spinwire/battery.hpp"
#include "spinwire/cli.hpp"
#include "spinwire/config.hpp"
#include "spinwire/manifest.hpp"

using namespace spinwire;
namespace fs = std::filesystem;

namespace {

const char* kMinimalConfig =
    "[grid]\n"
    "h = 0.1\n"
    "n = 64\n"
    "[time]\n"
    "dt = 1e-3\n"
    "T = 5e-3\n";

const char* kNoisyConfig =
    "[physics]\n"
    "alpha = 1.0\n"
    "gamma = 0.2\n"
    "[grid]\n"
    "h = 0.1\n"
    "n = 64\n"
    "boundary = clamped\n"
    "[time]\n"
    "dt = 1e-3\n"
    "T = 0.01\n"
    "snapshot_stride = 2\n"
    "[noise]\n"
    "family = gaussian_bumps\n"
    "J = 2\n"
    "amp = 0.05\n"
    "width = 1.5\n"
    "spacing = 2.0\n"
    "center = -1.0\n"
    "[run]\n"
    "seed = 7\n";

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("spinwire_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string file(const std::string& name, const std::string& content) const {
    const fs::path p = path / name;
    std::ofstream out(p, std::ios::binary);
    out << content;
    return p.string();
  }
  std::string read(const std::string& name) const {
    std::ifstream in(path / name, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
};

}  // namespace

TEST_CASE("minimal config parses with documented defaults") {
  const SimConfig cfg = parse_config_text(kMinimalConfig);
  CHECK(cfg.params.alpha == 1.0);
  CHECK(cfg.params.gamma == 0.0);
  CHECK(cfg.boundary == Boundary::Clamped);
  CHECK(cfg.origin == doctest::Approx(-0.5 * 0.1 * 63));
  CHECK(cfg.scheme == Scheme::EulerMaruyamaIto);
  CHECK(cfg.projection);
  CHECK(cfg.noise_modes == 0);
  CHECK(cfg.velocity.is_zero());
  CHECK(cfg.seed == 0);
  CHECK(cfg.snapshot_stride == 1);
}

TEST_CASE("scheme and velocity variants parse") {
  const SimConfig heun = parse_config_text(
      std::string(kMinimalConfig) + "[scheme]\nmethod = heun_strat\nprojection = false\n");
  CHECK(heun.scheme == Scheme::HeunStratonovich);
  CHECK_FALSE(heun.projection);

  const SimConfig pulse = parse_config_text(
      std::string(kMinimalConfig) +
      "[velocity]\nkind = pulse\nvalue = 2.0\nt_on = 0.5\nt_off = 1.5\n");
  CHECK(pulse.velocity.at(1.0) == 2.0);
  CHECK(pulse.velocity.at(2.0) == 0.0);

  const SimConfig tab = parse_config_text(
      std::string(kMinimalConfig) +
      "[velocity]\nkind = tabulated\ntimes = 0, 1, 2\nvalues = 0.1, -0.4, 0.2\n");
  CHECK(tab.velocity.at(1.5) == -0.4);
  CHECK(tab.velocity.c_v() == doctest::Approx(0.4));
  CHECK_THROWS_AS(parse_config_text(std::string(kMinimalConfig) +
                                    "[velocity]\nkind = tabulated\ntimes = 0, 1\n"),
                  ConfigError);
}

TEST_CASE("config rejections") {
  CHECK_THROWS_AS(parse_config_text("[physics]\nalpha = 0\n" + std::string(kMinimalConfig)),
                  ConfigError);
  CHECK_THROWS_AS(parse_config_text(std::string(kMinimalConfig) + "[grid]\nh = 0.2\n"),
                  ConfigError);  // duplicate key
  CHECK_THROWS_AS(parse_config_text(std::string(kMinimalConfig) + "[typo]\nx = 1\n"),
                  ConfigError);
  CHECK_THROWS_AS(
      parse_config_text(std::string(kMinimalConfig) + "[run]\nsede = 1\n"),
      ConfigError);
  CHECK_THROWS_AS(parse_config_text("[grid]\nh = fast\nn = 64\n[time]\ndt = 1e-3\nT = 1\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config_text("[time]\ndt = 1e-3\nT = 1\n"), ConfigError);

  // stability gate: dt > 0.2 h^2 without the override
  const char* gated =
      "[grid]\nh = 0.1\nn = 64\n[time]\ndt = 5e-3\nT = 0.05\n";
  CHECK_THROWS_WITH_AS(parse_config_text(gated),
                       doctest::Contains("cfl_override"), ConfigError);
  const std::string overridden =
      std::string(gated) + "[scheme]\ncfl_override = true\n";
  CHECK_NOTHROW(parse_config_text(overridden));
}

TEST_CASE("simulate command writes deterministic outputs") {
  TempDir tmp;
  const std::string cfg_path = tmp.file("run.cfg", kNoisyConfig);
  const std::string out1 = (tmp.path / "out1").string();
  const std::string out2 = (tmp.path / "out2").string();

  REQUIRE(run_simulate(cfg_path, out1, true) == kExitOk);
  REQUIRE(run_simulate(cfg_path, out2, true) == kExitOk);

  const std::string snaps1 = tmp.read("out1/snapshots.csv");
  const std::string snaps2 = tmp.read("out2/snapshots.csv");
  CHECK(snaps1 == snaps2);  // byte-identical
  CHECK(tmp.read("out1/diagnostics.csv") == tmp.read("out2/diagnostics.csv"));
  CHECK(tmp.read("out1/snapshots.bin") == tmp.read("out2/snapshots.bin"));

  // stride 2 over 10 steps: ceil(10/2) + 1 = 6 slices, 64 rows each
  std::istringstream in(snaps1);
  std::string line;
  int rows = 0;
  std::getline(in, line);
  CHECK(line == "t,x,mx,my,mz");
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 6 * 64);

  // diagnostics at every step boundary
  std::istringstream din(tmp.read("out1/diagnostics.csv"));
  int drows = -1;  // header
  while (std::getline(din, line)) ++drows;
  CHECK(drows == 11);

  // binary header carries the grid geometry
  const std::string bin = tmp.read("out1/snapshots.bin");
  REQUIRE(bin.size() > 32);
  CHECK(bin.substr(0, 4) == "SWSN");
  std::uint64_t n = 0;
  std::memcpy(&n, bin.data() + 8, sizeof n);
  CHECK(n == 64);
  const std::size_t expected =
      4 + 4 + 8 + 8 + 8 + 8 + 6 * (8 + 64 * 3 * 8);
  CHECK(bin.size() == expected);
}

TEST_CASE("manifest digests match the outputs") {
  TempDir tmp;
  const std::string cfg_path = tmp.file("run.cfg", kMinimalConfig);
  const std::string out = (tmp.path / "out").string();
  REQUIRE(run_simulate(cfg_path, out, false) == kExitOk);

  const std::string manifest = tmp.read("out/manifest.json");
  CHECK(manifest.find(kVersionTag) != std::string::npos);
  for (const char* name : {"snapshots.csv", "diagnostics.csv"}) {
    const std::uint64_t digest = fnv1a64_file((fs::path(out) / name).string());
    char hex[20];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(digest));
    CHECK(manifest.find(hex) != std::string::npos);
  }
}

TEST_CASE("simulate command surfaces validation failures") {
  TempDir tmp;
  const std::string bad = tmp.file("bad.cfg", "[grid]\nh = 0.1\n");
  CHECK(run_simulate(bad, (tmp.path / "o").string(), false) == kExitValidation);
  CHECK(run_simulate((tmp.path / "missing.cfg").string(), (tmp.path / "o").string(),
                     false) == kExitValidation);
}

TEST_CASE("identity battery passes and detects an injected defect") {
  const SimConfig cfg = parse_config_text(kNoisyConfig);
  const auto results = identity_battery(cfg, 25);
  for (const auto& r : results) {
    INFO(r.name << " residual " << r.residual);
    CHECK(r.pass);
  }

  // a sign flip in the correction identity must blow the residual
  const WireGrid g = WireGrid::periodic(cfg.h, cfg.n, cfg.origin);
  const NoiseModel noise =
      build_noise(cfg.noise_family, cfg.noise_modes, cfg.noise_law, g);
  NoiseStream rng(5, 0);
  const VectorField u = random_unit_field(g, rng);
  const VectorField S = strat_correction(u, noise, cfg.params, g);
  const VectorField G = diffusion(u, cfg.params, g);
  const ScalarField scale = noise.kappa_sq.cwiseProduct(squared_norms(G));
  const double flipped =
      (dot(S, u) - scale).cwiseAbs().maxCoeff() / scale.maxCoeff();
  CHECK(flipped > 1e-3);
}

TEST_CASE("check command exit codes") {
  TempDir tmp;
  const std::string cfg_path = tmp.file("run.cfg", kNoisyConfig);
  CHECK(run_check(cfg_path) == kExitOk);
  const std::string bad = tmp.file("bad.cfg", "[grid]\nh = -1\nn = 8\n");
  CHECK(run_check(bad) == kExitValidation);
}

TEST_CASE("study commands") {
  TempDir tmp;
  const std::string cfg_path = tmp.file("run.cfg", kNoisyConfig);

  SUBCASE("convergence with a single level yields an empty table") {
    StudyOptions opts;
    opts.levels = 1;
    const std::string out = (tmp.path / "conv1").string();
    REQUIRE(run_study(cfg_path, "convergence", out, opts) == kExitOk);
    CHECK(tmp.read("conv1/study_convergence.csv") == "h_coarse,h_fine,sup_l2w,l2t_h1w\n");
  }

  SUBCASE("uniqueness with zero perturbation is the zero column") {
    StudyOptions opts;
    opts.perturbation = 0.0;
    const std::string out = (tmp.path / "uniq").string();
    REQUIRE(run_study(cfg_path, "uniqueness", out, opts) == kExitOk);
    std::istringstream in(tmp.read("uniq/study_uniqueness.csv"));
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,distance");
    while (std::getline(in, line))
      CHECK(line.substr(line.find(',') + 1) == "0");
  }

  SUBCASE("uniform_h emits one row per level with standard errors") {
    // dt must clear the stability gate at the finest level (h/2 here)
    const std::string study_cfg = tmp.file(
        "study.cfg",
        "[grid]\nh = 0.1\nn = 64\n[time]\ndt = 2.5e-4\nT = 5e-3\n"
        "[noise]\nfamily = gaussian_bumps\nJ = 2\namp = 0.05\n[run]\nseed = 7\n");
    StudyOptions opts;
    opts.levels = 2;
    opts.paths = 2;
    const std::string out = (tmp.path / "uh").string();
    REQUIRE(run_study(study_cfg, "uniform_h", out, opts) == kExitOk);
    std::istringstream in(tmp.read("uh/study_uniform_h.csv"));
    std::string line;
    int rows = -1;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 2);
  }

  SUBCASE("refinement past the stability gate is a validation error") {
    StudyOptions opts;
    opts.levels = 3;  // kNoisyConfig dt clears the gate only at its own h
    opts.paths = 1;
    CHECK(run_study(cfg_path, "uniform_h", (tmp.path / "gated").string(), opts) ==
          kExitValidation);
  }

  SUBCASE("unknown study kind") {
    StudyOptions opts;
    CHECK(run_study(cfg_path, "nope", (tmp.path / "x").string(), opts) ==
          kExitValidation);
  }
}
