// qwork - command-line driver for the interferometric work-statistics pipeline.

#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "qwork/error.hpp"
#include "qwork/run.hpp"
#include "qwork/selftest.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

int exit_code(qwork::ErrorKind kind) {
  switch (kind) {
    case qwork::ErrorKind::Config:
    case qwork::ErrorKind::Parse:
    case qwork::ErrorKind::InvalidArgument:
      return kExitConfig;
    default:
      return kExitNumerical;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum work statistics from Ramsey interferometry of a trapped ion"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> dim;
  std::optional<double> noise;
  bool no_plots = false;

  auto* run = app.add_subcommand("run", "Run the full forward/backward pipeline");
  run->add_option("config", config_path, "Run configuration (INI)")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--seed", seed, "Noise seed (overrides [measurement] seed)");
  run->add_option("--dim", dim, "Fock truncation (overrides [numerics] dim)");
  run->add_option("--noise", noise, "Per-quadrature noise sigma (overrides [measurement] noise_sigma)");
  run->add_flag("--no-plots", no_plots, "Skip SVG output");

  std::string oracle_config;
  auto* oracle = app.add_subcommand("oracle", "Print exact line spectra and the discrete Crooks table");
  oracle->add_option("config", oracle_config, "Run configuration (INI)")->required()->check(CLI::ExistingFile);

  app.add_subcommand("selftest", "Run the invariant checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) {
      qwork::RunConfig cfg = qwork::load_config(config_path);
      if (seed) cfg.seed = *seed;
      if (dim) cfg.dim = *dim;
      if (noise) cfg.noise_sigma = *noise;
      qwork::validate_config(cfg);
      const auto report = qwork::run_experiment(cfg, out_dir, !no_plots);
      std::cout << report.json;
      if (!report.ok) {
        std::cerr << "qwork: " << report.failure << '\n';
        return exit_code(report.failure_kind);
      }
      return 0;
    }
    if (*oracle) {
      const qwork::RunConfig cfg = qwork::load_config(oracle_config);
      std::cout << qwork::oracle_table(qwork::prepare_run(cfg));
      return 0;
    }
    const int failures = qwork::run_selftest(std::cout);
    return failures == 0 ? 0 : kExitNumerical;
  } catch (const qwork::Error& e) {
    std::cerr << "qwork: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "qwork: " << e.what() << '\n';
    return kExitNumerical;
  }
}
