// run.hpp - end-to-end orchestration of the interferometric work-statistics
// experiment: configuration, forward/backward sweeps, inversion, peak fitting,
// and the artifacts written to a run directory.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qwork/fluctuation.hpp"
#include "qwork/interferometry.hpp"
#include "qwork/iontrap.hpp"
#include "qwork/propagator.hpp"
#include "qwork/workdist.hpp"

namespace qwork {

inline constexpr const char* kVersion = "1.0.0";

/// Shape of the Rabi-frequency ramp, in laboratory units.
struct ScheduleConfig {
  std::string kind = "tanh";  // tanh | repeated_tanh | custom
  double t_us = 1.0;
  double duration_us = 0.0;  // 0 -> 8T
  double t_slow_us = 20.0;
  double t_fast_us = 0.03;
  std::string pattern = "SFSFF";
  /// custom: schedule grammar with values as fractions of rabi_max and times in us.
  std::string text;
};

struct RunConfig {
  // [trap]
  double trap_frequency_khz = 300.0;
  double eta = 0.33;
  double rabi_max_khz = 150.0;
  double phi = 0.25 * kPi;
  double nbar = 1.0;
  // [schedule_forward], [schedule_backward]
  ScheduleConfig forward;
  std::optional<ScheduleConfig> backward;
  // [measurement]
  double du_us = 0.5;
  int samples = 1000;
  double tau_us = 50.0;  // inf allowed
  double noise_sigma = 0.0;
  std::uint64_t seed = 1;
  // [numerics]
  int dim = 64;
  int steps = 0;  // 0 -> segment-adaptive plan
  double max_dt_periods = 0.01;
  int padding = 4;
  Tolerances tol;
  // [fit]
  PeakOptions peaks{1e-3, 0.25, 5.0, 0.1};
  bool weighted_fit = false;
  // [output]
  bool physical_units = true;

  /// Original config text, copied verbatim into the run directory.
  std::string source_text;
};

/// Parses the INI-style configuration. Throws ConfigError on schema violations.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
/// Schema checks shared by the parser and command-line overrides.
void validate_config(const RunConfig& cfg);

/// Rabi schedule in internal units (values in omega_0, times in 1/omega_0).
QuenchSchedule rabi_schedule(const ScheduleConfig& sc, const UnitSystem& units, double rabi_max);

/// Everything up to the exact (noiseless, envelope-free) characteristic functions.
struct PreparedRun {
  UnitSystem units;
  IonParams ion;
  std::vector<std::string> warnings;
  Drive forward_drive;
  Drive backward_drive;
  int dim = 0;
  int steps_forward = 0;
  int steps_backward = 0;
  double beta = 0.0;
  double delta_f = 0.0;
  HermitianOperator h_i;
  HermitianOperator h_f;
  DensityMatrix rho_i;
  DensityMatrix rho_f;
  UnitaryOperator u_forward;
  UnitaryOperator u_backward;
  double du = 0.0;  // internal units
  double tau = 0.0;
  std::vector<Complex> chi_forward;
  std::vector<Complex> chi_backward;
  // Truncation diagnostics.
  double tail_initial = 0.0;
  double tail_final = 0.0;
  double edge_forward = 0.0;
  double edge_backward = 0.0;
  double unitarity_forward = 0.0;
  double unitarity_backward = 0.0;
};

PreparedRun prepare_run(const RunConfig& cfg);

struct Analysis {
  CharSignal signal_forward;
  CharSignal signal_backward;
  WorkSpectrum spectrum_forward;
  WorkSpectrum spectrum_backward;
  std::optional<PeakSet> peaks_forward;
  std::optional<PeakSet> peaks_backward;
  std::optional<CrooksPoints> points;
  std::optional<CrooksFit> fit;
  std::string failed_stage;  // empty on success
  std::string failure;
  ErrorKind failure_kind = ErrorKind::Numerical;
};

/// Measurement imperfections, inversion, peaks and fit for one noise seed.
/// Stage failures are recorded, not thrown.
Analysis analyze(const PreparedRun& prep, const RunConfig& cfg, std::uint64_t seed);

struct RunReport {
  std::string json;  // serialized report
  bool ok = true;
  ErrorKind failure_kind = ErrorKind::Numerical;
  std::string failure;
};

/// Full pipeline; writes every artifact plus report.json into out_dir.
RunReport run_experiment(const RunConfig& cfg, const std::string& out_dir, bool plots = true);

/// Exact line spectra and the discrete Crooks table, as CSV text.
std::string oracle_table(const PreparedRun& prep, double min_weight = 1e-12);

}  // namespace qwork
