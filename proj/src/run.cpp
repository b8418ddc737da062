#include "qwork/run.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

#include "qwork/error.hpp"
#include "qwork/plots.hpp"

namespace qwork {

namespace pt = boost::property_tree;
using nlohmann::json;

namespace {

template <class T>
T get_or(const pt::ptree& tree, const std::string& key, T fallback) {
  if (!tree.get_child_optional(key)) return fallback;
  try {
    return tree.get<T>(key);
  } catch (const pt::ptree_bad_data&) {
    throw ConfigError("config: bad value for '" + key + "'");
  }
}

double get_time_or_inf(const pt::ptree& tree, const std::string& key, double fallback) {
  const auto raw = tree.get_optional<std::string>(key);
  if (!raw) return fallback;
  std::string v = *raw;
  if (v == "inf" || v == "infinity") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: bad value for '" + key + "'");
  }
}

std::string unquote(std::string s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

ScheduleConfig read_schedule(const pt::ptree& tree, const std::string& section) {
  ScheduleConfig sc;
  sc.kind = get_or<std::string>(tree, section + ".kind", sc.kind);
  sc.t_us = get_or(tree, section + ".T_us", sc.t_us);
  sc.duration_us = get_or(tree, section + ".duration_us", sc.duration_us);
  sc.t_slow_us = get_or(tree, section + ".T_slow_us", sc.t_slow_us);
  sc.t_fast_us = get_or(tree, section + ".T_fast_us", sc.t_fast_us);
  sc.pattern = get_or<std::string>(tree, section + ".pattern", sc.pattern);
  sc.text = unquote(get_or<std::string>(tree, section + ".text", sc.text));
  if (sc.kind != "tanh" && sc.kind != "repeated_tanh" && sc.kind != "custom") {
    throw ConfigError("config: [" + section + "] kind must be tanh, repeated_tanh or custom");
  }
  if (sc.kind == "custom" && sc.text.empty()) {
    throw ConfigError("config: [" + section + "] custom schedule needs 'text'");
  }
  return sc;
}

void check_known_keys(const pt::ptree& tree) {
  static const std::map<std::string, std::vector<std::string>> known = {
      {"trap", {"trap_frequency_khz", "eta", "rabi_max_khz", "phi", "phi_over_pi", "nbar"}},
      {"schedule_forward",
       {"kind", "T_us", "duration_us", "T_slow_us", "T_fast_us", "pattern", "text"}},
      {"schedule_backward",
       {"kind", "T_us", "duration_us", "T_slow_us", "T_fast_us", "pattern", "text"}},
      {"measurement", {"du_us", "window_us", "samples", "tau_us", "noise_sigma", "seed"}},
      {"numerics",
       {"dim", "n_pad", "steps", "max_dt_periods", "padding", "unitarity_tol", "thermal_tail",
        "edge_population"}},
      {"fit", {"threshold", "line_window", "min_snr", "baseline_offset", "weighted"}},
      {"output", {"units"}},
  };
  for (const auto& [section, body] : tree) {
    auto it = known.find(section);
    if (it == known.end()) throw ConfigError("config: unknown section [" + section + "]");
    for (const auto& [key, value] : body) {
      if (std::find(it->second.begin(), it->second.end(), key) == it->second.end()) {
        throw ConfigError("config: unknown key '" + key + "' in [" + section + "]");
      }
    }
  }
}

template <class F>
auto in_stage(const char* name, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("[") + name + "] " + e.what());
  }
}

json peaks_json(const PeakSet& ps, double w_scale) {
  json arr = json::array();
  for (const auto& p : ps.peaks) {
    arr.push_back({{"W", p.w * w_scale}, {"amplitude", p.amplitude}, {"order", p.order}});
  }
  return arr;
}

json schedule_json(const ScheduleConfig& sc) {
  json j = {{"kind", sc.kind}};
  if (sc.kind == "tanh") {
    j["T_us"] = sc.t_us;
    j["duration_us"] = sc.duration_us > 0.0 ? sc.duration_us : 8.0 * sc.t_us;
  } else if (sc.kind == "repeated_tanh") {
    j["T_slow_us"] = sc.t_slow_us;
    j["T_fast_us"] = sc.t_fast_us;
    j["pattern"] = sc.pattern;
  } else {
    j["text"] = sc.text;
  }
  return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Config, "cannot write " + path.string());
  f << text;
}


}  // namespace

RunConfig parse_config(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream is(text);
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  check_known_keys(tree);

  RunConfig c;
  c.source_text = text;
  c.trap_frequency_khz = get_or(tree, "trap.trap_frequency_khz", c.trap_frequency_khz);
  c.eta = get_or(tree, "trap.eta", c.eta);
  c.rabi_max_khz = get_or(tree, "trap.rabi_max_khz", c.rabi_max_khz);
  if (tree.get_optional<std::string>("trap.phi_over_pi")) {
    c.phi = kPi * get_or(tree, "trap.phi_over_pi", 0.25);
  }
  c.phi = get_or(tree, "trap.phi", c.phi);
  c.nbar = get_or(tree, "trap.nbar", c.nbar);

  c.forward = read_schedule(tree, "schedule_forward");
  if (tree.get_child_optional("schedule_backward")) c.backward = read_schedule(tree, "schedule_backward");

  c.du_us = get_or(tree, "measurement.du_us", c.du_us);
  if (!(c.du_us > 0.0)) throw ConfigError("config: du_us must be positive");
  if (auto window = tree.get_optional<double>("measurement.window_us")) {
    c.samples = static_cast<int>(std::lround(*window / c.du_us));
  }
  c.samples = get_or(tree, "measurement.samples", c.samples);
  c.tau_us = get_time_or_inf(tree, "measurement.tau_us", c.tau_us);
  c.noise_sigma = get_or(tree, "measurement.noise_sigma", c.noise_sigma);
  c.seed = get_or<std::uint64_t>(tree, "measurement.seed", c.seed);

  c.dim = get_or(tree, "numerics.dim", c.dim);
  c.tol.n_pad = get_or(tree, "numerics.n_pad", c.tol.n_pad);
  c.steps = get_or(tree, "numerics.steps", c.steps);
  c.max_dt_periods = get_or(tree, "numerics.max_dt_periods", c.max_dt_periods);
  c.padding = get_or(tree, "numerics.padding", c.padding);
  c.tol.unitarity = get_or(tree, "numerics.unitarity_tol", c.tol.unitarity);
  c.tol.thermal_tail = get_or(tree, "numerics.thermal_tail", c.tol.thermal_tail);
  c.tol.edge_population = get_or(tree, "numerics.edge_population", c.tol.edge_population);

  c.peaks.rel_threshold = get_or(tree, "fit.threshold", c.peaks.rel_threshold);
  c.peaks.line_window = get_or(tree, "fit.line_window", c.peaks.line_window);
  c.peaks.min_snr = get_or(tree, "fit.min_snr", c.peaks.min_snr);
  c.peaks.baseline_offset = get_or(tree, "fit.baseline_offset", c.peaks.baseline_offset);
  c.weighted_fit = get_or(tree, "fit.weighted", c.weighted_fit);

  const std::string units = get_or<std::string>(tree, "output.units", "physical");
  if (units != "physical" && units != "internal") {
    throw ConfigError("config: [output] units must be physical or internal");
  }
  c.physical_units = units == "physical";
  validate_config(c);
  return c;
}

void validate_config(const RunConfig& c) {
  if (c.samples < 2) throw ConfigError("config: need at least 2 samples");
  if (c.dim < 2 * c.tol.n_pad || c.dim < 4) throw ConfigError("config: dim too small for n_pad");
  if (c.steps < 0) throw ConfigError("config: steps must be >= 0");
  if (!(c.max_dt_periods > 0.0)) throw ConfigError("config: max_dt_periods must be positive");
  if (c.padding < 1) throw ConfigError("config: padding must be >= 1");
  if (!(c.tau_us > 0.0)) throw ConfigError("config: tau_us must be positive");
  if (c.noise_sigma < 0.0) throw ConfigError("config: noise_sigma must be >= 0");
  if (!(c.nbar > 0.0)) throw ConfigError("config: nbar must be positive");
  if (!(c.trap_frequency_khz > 0.0)) throw ConfigError("config: trap frequency must be positive");
  if (!(c.peaks.rel_threshold > 0.0 && c.peaks.rel_threshold < 1.0)) {
    throw ConfigError("config: threshold must lie in (0, 1)");
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

QuenchSchedule rabi_schedule(const ScheduleConfig& sc, const UnitSystem& units, double rabi_max) {
  if (sc.kind == "tanh") {
    const double t = units.time(sc.t_us);
    const double d = sc.duration_us > 0.0 ? units.time(sc.duration_us) : 0.0;
    return QuenchSchedule::tanh_switch(0.0, rabi_max, t, d);
  }
  if (sc.kind == "repeated_tanh") {
    return repeated_tanh(0.0, rabi_max, units.time(sc.t_slow_us), units.time(sc.t_fast_us),
                         sc.pattern);
  }
  const QuenchSchedule shape = parse_schedule(sc.text);
  const double tscale = units.time(1.0);
  std::vector<Segment> segs;
  for (const auto& s : shape.segments()) {
    if (const auto* c = std::get_if<ConstantSegment>(&s)) {
      segs.emplace_back(ConstantSegment{c->value * rabi_max, c->duration * tscale});
    } else {
      const auto& t = std::get<TanhSegment>(s);
      segs.emplace_back(TanhSegment{t.start * rabi_max, t.end * rabi_max,
                                    t.switching_time * tscale, t.duration * tscale});
    }
  }
  return QuenchSchedule(std::move(segs));
}

PreparedRun prepare_run(const RunConfig& cfg) {
  const UnitSystem units{cfg.trap_frequency_khz};
  const IonParams ion{1.0, cfg.eta, units.frequency(cfg.rabi_max_khz), cfg.phi};
  std::vector<std::string> warnings = in_stage("trap", [&] { return validate(ion); });

  const auto [fwd_drive, bwd_drive] = in_stage("schedule", [&] {
    const IonProtocol fp = build_ion_protocol(rabi_schedule(cfg.forward, units, ion.rabi_max), ion);
    Drive fwd{fp.lambda, fp.epsilon, 1.0};
    Drive bwd = fwd.reversed();
    if (cfg.backward) {
      const IonProtocol bp =
          build_ion_protocol(rabi_schedule(*cfg.backward, units, ion.rabi_max), ion);
      bwd = Drive{bp.lambda, bp.epsilon, 1.0};
      if (std::abs(bwd.lambda.lambda_i() - fwd.lambda.lambda_f()) > 1e-12 ||
          std::abs(bwd.lambda.lambda_f() - fwd.lambda.lambda_i()) > 1e-12) {
        throw ConfigError("backward schedule must run from the forward final value to the initial one");
      }
    }
    return std::pair{fwd, bwd};
  });

  const int dim = cfg.dim;
  const double beta = beta_for_mean_occupation(cfg.nbar, 1.0);
  const double max_dt = cfg.max_dt_periods * kTwoPi;
  auto plan_for = [&](const Drive& d) {
    return cfg.steps > 0 ? uniform_plan(d.quench_time(), cfg.steps) : adaptive_plan(d.lambda, max_dt);
  };
  const StepPlan plan_f = plan_for(fwd_drive);
  const StepPlan plan_b = plan_for(bwd_drive);

  HermitianOperator h_i = fwd_drive.initial_hamiltonian(dim);
  HermitianOperator h_f = fwd_drive.final_hamiltonian(dim);
  DensityMatrix rho_i = in_stage("thermal", [&] { return gibbs_state(h_i, beta, cfg.tol); });
  DensityMatrix rho_f = in_stage("thermal", [&] { return gibbs_state(h_f, beta, cfg.tol); });
  const double delta_f = in_stage("free-energy", [&] { return exact_delta_f(h_i, h_f, beta, cfg.tol); });

  UnitaryOperator u_f = in_stage("propagate", [&] { return propagate(fwd_drive, dim, plan_f, cfg.tol); });
  UnitaryOperator u_b = in_stage("propagate", [&] { return propagate(bwd_drive, dim, plan_b, cfg.tol); });

  const double edge_f = edge_population(u_f.matrix(), rho_i.matrix(), cfg.tol.n_pad);
  const double edge_b = edge_population(u_b.matrix(), rho_f.matrix(), cfg.tol.n_pad);
  for (double edge : {edge_f, edge_b}) {
    if (edge > cfg.tol.edge_population) {
      std::ostringstream os;
      os << "[propagate] evolved population " << edge << " in the top " << cfg.tol.n_pad
         << " levels exceeds " << cfg.tol.edge_population << "; increase dim";
      throw TruncationError(os.str(), edge);
    }
  }

  const double du = units.time(cfg.du_us);
  const double tau = std::isinf(cfg.tau_us) ? cfg.tau_us : units.time(cfg.tau_us);
  const SweepProblem fwd_problem{u_f, h_i, h_f, rho_i};
  const SweepProblem bwd_problem{u_b, h_f, h_i, rho_f};
  std::vector<Complex> chi_f = in_stage("sweep", [&] { return sweep(fwd_problem, du, cfg.samples); });
  std::vector<Complex> chi_b = in_stage("sweep", [&] { return sweep(bwd_problem, du, cfg.samples); });

  return PreparedRun{
      .units = units,
      .ion = ion,
      .warnings = std::move(warnings),
      .forward_drive = fwd_drive,
      .backward_drive = bwd_drive,
      .dim = dim,
      .steps_forward = total_steps(plan_f),
      .steps_backward = total_steps(plan_b),
      .beta = beta,
      .delta_f = delta_f,
      .h_i = std::move(h_i),
      .h_f = std::move(h_f),
      .rho_i = std::move(rho_i),
      .rho_f = std::move(rho_f),
      .u_forward = u_f,
      .u_backward = u_b,
      .du = du,
      .tau = tau,
      .chi_forward = std::move(chi_f),
      .chi_backward = std::move(chi_b),
      .tail_initial = thermal_tail_weight(fwd_problem.h_i, beta, cfg.tol.n_pad),
      .tail_final = thermal_tail_weight(fwd_problem.h_f, beta, cfg.tol.n_pad),
      .edge_forward = edge_f,
      .edge_backward = edge_b,
      .unitarity_forward = unitarity_residual(u_f.matrix()),
      .unitarity_backward = unitarity_residual(u_b.matrix()),
  };
}

Analysis analyze(const PreparedRun& prep, const RunConfig& cfg, std::uint64_t seed) {
  const MeasurementModel model{prep.tau, cfg.noise_sigma, seed};
  Analysis a;
  a.signal_forward = apply_measurement(prep.chi_forward, prep.du, model, Direction::Forward);
  a.signal_backward = apply_measurement(prep.chi_backward, prep.du, model, Direction::Backward);
  a.spectrum_forward = invert_to_distribution(a.signal_forward, cfg.padding);
  a.spectrum_backward = invert_to_distribution(a.signal_backward, cfg.padding);

  auto fail = [&](const char* stage, const Error& e) {
    a.failed_stage = stage;
    a.failure = std::string("[") + stage + "] " + e.what();
    a.failure_kind = e.kind();
  };
  try {
    a.peaks_forward = extract_peaks(a.spectrum_forward, 1.0, cfg.peaks);
    a.peaks_backward = extract_peaks(a.spectrum_backward, 1.0, cfg.peaks);
  } catch (const Error& e) {
    fail("peaks", e);
    return a;
  }
  try {
    a.points = crooks_points(*a.peaks_forward, *a.peaks_backward);
  } catch (const Error& e) {
    fail("crooks", e);
    return a;
  }
  try {
    std::vector<double> weights;
    if (cfg.weighted_fit) {
      // Inverse variance of ln(ratio) under additive noise ~ 1/(1/aF^2 + 1/aB^2).
      for (const auto& p : a.points->points) {
        const double af = p.amp_forward, ab = p.amp_backward;
        weights.push_back(1.0 / (1.0 / (af * af) + 1.0 / (ab * ab)));
      }
    }
    a.fit = fit_crooks(a.points->points, weights);
  } catch (const Error& e) {
    fail("fit", e);
  }
  return a;
}

std::string oracle_table(const PreparedRun& prep, double min_weight) {
  const auto fwd = brute_force_lines(prep.u_forward, prep.h_i, prep.h_f, prep.rho_i);
  const auto bwd = brute_force_lines(prep.u_backward, prep.h_f, prep.h_i, prep.rho_f);
  std::ostringstream os;
  os << std::setprecision(12);
  os << "# beta=" << prep.beta << " delta_f=" << prep.delta_f << " (units of omega_0)\n";
  os << "W,weight_forward,weight_backward_at_minus_W,ratio,crooks_prediction\n";
  for (const auto& f : fwd) {
    if (f.weight < min_weight) continue;
    double wb = 0.0;
    for (const auto& b : bwd) {
      if (std::abs(b.w + f.w) <= 1e-9) wb += b.weight;
    }
    if (wb < min_weight) continue;
    os << f.w << ',' << f.weight << ',' << wb << ',' << f.weight / wb << ','
       << std::exp(prep.beta * (f.w - prep.delta_f)) << '\n';
  }
  const auto jar = jarzynski_check(prep.u_forward, prep.h_i, prep.h_f, prep.beta);
  os << "# jarzynski lhs=" << jar.lhs << " rhs=" << jar.rhs << '\n';
  return os.str();
}

RunReport run_experiment(const RunConfig& cfg, const std::string& out_dir, bool plots) {
  namespace fs = std::filesystem;
  const fs::path dir(out_dir);
  fs::create_directories(dir);
  write_text(dir / "config.ini", cfg.source_text);

  const PreparedRun prep = prepare_run(cfg);
  const Analysis an = analyze(prep, cfg, cfg.seed);

  const double w_scale = cfg.physical_units ? prep.units.trap_frequency_khz : 1.0;
  const double u_scale = cfg.physical_units ? prep.units.to_us(1.0) : 1.0;
  const std::string w_unit = cfg.physical_units ? "kHz" : "omega0";
  const std::string u_unit = cfg.physical_units ? "us" : "1/omega0";

  const std::pair<const CharSignal*, const char*> signals[] = {
      {&an.signal_forward, "forward"}, {&an.signal_backward, "backward"}};
  for (const auto& [sig, name] : signals) {
    write_signal_csv(*sig, (dir / (std::string("signal_") + name + ".csv")).string(), u_scale);
    const ScheduleConfig& sc =
        (sig->direction == Direction::Backward && cfg.backward) ? *cfg.backward : cfg.forward;
    const Drive& drive = sig->direction == Direction::Forward ? prep.forward_drive : prep.backward_drive;
    json meta = {
        {"du", sig->du * u_scale},
        {"u_unit", u_unit},
        {"samples", sig->size()},
        {"tau", std::isinf(sig->tau) ? json("inf") : json(sig->tau * u_scale)},
        {"sigma", sig->noise_sigma},
        {"noise_model", "additive Gaussian per quadrature, sigma relative to |chi| <= 1"},
        {"seed", sig->seed},
        {"direction", to_string(sig->direction)},
        {"schedule_kind", sc.kind},
        {"schedule", drive.lambda.to_string()},
        {"schedule_units", "internal (omega0 = 1)"},
    };
    write_text(dir / (std::string("signal_") + name + ".json"), meta.dump(2) + "\n");
  }
  write_spectrum_csv(an.spectrum_forward, (dir / "spectrum_forward.csv").string(), w_scale);
  write_spectrum_csv(an.spectrum_backward, (dir / "spectrum_backward.csv").string(), w_scale);
  if (an.peaks_forward) write_text(dir / "peaks_forward.json", peaks_json(*an.peaks_forward, w_scale).dump(2) + "\n");
  if (an.peaks_backward) write_text(dir / "peaks_backward.json", peaks_json(*an.peaks_backward, w_scale).dump(2) + "\n");
  write_text(dir / "oracle.csv", oracle_table(prep));

  json fit_json = nullptr;
  if (an.fit) {
    json pts = json::array();
    for (const auto& p : an.fit->points) {
      pts.push_back({{"W", p.w * w_scale}, {"ratio", p.ratio}, {"log_ratio", std::log(p.ratio)},
                     {"order", p.order}});
    }
    fit_json = {
        {"A", an.fit->a},
        {"B", an.fit->b},
        {"beta_hat", an.fit->beta_hat()},
        {"delta_f_hat", an.fit->delta_f_hat()},
        {"delta_f_hat_scaled", an.fit->delta_f_hat() * w_scale},
        {"residual", an.fit->residual},
        {"units", {{"A", "1/omega0"}, {"B", "dimensionless"}, {"delta_f_hat", "omega0"},
                   {"delta_f_hat_scaled", w_unit}, {"W", w_unit}}},
        {"points", pts},
    };
    write_text(dir / "crooks_fit.json", fit_json.dump(2) + "\n");
  }

  const auto jar = jarzynski_check(prep.u_forward, prep.h_i, prep.h_f, prep.beta, cfg.tol);
  std::vector<std::string> warnings = prep.warnings;
  if (an.points && an.points->unmatched > 0) {
    warnings.push_back(std::to_string(an.points->unmatched) + " peaks without a forward/backward partner");
  }

  if (plots) {
    static const std::vector<Peak> none;
    const auto& pf = an.peaks_forward ? an.peaks_forward->peaks : none;
    const auto& pb = an.peaks_backward ? an.peaks_backward->peaks : none;
    write_text(dir / "spectra.svg",
               spectra_svg(an.spectrum_forward, an.spectrum_backward, pf, pb, w_scale, w_unit));
    if (an.fit) {
      write_text(dir / "crooks.svg", crooks_svg(*an.fit, prep.beta, prep.delta_f, w_scale, w_unit));
    } else {
      warnings.push_back("no Crooks fit; ratio plot omitted");
    }
  }

  json report = {
      {"version", kVersion},
      {"eigen_version", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                            "." + std::to_string(EIGEN_MINOR_VERSION)},
      {"seed", cfg.seed},
      {"units", {{"energy", "omega0"}, {"output_W", w_unit}, {"output_u", u_unit}}},
      {"measurement", {{"du_us", cfg.du_us}, {"samples", cfg.samples},
                       {"tau_us", std::isinf(cfg.tau_us) ? json("inf") : json(cfg.tau_us)},
                       {"noise_sigma", cfg.noise_sigma},
                       {"noise_model", "additive Gaussian per quadrature"}}},
      {"schedule", {{"forward", schedule_json(cfg.forward)},
                    {"backward", cfg.backward ? schedule_json(*cfg.backward) : json("reversed forward")}}},
      {"exact", {{"beta", prep.beta}, {"delta_f", prep.delta_f},
                 {"delta_f_scaled", prep.delta_f * w_scale}}},
      {"fit", fit_json},
      {"jarzynski", {{"lhs", jar.lhs}, {"rhs", jar.rhs}}},
      {"truncation", {{"dim", prep.dim}, {"n_pad", cfg.tol.n_pad},
                      {"thermal_tail_initial", prep.tail_initial},
                      {"thermal_tail_final", prep.tail_final},
                      {"edge_population_forward", prep.edge_forward},
                      {"edge_population_backward", prep.edge_backward},
                      {"unitarity_forward", prep.unitarity_forward},
                      {"unitarity_backward", prep.unitarity_backward}}},
      {"propagation", {{"steps_forward", prep.steps_forward}, {"steps_backward", prep.steps_backward},
                       {"quench_time", prep.forward_drive.quench_time()},
                       {"quench_time_scaled", prep.forward_drive.quench_time() * u_scale}}},
      {"spectrum", {{"dW", an.spectrum_forward.dW * w_scale},
                    {"integral_forward", an.spectrum_forward.integral()},
                    {"integral_backward", an.spectrum_backward.integral()}}},
      {"peaks", {{"forward", an.peaks_forward ? an.peaks_forward->peaks.size() : 0},
                 {"backward", an.peaks_backward ? an.peaks_backward->peaks.size() : 0},
                 {"unmatched", an.points ? an.points->unmatched : 0}}},
      {"warnings", warnings},
      {"status", an.failed_stage.empty() ? "ok" : "failed"},
      {"failed_stage", an.failed_stage},
      {"failure", an.failure},
  };
  RunReport out;
  out.json = report.dump(2) + "\n";
  out.ok = an.failed_stage.empty();
  out.failure = an.failure;
  out.failure_kind = an.failure_kind;
  write_text(dir / "report.json", out.json);
  return out;
}

}  // namespace qwork
