// Acceptance gate: one line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qwork/run.hpp"

using namespace qwork;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

RunConfig ion_config(const std::string& kind) {
  RunConfig cfg;  // defaults: 300 kHz trap, eta 0.33, 150 kHz, phi pi/4, nbar 1, 0.5 us x 1000, tau 50 us
  cfg.forward.kind = kind;
  cfg.forward.t_us = 1.0;
  return cfg;
}

// Forward and independently propagated backward evolution for an ion quench.
struct Quench {
  std::string name;
  HermitianOperator h_i, h_f;
  UnitaryOperator u_f, u_b;
};

Quench ion_quench(const std::string& name, const RunConfig& cfg, int dim) {
  UnitSystem units{cfg.trap_frequency_khz};
  IonParams ion{1.0, cfg.eta, units.frequency(cfg.rabi_max_khz), cfg.phi};
  auto proto = build_ion_protocol(rabi_schedule(cfg.forward, units, ion.rabi_max), ion);
  Drive fwd{proto.lambda, proto.epsilon, 1.0};
  Drive bwd = fwd.reversed();
  const double max_dt = cfg.max_dt_periods * kTwoPi;
  return Quench{name, fwd.initial_hamiltonian(dim), fwd.final_hamiltonian(dim),
                propagate(fwd, dim, adaptive_plan(fwd.lambda, max_dt), cfg.tol),
                propagate(bwd, dim, adaptive_plan(bwd.lambda, max_dt), cfg.tol)};
}

std::map<int, double> orders(const PeakSet& ps) {
  std::map<int, double> m;
  for (const auto& p : ps.peaks) m[p.order] = p.amplitude;
  return m;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double rel(double got, double want) { return std::abs(got / want - 1.0); }

// Shared state between criteria.
std::vector<Quench> quenches;  // single_tanh, repeated_tanh at dim 80
std::optional<PreparedRun> prep_a, prep_b;
std::optional<Analysis> an_a;
RunConfig cfg_a = ion_config("tanh");
RunConfig cfg_b = ion_config("repeated_tanh");

Outcome three_routes() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> gdist(0.02, 0.3), tdist(0.1, 3.0), udist(0.0, 100.0),
      bdist(0.5, 2.0), edist(0.0, 0.5);
  const int dim = 64;
  double worst_trace = 0.0, worst_ramsey = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double g1 = gdist(rng), g2 = gdist(rng), e1 = edist(rng);
    const double t1 = tdist(rng), t2 = tdist(rng);
    std::vector<Segment> lam{TanhSegment{0.0, g1, t1, 8 * t1}};
    std::vector<Segment> eps{TanhSegment{0.0, e1, t1, 8 * t1}};
    if (i % 2) {
      lam.push_back(ConstantSegment{g1, t2});
      lam.push_back(TanhSegment{g1, g2, t2, 4 * t2});
      eps.push_back(ConstantSegment{e1, t2});
      eps.push_back(ConstantSegment{e1, 4 * t2});
    }
    Drive d{QuenchSchedule(lam), QuenchSchedule(eps), 1.0};
    const double beta = bdist(rng), u = udist(rng);
    auto uq = propagate(d, dim, adaptive_plan(d.lambda, default_max_dt(1.0)));
    auto hi = d.initial_hamiltonian(dim);
    auto hf = d.final_hamiltonian(dim);
    auto rho = gibbs_state(hi, beta);
    auto pair = conditional_pair(uq, hi, hf, u);
    const Complex l = decoherence_factor(pair.t_down, pair.t_up, rho);
    const Complex chi = char_forward(uq, hi, hf, rho, u);
    auto q = qubit_readout(ramsey_output(pair.t_down, pair.t_up, rho));
    worst_trace = std::max(worst_trace, std::abs(l - chi));
    worst_ramsey = std::max({worst_ramsey, std::abs(q.sigma_z - l.real()), std::abs(q.sigma_y - l.imag())});
  }
  return {worst_trace < 1e-10 && worst_ramsey < 1e-10,
          fmt("50 triples, max |chi - L| = %.2e, max Ramsey deviation = %.2e", worst_trace, worst_ramsey)};
}

void build_quenches() {
  if (!quenches.empty()) return;
  // nbar = 2 needs more than 64 levels to keep the thermal tail below 1e-10.
  quenches.push_back(ion_quench("single tanh", cfg_a, 80));
  quenches.push_back(ion_quench("repeated tanh", cfg_b, 80));
}

Outcome discrete_crooks() {
  build_quenches();
  double worst = 0.0;
  int pairs = 0;
  for (const auto& q : quenches) {
    for (double nbar : {0.5, 1.0, 2.0}) {
      const double beta = beta_for_mean_occupation(nbar, 1.0);
      const double df = exact_delta_f(q.h_i, q.h_f, beta);
      auto lf = brute_force_lines(q.u_f, q.h_i, q.h_f, gibbs_state(q.h_i, beta));
      auto lb = brute_force_lines(q.u_b, q.h_f, q.h_i, gibbs_state(q.h_f, beta));
      auto pts = crooks_points(lf, lb, 1e-9, 1e-6);
      for (const auto& p : pts.points) {
        worst = std::max(worst, std::abs(p.ratio / std::exp(beta * (p.w - df)) - 1.0));
        ++pairs;
      }
    }
  }
  return {worst < 1e-9 && pairs > 0,
          fmt("%d line pairs (weight >= 1e-6), max relative deviation = %.2e", pairs, worst)};
}

Outcome jarzynski() {
  build_quenches();
  double worst = 0.0;
  for (const auto& q : quenches)
    for (double nbar : {0.5, 1.0, 2.0}) {
      const double beta = beta_for_mean_occupation(nbar, 1.0);
      auto j = jarzynski_check(q.u_f, q.h_i, q.h_f, beta);
      worst = std::max(worst, std::abs(j.lhs / j.rhs - 1.0));
    }
  return {worst < 1e-8, fmt("6 cases, max |<e^-bW> e^(b dF) - 1| = %.2e", worst)};
}

Outcome noiseless_pipeline() {
  const auto t0 = std::chrono::steady_clock::now();
  prep_a = prepare_run(cfg_a);
  an_a = analyze(*prep_a, cfg_a, cfg_a.seed);
  const double elapsed = seconds_since(t0);
  if (!an_a->fit) return {false, "pipeline failed: " + an_a->failure};
  const double b = an_a->fit->beta_hat(), f = an_a->fit->delta_f_hat();
  const double eb = rel(b, std::log(2.0)), ef = rel(f, prep_a->delta_f);
  return {eb < 0.02 && ef < 0.02 && elapsed < 120.0,
          fmt("beta_hat = %.5f (%.2f%%), dF_hat = %.3f kHz vs %.3f (%.2f%%), pipeline time %.1f s", b, 100 * eb,
              300.0 * f, 300.0 * prep_a->delta_f, 100 * ef, elapsed)};
}

Outcome noisy_pipeline() {
  RunConfig cfg = cfg_b;
  cfg.noise_sigma = 0.005;
  prep_b = prepare_run(cfg);
  std::vector<double> betas, dfs;
  int failed = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto an = analyze(*prep_b, cfg, seed);
    if (!an.fit) {
      ++failed;
      betas.push_back(std::numeric_limits<double>::infinity());
      dfs.push_back(std::numeric_limits<double>::infinity());
      continue;
    }
    betas.push_back(an.fit->beta_hat());
    dfs.push_back(an.fit->delta_f_hat());
  }
  const double mb = median(betas), mf = median(dfs);
  const double eb = rel(mb, std::log(2.0)), ef = rel(mf, prep_b->delta_f);
  return {eb < 0.10 && ef < 0.15,
          fmt("20 seeds (%d failed fits), median beta_hat = %.4f (%.1f%%), median dF_hat = %.4f (%.1f%%)",
              failed, mb, 100 * eb, mf, 100 * ef)};
}

Outcome peak_structure() {
  if (!prep_b || !an_a || !an_a->peaks_forward) return {false, "prerequisite runs missing"};
  auto an_b = analyze(*prep_b, cfg_b, cfg_b.seed);
  if (!an_b.peaks_forward) return {false, "repeated-tanh peak extraction failed: " + an_b.failure};
  auto single = orders(*an_a->peaks_forward);
  auto repeated = orders(*an_b.peaks_forward);
  auto has = [](const std::map<int, double>& m, int k) { return m.count(k) > 0; };
  const bool rep_ok = has(repeated, 0) && has(repeated, 1) && has(repeated, -1) && has(repeated, 2) &&
                      has(repeated, -2);
  bool single_ok = has(single, 0) && has(single, 1) && has(single, -1);
  for (const auto& [k, a] : single) single_ok = single_ok && std::abs(k) <= 1;
  bool stronger = rep_ok && single_ok;
  std::string ratios;
  if (stronger) {
    for (int k : {-1, 1}) {
      const double rs = single[k] / single[0], rr = repeated[k] / repeated[0];
      stronger = stronger && rr > rs;
      ratios += fmt(" k=%+d: %.2e -> %.2e", k, rs, rr);
    }
  }
  return {rep_ok && single_ok && stronger,
          fmt("single tanh orders %zu, repeated orders %zu; sideband/carrier", single.size(), repeated.size()) +
              ratios};
}

Outcome hygiene() {
  if (!prep_a || !prep_b || !an_a) return {false, "prerequisite runs missing"};
  const double unit = std::max({prep_a->unitarity_forward, prep_a->unitarity_backward,
                                prep_b->unitarity_forward, prep_b->unitarity_backward});

  Drive d{QuenchSchedule::tanh_switch(0.0, 0.165, UnitSystem{}.time(1.0)), std::nullopt, 1.0};
  auto u1 = propagate(d, 64, 200);
  auto u2 = propagate(d, 64, 400);
  auto u4 = propagate(d, 64, 800);
  const double ratio = (u1.matrix() - u2.matrix()).cwiseAbs().maxCoeff() /
                       (u2.matrix() - u4.matrix()).cwiseAbs().maxCoeff();

  const double norm = std::max(std::abs(an_a->spectrum_forward.integral() - 1.0),
                               std::abs(an_a->spectrum_backward.integral() - 1.0));

  RunConfig big = cfg_a;
  big.dim = 128;
  auto an_big = analyze(prepare_run(big), big, big.seed);
  if (!an_big.fit || !an_a->fit) return {false, "dim 128 pipeline failed: " + an_big.failure};
  const double db = rel(an_big.fit->beta_hat(), an_a->fit->beta_hat());
  const double df = rel(an_big.fit->delta_f_hat(), an_a->fit->delta_f_hat());

  const bool ok = unit < 1e-10 && std::abs(ratio - 4.0) <= 0.8 && norm < 1e-6 && db < 1e-3 && df < 1e-3;
  return {ok, fmt("unitarity %.1e, step-halving ratio %.3f, normalization %.1e, dim 64->128: "
                  "beta_hat %.1e, dF_hat %.1e",
                  unit, ratio, norm, db, df)};
}

Outcome sudden_poisson() {
  const double g = 0.165;
  const int dim = 64;
  auto hi = build_hamiltonian(1.0, 0.0, 0.0, dim);
  auto hf = build_hamiltonian(1.0, g, 0.0, dim);
  auto lines = brute_force_lines(UnitaryOperator(CMatrix::Identity(dim, dim)), hi, hf, gibbs_state(hi, 50.0));
  double worst = 0.0;
  std::vector<double> seen(dim, 0.0);
  for (const auto& l : lines) {
    const double k = l.w + g * g;
    const long ki = std::lround(k);
    if (std::abs(k - ki) > 1e-9 || ki < 0 || ki >= dim) {
      worst = std::max(worst, l.weight);
      continue;
    }
    seen[static_cast<std::size_t>(ki)] += l.weight;
  }
  for (int k = 0; k < dim; ++k) worst = std::max(worst, std::abs(seen[k] - oracle::poisson(k, g * g)));
  return {worst < 1e-8, fmt("mean %.6f, max |weight - Poisson| = %.2e", g * g, worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"three-route equivalence", three_routes},
      {"discrete Crooks relation", discrete_crooks},
      {"Jarzynski equality", jarzynski},
      {"noiseless tanh pipeline", noiseless_pipeline},
      {"noisy repeated-tanh pipeline", noisy_pipeline},
      {"peak structure", peak_structure},
      {"numerical hygiene", hygiene},
      {"sudden-quench Poisson oracle", sudden_poisson},
  };
  int failures = 0, index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("[%s] %d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", index - failures, index);
  return failures == 0 ? 0 : 1;
}
