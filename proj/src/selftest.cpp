#include "qwork/selftest.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <string>

#include "qwork/fluctuation.hpp"
#include "qwork/interferometry.hpp"
#include "qwork/propagator.hpp"
#include "qwork/workdist.hpp"

namespace qwork {

namespace {

struct Instance {
  Drive drive;
  int dim;
  double beta;
};

Instance random_instance(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> g(-0.3, 0.3), t(0.2, 1.5), nb(0.3, 1.5);
  const double lf = g(rng);
  const double sw = t(rng);
  return {Drive{QuenchSchedule::tanh_switch(0.0, lf, sw), QuenchSchedule::tanh_switch(0.0, 0.5 * lf, sw), 1.0},
          64, beta_for_mean_occupation(nb(rng), 1.0)};
}

}  // namespace

int run_selftest(std::ostream& os) {
  int failures = 0;
  auto check = [&](const std::string& name, const std::function<double()>& metric, double tol) {
    double v = 0.0;
    bool pass = false;
    try {
      v = metric();
      pass = v < tol;
    } catch (const std::exception& e) {
      os << "FAIL " << name << ": " << e.what() << '\n';
      ++failures;
      return;
    }
    os << (pass ? "PASS " : "FAIL ") << name << ": " << v << " (tol " << tol << ")\n";
    if (!pass) ++failures;
  };

  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> ud(0.0, 6.0);

  check("three-route equality", [&] {
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      const Instance in = random_instance(rng);
      const auto u = propagate(in.drive, in.dim, 200);
      const auto hi = in.drive.initial_hamiltonian(in.dim);
      const auto hf = in.drive.final_hamiltonian(in.dim);
      const auto rho = gibbs_state(hi, in.beta);
      const double uu = ud(rng);
      const Complex chi = char_forward(u, hi, hf, rho, uu);
      const auto pair = conditional_pair(u, hi, hf, uu);
      const Complex l = decoherence_factor(pair.t_down, pair.t_up, rho);
      const auto q = qubit_readout(ramsey_output(pair.t_down, pair.t_up, rho));
      worst = std::max({worst, std::abs(chi - l), std::abs(q.sigma_z - l.real()),
                        std::abs(q.sigma_y - l.imag())});
    }
    return worst;
  }, 1e-10);

  check("discrete Crooks relation", [&] {
    const Instance in = random_instance(rng);
    const auto u = propagate(in.drive, in.dim, 200);
    const auto ub = propagate(in.drive.reversed(), in.dim, 200);
    const auto hi = in.drive.initial_hamiltonian(in.dim);
    const auto hf = in.drive.final_hamiltonian(in.dim);
    const double df = exact_delta_f(hi, hf, in.beta);
    const auto fl = brute_force_lines(u, hi, hf, gibbs_state(hi, in.beta));
    const auto bl = brute_force_lines(ub, hf, hi, gibbs_state(hf, in.beta));
    const auto pts = crooks_points(fl, bl, 1e-9, 1e-6);
    double worst = 0.0;
    for (const auto& p : pts.points) {
      worst = std::max(worst, std::abs(p.ratio / std::exp(in.beta * (p.w - df)) - 1.0));
    }
    return worst;
  }, 1e-9);

  check("Jarzynski equality", [&] {
    const Instance in = random_instance(rng);
    const auto u = propagate(in.drive, in.dim, 200);
    const auto j = jarzynski_check(u, in.drive.initial_hamiltonian(in.dim),
                                   in.drive.final_hamiltonian(in.dim), in.beta);
    return std::abs(j.lhs / j.rhs - 1.0);
  }, 1e-8);

  check("spectrum normalization", [&] {
    const Instance in = random_instance(rng);
    const auto u = propagate(in.drive, in.dim, 200);
    const auto hi = in.drive.initial_hamiltonian(in.dim);
    const SweepProblem p{u, hi, in.drive.final_hamiltonian(in.dim), gibbs_state(hi, in.beta)};
    const auto sig = measured_signal(p, Direction::Forward, 0.5, 200, MeasurementModel{20.0, 0.0, 0});
    return std::abs(invert_to_distribution(sig).integral() - 1.0);
  }, 1e-6);

  check("parallel kernels match serial", [&] {
    const Instance in = random_instance(rng);
    const auto u = propagate(in.drive, in.dim, 100);
    const auto hi = in.drive.initial_hamiltonian(in.dim);
    const SweepProblem p{u, hi, in.drive.final_hamiltonian(in.dim), gibbs_state(hi, in.beta)};
    const auto a = sweep(p, 0.7, 50, Exec::Serial);
    const auto b = sweep(p, 0.7, 50, Exec::Parallel);
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
    return worst;
  }, 1e-10);

  return failures;
}

}  // namespace qwork
