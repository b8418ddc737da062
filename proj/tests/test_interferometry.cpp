#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qwork/interferometry.hpp"
#include "qwork/propagator.hpp"
#include "qwork/workdist.hpp"
#include "random_ops.hpp"

using namespace qwork;
using testing_ops::random_hermitian;
using testing_ops::random_unitary;
using testing_ops::thermal;

namespace {

struct Quench {
  Drive drive;
  int dim;
  double beta;
  HermitianOperator hi, hf;
  DensityMatrix rho, rho_f;
  UnitaryOperator u;

  Quench(Drive d, int n, double b)
      : drive(std::move(d)), dim(n), beta(b), hi(drive.initial_hamiltonian(n)),
        hf(drive.final_hamiltonian(n)), rho(gibbs_state(hi, b)), rho_f(gibbs_state(hf, b)),
        u(propagate(drive, n, adaptive_plan(drive.lambda, default_max_dt(1.0)))) {}
};

Quench tanh_quench(int dim = 48) {
  return Quench(Drive{QuenchSchedule::tanh_switch(0.0, 0.165, 1.885),
                      QuenchSchedule::tanh_switch(0.0, 0.25, 1.885), 1.0},
                dim, std::log(2.0));
}

}  // namespace

TEST_CASE("characteristic function basics") {
  auto q = tanh_quench();
  CHECK(std::abs(char_forward(q.u, q.hi, q.hf, q.rho, 0.0) - Complex(1.0)) < 1e-12);
  CHECK(std::abs(char_backward(q.u, q.hi, q.hf, q.rho_f, 0.0) - Complex(1.0)) < 1e-12);
  for (double u : {0.4, 3.0, 25.0}) {
    const Complex a = char_forward(q.u, q.hi, q.hf, q.rho, u);
    const Complex b = char_forward(q.u, q.hi, q.hf, q.rho, -u);
    CHECK(std::abs(a - std::conj(b)) < 1e-12);
    CHECK(std::abs(a) <= 1.0 + 1e-10);
  }

  auto h = build_hamiltonian(1.0, 0.2, 0.1, 32);
  UnitaryOperator u(evolution(h, 2.3));
  auto rho = gibbs_state(h, 1.0);
  for (double uu : {0.0, 1.1, 7.0}) {
    CHECK(std::abs(char_forward(u, h, h, rho, uu) - Complex(1.0)) < 1e-12);
    CHECK(std::abs(char_backward(u, h, h, rho, uu) - Complex(1.0)) < 1e-12);
  }
}

TEST_CASE("trace formula matches the line sum") {
  auto q = tanh_quench();
  auto lines = brute_force_lines(q.u, q.hi, q.hf, q.rho, 0.0, 0.0);
  for (double u : {0.0, 0.9, 5.5, 60.0}) {
    Complex sum(0.0, 0.0);
    for (const auto& l : lines) sum += l.weight * std::exp(Complex(0.0, u * l.w));
    CHECK(std::abs(char_forward(q.u, q.hi, q.hf, q.rho, u) - sum) < 1e-10);
  }
}

TEST_CASE("continued characteristic functions") {
  auto q = tanh_quench();
  const double zi = std::exp(log_partition(q.hi, q.beta));
  const double zf = std::exp(log_partition(q.hf, q.beta));
  for (double u : {0.3, 1.7, 4.1}) {
    const Complex lhs = zi * char_forward(q.u, q.hi, q.hf, q.rho, u);
    const Complex rhs = zf * char_backward_continued(q.u, q.hi, q.hf, q.beta, Complex(-u, q.beta));
    CHECK(std::abs(lhs - rhs) / std::abs(lhs) < 1e-8);
    // Real arguments reduce to the ordinary routes.
    CHECK(std::abs(char_forward_continued(q.u, q.hi, q.hf, q.beta, Complex(u, 0.0)) -
                   char_forward(q.u, q.hi, q.hf, q.rho, u)) < 1e-12);
    CHECK(std::abs(char_backward_continued(q.u, q.hi, q.hf, q.beta, Complex(u, 0.0)) -
                   char_backward(q.u, q.hi, q.hf, q.rho_f, u)) < 1e-12);
  }
}

TEST_CASE("backward function equals the reversed-drive forward function") {
  auto q = tanh_quench();
  auto ur = propagate(q.drive.reversed(), q.dim,
                      adaptive_plan(q.drive.reversed().lambda, default_max_dt(1.0)));
  for (double u : {0.5, 2.5, 11.0}) {
    CHECK(std::abs(char_backward(q.u, q.hi, q.hf, q.rho_f, u) -
                   char_forward(ur, q.hf, q.hi, q.rho_f, u)) < 1e-10);
  }
}

TEST_CASE("decoherence factor equals the trace formula") {
  auto q = tanh_quench();
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> uni(0.0, 100.0);
  for (int i = 0; i < 50; ++i) {
    const double u = uni(rng);
    auto p = conditional_pair(q.u, q.hi, q.hf, u);
    CHECK(std::abs(decoherence_factor(p.t_down, p.t_up, q.rho) -
                   char_forward(q.u, q.hi, q.hf, q.rho, u)) < 1e-10);
  }
  auto p0 = conditional_pair(q.u, q.hi, q.hf, 0.0);
  CHECK(std::abs(decoherence_factor(p0.t_down, p0.t_down, q.rho) - Complex(1.0)) < 1e-12);

  auto h = build_hamiltonian(1.0, 0.0, 0.0, 16);
  auto ground = gibbs_state(h, 60.0);
  auto pn = conditional_pair(Drive{QuenchSchedule::constant(0.0, 1.0), std::nullopt, 1.0}, 2.0,
                             16, 4);
  CHECK(std::abs(decoherence_factor(pn.t_down, pn.t_up, ground) - Complex(1.0)) < 1e-12);
}

TEST_CASE("Ramsey readout") {
  std::mt19937_64 rng(8);
  const int dim = 12;
  auto a = random_unitary(dim, rng);
  auto same = ramsey_output(a, a, thermal(HermitianOperator(random_hermitian(dim, rng)), 1.0));
  CHECK(std::abs(same.matrix()(0, 0) - Complex(1.0)) < 1e-12);
  CHECK(same.matrix().cwiseAbs().sum() == doctest::Approx(1.0).epsilon(1e-12));

  for (int trial = 0; trial < 10; ++trial) {
    auto td = random_unitary(dim, rng);
    auto tu = random_unitary(dim, rng);
    auto rho = thermal(HermitianOperator(random_hermitian(dim, rng)), 0.7);
    const Complex l = decoherence_factor(td, tu, rho);
    auto q = qubit_readout(ramsey_output(td, tu, rho));
    CHECK(std::abs(q.sigma_z - l.real()) < 1e-10);
    CHECK(std::abs(q.sigma_y - l.imag()) < 1e-10);
  }

  // L = 0: the two branches end in orthogonal states.
  CMatrix swap = CMatrix::Zero(dim, dim);
  swap(0, 1) = swap(1, 0) = 1.0;
  for (int i = 2; i < dim; ++i) swap(i, i) = 1.0;
  CMatrix rho0 = CMatrix::Zero(dim, dim);
  rho0(0, 0) = 1.0;
  auto mixed = ramsey_output(UnitaryOperator(CMatrix::Identity(dim, dim)), UnitaryOperator(swap),
                             DensityMatrix(rho0));
  CHECK((mixed.matrix() - 0.5 * CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("serial and parallel sweeps agree") {
  auto q = tanh_quench();
  SweepProblem p{q.u, q.hi, q.hf, q.rho};
  auto s = sweep(p, 0.9425, 200, Exec::Serial);
  auto par = sweep(p, 0.9425, 200, Exec::Parallel);
  REQUIRE(s.size() == 200);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    worst = std::max(worst, std::abs(s[k] - par[k]));
    CHECK(std::abs(par[k] - char_forward(q.u, q.hi, q.hf, q.rho, 0.9425 * k)) < 1e-10);
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("measurement model") {
  const double du = 0.9424777960769379;  // 0.5 us
  const double tau = 100 * du;           // 50 us
  std::vector<Complex> ones(1000, Complex(1.0, 0.0));

  auto clean = apply_measurement(ones, du, {std::numeric_limits<double>::infinity(), 0.0, 1},
                                 Direction::Forward);
  CHECK(clean.values[0] == Complex(1.0));

  auto env = apply_measurement(ones, du, {tau, 0.0, 1}, Direction::Forward);
  for (int k = 0; k < 1000; k += 37) CHECK(std::abs(env.values[k] - std::exp(-k / 100.0)) < 1e-14);
  CHECK(env.tau == tau);

  MeasurementModel noisy{tau, 0.005, 42};
  auto a = apply_measurement(ones, du, noisy, Direction::Forward);
  auto b = apply_measurement(ones, du, noisy, Direction::Forward);
  CHECK(a.values == b.values);
  CHECK(a.seed == 42);
  CHECK(a.noise_sigma == 0.005);

  auto c = apply_measurement(ones, du, {tau, 0.005, 43}, Direction::Forward);
  auto back = apply_measurement(ones, du, noisy, Direction::Backward);
  CHECK(a.values != c.values);
  CHECK(a.values != back.values);

  // Per-sample streams: a prefix gives the same draws.
  std::vector<Complex> half(ones.begin(), ones.begin() + 500);
  auto h = apply_measurement(half, du, noisy, Direction::Forward);
  for (int k = 0; k < 500; ++k) CHECK(h.values[k] == a.values[k]);

  double sr = 0.0, si = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Complex n = a.values[k] - env.values[k];
    sr += n.real() * n.real();
    si += n.imag() * n.imag();
  }
  CHECK(std::sqrt(sr / 1000) == doctest::Approx(0.005).epsilon(0.1));
  CHECK(std::sqrt(si / 1000) == doctest::Approx(0.005).epsilon(0.1));

  CHECK(to_string(Direction::Backward) == "backward");
  CHECK(direction_from_string("forward") == Direction::Forward);
  CHECK_THROWS(direction_from_string("sideways"));
}

TEST_CASE("measured signal of a null quench") {
  auto h = build_hamiltonian(1.0, 0.1, 0.0, 40);
  SweepProblem p{UnitaryOperator(evolution(h, 3.0)), h, h, gibbs_state(h, 1.0)};
  const double du = 0.9424777960769379;
  auto sig = measured_signal(p, Direction::Forward, du, 300, {100 * du, 0.0, 0});
  for (int k = 0; k < 300; ++k) CHECK(std::abs(sig.values[k] - std::exp(-k / 100.0)) < 1e-12);
}
