#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qwork/fluctuation.hpp"
#include "qwork/iontrap.hpp"
#include "qwork/propagator.hpp"

using namespace qwork;

namespace {

Drive ion_drive() {
  return Drive{QuenchSchedule::tanh_switch(0.0, 0.165, 1.885),
               QuenchSchedule::tanh_switch(0.0, 0.25, 1.885), 1.0};
}

UnitaryOperator run(const Drive& d, int dim) {
  return propagate(d, dim, adaptive_plan(d.lambda, default_max_dt(d.omega)));
}

}  // namespace

TEST_CASE("exact free energy") {
  auto h = build_hamiltonian(1.0, 0.3, 0.2, 48);
  CHECK(std::abs(exact_delta_f(h, h, 0.8)) < 1e-14);

  auto hi = build_hamiltonian(1.0, 0.0, 0.0, 64);
  auto hf = build_hamiltonian(1.0, 0.165, 0.25, 64);
  const double beta = std::log(2.0);
  const double df = exact_delta_f(hi, hf, beta);
  CHECK(df == doctest::Approx(0.25 - 0.165 * 0.165).epsilon(1e-10));
  CHECK(UnitSystem{}.to_khz(df) == doctest::Approx(66.8).epsilon(1e-3));
  CHECK(std::abs(exact_delta_f(hi, hf, 2 * beta) - df) < 1e-10);

  auto small = build_hamiltonian(1.0, 0.0, 0.0, 12);
  CHECK_THROWS_AS(exact_delta_f(small, small, 0.05), TruncationError);
}

TEST_CASE("peak matching") {
  PeakSet f{{{-1.0, 0.1, -1}, {0.0, 1.0, 0}, {1.0, 0.2, 1}}, 0.01};
  PeakSet b{{{-1.0, 0.2, -1}, {0.0, 1.0, 0}, {1.0, 0.1, 1}}, 0.01};
  auto pts = crooks_points(f, b);
  CHECK(pts.unmatched == 0);
  REQUIRE(pts.points.size() == 3);
  for (const auto& p : pts.points) CHECK(p.ratio == doctest::Approx(1.0));

  // Backward peak at -2 has no forward partner at W = 2.
  PeakSet b2 = b;
  b2.peaks.insert(b2.peaks.begin(), Peak{-2.0, 0.01, -2});
  auto p2 = crooks_points(f, b2);
  CHECK(p2.points.size() == 3);
  CHECK(p2.unmatched == 1);

  // Matching tolerance is two grid spacings.
  PeakSet shifted{{{0.015, 1.0, 0}}, 0.01};
  PeakSet far{{{0.025, 1.0, 0}}, 0.01};
  CHECK(crooks_points(shifted, PeakSet{{{0.0, 1.0, 0}}, 0.01}).points.size() == 1);
  CHECK_THROWS_AS(crooks_points(far, PeakSet{{{0.0, 1.0, 0}}, 0.01}), NoOverlap);
  CHECK_THROWS_AS(crooks_points(PeakSet{}, b), NoOverlap);
}

TEST_CASE("discrete Crooks relation on exact lines") {
  auto d = ion_drive();
  const int dim = 48;
  auto u = run(d, dim);
  auto ub = run(d.reversed(), dim);
  auto hi = d.initial_hamiltonian(dim);
  auto hf = d.final_hamiltonian(dim);
  for (double nbar : {0.5, 1.0}) {
    const double beta = beta_for_mean_occupation(nbar, 1.0);
    const double df = exact_delta_f(hi, hf, beta);
    auto lf = brute_force_lines(u, hi, hf, gibbs_state(hi, beta));
    auto lb = brute_force_lines(ub, hf, hi, gibbs_state(hf, beta));
    auto pts = crooks_points(lf, lb, 1e-9, 1e-6);
    CHECK(pts.points.size() >= 3);
    for (const auto& p : pts.points)
      CHECK(std::abs(p.ratio / std::exp(beta * (p.w - df)) - 1.0) < 1e-9);
    auto fit = fit_crooks(pts.points);
    CHECK(std::abs(fit.beta_hat() - beta) < 1e-8);
    CHECK(std::abs(fit.delta_f_hat() - df) < 1e-8);
  }
}

TEST_CASE("exponential fit") {
  std::vector<CrooksPoint> pts;
  for (double w : {-1.2, -0.2, 0.8, 1.8}) {
    const double r = std::exp(0.69 * w - 0.69 * 0.22);
    pts.push_back({w, r, 0, r, 1.0});
  }
  auto fit = fit_crooks(pts);
  CHECK(fit.a == doctest::Approx(0.69).epsilon(1e-12));
  CHECK(fit.delta_f_hat() == doctest::Approx(0.22).epsilon(1e-12));
  CHECK(fit.residual < 1e-12);

  auto wfit = fit_crooks(pts, {1.0, 2.0, 3.0, 4.0});
  CHECK(wfit.a == doctest::Approx(0.69).epsilon(1e-12));

  // Rescaling one side moves only the intercept.
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 0.1);
  std::vector<CrooksPoint> noisy = pts, scaled;
  for (auto& p : noisy) p.ratio *= std::exp(n(rng));
  for (auto p : noisy) {
    p.ratio *= 3.7;
    scaled.push_back(p);
  }
  auto f1 = fit_crooks(noisy);
  auto f2 = fit_crooks(scaled);
  CHECK(f2.a == doctest::Approx(f1.a).epsilon(1e-13));
  CHECK(f2.b == doctest::Approx(f1.b - std::log(3.7)).epsilon(1e-12));

  CHECK_THROWS_AS(fit_crooks({pts[0]}), DegenerateFit);
  CHECK_THROWS_AS(fit_crooks({pts[0], pts[0]}), DegenerateFit);
  auto bad = pts;
  bad[1].ratio = 0.0;
  CHECK_THROWS_AS(fit_crooks(bad), DomainError);
  CHECK_THROWS_AS(fit_crooks(pts, {1.0}), DomainError);
}

TEST_CASE("Jarzynski equality") {
  const double beta = std::log(2.0);
  auto h = build_hamiltonian(1.0, 0.1, 0.0, 56);
  auto null = jarzynski_check(UnitaryOperator(evolution(h, 1.3)), h, h, beta);
  CHECK(null.lhs == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(null.rhs == doctest::Approx(1.0).epsilon(1e-12));

  auto d = ion_drive();
  for (int dim : {52, 56}) {
    auto j = jarzynski_check(run(d, dim), d.initial_hamiltonian(dim), d.final_hamiltonian(dim), beta);
    CHECK(std::abs(j.lhs / j.rhs - 1.0) < 1e-8);
    CHECK(j.rhs == doctest::Approx(std::exp(-beta * (0.25 - 0.165 * 0.165))).epsilon(1e-10));
  }

  auto hi = build_hamiltonian(1.0, 0.0, 0.0, 64);
  auto hf = build_hamiltonian(1.0, 0.165, 0.25, 64);
  auto sudden = jarzynski_check(UnitaryOperator(CMatrix::Identity(64, 64)), hi, hf, beta);
  CHECK(std::abs(sudden.lhs / sudden.rhs - 1.0) < 1e-8);

  auto tiny = build_hamiltonian(1.0, 0.0, 0.0, 20);
  CHECK_THROWS_AS(jarzynski_check(UnitaryOperator(CMatrix::Identity(20, 20)), tiny, tiny, beta),
                  TruncationError);
}
