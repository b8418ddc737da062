// propagator.hpp - time-ordered evolution under H(lambda(t)) and the
// conditional evolutions used by the Ramsey sequence.

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qwork/fockspace.hpp"
#include "qwork/protocol.hpp"

namespace qwork {

/// H(t) = omega (a^dag a + 1/2) + lambda(t) (a + a^dag) + epsilon(t) I.
struct Drive {
  QuenchSchedule lambda;
  std::optional<QuenchSchedule> epsilon;  // must share lambda's quench time
  double omega = 1.0;

  double lambda_at(double t) const { return lambda.eval(t); }
  double epsilon_at(double t) const { return epsilon ? epsilon->eval(t) : 0.0; }
  double quench_time() const { return lambda.quench_time(); }

  HermitianOperator initial_hamiltonian(int dim) const;
  HermitianOperator final_hamiltonian(int dim) const;
  /// The drive run backwards in time.
  Drive reversed() const;
};

/// A contiguous block of equal midpoint steps.
struct StepBlock {
  double t_start = 0.0;
  double dt = 0.0;
  int steps = 0;
};

using StepPlan = std::vector<StepBlock>;

/// `steps` equal steps across [0, t_Q].
StepPlan uniform_plan(double quench_time, int steps);

/// One block per schedule segment. Constant segments take a single exact step;
/// tanh segments use dt <= min(T/10, max_dt).
StepPlan adaptive_plan(const QuenchSchedule& s, double max_dt);

/// Default max_dt: 1% of a trap period.
inline double default_max_dt(double omega) { return 0.01 * kTwoPi / omega; }

int total_steps(const StepPlan& plan);

/// U = prod_k exp(-i H(t_k + dt/2) dt), later times to the left.
/// Unitarity is spot-checked every 64 steps and at the end.
UnitaryOperator propagate(const Drive& drive, int dim, const StepPlan& plan,
                          const Tolerances& tol = {});

/// Uniform-step convenience overload.
UnitaryOperator propagate(const Drive& drive, int dim, int steps, const Tolerances& tol = {});

struct ConditionalPair {
  UnitaryOperator t_down;  // U(t_Q) exp(-i u H_i)
  UnitaryOperator t_up;    // exp(-i u H_f) U(t_Q)
};

/// Conditional evolutions for Ramsey time t_R = t_Q + u from a precomputed U(t_Q).
ConditionalPair conditional_pair(const UnitaryOperator& u_quench, const HermitianOperator& h_i,
                                 const HermitianOperator& h_f, double u,
                                 double unitarity_tol = Tolerances{}.unitarity);

ConditionalPair conditional_pair(const Drive& drive, double u, int dim, int steps,
                                 const Tolerances& tol = {});

}  // namespace qwork
