#include "qwork/propagator.hpp"

#include <cmath>
#include <sstream>

#include "qwork/error.hpp"

namespace qwork {

namespace {

// u <- exp(-i dt H) u for the tridiagonal real symmetric H of a displaced oscillator.
void apply_step(double omega, double lambda, double epsilon, double dt, CMatrix& u) {
  const int dim = static_cast<int>(u.rows());
  RVector diag(dim);
  RVector sub(dim - 1);
  for (int n = 0; n < dim; ++n) diag(n) = omega * (n + 0.5) + epsilon;
  for (int n = 1; n < dim; ++n) sub(n - 1) = lambda * std::sqrt(static_cast<double>(n));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("propagate: tridiagonal eigensolver failed", -1.0);
  }
  // One Newton-Schulz sweep pulls the eigenvectors back to orthogonality at
  // working precision; without it the product drifts off the unitary group
  // after ~1e4 steps.
  Eigen::MatrixXd q = solver.eigenvectors();
  const Eigen::MatrixXd gram = q.transpose() * q;
  q = (q * (3.0 * Eigen::MatrixXd::Identity(dim, dim) - gram) * 0.5).eval();

  CMatrix rotated = q.transpose().cast<Complex>() * u;
  for (int n = 0; n < dim; ++n) {
    rotated.row(n) *= std::polar(1.0, -solver.eigenvalues()(n) * dt);
  }
  u.noalias() = q.cast<Complex>() * rotated;
}

}  // namespace

HermitianOperator Drive::initial_hamiltonian(int dim) const {
  return build_hamiltonian(omega, lambda.lambda_i(), epsilon ? epsilon->lambda_i() : 0.0, dim);
}

HermitianOperator Drive::final_hamiltonian(int dim) const {
  return build_hamiltonian(omega, lambda.lambda_f(), epsilon ? epsilon->lambda_f() : 0.0, dim);
}

Drive Drive::reversed() const {
  Drive r{lambda.reversed(), std::nullopt, omega};
  if (epsilon) r.epsilon = epsilon->reversed();
  return r;
}

StepPlan uniform_plan(double quench_time, int steps) {
  if (steps < 1) throw DomainError("propagate: steps must be >= 1");
  return {StepBlock{0.0, quench_time / steps, steps}};
}

StepPlan adaptive_plan(const QuenchSchedule& s, double max_dt) {
  if (!(max_dt > 0.0)) throw DomainError("adaptive_plan: max_dt must be positive");
  StepPlan plan;
  for (std::size_t i = 0; i < s.segments().size(); ++i) {
    const Segment& seg = s.segments()[i];
    const double d = segment_duration(seg);
    int n = 1;
    if (const auto* t = std::get_if<TanhSegment>(&seg)) {
      const double dt = std::min(t->switching_time / 10.0, max_dt);
      n = static_cast<int>(std::ceil(d / dt));
    }
    plan.push_back(StepBlock{s.segment_offset(i), d / n, n});
  }
  return plan;
}

int total_steps(const StepPlan& plan) {
  int n = 0;
  for (const auto& b : plan) n += b.steps;
  return n;
}

UnitaryOperator propagate(const Drive& drive, int dim, const StepPlan& plan,
                          const Tolerances& tol) {
  if (dim < 2) throw InvalidDimension("propagate: dim must be >= 2");
  if (drive.epsilon &&
      std::abs(drive.epsilon->quench_time() - drive.quench_time()) >
          1e-12 * std::max(1.0, drive.quench_time())) {
    throw DomainError("propagate: epsilon schedule must span the same quench time");
  }
  CMatrix u = CMatrix::Identity(dim, dim);
  const double t_q = drive.quench_time();
  int count = 0;
  for (const auto& block : plan) {
    for (int k = 0; k < block.steps; ++k) {
      const double t_mid = std::min(block.t_start + (k + 0.5) * block.dt, t_q);
      apply_step(drive.omega, drive.lambda_at(t_mid), drive.epsilon_at(t_mid), block.dt, u);
      if (++count % 64 == 0) {
        const double res = unitarity_residual(u);
        if (res > tol.unitarity) {
          std::ostringstream os;
          os << "propagate: unitarity lost at step " << count;
          throw NumericalFailure(os.str(), res);
        }
      }
    }
  }
  return UnitaryOperator(std::move(u), tol.unitarity, dim - tol.n_pad);
}

UnitaryOperator propagate(const Drive& drive, int dim, int steps, const Tolerances& tol) {
  return propagate(drive, dim, uniform_plan(drive.quench_time(), steps), tol);
}

ConditionalPair conditional_pair(const UnitaryOperator& u_quench, const HermitianOperator& h_i,
                                 const HermitianOperator& h_f, double u,
                                 double unitarity_tol) {
  if (!(u >= 0.0)) throw DomainError("conditional_pair: u must be non-negative");
  if (u_quench.dim() != h_i.dim() || u_quench.dim() != h_f.dim()) {
    throw InvalidDimension("conditional_pair: dimension mismatch");
  }
  CMatrix down = u_quench.matrix() * evolution(h_i, u);
  CMatrix up = evolution(h_f, u) * u_quench.matrix();
  return {UnitaryOperator(std::move(down), unitarity_tol),
          UnitaryOperator(std::move(up), unitarity_tol)};
}

ConditionalPair conditional_pair(const Drive& drive, double u, int dim, int steps,
                                 const Tolerances& tol) {
  const UnitaryOperator uq = propagate(drive, dim, steps, tol);
  return conditional_pair(uq, drive.initial_hamiltonian(dim), drive.final_hamiltonian(dim), u,
                          tol.unitarity);
}

}  // namespace qwork
