#include "qwork/fockspace.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qwork/error.hpp"

namespace qwork {

namespace {

void require_square(const CMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() < 2) {
    std::ostringstream os;
    os << what << ": expected square matrix with dim >= 2, got " << m.rows() << "x" << m.cols();
    throw InvalidDimension(os.str());
  }
}

double hermiticity_residual(const CMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace

HermitianOperator::HermitianOperator(CMatrix entries, double hermiticity_tol)
    : entries_(std::move(entries)) {
  require_square(entries_, "HermitianOperator");
  const double res = hermiticity_residual(entries_);
  if (res > hermiticity_tol * std::max(1.0, entries_.cwiseAbs().maxCoeff())) {
    throw NumericalFailure("HermitianOperator: matrix is not Hermitian", res);
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(entries_);
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("HermitianOperator: eigendecomposition failed", -1.0);
  }
  spectrum_.values = solver.eigenvalues();
  spectrum_.vectors = solver.eigenvectors();
  const CMatrix recon = spectrum_.vectors * spectrum_.values.cast<Complex>().asDiagonal() *
                        spectrum_.vectors.adjoint();
  const double residual = (recon - entries_).cwiseAbs().maxCoeff();
  if (residual > 1e-9 * std::max(1.0, entries_.cwiseAbs().maxCoeff())) {
    throw NumericalFailure("HermitianOperator: eigendecomposition residual too large", residual);
  }
}

double unitarity_residual(const CMatrix& u, int levels) {
  const int n = static_cast<int>(u.rows());
  const int k = (levels <= 0 || levels > n) ? n : levels;
  const CMatrix g = u.adjoint() * u;
  return (g.topLeftCorner(k, k) - CMatrix::Identity(k, k)).cwiseAbs().maxCoeff();
}

UnitaryOperator::UnitaryOperator(CMatrix entries, double tol, int checked_levels)
    : entries_(std::move(entries)) {
  require_square(entries_, "UnitaryOperator");
  if (std::isinf(tol)) return;
  const double res = unitarity_residual(entries_, checked_levels);
  if (res > tol) {
    throw NumericalFailure("UnitaryOperator: unitarity residual exceeds tolerance", res);
  }
}

UnitaryOperator UnitaryOperator::adjoint() const {
  return UnitaryOperator(entries_.adjoint(), std::numeric_limits<double>::infinity());
}

DensityMatrix::DensityMatrix(CMatrix entries, const Tolerances& tol) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() < 1) {
    throw InvalidDimension("DensityMatrix: expected a square matrix");
  }
  const double herm = hermiticity_residual(entries_);
  if (herm > tol.hermiticity) {
    throw NumericalFailure("DensityMatrix: not Hermitian", herm);
  }
  const double tr_err = std::abs(entries_.trace() - Complex(1.0, 0.0));
  if (tr_err > tol.trace) {
    throw NumericalFailure("DensityMatrix: trace differs from 1", tr_err);
  }
  const CMatrix sym = 0.5 * (entries_ + entries_.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym, Eigen::EigenvaluesOnly);
  const double min_eig = solver.eigenvalues().minCoeff();
  if (min_eig < -tol.positivity) {
    throw NumericalFailure("DensityMatrix: negative eigenvalue", min_eig);
  }
}

std::pair<CMatrix, CMatrix> ladder_operators(int dim) {
  if (dim < 2) {
    throw InvalidDimension("ladder_operators: dim must be >= 2, got " + std::to_string(dim));
  }
  CMatrix lower = CMatrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) lower(n - 1, n) = std::sqrt(static_cast<double>(n));
  CMatrix raise = lower.adjoint();
  return {std::move(lower), std::move(raise)};
}

HermitianOperator build_hamiltonian(double omega, double lambda, double epsilon, int dim) {
  if (!(omega > 0.0)) throw DomainError("build_hamiltonian: omega must be positive");
  auto [a, ad] = ladder_operators(dim);
  CMatrix h = omega * (ad * a + 0.5 * CMatrix::Identity(dim, dim)) + lambda * (a + ad) +
              epsilon * CMatrix::Identity(dim, dim);
  return HermitianOperator(std::move(h));
}

CMatrix hermitian_function(const HermitianOperator& h, const std::function<Complex(double)>& f) {
  const Spectrum& s = h.spectrum();
  CVector fd(s.values.size());
  for (Eigen::Index i = 0; i < s.values.size(); ++i) fd(i) = f(s.values(i));
  return s.vectors * fd.asDiagonal() * s.vectors.adjoint();
}

CMatrix evolution(const HermitianOperator& h, double t) {
  return hermitian_function(h, [t](double e) { return std::polar(1.0, -e * t); });
}

RVector boltzmann_weights(const HermitianOperator& h, double beta) {
  const RVector& e = h.spectrum().values;
  const double e0 = e.minCoeff();
  RVector w = (-beta * (e.array() - e0)).exp().matrix();
  return w / w.sum();
}

double log_partition(const HermitianOperator& h, double beta) {
  const RVector& e = h.spectrum().values;
  const double e0 = e.minCoeff();
  return -beta * e0 + std::log((-beta * (e.array() - e0)).exp().sum());
}

double thermal_tail_weight(const HermitianOperator& h, double beta, int n_pad) {
  const RVector w = boltzmann_weights(h, beta);
  const int n = static_cast<int>(w.size());
  const int k = std::clamp(n_pad, 0, n);
  return w.tail(k).sum();
}

DensityMatrix gibbs_state(const HermitianOperator& h, double beta, const Tolerances& tol) {
  if (!(beta > 0.0)) throw DomainError("gibbs_state: beta must be positive");
  const double tail = thermal_tail_weight(h, beta, tol.n_pad);
  if (tail > tol.thermal_tail) {
    std::ostringstream os;
    os << "gibbs_state: thermal weight " << tail << " in the top " << tol.n_pad
       << " levels exceeds " << tol.thermal_tail << "; increase dim";
    throw TruncationError(os.str(), tail);
  }
  const RVector w = boltzmann_weights(h, beta);
  const CMatrix& q = h.spectrum().vectors;
  CMatrix rho = q * w.cast<Complex>().asDiagonal() * q.adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix(std::move(rho), tol);
}

double beta_for_mean_occupation(double nbar, double omega) {
  if (!(nbar > 0.0) || !(omega > 0.0)) {
    throw DomainError("beta_for_mean_occupation: nbar and omega must be positive");
  }
  return std::log1p(1.0 / nbar) / omega;
}

double edge_population(const CMatrix& u, const CMatrix& rho, int n_pad) {
  const CMatrix evolved = u * rho * u.adjoint();
  const int n = static_cast<int>(evolved.rows());
  const int k = std::clamp(n_pad, 0, n);
  double s = 0.0;
  for (int i = n - k; i < n; ++i) s += evolved(i, i).real();
  return s;
}

}  // namespace qwork
