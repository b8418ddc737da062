// fockspace.hpp - dense operators on the truncated harmonic-oscillator Fock space.
//
// Units: hbar = 1, energies and frequencies in units of the trap frequency.

#pragma once

#include <complex>
#include <functional>
#include <utility>

#include <Eigen/Dense>

namespace qwork {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Numerical budgets shared by every module.
struct Tolerances {
  double hermiticity = 1e-12;
  double unitarity = 1e-10;
  double trace = 1e-10;
  double positivity = 1e-10;
  double thermal_tail = 1e-10;     // Gibbs weight above level dim - n_pad
  double edge_population = 1e-8;   // evolved-state weight in the guard levels
  int n_pad = 8;
};

/// Eigenvalues in ascending order with matching orthonormal eigenvectors (columns).
struct Spectrum {
  RVector values;
  CMatrix vectors;
};

class HermitianOperator {
 public:
  /// Validates Hermiticity and diagonalizes once; all matrix functions reuse the factorization.
  explicit HermitianOperator(CMatrix entries, double hermiticity_tol = Tolerances{}.hermiticity);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const CMatrix& matrix() const { return entries_; }
  const Spectrum& spectrum() const { return spectrum_; }

 private:
  CMatrix entries_;
  Spectrum spectrum_;
};

class UnitaryOperator {
 public:
  /// Checks ||U^dag U - I||_max on the leading `checked_levels` block (all levels when <= 0).
  explicit UnitaryOperator(CMatrix entries, double tol = Tolerances{}.unitarity,
                           int checked_levels = 0);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const CMatrix& matrix() const { return entries_; }
  UnitaryOperator adjoint() const;

 private:
  CMatrix entries_;
};

class DensityMatrix {
 public:
  explicit DensityMatrix(CMatrix entries, const Tolerances& tol = {});

  int dim() const { return static_cast<int>(entries_.rows()); }
  const CMatrix& matrix() const { return entries_; }

 private:
  CMatrix entries_;
};

/// Max-norm residual of U^dag U - I restricted to the first `levels` rows/columns.
double unitarity_residual(const CMatrix& u, int levels = 0);

/// (lowering, raising) with lower(n-1, n) = sqrt(n).
std::pair<CMatrix, CMatrix> ladder_operators(int dim);

/// omega (a^dag a + 1/2) + lambda (a + a^dag) + epsilon I.
HermitianOperator build_hamiltonian(double omega, double lambda, double epsilon, int dim);

/// Q f(Lambda) Q^dag from the cached eigendecomposition.
CMatrix hermitian_function(const HermitianOperator& h, const std::function<Complex(double)>& f);

/// exp(-i t H).
CMatrix evolution(const HermitianOperator& h, double t);

/// exp(-beta H) / Z. Throws TruncationError when the Boltzmann weight of the
/// top n_pad eigenstates exceeds tol.thermal_tail.
DensityMatrix gibbs_state(const HermitianOperator& h, double beta, const Tolerances& tol = {});

/// Normalized Boltzmann weights over the ascending eigenvalues of h.
RVector boltzmann_weights(const HermitianOperator& h, double beta);

/// ln Z computed with a log-sum-exp shift.
double log_partition(const HermitianOperator& h, double beta);

/// Weight of the highest n_pad eigenstates in the Gibbs state.
double thermal_tail_weight(const HermitianOperator& h, double beta, int n_pad);

/// Inverse temperature for mean occupation nbar of an oscillator of frequency omega.
double beta_for_mean_occupation(double nbar, double omega);

/// Population of the top n_pad Fock levels of U rho U^dag.
double edge_population(const CMatrix& u, const CMatrix& rho, int n_pad);

}  // namespace qwork
