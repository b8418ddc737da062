// interferometry.hpp - characteristic functions of the work distribution and
// their extraction through a Ramsey sequence on a probe qubit.
//
// Three independent routes are provided:
//   * the trace formula        tr[U^dag e^{iuH_f} U e^{-iuH_i} rho]
//   * the decoherence factor   tr[T_up^dag T_down rho]
//   * the joint qubit + oscillator simulation, read out through <sigma_z>, <sigma_y>

#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "qwork/exec.hpp"
#include "qwork/fockspace.hpp"

namespace qwork {

enum class Direction { Forward, Backward };

std::string to_string(Direction d);
Direction direction_from_string(const std::string& s);

/// Uniformly sampled characteristic function chi(k du), k = 0..M-1.
struct CharSignal {
  double du = 0.0;
  std::vector<Complex> values;
  double tau = std::numeric_limits<double>::infinity();
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  Direction direction = Direction::Forward;

  double u(std::size_t k) const { return static_cast<double>(k) * du; }
  std::size_t size() const { return values.size(); }
};

/// Forward characteristic function via cached eigendecompositions of H_i, H_f.
Complex char_forward(const UnitaryOperator& u_quench, const HermitianOperator& h_i,
                     const HermitianOperator& h_f, const DensityMatrix& rho, double u);

/// Backward characteristic function tr[U e^{iuH_i} U^dag e^{-iuH_f} rho_f].
Complex char_backward(const UnitaryOperator& u_quench, const HermitianOperator& h_i,
                      const HermitianOperator& h_f, const DensityMatrix& rho_f, double u);

/// Forward characteristic function for complex u with rho = Gibbs(H_i, beta).
/// The Gibbs weights are fused into the exponent, so u = i beta stays finite.
Complex char_forward_continued(const UnitaryOperator& u_quench, const HermitianOperator& h_i,
                               const HermitianOperator& h_f, double beta, Complex u);

/// Backward counterpart with rho_f = Gibbs(H_f, beta).
Complex char_backward_continued(const UnitaryOperator& u_quench, const HermitianOperator& h_i,
                                const HermitianOperator& h_f, double beta, Complex u);

/// L = tr[T_up^dag T_down rho].
Complex decoherence_factor(const UnitaryOperator& t_down, const UnitaryOperator& t_up,
                           const DensityMatrix& rho);

/// Probe-qubit state after Hadamard, controlled evolution diag(T_down, T_up), Hadamard,
/// starting from |down><down| (x) rho. Qubit basis order is (|down>, |up>).
DensityMatrix ramsey_output(const UnitaryOperator& t_down, const UnitaryOperator& t_up,
                            const DensityMatrix& rho);

struct QubitReadout {
  double sigma_x = 0.0;
  double sigma_y = 0.0;
  double sigma_z = 0.0;
};

/// Pauli expectations in the (|down>, |up>) basis; sigma_z = +1 on |down>.
QubitReadout qubit_readout(const DensityMatrix& qubit);

/// Everything needed to evaluate one characteristic-function sweep.
struct SweepProblem {
  UnitaryOperator u_quench;
  HermitianOperator h_i;
  HermitianOperator h_f;
  DensityMatrix rho;
};

/// Noiseless decoherence factor L(k du) for k = 0..m-1. The serial path builds
/// every conditional pair explicitly; the parallel path evaluates the same
/// trace in the energy eigenbases with OpenMP over u.
std::vector<Complex> sweep(const SweepProblem& p, double du, int m, Exec exec = Exec::Parallel);

struct MeasurementModel {
  double tau = std::numeric_limits<double>::infinity();
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

/// values[k] = chi_k exp(-k du / tau) + xi_k + i zeta_k with independent
/// Gaussian quadratures. Each sample's generator is derived from (seed, direction, k)
/// so results do not depend on evaluation order.
CharSignal apply_measurement(const std::vector<Complex>& exact, double du,
                             const MeasurementModel& model, Direction direction);

/// Sweep plus measurement imperfections.
CharSignal measured_signal(const SweepProblem& p, Direction direction, double du, int m,
                           const MeasurementModel& model, Exec exec = Exec::Parallel);

/// CSV with header `u,re,im`; u scaled by `u_scale` (1 for internal units).
void write_signal_csv(const CharSignal& s, const std::string& path, double u_scale = 1.0);

}  // namespace qwork
