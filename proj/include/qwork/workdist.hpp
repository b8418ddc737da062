// workdist.hpp - work distributions from sampled characteristic functions,
// the exact line spectrum, and peak identification.

#pragma once

#include <string>
#include <vector>

#include "qwork/exec.hpp"
#include "qwork/fockspace.hpp"
#include "qwork/interferometry.hpp"

namespace qwork {

struct WorkSpectrum {
  double dW = 0.0;
  std::vector<double> w;        // ascending, spacing dW
  std::vector<double> density;  // P(W)
  double imag_residue = 0.0;    // max |Im P| seen by the inversion (serial path only)
  Direction direction = Direction::Forward;

  /// sum(P) dW
  double integral() const;
  /// P_B(-W) view: grid negated and reversed.
  WorkSpectrum mirrored() const;
};

/// P(W_j) = du/(2 pi) sum_{|k|<M} chi(u_k) e^{-i W_j u_k}, with chi(-u) := conj(chi(u)).
/// The grid has padding * (2M - 1) points spanning one period 2 pi / du, so
/// sum_j P(W_j) dW = Re chi(0) exactly.
WorkSpectrum invert_to_distribution(const CharSignal& sig, int padding = 4,
                                    Exec exec = Exec::Parallel);

struct WorkLine {
  double w = 0.0;
  double weight = 0.0;
};

/// Two-point-measurement lines (e_f[m] - e_i[n], p_n |<m_f|U|n_i>|^2), sorted by W,
/// with lines closer than merge_tol combined. Merged lines lighter than
/// min_weight (default: rounding level of a unit-sum distribution) are dropped.
std::vector<WorkLine> brute_force_lines(const UnitaryOperator& u_quench,
                                        const HermitianOperator& h_i,
                                        const HermitianOperator& h_f, const DensityMatrix& rho,
                                        double merge_tol = 1e-9, double min_weight = 1e-14);

struct Peak {
  double w = 0.0;
  double amplitude = 0.0;
  int order = 0;  // k in W ~ W_carrier + k omega
};

struct PeakSet {
  std::vector<Peak> peaks;  // strictly increasing W
  double dW = 0.0;
};

struct PeakOptions {
  double rel_threshold = 1e-3;
  /// A maximum is assigned to line k only within this distance (in units of
  /// omega) of W_carrier + k omega.
  double line_window = 0.25;
  /// Peaks must also exceed this multiple of the robust noise floor (0 disables).
  double min_snr = 0.0;
  /// Amplitudes are measured above a local baseline: the mean of P over
  /// [0.75, 1.25] x baseline_offset on both sides of the peak (units of omega).
  /// Every line shares one envelope width, so the peak's own tail inside the
  /// baseline window is the same fraction of every amplitude. 0 disables.
  double baseline_offset = 0.1;
};

/// Local maxima above rel_threshold * max(P), refined by 3-point parabolic
/// interpolation, at most one (the tallest) per line order, with amplitudes
/// taken above the local baseline. Throws EmptyPeakSet.
PeakSet extract_peaks(const WorkSpectrum& spec, double omega, const PeakOptions& opts = {});

/// Median absolute deviation of P(W) scaled to a Gaussian sigma.
double noise_floor(const WorkSpectrum& spec);

void write_spectrum_csv(const WorkSpectrum& s, const std::string& path, double w_scale = 1.0);

}  // namespace qwork
