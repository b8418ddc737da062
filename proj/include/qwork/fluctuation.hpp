// fluctuation.hpp - Crooks ratios, the exponential fit exp(A W - B), and the
// Jarzynski equality.

#pragma once

#include <vector>

#include "qwork/fockspace.hpp"
#include "qwork/workdist.hpp"

namespace qwork {

/// (1/beta) ln(Z_i / Z_f). Throws TruncationError when either Gibbs tail is outside budget.
double exact_delta_f(const HermitianOperator& h_i, const HermitianOperator& h_f, double beta,
                     const Tolerances& tol = {});

struct CrooksPoint {
  double w = 0.0;
  double ratio = 0.0;
  int order = 0;
  double amp_forward = 0.0;
  double amp_backward = 0.0;
};

struct CrooksPoints {
  std::vector<CrooksPoint> points;
  int unmatched = 0;
};

/// Pairs forward peaks at W with backward peaks at -W (within match_tol) and
/// returns amp_F / amp_B. Throws NoOverlap when nothing matches.
CrooksPoints crooks_points(const PeakSet& fwd, const PeakSet& bwd, double match_tol);

/// Default matching tolerance: two grid spacings of the coarser spectrum.
CrooksPoints crooks_points(const PeakSet& fwd, const PeakSet& bwd);

/// Same pairing on exact line spectra (bwd lines in their own W convention).
/// Lines lighter than min_weight on either side are skipped.
CrooksPoints crooks_points(const std::vector<WorkLine>& fwd, const std::vector<WorkLine>& bwd,
                           double match_tol, double min_weight);

struct CrooksFit {
  std::vector<CrooksPoint> points;
  double a = 0.0;  // slope of ln(ratio) against W
  double b = 0.0;  // ln(ratio) = a W - b
  double residual = 0.0;  // RMS of log residuals

  double beta_hat() const { return a; }
  double delta_f_hat() const { return b / a; }
};

/// Least squares in log space; `weights` (optional, same length) gives a weighted fit.
CrooksFit fit_crooks(const std::vector<CrooksPoint>& points,
                     const std::vector<double>& weights = {});

struct JarzynskiResult {
  double lhs = 0.0;  // <e^{-beta W}> from chi_F(i beta)
  double rhs = 0.0;  // e^{-beta dF}
};

JarzynskiResult jarzynski_check(const UnitaryOperator& u_quench, const HermitianOperator& h_i,
                                const HermitianOperator& h_f, double beta,
                                const Tolerances& tol = {});

}  // namespace qwork
