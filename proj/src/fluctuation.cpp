#include "qwork/fluctuation.hpp"

#include <cmath>
#include <sstream>

#include "qwork/error.hpp"
#include "qwork/interferometry.hpp"

namespace qwork {

namespace {

void check_tail(const HermitianOperator& h, double beta, double budget, int n_pad,
                const char* which) {
  const double tail = thermal_tail_weight(h, beta, n_pad);
  if (tail > budget) {
    std::ostringstream os;
    os << which << ": Gibbs weight " << tail << " in the top " << n_pad << " levels exceeds "
       << budget;
    throw TruncationError(os.str(), tail);
  }
}

}  // namespace

double exact_delta_f(const HermitianOperator& h_i, const HermitianOperator& h_f, double beta,
                     const Tolerances& tol) {
  if (!(beta > 0.0)) throw DomainError("exact_delta_f: beta must be positive");
  check_tail(h_i, beta, tol.thermal_tail, tol.n_pad, "exact_delta_f (initial)");
  check_tail(h_f, beta, tol.thermal_tail, tol.n_pad, "exact_delta_f (final)");
  return (log_partition(h_i, beta) - log_partition(h_f, beta)) / beta;
}

CrooksPoints crooks_points(const PeakSet& fwd, const PeakSet& bwd, double match_tol) {
  if (fwd.peaks.empty() || bwd.peaks.empty()) {
    throw NoOverlap("crooks_points: empty peak set");
  }
  CrooksPoints out;
  std::vector<bool> used(bwd.peaks.size(), false);
  for (const Peak& f : fwd.peaks) {
    std::ptrdiff_t best = -1;
    double best_dist = match_tol;
    for (std::size_t j = 0; j < bwd.peaks.size(); ++j) {
      const double dist = std::abs(f.w + bwd.peaks[j].w);
      if (!used[j] && dist <= best_dist) {
        best = static_cast<std::ptrdiff_t>(j);
        best_dist = dist;
      }
    }
    if (best < 0) {
      ++out.unmatched;
      continue;
    }
    used[static_cast<std::size_t>(best)] = true;
    const Peak& b = bwd.peaks[static_cast<std::size_t>(best)];
    out.points.push_back({f.w, f.amplitude / b.amplitude, f.order, f.amplitude, b.amplitude});
  }
  for (bool u : used) out.unmatched += u ? 0 : 1;
  if (out.points.empty()) throw NoOverlap("crooks_points: no forward/backward peak pairs");
  return out;
}

CrooksPoints crooks_points(const PeakSet& fwd, const PeakSet& bwd) {
  return crooks_points(fwd, bwd, 2.0 * std::max(fwd.dW, bwd.dW));
}

CrooksPoints crooks_points(const std::vector<WorkLine>& fwd, const std::vector<WorkLine>& bwd,
                           double match_tol, double min_weight) {
  PeakSet pf, pb;
  for (const auto& l : fwd) {
    if (l.weight >= min_weight) pf.peaks.push_back({l.w, l.weight, 0});
  }
  for (const auto& l : bwd) {
    if (l.weight >= min_weight) pb.peaks.push_back({l.w, l.weight, 0});
  }
  return crooks_points(pf, pb, match_tol);
}

CrooksFit fit_crooks(const std::vector<CrooksPoint>& points, const std::vector<double>& weights) {
  if (points.size() < 2) {
    throw DegenerateFit("fit_crooks: need at least 2 points, got " + std::to_string(points.size()));
  }
  if (!weights.empty() && weights.size() != points.size()) {
    throw DomainError("fit_crooks: weights length mismatch");
  }
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (!(p.ratio > 0.0)) throw DomainError("fit_crooks: ratios must be positive");
    const double wt = weights.empty() ? 1.0 : weights[i];
    const double y = std::log(p.ratio);
    sw += wt;
    sx += wt * p.w;
    sy += wt * y;
    sxx += wt * p.w * p.w;
    sxy += wt * p.w * y;
  }
  const double xbar = sx / sw;
  const double sxx_c = sxx - sx * xbar;
  double xscale = 0.0;
  for (const auto& p : points) xscale = std::max(xscale, std::abs(p.w - xbar));
  if (!(sxx_c > 1e-24 * sw) || xscale == 0.0) {
    throw DegenerateFit("fit_crooks: all points share the same W");
  }
  CrooksFit fit;
  fit.points = points;
  fit.a = (sxy - sx * sy / sw) / sxx_c;
  fit.b = -(sy - fit.a * sx) / sw;
  double ss = 0.0;
  for (const auto& p : points) {
    const double r = std::log(p.ratio) - (fit.a * p.w - fit.b);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / static_cast<double>(points.size()));
  return fit;
}

JarzynskiResult jarzynski_check(const UnitaryOperator& u_quench, const HermitianOperator& h_i,
                                const HermitianOperator& h_f, double beta,
                                const Tolerances& tol) {
  // e^{+beta H_i} amplifies the top levels, so the initial tail budget is tightened.
  check_tail(h_i, beta, 1e-2 * tol.thermal_tail, tol.n_pad, "jarzynski_check (initial)");
  const Complex lhs = char_forward_continued(u_quench, h_i, h_f, beta, Complex(0.0, beta));
  JarzynskiResult out;
  out.lhs = lhs.real();
  out.rhs = std::exp(-beta * exact_delta_f(h_i, h_f, beta, tol));
  return out;
}

}  // namespace qwork
