#include "qwork/workdist.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>

#include "qwork/error.hpp"

namespace qwork {

double WorkSpectrum::integral() const {
  double s = 0.0;
  for (double p : density) s += p;
  return s * dW;
}

WorkSpectrum WorkSpectrum::mirrored() const {
  WorkSpectrum m = *this;
  std::reverse(m.w.begin(), m.w.end());
  std::reverse(m.density.begin(), m.density.end());
  for (double& x : m.w) x = -x;
  return m;
}

WorkSpectrum invert_to_distribution(const CharSignal& sig, int padding, Exec exec) {
  const int m = static_cast<int>(sig.size());
  if (m < 2) throw DomainError("invert_to_distribution: need at least 2 samples");
  if (padding < 1) throw DomainError("invert_to_distribution: padding must be >= 1");
  const double du = sig.du;
  const int len = padding * (2 * m - 1);
  const int j0 = len / 2;

  WorkSpectrum out;
  out.direction = sig.direction;
  out.dW = kTwoPi / (len * du);
  out.w.resize(static_cast<std::size_t>(len));
  out.density.assign(static_cast<std::size_t>(len), 0.0);
  for (int j = 0; j < len; ++j) out.w[static_cast<std::size_t>(j)] = (j - j0) * out.dW;
  const double scale = du / kTwoPi;

  if (exec == Exec::Serial) {
    // Reference: explicit two-sided sum over the Hermitian extension.
    std::vector<Complex> two_sided(static_cast<std::size_t>(2 * m - 1));
    for (int k = -(m - 1); k < m; ++k) {
      const Complex v = sig.values[static_cast<std::size_t>(std::abs(k))];
      two_sided[static_cast<std::size_t>(k + m - 1)] = k >= 0 ? v : std::conj(v);
    }
    double residue = 0.0;
    for (int j = 0; j < len; ++j) {
      const double w = out.w[static_cast<std::size_t>(j)];
      Complex acc(0.0, 0.0);
      for (int k = -(m - 1); k < m; ++k) {
        acc += two_sided[static_cast<std::size_t>(k + m - 1)] * std::polar(1.0, -w * k * du);
      }
      out.density[static_cast<std::size_t>(j)] = scale * acc.real();
      residue = std::max(residue, std::abs(scale * acc.imag()));
    }
    out.imag_residue = residue;
    return out;
  }

  // One-sided real form: P = du/2pi [Re chi_0 + 2 sum_{k>0} Re(chi_k e^{-i W u_k})].
  // Phases are generated as exp(-i k theta_j) with theta_j reduced mod 2 pi and
  // re-seeded every 64 terms to bound drift.
  const double c0 = sig.values[0].real();
#pragma omp parallel for schedule(static)
  for (int j = 0; j < len; ++j) {
    const double theta = std::remainder(out.w[static_cast<std::size_t>(j)] * du, kTwoPi);
    const Complex step = std::polar(1.0, -theta);
    Complex phase(1.0, 0.0);
    double acc = 0.0;
    for (int k = 1; k < m; ++k) {
      if ((k & 63) == 0) {
        phase = std::polar(1.0, -theta * k);
      } else {
        phase *= step;
      }
      const Complex v = sig.values[static_cast<std::size_t>(k)];
      acc += v.real() * phase.real() - v.imag() * phase.imag();
    }
    out.density[static_cast<std::size_t>(j)] = scale * (c0 + 2.0 * acc);
  }
  return out;
}

std::vector<WorkLine> brute_force_lines(const UnitaryOperator& u_quench,
                                        const HermitianOperator& h_i,
                                        const HermitianOperator& h_f, const DensityMatrix& rho,
                                        double merge_tol, double min_weight) {
  const int n = rho.dim();
  if (u_quench.dim() != n || h_i.dim() != n || h_f.dim() != n) {
    throw InvalidDimension("brute_force_lines: dimension mismatch");
  }
  const Spectrum& si = h_i.spectrum();
  const Spectrum& sf = h_f.spectrum();
  // Initial populations in the H_i eigenbasis.
  const CMatrix r = si.vectors.adjoint() * rho.matrix() * si.vectors;
  const CMatrix amp = sf.vectors.adjoint() * u_quench.matrix() * si.vectors;

  std::vector<WorkLine> raw;
  raw.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    const double p = r(i, i).real();
    for (int f = 0; f < n; ++f) {
      raw.push_back({sf.values(f) - si.values(i), p * std::norm(amp(f, i))});
    }
  }
  std::sort(raw.begin(), raw.end(), [](const WorkLine& a, const WorkLine& b) { return a.w < b.w; });

  std::vector<WorkLine> merged;
  double cluster_last = 0.0;
  double weighted_w = 0.0;
  for (const auto& line : raw) {
    if (merged.empty() || line.w - cluster_last > merge_tol) {
      if (!merged.empty() && merged.back().weight > 0.0) merged.back().w = weighted_w / merged.back().weight;
      merged.push_back({line.w, 0.0});
      weighted_w = 0.0;
    }
    merged.back().weight += line.weight;
    weighted_w += line.weight * line.w;
    cluster_last = line.w;
  }
  if (!merged.empty() && merged.back().weight > 0.0) merged.back().w = weighted_w / merged.back().weight;
  std::erase_if(merged, [min_weight](const WorkLine& l) { return l.weight < min_weight; });
  return merged;
}

double noise_floor(const WorkSpectrum& spec) {
  std::vector<double> d = spec.density;
  if (d.empty()) return 0.0;
  auto mid = d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2);
  std::nth_element(d.begin(), mid, d.end());
  const double med = *mid;
  for (double& x : d) x = std::abs(x - med);
  std::nth_element(d.begin(), mid, d.end());
  return 1.4826 * *mid;
}

PeakSet extract_peaks(const WorkSpectrum& spec, double omega, const PeakOptions& opts) {
  if (!(opts.rel_threshold > 0.0 && opts.rel_threshold < 1.0)) {
    throw DomainError("extract_peaks: rel_threshold must lie in (0, 1)");
  }
  const auto& p = spec.density;
  const std::size_t n = p.size();
  if (n < 3) throw EmptyPeakSet("extract_peaks: spectrum too short");

  const auto top = std::max_element(p.begin(), p.end());
  const double pmax = *top;
  if (!(pmax > 0.0)) throw EmptyPeakSet("extract_peaks: spectrum has no positive values");
  double threshold = opts.rel_threshold * pmax;
  if (opts.min_snr > 0.0) threshold = std::max(threshold, opts.min_snr * noise_floor(spec));

  auto refine = [&](std::size_t i) {
    const double y0 = p[i - 1], y1 = p[i], y2 = p[i + 1];
    const double denom = y0 - 2.0 * y1 + y2;
    double shift = 0.0;
    if (denom < 0.0) shift = std::clamp(0.5 * (y0 - y2) / denom, -0.5, 0.5);
    return Peak{spec.w[i] + shift * spec.dW, y1 - 0.25 * (y0 - y2) * shift, 0};
  };

  const std::size_t icar = static_cast<std::size_t>(std::distance(p.begin(), top));
  const double w_carrier =
      (icar > 0 && icar + 1 < n) ? refine(icar).w : spec.w[icar];

  auto baseline = [&](double w0) {
    if (opts.baseline_offset <= 0.0) return 0.0;
    const double lo = 0.75 * opts.baseline_offset * omega;
    const double hi = 1.25 * opts.baseline_offset * omega;
    double sum = 0.0;
    int count = 0;
    for (double sign : {-1.0, 1.0}) {
      const double a = w0 + sign * lo, b = w0 + sign * hi;
      const double wmin = std::min(a, b), wmax = std::max(a, b);
      auto first = std::lower_bound(spec.w.begin(), spec.w.end(), wmin);
      for (auto it = first; it != spec.w.end() && *it <= wmax; ++it) {
        sum += p[static_cast<std::size_t>(std::distance(spec.w.begin(), it))];
        ++count;
      }
    }
    return count ? sum / count : 0.0;
  };

  std::map<int, Peak> best;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(p[i] > threshold && p[i] >= p[i - 1] && p[i] > p[i + 1])) continue;
    Peak pk = refine(i);
    const double offset = (pk.w - w_carrier) / omega;
    const int order = static_cast<int>(std::lround(offset));
    if (std::abs(offset - order) > opts.line_window) continue;
    pk.order = order;
    pk.amplitude -= baseline(pk.w);
    if (!(pk.amplitude > 0.0)) continue;
    auto it = best.find(order);
    if (it == best.end() || pk.amplitude > it->second.amplitude) best[order] = pk;
  }
  if (best.empty()) throw EmptyPeakSet("extract_peaks: no peaks above threshold");

  PeakSet out;
  out.dW = spec.dW;
  for (const auto& [k, pk] : best) out.peaks.push_back(pk);
  return out;
}

void write_spectrum_csv(const WorkSpectrum& s, const std::string& path, double w_scale) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::Config, "cannot write " + path);
  f << "W,P\n" << std::setprecision(17);
  for (std::size_t j = 0; j < s.w.size(); ++j) f << s.w[j] * w_scale << ',' << s.density[j] << '\n';
}

}  // namespace qwork
