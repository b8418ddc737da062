// Closed-form references used by the tests. Nothing here calls into the
// library's evolution or inversion code.

#pragma once

#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

/// <m| D(alpha) |n> for real alpha, via associated Laguerre polynomials.
inline double displaced_overlap(int m, int n, double alpha) {
  const double x = alpha * alpha;
  const double pref = std::exp(-0.5 * x);
  if (m >= n) {
    const double ratio = std::exp(0.5 * (std::lgamma(n + 1.0) - std::lgamma(m + 1.0)));
    return pref * ratio * std::pow(alpha, m - n) * std::assoc_laguerre(n, m - n, x);
  }
  const double ratio = std::exp(0.5 * (std::lgamma(m + 1.0) - std::lgamma(n + 1.0)));
  return pref * ratio * std::pow(-alpha, n - m) * std::assoc_laguerre(m, n - m, x);
}

inline double poisson(int k, double mean) {
  return std::exp(k * std::log(mean) - mean - std::lgamma(k + 1.0));
}

/// Brute-force DFT of a one-sided signal extended by chi(-u) = conj(chi(u)),
/// evaluated at a single W.
inline double dft_density(const std::vector<std::complex<double>>& chi, double du, double w) {
  std::complex<double> acc = chi[0];
  for (std::size_t k = 1; k < chi.size(); ++k) {
    const double uk = static_cast<double>(k) * du;
    acc += chi[k] * std::exp(std::complex<double>(0.0, -w * uk));
    acc += std::conj(chi[k]) * std::exp(std::complex<double>(0.0, w * uk));
  }
  return du / (2.0 * M_PI) * acc.real();
}

}  // namespace oracle
