#include "qwork/interferometry.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>

#include "qwork/error.hpp"
#include "qwork/propagator.hpp"

namespace qwork {

namespace {

void require_same_dim(int a, int b, int c, int d, const char* what) {
  if (a != b || a != c || a != d) {
    throw InvalidDimension(std::string(what) + ": dimension mismatch");
  }
}

// tr(A B) without forming the product.
Complex trace_of_product(const CMatrix& a, const CMatrix& b) {
  return (a.array() * b.transpose().array()).sum();
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::string to_string(Direction d) { return d == Direction::Forward ? "forward" : "backward"; }

Direction direction_from_string(const std::string& s) {
  if (s == "forward") return Direction::Forward;
  if (s == "backward") return Direction::Backward;
  throw DomainError("unknown direction '" + s + "'");
}

Complex char_forward(const UnitaryOperator& u_quench, const HermitianOperator& h_i,
                     const HermitianOperator& h_f, const DensityMatrix& rho, double u) {
  require_same_dim(u_quench.dim(), h_i.dim(), h_f.dim(), rho.dim(), "char_forward");
  const CMatrix& U = u_quench.matrix();
  const CMatrix forward_phase = hermitian_function(h_f, [u](double e) { return std::polar(1.0, u * e); });
  const CMatrix backward_phase = evolution(h_i, u);
  const CMatrix left = U.adjoint() * forward_phase * U;
  return trace_of_product(left, backward_phase * rho.matrix());
}

Complex char_backward(const UnitaryOperator& u_quench, const HermitianOperator& h_i,
                      const HermitianOperator& h_f, const DensityMatrix& rho_f, double u) {
  return char_forward(u_quench.adjoint(), h_f, h_i, rho_f, u);
}

Complex char_forward_continued(const UnitaryOperator& u_quench, const HermitianOperator& h_i,
                               const HermitianOperator& h_f, double beta, Complex u) {
  require_same_dim(u_quench.dim(), h_i.dim(), h_f.dim(), h_f.dim(), "char_forward_continued");
  if (!(beta > 0.0)) throw DomainError("char_forward_continued: beta must be positive");
  const Complex i(0.0, 1.0);
  const double log_z = log_partition(h_i, beta);
  const CMatrix forward_phase =
      hermitian_function(h_f, [u, i](double e) { return std::exp(i * u * e); });
  // e^{-iuH_i} e^{-beta H_i} / Z_i with the exponents combined before exponentiation.
  const CMatrix weighted = hermitian_function(
      h_i, [u, i, beta, log_z](double e) { return std::exp(-i * u * e - beta * e - log_z); });
  const CMatrix& U = u_quench.matrix();
  return trace_of_product(U.adjoint() * forward_phase * U, weighted);
}

Complex char_backward_continued(const UnitaryOperator& u_quench, const HermitianOperator& h_i,
                                const HermitianOperator& h_f, double beta, Complex u) {
  return char_forward_continued(u_quench.adjoint(), h_f, h_i, beta, u);
}

Complex decoherence_factor(const UnitaryOperator& t_down, const UnitaryOperator& t_up,
                           const DensityMatrix& rho) {
  require_same_dim(t_down.dim(), t_up.dim(), rho.dim(), rho.dim(), "decoherence_factor");
  return trace_of_product(t_up.matrix().adjoint() * t_down.matrix(), rho.matrix());
}

DensityMatrix ramsey_output(const UnitaryOperator& t_down, const UnitaryOperator& t_up,
                            const DensityMatrix& rho) {
  require_same_dim(t_down.dim(), t_up.dim(), rho.dim(), rho.dim(), "ramsey_output");
  const int n = rho.dim();
  const double s = 1.0 / std::sqrt(2.0);
  const CMatrix id = CMatrix::Identity(n, n);

  // sigma_H (x) I with sigma_H = (sigma_x + sigma_z)/sqrt(2) in the (down, up) basis.
  CMatrix hadamard(2 * n, 2 * n);
  hadamard << s * id, s * id, s * id, -s * id;

  CMatrix controlled = CMatrix::Zero(2 * n, 2 * n);
  controlled.topLeftCorner(n, n) = t_down.matrix();
  controlled.bottomRightCorner(n, n) = t_up.matrix();

  CMatrix joint = CMatrix::Zero(2 * n, 2 * n);
  joint.topLeftCorner(n, n) = rho.matrix();

  const CMatrix total = hadamard * controlled * hadamard;
  const CMatrix out = total * joint * total.adjoint();

  CMatrix qubit(2, 2);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) qubit(a, b) = out.block(a * n, b * n, n, n).trace();
  }
  qubit = 0.5 * (qubit + qubit.adjoint()).eval();
  return DensityMatrix(std::move(qubit));
}

QubitReadout qubit_readout(const DensityMatrix& qubit) {
  if (qubit.dim() != 2) throw InvalidDimension("qubit_readout: expected a 2x2 state");
  const CMatrix& r = qubit.matrix();
  QubitReadout out;
  out.sigma_z = (r(0, 0) - r(1, 1)).real();
  out.sigma_x = (r(0, 1) + r(1, 0)).real();
  out.sigma_y = (Complex(0.0, 1.0) * (r(0, 1) - r(1, 0))).real();
  return out;
}

std::vector<Complex> sweep(const SweepProblem& p, double du, int m, Exec exec) {
  if (!(du > 0.0) || m < 1) throw DomainError("sweep: need du > 0 and m >= 1");
  require_same_dim(p.u_quench.dim(), p.h_i.dim(), p.h_f.dim(), p.rho.dim(), "sweep");
  std::vector<Complex> out(static_cast<std::size_t>(m));

  if (exec == Exec::Serial) {
    const double inf = std::numeric_limits<double>::infinity();
    for (int k = 0; k < m; ++k) {
      const auto pair = conditional_pair(p.u_quench, p.h_i, p.h_f, k * du, inf);
      out[static_cast<std::size_t>(k)] = decoherence_factor(pair.t_down, pair.t_up, p.rho);
    }
    return out;
  }

  // Energy-eigenbasis form: L(u) = sum_{n,n'} K_{n n'}(u) e^{-iu e_n'} R_{n' n},
  // K(u) = A^dag D_f(u) A, A = Q_f^dag U Q_i, R = Q_i^dag rho Q_i.
  const Spectrum& si = p.h_i.spectrum();
  const Spectrum& sf = p.h_f.spectrum();
  const CMatrix a = sf.vectors.adjoint() * p.u_quench.matrix() * si.vectors;
  const CMatrix r = si.vectors.adjoint() * p.rho.matrix() * si.vectors;
  const int n = p.rho.dim();

#pragma omp parallel for schedule(static)
  for (int k = 0; k < m; ++k) {
    const double u = k * du;
    CVector df(n);
    CVector di(n);
    for (int j = 0; j < n; ++j) {
      df(j) = std::polar(1.0, u * sf.values(j));
      di(j) = std::polar(1.0, -u * si.values(j));
    }
    const CMatrix kmat = a.adjoint() * (df.asDiagonal() * a);
    Complex acc(0.0, 0.0);
    for (int nn = 0; nn < n; ++nn) {
      for (int np = 0; np < n; ++np) acc += kmat(nn, np) * di(np) * r(np, nn);
    }
    out[static_cast<std::size_t>(k)] = acc;
  }
  return out;
}

CharSignal apply_measurement(const std::vector<Complex>& exact, double du,
                             const MeasurementModel& model, Direction direction) {
  if (!(du > 0.0)) throw DomainError("apply_measurement: du must be positive");
  if (!(model.tau > 0.0)) throw DomainError("apply_measurement: tau must be positive");
  if (model.noise_sigma < 0.0) throw DomainError("apply_measurement: negative noise level");
  CharSignal sig;
  sig.du = du;
  sig.tau = model.tau;
  sig.noise_sigma = model.noise_sigma;
  sig.seed = model.seed;
  sig.direction = direction;
  sig.values.resize(exact.size());
  const std::uint64_t stream =
      splitmix64(model.seed ^ (direction == Direction::Forward ? 0x464f5257ULL : 0x42574b44ULL));
  for (std::size_t k = 0; k < exact.size(); ++k) {
    const double u = static_cast<double>(k) * du;
    const double envelope = std::isinf(model.tau) ? 1.0 : std::exp(-u / model.tau);
    Complex v = exact[k] * envelope;
    if (model.noise_sigma > 0.0) {
      std::mt19937_64 gen(splitmix64(stream + k));
      std::normal_distribution<double> gauss(0.0, model.noise_sigma);
      const double re = gauss(gen);
      const double im = gauss(gen);
      v += Complex(re, im);
    }
    sig.values[k] = v;
  }
  return sig;
}

CharSignal measured_signal(const SweepProblem& p, Direction direction, double du, int m,
                           const MeasurementModel& model, Exec exec) {
  if (m < 2) throw DomainError("measured_signal: need at least 2 samples");
  return apply_measurement(sweep(p, du, m, exec), du, model, direction);
}

void write_signal_csv(const CharSignal& s, const std::string& path, double u_scale) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::Config, "cannot write " + path);
  f << "u,re,im\n" << std::setprecision(17);
  for (std::size_t k = 0; k < s.size(); ++k) {
    f << s.u(k) * u_scale << ',' << s.values[k].real() << ',' << s.values[k].imag() << '\n';
  }
}

}  // namespace qwork
