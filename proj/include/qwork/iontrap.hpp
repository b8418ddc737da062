// iontrap.hpp - trapped-ion parameters mapped onto displacement quenches.
//
// Expanding the spin-dependent standing-wave potential sin^2(kx + phi) to
// O(eta^3) gives an energy shift, a linear force and a trap-frequency change.
// Only the pure displacement phase phi = pi/4 is supported.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qwork/protocol.hpp"

namespace qwork {

struct IonParams {
  double trap_frequency = 1.0;  // omega_0 (internal units)
  double eta = 0.33;            // Lamb-Dicke parameter k x_0
  double rabi_max = 0.5;        // Omega
  double phi = 0.25 * 3.14159265358979323846;
};

/// Non-fatal diagnostics (eta not small). Throws DomainError on non-positive frequencies.
std::vector<std::string> validate(const IonParams& p);

struct LambDickeCoefficients {
  double epsilon = 0.0;      // Omega sin^2(phi)
  double g = 0.0;            // eta Omega sin(2 phi)
  double omega_tilde = 0.0;  // omega_0 + 4 eta^2 Omega cos(2 phi)
};

/// Throws UnsupportedQuench when omega_tilde != omega_0 (phi away from pi/4).
LambDickeCoefficients lamb_dicke_coefficients(double rabi, const IonParams& p);

/// Pointwise map of an Omega(t) schedule to (lambda(t) = g(t), epsilon(t)).
struct IonProtocol {
  QuenchSchedule lambda;
  QuenchSchedule epsilon;
};

IonProtocol build_ion_protocol(const QuenchSchedule& rabi_schedule, const IonParams& p);

/// Conversions between laboratory units and internal units (omega_0 = 1).
struct UnitSystem {
  double trap_frequency_khz = 300.0;

  /// Angular frequency 2 pi f (f in kHz) in units of omega_0.
  double frequency(double khz) const { return khz / trap_frequency_khz; }
  /// Time in microseconds in units of 1/omega_0.
  double time(double us) const;
  double to_khz(double internal) const { return internal * trap_frequency_khz; }
  double to_us(double internal) const;
};

}  // namespace qwork
