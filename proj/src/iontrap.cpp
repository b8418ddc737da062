#include "qwork/iontrap.hpp"

#include <cmath>
#include <sstream>
#include <variant>

#include "qwork/error.hpp"
#include "qwork/fockspace.hpp"

namespace qwork {

std::vector<std::string> validate(const IonParams& p) {
  if (!(p.trap_frequency > 0.0)) throw DomainError("IonParams: trap frequency must be positive");
  if (p.rabi_max < 0.0) throw DomainError("IonParams: Rabi frequency must be non-negative");
  if (!(p.eta > 0.0)) throw DomainError("IonParams: eta must be positive");
  std::vector<std::string> warnings;
  if (p.eta > 0.5) {
    std::ostringstream os;
    os << "eta = " << p.eta << " is outside the Lamb-Dicke regime (eta << 1)";
    warnings.push_back(os.str());
  }
  return warnings;
}

LambDickeCoefficients lamb_dicke_coefficients(double rabi, const IonParams& p) {
  LambDickeCoefficients c;
  const double s = std::sin(p.phi);
  c.epsilon = rabi * s * s;
  c.g = p.eta * rabi * std::sin(2.0 * p.phi);
  c.omega_tilde = p.trap_frequency + 4.0 * p.eta * p.eta * rabi * std::cos(2.0 * p.phi);
  if (std::abs(c.omega_tilde - p.trap_frequency) > 1e-9 * p.trap_frequency) {
    std::ostringstream os;
    os << "lamb_dicke_coefficients: phi = " << p.phi
       << " changes the trap frequency; only the displacement quench (phi = pi/4) is supported";
    throw UnsupportedQuench(os.str());
  }
  return c;
}

IonProtocol build_ion_protocol(const QuenchSchedule& rabi_schedule, const IonParams& p) {
  // Both maps are linear in Omega, so each segment keeps its shape.
  const auto unit = lamb_dicke_coefficients(1.0, p);
  for (const auto& seg : rabi_schedule.segments()) {
    lamb_dicke_coefficients(segment_start(seg), p);
    lamb_dicke_coefficients(segment_end(seg), p);
  }
  return {rabi_schedule.scaled(unit.g), rabi_schedule.scaled(unit.epsilon)};
}

double UnitSystem::time(double us) const { return us * 1e-6 * kTwoPi * trap_frequency_khz * 1e3; }

double UnitSystem::to_us(double internal) const {
  return internal / (1e-6 * kTwoPi * trap_frequency_khz * 1e3);
}

}  // namespace qwork
