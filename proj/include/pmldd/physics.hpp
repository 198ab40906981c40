#pragma once

#include <numbers>

#include "pmldd/types.hpp"

namespace pmldd {

/// Medium and source frequency. Units are self-consistent with eps0 = 1 and
/// mu0 = 1 / c^2, so that omega^2 eps0 mu0 = (omega / c)^2.
struct PhysicsSpec {
  double frequency = 1.0;
  double wave_speed = 1.0;
  double eps_r_background = 1.0;
  double conductivity = 0.0;

  double omega() const { return 2.0 * std::numbers::pi * frequency; }
  double wavelength() const { return wave_speed / frequency; }
  double wavenumber() const { return omega() / wave_speed; }
  double mu0() const { return 1.0 / (wave_speed * wave_speed); }

  /// Complex permittivity eps0 * eps_r - i * conductivity / omega.
  Complex eps_sigma(double eps_r) const { return Complex(eps_r, -conductivity / omega()); }

  /// Coefficient of the mass term: omega^2 * eps_sigma * mu0.
  Complex mass_coefficient(double eps_r) const { return omega() * omega() * mu0() * eps_sigma(eps_r); }

  void validate() const {
    if (!(frequency > 0.0)) throw Error("frequency must be positive");
    if (!(wave_speed > 0.0)) throw Error("wave speed must be positive");
    if (!(eps_r_background >= 1.0)) throw Error("background relative permittivity must be >= 1");
    if (!(conductivity >= 0.0)) throw Error("conductivity must be nonnegative");
  }
};

}  // namespace pmldd
