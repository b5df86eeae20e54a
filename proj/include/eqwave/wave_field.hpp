#pragma once

#include "eqwave/constants.hpp"

namespace eqwave {

/// Phase speed from the Coriolis-modified deep-water dispersion relation,
/// c = (sqrt(Omega^2 + k g) - Omega) / k. Throws DomainError for k <= 0.
double dispersion_speed(double k, const PhysicalConstants& constants);

/// Parameters of one equatorially trapped wave. The phase speed is fixed at
/// construction.
class WaveField {
public:
  /// Throws DomainError unless k > 0 and r0 <= 0.
  WaveField(double k, double r0, PhysicalConstants constants = {});

  /// Same wave with the phase speed replaced by `c`. Breaks the dispersion
  /// identity on purpose; used for negative controls.
  WaveField with_phase_speed(double c) const;

  const PhysicalConstants& constants() const noexcept { return constants_; }
  double k() const noexcept { return k_; }
  double c() const noexcept { return c_; }
  double r0() const noexcept { return r0_; }
  double wavelength() const noexcept;
  /// 2 pi / (k c)
  double period() const noexcept;

  /// |k c^2 + 2 Omega c - g| <= 1e-9 g.
  bool dispersion_consistent() const noexcept;

private:
  PhysicalConstants constants_;
  double k_;
  double c_;
  double r0_;
};

/// Meridional decay offset f(s) = c beta s^2 / (2 g).
double decay_f(double s, const WaveField& wave) noexcept;

/// f'(s) = c beta s / g.
double decay_f_prime(double s, const WaveField& wave) noexcept;

}  // namespace eqwave
