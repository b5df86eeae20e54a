#include "eqwave/wave_field.hpp"

#include <cmath>
#include <numbers>

#include "eqwave/errors.hpp"

namespace eqwave {

double dispersion_speed(double k, const PhysicalConstants& constants) {
  if (!(std::isfinite(k) && k > 0.0)) {
    throw DomainError("wave number k must be finite and positive");
  }
  const double omega = constants.omega();
  const double g = constants.g();
  // (sqrt(W^2 + kg) - W) / k rewritten without the cancellation.
  return g / (std::sqrt(omega * omega + k * g) + omega);
}

WaveField::WaveField(double k, double r0, PhysicalConstants constants)
    : constants_(constants), k_(k), c_(dispersion_speed(k, constants)), r0_(r0) {
  if (!(std::isfinite(r0) && r0 <= 0.0)) {
    throw DomainError("reference surface label r0 must be finite and <= 0");
  }
}

WaveField WaveField::with_phase_speed(double c) const {
  if (!(std::isfinite(c) && c > 0.0)) {
    throw DomainError("phase speed must be finite and positive");
  }
  WaveField copy = *this;
  copy.c_ = c;
  return copy;
}

double WaveField::wavelength() const noexcept { return 2.0 * std::numbers::pi / k_; }

double WaveField::period() const noexcept { return 2.0 * std::numbers::pi / (k_ * c_); }

bool WaveField::dispersion_consistent() const noexcept {
  const double g = constants_.g();
  return std::abs(k_ * c_ * c_ + 2.0 * constants_.omega() * c_ - g) <= 1e-9 * g;
}

double decay_f(double s, const WaveField& wave) noexcept {
  return wave.c() * wave.constants().beta() * s * s / (2.0 * wave.constants().g());
}

double decay_f_prime(double s, const WaveField& wave) noexcept {
  return wave.c() * wave.constants().beta() * s / wave.constants().g();
}

}  // namespace eqwave
