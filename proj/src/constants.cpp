#include "eqwave/constants.hpp"

#include <cmath>

#include "eqwave/errors.hpp"

namespace eqwave {

PhysicalConstants::PhysicalConstants()
    : PhysicalConstants(kDefaultOmega, kDefaultG, kDefaultEarthRadius) {}

PhysicalConstants::PhysicalConstants(double omega, double g, double earth_radius)
    : PhysicalConstants(omega, g, earth_radius, 2.0 * omega / earth_radius) {}

PhysicalConstants PhysicalConstants::with_beta(double omega, double g, double earth_radius,
                                               double beta) {
  return PhysicalConstants(omega, g, earth_radius, beta);
}

PhysicalConstants::PhysicalConstants(double omega, double g, double earth_radius, double beta)
    : omega_(omega), g_(g), earth_radius_(earth_radius), beta_(beta) {
  if (!(std::isfinite(omega) && omega >= 0.0)) {
    throw DomainError("omega must be finite and non-negative");
  }
  if (!(std::isfinite(g) && g > 0.0)) {
    throw DomainError("g must be finite and positive");
  }
  if (!(std::isfinite(earth_radius) && earth_radius > 0.0)) {
    throw DomainError("earth radius must be finite and positive");
  }
  if (!(std::isfinite(beta) && beta >= 0.0)) {
    throw DomainError("beta must be finite and non-negative");
  }
}

bool PhysicalConstants::beta_consistent() const noexcept {
  return std::abs(beta_ - 2.0 * omega_ / earth_radius_) <= 1e-12 * beta_;
}

}  // namespace eqwave
