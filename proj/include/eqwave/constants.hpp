#pragma once

namespace eqwave {

/// Geophysical constants of the equatorial beta-plane, SI units throughout.
///
/// The default-constructed value is the standard regime: Omega = 7.3e-5 rad/s,
/// g = 9.8 m/s^2, R = 6378 km and beta = 2 Omega / R.
class PhysicalConstants {
public:
  static constexpr double kDefaultOmega = 7.3e-5;
  static constexpr double kDefaultG = 9.8;
  static constexpr double kDefaultEarthRadius = 6.378e6;

  PhysicalConstants();

  /// beta derived from Omega and R.
  PhysicalConstants(double omega, double g, double earth_radius);

  /// Explicit beta. Used for the Gerstner reduction (beta = 0) and for rounded
  /// literature values; beta_consistent() reports whether it matches 2 Omega / R.
  static PhysicalConstants with_beta(double omega, double g, double earth_radius, double beta);

  double omega() const noexcept { return omega_; }
  double g() const noexcept { return g_; }
  double beta() const noexcept { return beta_; }
  double earth_radius() const noexcept { return earth_radius_; }

  /// |beta - 2 Omega / R| <= 1e-12 beta.
  bool beta_consistent() const noexcept;

private:
  PhysicalConstants(double omega, double g, double earth_radius, double beta);

  double omega_;
  double g_;
  double earth_radius_;
  double beta_;
};

}  // namespace eqwave
