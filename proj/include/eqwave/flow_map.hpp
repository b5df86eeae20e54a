#pragma once

#include <array>

#include "eqwave/wave_field.hpp"

namespace eqwave {

/// Lagrangian labels, meters: zonal q, vertical r, meridional s.
struct LabelPoint {
  double q = 0.0;
  double r = 0.0;
  double s = 0.0;
};

/// Physical position, meters.
struct PhysicalPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// Cartesian (x, y, z) components of a velocity or acceleration.
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const noexcept;
};

/// Differential of the flow map: rows (x, y, z), columns (q, r, s).
class Jacobian3 {
public:
  using Row = std::array<double, 3>;

  Jacobian3() = default;
  Jacobian3(Row dx, Row dy, Row dz) : rows_{dx, dy, dz} {}

  double operator()(int row, int col) const { return rows_[row][col]; }
  double& operator()(int row, int col) { return rows_[row][col]; }

  /// Determinant of d(x,y,z)/d(q,r,s) as stored.
  double determinant() const noexcept;

  /// Determinant of d(x,y,z)/d(q,s,r). The label ordering (q,r,s) is an odd
  /// permutation of the axes it tends to at depth (x,z,y), so this is
  /// -determinant(); it is the orientation-preserving volume factor and equals
  /// 1 - exp(2k(r - f(s))).
  double oriented_determinant() const noexcept { return -determinant(); }

  /// Inverse of the stored matrix. Throws DomainError when singular.
  Jacobian3 inverse() const;

private:
  std::array<Row, 3> rows_{};
};

/// Particle position at time t.
PhysicalPoint flow_map(const LabelPoint& label, double t, const WaveField& wave) noexcept;

/// Particle velocity (dx/dt, dy/dt, dz/dt).
Vec3 velocity(const LabelPoint& label, double t, const WaveField& wave) noexcept;

/// Particle acceleration (d2x/dt2, d2y/dt2, d2z/dt2).
Vec3 acceleration(const LabelPoint& label, double t, const WaveField& wave) noexcept;

/// Analytic differential of flow_map.
Jacobian3 jacobian(const LabelPoint& label, double t, const WaveField& wave) noexcept;

/// Closed-form volume factor 1 - exp(2k(r - f(s))). Has no time argument.
double jacobian_det(const LabelPoint& label, const WaveField& wave) noexcept;

/// Orbit-amplitude factor exp(k(r - f(s))); the orbit radius is this over k.
double orbit_factor(const LabelPoint& label, const WaveField& wave) noexcept;

}  // namespace eqwave
