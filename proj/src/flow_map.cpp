#include "eqwave/flow_map.hpp"

#include <cmath>

#include "eqwave/errors.hpp"

namespace eqwave {
namespace {

struct Phase {
  double amp;  // exp(k(r - f(s)))
  double sin;
  double cos;
};

Phase phase_at(const LabelPoint& label, double t, const WaveField& wave) noexcept {
  const double k = wave.k();
  const double theta = k * (label.q - wave.c() * t);
  return {std::exp(k * (label.r - decay_f(label.s, wave))), std::sin(theta), std::cos(theta)};
}

}  // namespace

double Vec3::norm() const noexcept { return std::sqrt(x * x + y * y + z * z); }

double Jacobian3::determinant() const noexcept {
  const auto& m = rows_;
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

Jacobian3 Jacobian3::inverse() const {
  const double det = determinant();
  if (det == 0.0 || !std::isfinite(det)) {
    throw DomainError("singular Jacobian");
  }
  const auto& m = rows_;
  Jacobian3 inv;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      // Cofactor of m[j][i].
      const int r0 = (j + 1) % 3, r1 = (j + 2) % 3;
      const int c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      inv(i, j) = (m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]) / det;
    }
  }
  return inv;
}

PhysicalPoint flow_map(const LabelPoint& label, double t, const WaveField& wave) noexcept {
  const Phase p = phase_at(label, t, wave);
  const double radius = p.amp / wave.k();
  return {label.q - radius * p.sin, label.s, label.r + radius * p.cos};
}

Vec3 velocity(const LabelPoint& label, double t, const WaveField& wave) noexcept {
  const Phase p = phase_at(label, t, wave);
  const double speed = wave.c() * p.amp;
  return {speed * p.cos, 0.0, speed * p.sin};
}

Vec3 acceleration(const LabelPoint& label, double t, const WaveField& wave) noexcept {
  const Phase p = phase_at(label, t, wave);
  const double mag = wave.c() * wave.c() * wave.k() * p.amp;
  return {mag * p.sin, 0.0, -mag * p.cos};
}

Jacobian3 jacobian(const LabelPoint& label, double t, const WaveField& wave) noexcept {
  const Phase p = phase_at(label, t, wave);
  const double fp = decay_f_prime(label.s, wave);
  const double es = p.amp * p.sin;
  const double ec = p.amp * p.cos;
  return Jacobian3({1.0 - ec, -es, fp * es},
                   {0.0, 0.0, 1.0},
                   {-es, 1.0 + ec, -fp * ec});
}

double jacobian_det(const LabelPoint& label, const WaveField& wave) noexcept {
  // 1 - e^{2k(r-f)} without cancellation when r - f is close to 0.
  // + 0.0 turns the -0 at r = f into +0.
  return -std::expm1(2.0 * wave.k() * (label.r - decay_f(label.s, wave))) + 0.0;
}

double orbit_factor(const LabelPoint& label, const WaveField& wave) noexcept {
  return std::exp(wave.k() * (label.r - decay_f(label.s, wave)));
}

}  // namespace eqwave
