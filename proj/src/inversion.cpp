#include <algorithm>
#include <cmath>
#include <limits>

#include "eqwave/certifier.hpp"
#include "eqwave/errors.hpp"

namespace eqwave {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Planar map in the co-moving phase phi = q - ct at fixed latitude:
// F(phi, r) = (phi - a sin(k phi), r + a cos(k phi)), a = exp(k(r - f))/k.
struct PlanarMap {
  double k;
  double f;

  double amp(double r) const { return std::exp(k * (r - f)); }

  void residual(double phi, double r, double X, double Z, double& rx, double& rz) const {
    const double a = amp(r) / k;
    rx = phi - a * std::sin(k * phi) - X;
    rz = r + a * std::cos(k * phi) - Z;
  }

  double residual_norm(double phi, double r, double X, double Z) const {
    double rx, rz;
    residual(phi, r, X, Z, rx, rz);
    return std::hypot(rx, rz);
  }

  // x(phi) = X at fixed r. x is increasing with slope >= 1 - amp(r) and
  // |phi - X| <= amp(r)/k, which gives the bracket.
  double solve_phi(double r, double X) const {
    const double lam = amp(r);
    const double a = lam / k;
    double lo = X - a, hi = X + a;
    double phi = X;
    for (int it = 0; it < 200; ++it) {
      const double g = phi - a * std::sin(k * phi) - X;
      if (g == 0.0) return phi;
      if (g > 0.0) hi = phi; else lo = phi;
      const double dg = 1.0 - lam * std::cos(k * phi);
      double next = phi - g / dg;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (next == phi || hi - lo <= 4.0 * kEps * (std::abs(X) + a)) return next;
      phi = next;
    }
    return phi;
  }
};


}  // namespace

InversionResult invert_map(const PhysicalPoint& p, double t, const WaveField& wave,
                           const InversionOptions& opts) {
  if (!(opts.tol > 0.0) || opts.max_iter < 1) throw DomainError("invalid inversion options");
  const double s = p.y;
  const double k = wave.k();
  const double f = decay_f(s, wave);
  const double r0s = solve_r0_of_s(s, wave, opts.surface);
  const double lambda = std::exp(k * (r0s - f));
  if (!(lambda < 1.0)) {
    throw DomainError("inversion needs r0(s) < f(s); the surface is cusped at this latitude");
  }

  const SurfaceHeight eta = surface_height_detail(p.x, s, t, r0s, wave, opts.surface);
  if (p.z > eta.z + opts.tol) throw OutOfDomainError("above free surface");

  const PlanarMap map{k, f};
  const double X = p.x - wave.c() * t;
  const double Z = p.z;
  const double scale = std::abs(X) + std::abs(Z) + 1.0 / k;
  const double step_floor = 1e3 * kEps * scale;

  InversionResult out;
  out.contraction_bound = lambda;

  double phi = X;
  double r = std::min(Z, r0s);
  double res = map.residual_norm(phi, r, X, Z);
  out.initial_residual = res;
  int iter = 0;

  auto finish = [&] {
    out.label = {phi + wave.c() * t, r, s};
    out.iterations = iter;
    const PhysicalPoint back = flow_map(out.label, t, wave);
    out.residual = std::hypot(back.x - p.x, back.z - p.z);
    return out;
  };

  if (lambda > opts.newton_threshold) {
    // Fixed-point steps would shrink by only lambda. Solve the two monotone
    // 1-D problems instead: phi(r) from x at fixed r, then r from z along the
    // vertical line x = X, where dz/dr = (1 - lam^2)/(1 - lam cos) > 0.
    auto height = [&](double rr, double& pp) {
      pp = map.solve_phi(rr, X);
      return rr + map.amp(rr) / k * std::cos(k * pp) - Z;
    };
    double hi = r0s;
    double p_hi;
    if (height(hi, p_hi) <= 0.0) {
      // On (or, within tol, just above) the surface.
      phi = p_hi;
      r = hi;
      return finish();
    }
    // z >= r - 1/k, so the root is no deeper than Z - 1/k.
    double lo = std::min(Z, r0s) - 1.0 / k;
    double p_lo;
    while (height(lo, p_lo) > 0.0) lo -= 1.0 / k;
    r = hi;
    for (; iter < opts.max_iter; ++iter) {
      double pp;
      const double h = height(r, pp);
      phi = pp;
      ++out.newton_steps;
      if (h == 0.0) break;
      if (h > 0.0) hi = r; else lo = r;
      const double lam = map.amp(r);
      const double dh = (1.0 - lam * lam) / (1.0 - lam * std::cos(k * phi));
      double next = r - h / dh;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      out.step_history.push_back(std::abs(next - r));
      if (next == r || hi - lo <= 4.0 * kEps * (std::abs(r) + 1.0)) {
        ++iter;
        break;
      }
      r = next;
    }
    if (iter >= opts.max_iter) {
      throw ConvergenceError("inverse map: iteration cap reached", lo, hi,
                             map.residual_norm(phi, r, X, Z));
    }
    return finish();
  }

  // Fixed-point iteration xi <- P(w - g(xi)); P clips r to the half-plane
  // r <= r0(s), which keeps the factor at lambda.
  const double target = opts.tol * (1.0 - lambda);
  double best = res;
  int stalled = 0;
  double prev_step = -1.0;
  for (; iter < opts.max_iter; ++iter) {
    if (res <= target) break;
    if (stalled >= 5 && res <= opts.tol) break;  // round-off floor

    const double a = map.amp(r) / k;
    const double next_phi = X + a * std::sin(k * phi);
    const double next_r = std::min(Z - a * std::cos(k * phi), r0s);
    const double step = std::hypot(next_phi - phi, next_r - r);
    out.step_history.push_back(step);
    if (prev_step > step_floor && step > step_floor) {
      out.observed_contraction = std::max(out.observed_contraction, step / prev_step);
    }
    prev_step = step;

    phi = next_phi;
    r = next_r;
    res = map.residual_norm(phi, r, X, Z);
    if (res < best) {
      best = res;
      stalled = 0;
    } else {
      ++stalled;
    }
  }
  if (!(res <= target || (stalled >= 5 && res <= opts.tol))) {
    throw ConvergenceError("inverse map: iteration cap reached", phi, r, res);
  }
  return finish();
}

}  // namespace eqwave
