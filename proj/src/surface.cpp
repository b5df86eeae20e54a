#include "eqwave/surface.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <mutex>
#include <string>

#include "eqwave/errors.hpp"

namespace eqwave {

void SurfaceSolverConfig::validate() const {
  if (!(tol > 0.0 && std::isfinite(tol))) throw DomainError("solver tol must be positive");
  if (max_iter < 1) throw DomainError("solver max_iter must be >= 1");
  if (!(bracket_expansion > 1.0 && std::isfinite(bracket_expansion))) {
    throw DomainError("bracket_expansion must be > 1");
  }
}

double solve_r0_of_s(double s, const WaveField& wave, const SurfaceSolverConfig& cfg) {
  cfg.validate();
  const double r0 = wave.r0();
  const double f = decay_f(s, wave);
  if (f == 0.0) return r0;

  const double two_k = 2.0 * wave.k();
  const double scale = std::exp(two_k * r0);
  const double rhs = scale / two_k - r0;  // C
  const double res_tol = cfg.tol * (1.0 + std::abs(rhs));

  // Unknown d = rho - r0 <= 0. H(d) = G(r0 + d) - C, rewritten with expm1 so
  // that the O(1/k) terms on both sides cancel exactly.
  auto residual = [&](double d) { return scale * std::expm1(two_k * (d - f)) / two_k - d; };
  auto slope = [&](double d) { return std::exp(two_k * (r0 + d - f)) - 1.0; };

  double hi = 0.0;  // H(0) < 0 for f > 0
  double lo = -f - 1.0 / two_k - 1.0;
  int iter = 0;
  while (residual(lo) <= 0.0) {
    if (++iter > cfg.max_iter) {
      throw ConvergenceError("r0(s): lower bracket search exceeded max_iter", r0 + lo, r0 + hi,
                             residual(lo));
    }
    lo *= cfg.bracket_expansion;
  }

  double d = hi;
  double h = residual(d);
  for (; iter < cfg.max_iter; ++iter) {
    if (h > 0.0) lo = d; else hi = d;
    const double dh = slope(d);
    double next = (dh < 0.0) ? d - h / dh : std::numeric_limits<double>::quiet_NaN();
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = next - d;
    d = next;
    h = residual(d);
    if (std::abs(h) <= res_tol && (std::abs(step) <= cfg.tol || hi - lo <= cfg.tol)) {
      return r0 + d;
    }
    if (h == 0.0) return r0 + d;
  }
  throw ConvergenceError("r0(s): iteration cap reached", r0 + lo, r0 + hi, h);
}

SurfaceLabelCache::SurfaceLabelCache(const WaveField& wave, SurfaceSolverConfig cfg)
    : wave_(wave), cfg_(cfg) {
  cfg_.validate();
}

double SurfaceLabelCache::operator()(double s) const {
  const auto key = std::bit_cast<std::uint64_t>(s);
  {
    std::shared_lock lock(mutex_);
    if (auto it = values_.find(key); it != values_.end()) return it->second;
  }
  const double value = solve_r0_of_s(s, wave_, cfg_);
  std::unique_lock lock(mutex_);
  values_.emplace(key, value);
  return value;
}

std::size_t SurfaceLabelCache::size() const {
  std::shared_lock lock(mutex_);
  return values_.size();
}

SurfaceSample surface_point(double q, double s, double t, const WaveField& wave,
                            const SurfaceSolverConfig& cfg) {
  const double r0s = solve_r0_of_s(s, wave, cfg);
  const PhysicalPoint p = flow_map({q, r0s, s}, t, wave);
  return {t, s, q, p.x, p.y, p.z, r0s};
}

SurfaceHeight surface_height_detail(double x, double s, double t, const WaveField& wave,
                                    const SurfaceSolverConfig& cfg) {
  return surface_height_detail(x, s, t, solve_r0_of_s(s, wave, cfg), wave, cfg);
}

SurfaceHeight surface_height_detail(double x, double s, double t, double r0s,
                                    const WaveField& wave, const SurfaceSolverConfig& cfg) {
  cfg.validate();
  const double k = wave.k();
  const double period = wave.wavelength();
  const double amp = std::exp(k * (r0s - decay_f(s, wave)));
  const double radius = amp / k;

  // In the co-moving phase variable phi = q - ct the surface is
  // x - ct = phi - radius sin(k phi), strictly increasing in phi except at a cusp.
  const double shifted = x - wave.c() * t;
  const double turns = std::floor(shifted / period);
  const double target = shifted - turns * period;

  auto h = [&](double phi) { return phi - radius * std::sin(k * phi) - target; };
  auto dh = [&](double phi) { return 1.0 - amp * std::cos(k * phi); };

  double lo = 0.0;
  double hi = period;
  double phi = target;
  double value = h(phi);
  int iter = 0;
  int polish = 0;
  bool converged = false;
  for (; iter < cfg.max_iter; ++iter) {
    if (value == 0.0) {
      converged = true;
      break;
    }
    if (value < 0.0) lo = phi; else hi = phi;
    const double slope = dh(phi);
    double next = (slope > 0.0) ? phi - value / slope : std::numeric_limits<double>::quiet_NaN();
    if (!(next >= lo && next <= hi)) next = 0.5 * (lo + hi);
    phi = next;
    value = h(phi);
    // Two Newton steps past the tolerance bring the phase to round-off.
    if (std::abs(value) <= cfg.tol || hi - lo <= cfg.tol) {
      if (++polish > 2 || hi - lo <= cfg.tol) {
        converged = true;
        ++iter;
        break;
      }
    }
  }
  if (!converged) {
    throw ConvergenceError("surface height: iteration cap reached", lo, hi, value);
  }

  SurfaceHeight out;
  out.q = phi + wave.c() * t + turns * period;
  out.z = r0s + radius * std::cos(k * phi);
  out.iterations = iter;
  out.degenerate_derivative = dh(phi) <= 1e-8;
  return out;
}

double surface_height(double x, double s, double t, const WaveField& wave,
                      const SurfaceSolverConfig& cfg) {
  return surface_height_detail(x, s, t, wave, cfg).z;
}

PlanarPoint trochoid_sample(double xi, double s, const WaveField& wave,
                            const SurfaceSolverConfig& cfg) {
  const double k = wave.k();
  const double r0s = solve_r0_of_s(s, wave, cfg);
  const double d = std::exp(k * (r0s - decay_f(s, wave))) / k;
  return {xi / k - d * std::sin(xi), 1.0 / k - d * std::cos(xi)};
}

}  // namespace eqwave
