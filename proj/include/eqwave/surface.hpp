#pragma once

#include <cstdint>
#include <shared_mutex>
#include <unordered_map>

#include "eqwave/flow_map.hpp"

namespace eqwave {

struct SurfaceSolverConfig {
  double tol = 1e-12;            // absolute root tolerance, m
  int max_iter = 200;
  double bracket_expansion = 2.0;

  /// Throws DomainError unless tol > 0, max_iter >= 1, bracket_expansion > 1.
  void validate() const;
};

/// One point of the free surface, i.e. the image of the label r = r0(s).
struct SurfaceSample {
  double t = 0.0;
  double s = 0.0;
  double q = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double r0s = 0.0;
};

/// Surface label r0(s) at latitude s: the root on rho <= r0 of
///
///   exp(2k(rho - f(s))) / (2k) - rho = exp(2k r0) / (2k) - r0.
///
/// The left side is strictly decreasing for rho < f(s), so the root is
/// unique. r0(0) = r0 exactly. Solved by bracketed Newton with bisection
/// fallback; throws ConvergenceError on hitting max_iter.
double solve_r0_of_s(double s, const WaveField& wave, const SurfaceSolverConfig& cfg = {});

/// Thread-safe memo of r0(s) keyed on the exact bits of s.
class SurfaceLabelCache {
public:
  explicit SurfaceLabelCache(const WaveField& wave, SurfaceSolverConfig cfg = {});

  double operator()(double s) const;

  const WaveField& wave() const noexcept { return wave_; }
  const SurfaceSolverConfig& config() const noexcept { return cfg_; }
  std::size_t size() const;

private:
  WaveField wave_;
  SurfaceSolverConfig cfg_;
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<std::uint64_t, double> values_;
};

/// flow_map at the surface label r = r0(s).
SurfaceSample surface_point(double q, double s, double t, const WaveField& wave,
                            const SurfaceSolverConfig& cfg = {});

struct SurfaceHeight {
  double z = 0.0;
  double q = 0.0;  // surface label whose image has the queried x
  int iterations = 0;
  // dx/dq vanished at the solution (equatorial crest of the cycloid, r0 = 0).
  bool degenerate_derivative = false;
};

/// Free-surface elevation eta(x, s, t) found by inverting q -> x on the
/// surface label. Throws ConvergenceError if the iteration cap is reached.
SurfaceHeight surface_height_detail(double x, double s, double t, const WaveField& wave,
                                    const SurfaceSolverConfig& cfg = {});

/// With a known r0(s), skipping the label solve.
SurfaceHeight surface_height_detail(double x, double s, double t, double r0s,
                                    const WaveField& wave, const SurfaceSolverConfig& cfg = {});

double surface_height(double x, double s, double t, const WaveField& wave,
                      const SurfaceSolverConfig& cfg = {});

struct PlanarPoint {
  double x = 0.0;
  double z = 0.0;
};

/// Rolling-circle parametrization of the surface at latitude s:
/// X = xi/k - d sin(xi), Z = 1/k - d cos(xi), with d = exp(k(r0(s) - f(s)))/k.
/// A trochoid when d < 1/k, a cycloid when d = 1/k.
PlanarPoint trochoid_sample(double xi, double s, const WaveField& wave,
                            const SurfaceSolverConfig& cfg = {});

}  // namespace eqwave
