#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "eqwave/flow_map.hpp"
#include "eqwave/surface.hpp"

namespace eqwave {

/// Uniform tensor grid over a truncation of the periodic label cell
/// q in [0, 2 pi/k], r in [r_min, r_max], s in [-s_max, s_max]. Endpoints are
/// included.
struct LabelGrid {
  int q_count = 2;
  int r_count = 2;
  int s_count = 2;
  double q_max = 0.0;
  double r_min = 0.0;
  double r_max = 0.0;
  double s_max = 0.0;

  /// r_min = r0 - 3/k, r_max = r0, and s_max such that exp(-k f(s_max)) = 0.01.
  static LabelGrid standard(const WaveField& wave, int q_count, int r_count, int s_count);

  /// Throws DomainError for counts < 2, r_min >= r_max, s_max < 0 or q_max <= 0.
  void validate() const;

  double q(int i) const noexcept;
  double r(int j) const noexcept;
  double s(int l) const noexcept;
  std::size_t size() const noexcept;
  /// Flat index ordering: s outer, r middle, q inner.
  LabelPoint at(std::size_t index) const noexcept;
};

/// Default meridional truncation: exp(-k f(s_max)) = 0.01, i.e. the orbit
/// amplitude has decayed to 1% of its equatorial value.
double trapping_width(const WaveField& wave);

/// Worker count for grid sweeps. Results do not depend on it.
struct Execution {
  unsigned workers = 1;
};

/// Same-latitude label pairs and stand-alone labels are drawn from a
/// counter-based generator: value n of stream j depends only on (seed, j, n).
double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) noexcept;

struct JacobianCertificate {
  double min_det = 0.0;  // closed-form 1 - exp(2k(r - f(s)))
  LabelPoint argmin{};
  double max_fd_error = 0.0;  // |analytic - FD| / max(1, |analytic|), entrywise
  std::size_t nonpositive_count = 0;
  // Every grid point with det <= 0 sits at r = 0, s = 0.
  bool degeneracy_at_equator_only = true;
  bool pass = false;
};

/// Determinant positivity and analytic-vs-finite-difference agreement of the
/// Jacobian over the grid. pass iff min_det > 0 and max_fd_error <= 1e-6.
JacobianCertificate certify_jacobian(const LabelGrid& grid, const WaveField& wave, double t,
                                     Execution exec = {});

struct InjectivityCertificate {
  double contraction_constant_operator = 0.0;  // sup exp(k(r - f(s)))
  double contraction_constant_paper = 0.0;     // sup exp(2k(r - f(s)))
  double min_pair_ratio = 0.0;                  // min |F1 - F2| / |xi1 - xi2|
  // min over pairs of ratio - (1 - exp(k(rmax - f))); must stay >= 0.
  double min_operator_margin = 0.0;
  std::size_t pairs = 0;
  std::size_t degenerate_pairs = 0;
  std::size_t operator_bound_violations = 0;
  std::size_t squared_bound_violations = 0;
  bool pass = false;
};

/// Same-latitude pairs (q_i, r_i, s) with r_i in [r_min, r_max] are tested
/// against |F(xi1) - F(xi2)| >= (1 - exp(k(max r_i - f(s)))) |xi1 - xi2|.
/// The stronger bound with exponent 2k is only counted. Requires r0 < 0.
InjectivityCertificate certify_injectivity(const LabelGrid& grid, const WaveField& wave,
                                           std::size_t pair_count, std::uint64_t seed,
                                           Execution exec = {});

struct InversionOptions {
  double tol = 1e-11;
  int max_iter = 100000;
  // Above this contraction factor the fixed-point sweep is replaced by a
  // nested safeguarded Newton solve (phi at fixed r inside, r outside).
  double newton_threshold = 0.999;
  SurfaceSolverConfig surface{};
};

struct InversionResult {
  LabelPoint label{};
  int iterations = 0;
  int newton_steps = 0;  // outer steps of the nested solve
  double residual = 0.0;           // |flow_map(label, t) - p|, m
  double initial_residual = 0.0;   // residual of the starting guess
  double contraction_bound = 0.0;  // exp(k(r0(s) - f(s)))
  double observed_contraction = 0.0;  // max successive-step ratio over fixed-point steps
  std::vector<double> step_history;   // |xi_{n+1} - xi_n| per iteration
};

/// Inverse flow map at time t. The latitude is s = p.y exactly; (q, r) solve
/// the planar map F(xi) = xi + g(xi) by the fixed-point iteration
/// xi <- w - g(xi), which contracts with factor exp(k(r0(s) - f(s))) on the
/// half-plane r <= r0(s).
///
/// Throws OutOfDomainError for points above the free surface and
/// ConvergenceError when max_iter is reached.
InversionResult invert_map(const PhysicalPoint& p, double t, const WaveField& wave,
                           const InversionOptions& opts = {});

struct InversionCertificate {
  double max_roundtrip_error = 0.0;  // m
  double max_contraction_excess = 0.0;  // observed - analytic factor
  int max_iterations = 0;
  std::size_t samples = 0;
  bool pass = false;
};

/// Round trip invert_map(flow_map(l, t), t) for random labels with
/// r in [r_min, r0(s)]. pass iff error <= 1e-10 m and excess <= 1e-3.
InversionCertificate certify_inversion(const LabelGrid& grid, const WaveField& wave, double t,
                                       std::size_t count, std::uint64_t seed,
                                       const InversionOptions& opts = {}, Execution exec = {});

struct BoundaryCertificate {
  double max_edge_error = 0.0;      // |x - edge| for q on the cell edges, m
  double max_crest_excess = 0.0;    // z - (r0(s) + exp(k(r0(s)-f))/k), <= 0 expected
  double max_surface_error = 0.0;   // |z - eta(x)| on r = r0(s), m
  std::size_t cusp_points = 0;      // surface labels with d(x,z)/dq = 0
  bool pass = false;
};

/// Images of the cell boundary: the vertical edges q = ct and q = ct + 2pi/k
/// go to x = ct and x = ct + 2pi/k, their crest height is bounded by the
/// surface crest, and the label surface r = r0(s) lands on the free surface.
BoundaryCertificate certify_boundary(const WaveField& wave, double t,
                                     const std::vector<double>& s_samples, int q_samples,
                                     const SurfaceSolverConfig& cfg = {});

struct IncompressibilityCertificate {
  double max_det_time_variation = 0.0;  // full-matrix determinant across times
  double max_det_formula_error = 0.0;   // full-matrix vs closed form
  double max_fd_divergence = 0.0;       // |u_x + v_y + w_z| via chain rule, 1/s
  bool pass = false;
};

/// pass iff time variation <= 1e-12, formula error <= 1e-12 and
/// FD divergence <= 1e-6.
IncompressibilityCertificate certify_incompressibility(const LabelGrid& grid,
                                                       const WaveField& wave,
                                                       const std::vector<double>& times,
                                                       Execution exec = {},
                                                       const SurfaceSolverConfig& cfg = {});

struct EulerCompatibility {
  double max_asymmetry = 0.0;         // Richardson-combined (h, h/2) estimate
  double max_asymmetry_coarse = 0.0;  // plain central differences at h
  double max_asymmetry_fine = 0.0;    // plain central differences at h/2
  double threshold = 0.0;
  std::size_t points = 0;
  bool pass = false;
};

/// Pressure gradient required by the beta-plane momentum balance,
/// rho * (-Du/Dt - Coriolis - g z_hat), at a label.
Vec3 required_pressure_gradient(const LabelPoint& label, double t, const WaveField& wave,
                                double rho);

/// Default pass threshold on the gradient asymmetry, 1e-7 rho c^2 k^2.
double euler_asymmetry_threshold(const WaveField& wave, double rho) noexcept;

/// Max over labels strictly below the surface of |dG_i/dx_j - dG_j/dx_i|; a
/// pressure field can only exist where this vanishes. Label derivatives come
/// from central differences at step fd_step and fd_step/2 and are mapped to
/// physical space with the inverse Jacobian.
EulerCompatibility certify_euler_compatibility(const LabelGrid& grid, const WaveField& wave,
                                               double t, double fd_step, double rho = 1000.0,
                                               Execution exec = {},
                                               const SurfaceSolverConfig& cfg = {});

struct KinematicCertificate {
  double max_surface_error = 0.0;      // |z_particle - eta(x_particle)|, m
  double min_interior_clearance = 0.0;  // min of eta - z over interior particles, m
  double threshold = 0.0;
  bool pass = false;
};

/// Surface particles stay on eta and interior particles stay strictly below.
KinematicCertificate certify_kinematic_bc(const WaveField& wave, const std::vector<double>& times,
                                          const std::vector<double>& s_samples, int q_samples,
                                          const SurfaceSolverConfig& cfg = {});

struct CertifyOptions {
  LabelGrid grid;
  double t = 0.0;
  std::size_t pair_count = 100000;
  std::size_t inversion_count = 10000;
  std::uint64_t seed = 1;
  double fd_step = 0.0;  // 0 selects 0.01/k
  double rho = 1000.0;
  int boundary_q_samples = 64;
  int boundary_s_samples = 9;
  int time_samples = 5;
  SurfaceSolverConfig surface{};
  InversionOptions inversion{};
  Execution exec{};
};

struct CertificateReport {
  LabelGrid grid;
  double t = 0.0;
  double min_jacobian_det = 0.0;
  double max_fd_jacobian_error = 0.0;
  std::optional<double> contraction_constant_operator;
  std::optional<double> contraction_constant_paper;
  std::optional<double> min_pair_ratio;
  std::optional<double> max_inversion_roundtrip_error;
  double max_det_time_variation = 0.0;
  std::optional<double> max_gradient_asymmetry;
  double max_kinematic_bc_error = 0.0;
  bool boundary_checks_passed = false;
  bool pass = false;

  JacobianCertificate jacobian;
  std::optional<InjectivityCertificate> injectivity;
  std::optional<InversionCertificate> inversion;
  BoundaryCertificate boundary;
  IncompressibilityCertificate incompressibility;
  std::optional<EulerCompatibility> euler;
  KinematicCertificate kinematic;
};

/// All checks. The injectivity, inversion and Euler checks need r0 < 0 and
/// are skipped (and the report fails) otherwise.
CertificateReport certify(const WaveField& wave, const CertifyOptions& opts);

}  // namespace eqwave
