#include "eqwave/certifier.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "eqwave/errors.hpp"
#include "parallel.hpp"

namespace eqwave {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kInf = std::numeric_limits<double>::infinity();

using Mat3 = std::array<std::array<double, 3>, 3>;

double fd_step_for(double coordinate) { return 1e-6 * std::max(1.0, std::abs(coordinate)); }

LabelPoint shifted(LabelPoint l, int axis, double h) {
  if (axis == 0) l.q += h;
  else if (axis == 1) l.r += h;
  else l.s += h;
  return l;
}

std::array<double, 3> as_array(const PhysicalPoint& p) { return {p.x, p.y, p.z}; }
std::array<double, 3> as_array(const Vec3& v) { return {v.x, v.y, v.z}; }

// Central-difference label derivative d field_i / d label_j.
template <class Field>
Mat3 label_derivative(const LabelPoint& l, Field field, const std::array<double, 3>& steps) {
  Mat3 d{};
  for (int j = 0; j < 3; ++j) {
    const auto plus = field(shifted(l, j, steps[j]));
    const auto minus = field(shifted(l, j, -steps[j]));
    for (int i = 0; i < 3; ++i) d[i][j] = (plus[i] - minus[i]) / (2.0 * steps[j]);
  }
  return d;
}

// d field / d x = (d field / d label) J^{-1}
Mat3 to_physical(const Mat3& d, const Jacobian3& inv) {
  Mat3 out{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double sum = 0.0;
      for (int m = 0; m < 3; ++m) sum += d[i][m] * inv(m, j);
      out[i][j] = sum;
    }
  }
  return out;
}

double max_asymmetry(const Mat3& a) {
  return std::max({std::abs(a[0][1] - a[1][0]), std::abs(a[0][2] - a[2][0]),
                   std::abs(a[1][2] - a[2][1])});
}

std::vector<double> symmetric_samples(double half_width, int count) {
  LabelGrid g;
  g.s_count = count;
  g.s_max = half_width;
  std::vector<double> out;
  for (int l = 0; l < count; ++l) out.push_back(g.s(l));
  return out;
}

}  // namespace

JacobianCertificate certify_jacobian(const LabelGrid& grid, const WaveField& wave, double t,
                                     Execution exec) {
  grid.validate();
  struct Acc {
    double min_det = kInf;
    std::size_t argmin = 0;
    double max_err = 0.0;
    std::size_t nonpositive = 0;
    bool localized = true;
  };
  const Acc acc = detail::parallel_reduce(
      grid.size(), exec.workers, Acc{},
      [&](std::size_t idx, Acc& a) {
        const LabelPoint l = grid.at(idx);
        const double det = jacobian_det(l, wave);
        if (det < a.min_det) {
          a.min_det = det;
          a.argmin = idx;
        }
        if (det <= 0.0) {
          ++a.nonpositive;
          if (!(l.r == 0.0 && l.s == 0.0)) a.localized = false;
        }
        const Jacobian3 jac = jacobian(l, t, wave);
        const std::array<double, 3> steps{fd_step_for(l.q), fd_step_for(l.r), fd_step_for(l.s)};
        const Mat3 fd = label_derivative(
            l, [&](const LabelPoint& m) { return as_array(flow_map(m, t, wave)); }, steps);
        for (int i = 0; i < 3; ++i) {
          for (int j = 0; j < 3; ++j) {
            const double err = std::abs(jac(i, j) - fd[i][j]) / std::max(1.0, std::abs(jac(i, j)));
            a.max_err = std::max(a.max_err, err);
          }
        }
      },
      [](Acc& out, const Acc& p) {
        if (p.min_det < out.min_det) {
          out.min_det = p.min_det;
          out.argmin = p.argmin;
        }
        out.max_err = std::max(out.max_err, p.max_err);
        out.nonpositive += p.nonpositive;
        out.localized = out.localized && p.localized;
      });

  JacobianCertificate cert;
  cert.min_det = acc.min_det;
  cert.argmin = grid.at(acc.argmin);
  cert.max_fd_error = acc.max_err;
  cert.nonpositive_count = acc.nonpositive;
  cert.degeneracy_at_equator_only = acc.localized;
  cert.pass = cert.min_det > 0.0 && cert.max_fd_error <= 1e-6;
  return cert;
}

InjectivityCertificate certify_injectivity(const LabelGrid& grid, const WaveField& wave,
                                           std::size_t pair_count, std::uint64_t seed,
                                           Execution exec) {
  grid.validate();
  if (!(wave.r0() < 0.0)) throw DomainError("injectivity certificate requires r0 < 0");
  const double k = wave.k();

  InjectivityCertificate cert;
  double min_f = kInf;
  for (int l = 0; l < grid.s_count; ++l) min_f = std::min(min_f, decay_f(grid.s(l), wave));
  cert.contraction_constant_operator = std::exp(k * (grid.r_max - min_f));
  cert.contraction_constant_paper = std::exp(2.0 * k * (grid.r_max - min_f));

  struct Acc {
    double min_ratio = kInf;
    double min_margin = kInf;
    std::size_t degenerate = 0;
    std::size_t op_viol = 0;
    std::size_t squared_viol = 0;
  };
  auto draw = [&](std::uint64_t stream, std::size_t i) { return uniform01(seed, stream, i); };
  const double r_span = grid.r_max - grid.r_min;
  const Acc acc = detail::parallel_reduce(
      pair_count, exec.workers, Acc{},
      [&](std::size_t i, Acc& a) {
        const double s = grid.s_max * (2.0 * draw(0, i) - 1.0);
        const LabelPoint l1{grid.q_max * draw(1, i), grid.r_min + r_span * draw(2, i), s};
        const LabelPoint l2{grid.q_max * draw(3, i), grid.r_min + r_span * draw(4, i), s};
        const double dist = std::hypot(l1.q - l2.q, l1.r - l2.r);
        if (dist == 0.0) {
          ++a.degenerate;
          return;
        }
        const PhysicalPoint p1 = flow_map(l1, 0.0, wave);
        const PhysicalPoint p2 = flow_map(l2, 0.0, wave);
        const double image = std::hypot(p1.x - p2.x, p1.z - p2.z);
        const double ratio = image / dist;
        const double exponent = k * (std::max(l1.r, l2.r) - decay_f(s, wave));
        const double op_bound = -std::expm1(exponent);
        const double squared_bound = -std::expm1(2.0 * exponent);
        // Absolute round-off in |F1 - F2|.
        const double slack =
            8.0 * kEps * (std::abs(p1.x) + std::abs(p2.x) + std::abs(p1.z) + std::abs(p2.z)) / dist;
        a.min_ratio = std::min(a.min_ratio, ratio);
        a.min_margin = std::min(a.min_margin, ratio - op_bound);
        if (ratio < op_bound - slack) ++a.op_viol;
        if (ratio < squared_bound - slack) ++a.squared_viol;
      },
      [](Acc& out, const Acc& p) {
        out.min_ratio = std::min(out.min_ratio, p.min_ratio);
        out.min_margin = std::min(out.min_margin, p.min_margin);
        out.degenerate += p.degenerate;
        out.op_viol += p.op_viol;
        out.squared_viol += p.squared_viol;
      });

  cert.min_pair_ratio = acc.min_ratio;
  cert.min_operator_margin = acc.min_margin;
  cert.pairs = pair_count;
  cert.degenerate_pairs = acc.degenerate;
  cert.operator_bound_violations = acc.op_viol;
  cert.squared_bound_violations = acc.squared_viol;
  cert.pass = acc.op_viol == 0 && pair_count > acc.degenerate;
  return cert;
}

InversionCertificate certify_inversion(const LabelGrid& grid, const WaveField& wave, double t,
                                       std::size_t count, std::uint64_t seed,
                                       const InversionOptions& opts, Execution exec) {
  grid.validate();
  if (!(wave.r0() < 0.0)) throw DomainError("inversion certificate requires r0 < 0");
  const SurfaceLabelCache r0_of_s(wave, opts.surface);
  struct Acc {
    double max_err = 0.0;
    double max_excess = -kInf;
    int max_iter = 0;
  };
  // Streams 16.. keep these draws apart from the injectivity pairs.
  const Acc acc = detail::parallel_reduce(
      count, exec.workers, Acc{},
      [&](std::size_t i, Acc& a) {
        const double s = grid.s_max * (2.0 * uniform01(seed, 16, i) - 1.0);
        const double top = r0_of_s(s);
        const double bottom = grid.r_min < top ? grid.r_min : top - (grid.r_max - grid.r_min);
        const LabelPoint l{grid.q_max * uniform01(seed, 17, i),
                           bottom + (top - bottom) * uniform01(seed, 18, i), s};
        const InversionResult inv = invert_map(flow_map(l, t, wave), t, wave, opts);
        const double err = std::sqrt((inv.label.q - l.q) * (inv.label.q - l.q) +
                                     (inv.label.r - l.r) * (inv.label.r - l.r) +
                                     (inv.label.s - l.s) * (inv.label.s - l.s));
        a.max_err = std::max(a.max_err, err);
        a.max_excess = std::max(a.max_excess, inv.observed_contraction - inv.contraction_bound);
        a.max_iter = std::max(a.max_iter, inv.iterations);
      },
      [](Acc& out, const Acc& p) {
        out.max_err = std::max(out.max_err, p.max_err);
        out.max_excess = std::max(out.max_excess, p.max_excess);
        out.max_iter = std::max(out.max_iter, p.max_iter);
      });

  InversionCertificate cert;
  cert.max_roundtrip_error = acc.max_err;
  cert.max_contraction_excess = count > 0 ? acc.max_excess : 0.0;
  cert.max_iterations = acc.max_iter;
  cert.samples = count;
  cert.pass = cert.max_roundtrip_error <= 1e-10 && cert.max_contraction_excess <= 1e-3;
  return cert;
}

BoundaryCertificate certify_boundary(const WaveField& wave, double t,
                                     const std::vector<double>& s_samples, int q_samples,
                                     const SurfaceSolverConfig& cfg) {
  if (q_samples < 1) throw DomainError("boundary check needs q_samples >= 1");
  const double k = wave.k();
  const double L = wave.wavelength();
  const double ct = wave.c() * t;
  constexpr double kEdgeTol = 1e-9;

  BoundaryCertificate cert;
  cert.max_crest_excess = -kInf;
  for (const double s : s_samples) {
    const double r0s = solve_r0_of_s(s, wave, cfg);
    const double crest = r0s + std::exp(k * (r0s - decay_f(s, wave))) / k;
    for (const double depth : {0.0, 0.5 / k, 1.0 / k, 3.0 / k}) {
      const double r = r0s - depth;
      for (const double edge : {0.0, L}) {
        const PhysicalPoint p = flow_map({ct + edge, r, s}, t, wave);
        cert.max_edge_error = std::max(cert.max_edge_error, std::abs(p.x - (ct + edge)));
        cert.max_crest_excess = std::max(cert.max_crest_excess, p.z - crest);
      }
    }
    for (int i = 0; i < q_samples; ++i) {
      const LabelPoint l{ct + L * static_cast<double>(i) / q_samples, r0s, s};
      const PhysicalPoint p = flow_map(l, t, wave);
      const double eta = surface_height_detail(p.x, s, t, r0s, wave, cfg).z;
      cert.max_surface_error = std::max(cert.max_surface_error, std::abs(p.z - eta));
      const Jacobian3 jac = jacobian(l, t, wave);
      if (std::hypot(jac(0, 0), jac(2, 0)) <= 1e-12) ++cert.cusp_points;
    }
  }
  cert.pass = cert.max_edge_error <= kEdgeTol && cert.max_crest_excess <= kEdgeTol &&
              cert.max_surface_error <= 10.0 * cfg.tol;
  return cert;
}

IncompressibilityCertificate certify_incompressibility(const LabelGrid& grid,
                                                       const WaveField& wave,
                                                       const std::vector<double>& times,
                                                       Execution exec,
                                                       const SurfaceSolverConfig& cfg) {
  grid.validate();
  if (times.empty()) throw DomainError("incompressibility check needs at least one time");
  const SurfaceLabelCache r0_of_s(wave, cfg);
  struct Acc {
    double variation = 0.0;
    double formula = 0.0;
    double divergence = 0.0;
  };
  const Acc acc = detail::parallel_reduce(
      grid.size(), exec.workers, Acc{},
      [&](std::size_t idx, Acc& a) {
        const LabelPoint l = grid.at(idx);
        const double closed = jacobian_det(l, wave);
        double lo = kInf, hi = -kInf;
        for (const double t : times) {
          const double det = jacobian(l, t, wave).oriented_determinant();
          lo = std::min(lo, det);
          hi = std::max(hi, det);
          a.formula = std::max(a.formula, std::abs(det - closed));
        }
        a.variation = std::max(a.variation, hi - lo);

        if (!(l.r < r0_of_s(l.s))) return;  // divergence only inside the fluid
        const std::array<double, 3> steps{fd_step_for(l.q), fd_step_for(l.r), fd_step_for(l.s)};
        for (const double t : times) {
          const Mat3 dv = label_derivative(
              l, [&](const LabelPoint& m) { return as_array(velocity(m, t, wave)); }, steps);
          const Mat3 grad = to_physical(dv, jacobian(l, t, wave).inverse());
          a.divergence = std::max(a.divergence, std::abs(grad[0][0] + grad[1][1] + grad[2][2]));
        }
      },
      [](Acc& out, const Acc& p) {
        out.variation = std::max(out.variation, p.variation);
        out.formula = std::max(out.formula, p.formula);
        out.divergence = std::max(out.divergence, p.divergence);
      });

  IncompressibilityCertificate cert;
  cert.max_det_time_variation = acc.variation;
  cert.max_det_formula_error = acc.formula;
  cert.max_fd_divergence = acc.divergence;
  cert.pass = acc.variation <= 1e-12 && acc.formula <= 1e-12 && acc.divergence <= 1e-6;
  return cert;
}

Vec3 required_pressure_gradient(const LabelPoint& label, double t, const WaveField& wave,
                                double rho) {
  const Vec3 a = acceleration(label, t, wave);
  const Vec3 u = velocity(label, t, wave);
  const double omega = wave.constants().omega();
  const double beta = wave.constants().beta();
  const double g = wave.constants().g();
  const double y = label.s;  // y = s along every trajectory
  return {-rho * (a.x + 2.0 * omega * u.z - beta * y * u.y),
          -rho * (a.y + beta * y * u.x),
          -rho * (a.z - 2.0 * omega * u.x + g)};
}

double euler_asymmetry_threshold(const WaveField& wave, double rho) noexcept {
  return 1e-7 * rho * wave.c() * wave.c() * wave.k() * wave.k();
}

EulerCompatibility certify_euler_compatibility(const LabelGrid& grid, const WaveField& wave,
                                               double t, double fd_step, double rho,
                                               Execution exec, const SurfaceSolverConfig& cfg) {
  grid.validate();
  if (!(wave.r0() < 0.0)) throw DomainError("Euler compatibility check requires r0 < 0");
  if (!(fd_step > 0.0)) throw DomainError("fd_step must be positive");
  if (!(rho > 0.0)) throw DomainError("rho must be positive");
  const SurfaceLabelCache r0_of_s(wave, cfg);
  struct Acc {
    double richardson = 0.0;
    double coarse = 0.0;
    double fine = 0.0;
    std::size_t points = 0;
  };
  auto field = [&](const LabelPoint& m) {
    return as_array(required_pressure_gradient(m, t, wave, rho));
  };
  const std::array<double, 3> coarse_steps{fd_step, fd_step, fd_step};
  const std::array<double, 3> fine_steps{fd_step / 2, fd_step / 2, fd_step / 2};
  const Acc acc = detail::parallel_reduce(
      grid.size(), exec.workers, Acc{},
      [&](std::size_t idx, Acc& a) {
        const LabelPoint l = grid.at(idx);
        if (!(l.r < r0_of_s(l.s))) return;
        const Jacobian3 inv = jacobian(l, t, wave).inverse();
        const Mat3 dc = label_derivative(l, field, coarse_steps);
        const Mat3 df = label_derivative(l, field, fine_steps);
        Mat3 dr{};
        for (int i = 0; i < 3; ++i) {
          for (int j = 0; j < 3; ++j) dr[i][j] = (4.0 * df[i][j] - dc[i][j]) / 3.0;
        }
        a.coarse = std::max(a.coarse, max_asymmetry(to_physical(dc, inv)));
        a.fine = std::max(a.fine, max_asymmetry(to_physical(df, inv)));
        a.richardson = std::max(a.richardson, max_asymmetry(to_physical(dr, inv)));
        ++a.points;
      },
      [](Acc& out, const Acc& p) {
        out.richardson = std::max(out.richardson, p.richardson);
        out.coarse = std::max(out.coarse, p.coarse);
        out.fine = std::max(out.fine, p.fine);
        out.points += p.points;
      });

  EulerCompatibility cert;
  cert.max_asymmetry = acc.richardson;
  cert.max_asymmetry_coarse = acc.coarse;
  cert.max_asymmetry_fine = acc.fine;
  cert.points = acc.points;
  cert.threshold = euler_asymmetry_threshold(wave, rho);
  cert.pass = acc.points > 0 && acc.richardson <= cert.threshold;
  return cert;
}

KinematicCertificate certify_kinematic_bc(const WaveField& wave, const std::vector<double>& times,
                                          const std::vector<double>& s_samples, int q_samples,
                                          const SurfaceSolverConfig& cfg) {
  if (q_samples < 1) throw DomainError("kinematic check needs q_samples >= 1");
  const double k = wave.k();
  const double L = wave.wavelength();
  KinematicCertificate cert;
  cert.threshold = 10.0 * cfg.tol;
  cert.min_interior_clearance = kInf;
  for (const double s : s_samples) {
    const double r0s = solve_r0_of_s(s, wave, cfg);
    for (int i = 0; i < q_samples; ++i) {
      const double q = L * static_cast<double>(i) / q_samples;
      for (const double t : times) {
        const PhysicalPoint p = flow_map({q, r0s, s}, t, wave);
        const double eta = surface_height_detail(p.x, s, t, r0s, wave, cfg).z;
        cert.max_surface_error = std::max(cert.max_surface_error, std::abs(p.z - eta));
        for (const double depth : {1e-2 / k, 1.0 / k}) {
          const PhysicalPoint inner = flow_map({q, r0s - depth, s}, t, wave);
          const double eta_inner = surface_height_detail(inner.x, s, t, r0s, wave, cfg).z;
          cert.min_interior_clearance = std::min(cert.min_interior_clearance, eta_inner - inner.z);
        }
      }
    }
  }
  cert.pass = cert.max_surface_error <= cert.threshold && cert.min_interior_clearance > 0.0;
  return cert;
}

CertificateReport certify(const WaveField& wave, const CertifyOptions& opts) {
  opts.grid.validate();
  opts.surface.validate();
  if (opts.time_samples < 2) throw DomainError("certify needs time_samples >= 2");
  if (opts.boundary_s_samples < 1) throw DomainError("certify needs boundary_s_samples >= 1");

  CertificateReport rep;
  rep.grid = opts.grid;
  rep.t = opts.t;

  std::vector<double> times;
  const double period = wave.period();
  for (int i = 0; i < opts.time_samples; ++i) {
    times.push_back(opts.t + period * static_cast<double>(i) / (opts.time_samples - 1));
  }
  const std::vector<double> s_samples =
      symmetric_samples(opts.grid.s_max, opts.boundary_s_samples);

  rep.jacobian = certify_jacobian(opts.grid, wave, opts.t, opts.exec);
  rep.min_jacobian_det = rep.jacobian.min_det;
  rep.max_fd_jacobian_error = rep.jacobian.max_fd_error;

  const bool interior_ok = wave.r0() < 0.0;
  if (interior_ok) {
    rep.injectivity = certify_injectivity(opts.grid, wave, opts.pair_count, opts.seed, opts.exec);
    rep.contraction_constant_operator = rep.injectivity->contraction_constant_operator;
    rep.contraction_constant_paper = rep.injectivity->contraction_constant_paper;
    rep.min_pair_ratio = rep.injectivity->min_pair_ratio;

    InversionOptions inv = opts.inversion;
    inv.surface = opts.surface;
    rep.inversion = certify_inversion(opts.grid, wave, opts.t, opts.inversion_count, opts.seed,
                                      inv, opts.exec);
    rep.max_inversion_roundtrip_error = rep.inversion->max_roundtrip_error;
  }

  rep.incompressibility = certify_incompressibility(opts.grid, wave, times, opts.exec, opts.surface);
  rep.max_det_time_variation = rep.incompressibility.max_det_time_variation;

  if (interior_ok) {
    const double h = opts.fd_step > 0.0 ? opts.fd_step : 0.01 / wave.k();
    rep.euler = certify_euler_compatibility(opts.grid, wave, opts.t, h, opts.rho, opts.exec,
                                            opts.surface);
    rep.max_gradient_asymmetry = rep.euler->max_asymmetry;
  }

  rep.kinematic =
      certify_kinematic_bc(wave, times, s_samples, opts.boundary_q_samples, opts.surface);
  rep.max_kinematic_bc_error = rep.kinematic.max_surface_error;

  rep.boundary = certify_boundary(wave, opts.t, s_samples, opts.boundary_q_samples, opts.surface);
  rep.boundary_checks_passed = rep.boundary.pass;

  rep.pass = rep.jacobian.pass && rep.injectivity && rep.injectivity->pass && rep.inversion &&
             rep.inversion->pass && rep.incompressibility.pass && rep.euler && rep.euler->pass &&
             rep.kinematic.pass && rep.boundary.pass;
  return rep;
}

}  // namespace eqwave
