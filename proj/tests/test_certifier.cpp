#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "eqwave/certifier.hpp"
#include "eqwave/errors.hpp"
#include "oracles.hpp"

using namespace eqwave;
using std::numbers::pi;

namespace {

const WaveField kWave(0.01, -1.0);

LabelGrid small_grid(const WaveField& wave) {
  LabelGrid g = LabelGrid::standard(wave, 16, 8, 9);
  g.s_max = 5e5;
  return g;
}

std::vector<double> period_times(const WaveField& wave, int n) {
  std::vector<double> ts;
  for (int i = 0; i < n; ++i) ts.push_back(wave.period() * i / (n - 1));
  return ts;
}

}  // namespace

TEST_SUITE("certifier") {

TEST_CASE("label grid layout") {
  const LabelGrid g = LabelGrid::standard(kWave, 4, 3, 5);
  CHECK(g.q(0) == 0.0);
  CHECK(g.q(3) == doctest::Approx(2.0 * pi / 0.01).epsilon(1e-15));
  CHECK(g.r(0) == doctest::Approx(-301.0));
  CHECK(g.r(2) == -1.0);
  CHECK(g.s(2) == 0.0);
  CHECK(g.s(0) == -g.s(4));
  CHECK(g.size() == 60u);
  const LabelPoint last = g.at(59);
  CHECK(last.q == g.q(3));
  CHECK(last.r == g.r(2));
  CHECK(last.s == g.s(4));
  const LabelPoint second = g.at(1);
  CHECK(second.q == g.q(1));
  CHECK(second.r == g.r(0));
}

TEST_CASE("label grid validation") {
  LabelGrid g = LabelGrid::standard(kWave, 4, 3, 5);
  g.q_count = 1;
  CHECK_THROWS_AS(g.validate(), DomainError);
  g = LabelGrid::standard(kWave, 4, 3, 5);
  g.r_min = g.r_max;
  CHECK_THROWS_AS(g.validate(), DomainError);
  g = LabelGrid::standard(kWave, 4, 3, 5);
  g.s_max = -1.0;
  CHECK_THROWS_AS(g.validate(), DomainError);
}

TEST_CASE("trapping width decays the orbit to one percent") {
  const double w = trapping_width(kWave);
  CHECK(std::exp(-kWave.k() * decay_f(w, kWave)) == doctest::Approx(0.01).epsilon(1e-12));
  // Without the beta effect there is no trapping; one wavelength is used.
  const WaveField flat(0.01, -1.0, PhysicalConstants::with_beta(7.3e-5, 9.8, 6.378e6, 0.0));
  CHECK(trapping_width(flat) == doctest::Approx(flat.wavelength()));
}

TEST_CASE("counter-based uniform draws") {
  double sum = 0.0;
  for (std::uint64_t i = 0; i < 20000; ++i) {
    const double u = uniform01(7, 3, i);
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / 20000 == doctest::Approx(0.5).epsilon(0.02));
  CHECK(uniform01(7, 3, 11) == uniform01(7, 3, 11));
  CHECK(uniform01(7, 3, 11) != uniform01(7, 4, 11));
  CHECK(uniform01(7, 3, 11) != uniform01(8, 3, 11));
}

TEST_CASE("Jacobian certificate on a subsurface grid") {
  const LabelGrid g = small_grid(kWave);
  const JacobianCertificate cert = certify_jacobian(g, kWave, 0.0);
  CHECK(cert.pass);
  CHECK(cert.nonpositive_count == 0u);
  CHECK(cert.max_fd_error <= 1e-6);
  // The smallest determinant sits at the top of the equatorial column.
  CHECK(cert.min_det == doctest::Approx(-std::expm1(-0.02)).epsilon(1e-12));
  CHECK(cert.argmin.r == -1.0);
  CHECK(cert.argmin.s == 0.0);
  CHECK(cert.min_det >= -std::expm1(2.0 * kWave.k() * kWave.r0()) * (1.0 - 1e-12));
}

TEST_CASE("Jacobian certificate localizes the r0 = 0 degeneracy") {
  const WaveField wave(0.01, 0.0);
  const LabelGrid g = small_grid(wave);
  const JacobianCertificate cert = certify_jacobian(g, wave, 0.0);
  CHECK_FALSE(cert.pass);
  CHECK(cert.min_det == 0.0);
  CHECK(cert.argmin.r == 0.0);
  CHECK(cert.argmin.s == 0.0);
  CHECK(cert.nonpositive_count == static_cast<std::size_t>(g.q_count));
  CHECK(cert.degeneracy_at_equator_only);
}

TEST_CASE("Jacobian certificate does not depend on time") {
  const LabelGrid g = small_grid(kWave);
  const JacobianCertificate a = certify_jacobian(g, kWave, 0.0);
  const JacobianCertificate b = certify_jacobian(g, kWave, 0.37 * kWave.period());
  CHECK(a.min_det == b.min_det);
  CHECK(b.max_fd_error <= 1e-6);
}

TEST_CASE("injectivity: operator bound holds on random same-latitude pairs") {
  const LabelGrid g = small_grid(kWave);
  const InjectivityCertificate cert = certify_injectivity(g, kWave, 20000, 3);
  CHECK(cert.pass);
  CHECK(cert.operator_bound_violations == 0u);
  CHECK(cert.min_operator_margin >= 0.0);
  CHECK(cert.contraction_constant_operator == doctest::Approx(std::exp(-0.01)));
  CHECK(cert.contraction_constant_paper == doctest::Approx(std::exp(-0.02)));
  CHECK(cert.min_pair_ratio > 1.0 - cert.contraction_constant_operator);
  // The stronger squared bound is not a theorem; nearby pairs near the
  // surface routinely break it.
  CHECK(cert.squared_bound_violations > 0u);
}

TEST_CASE("injectivity: deep pairs map almost isometrically") {
  LabelGrid g = small_grid(kWave);
  g.r_min = -3000.0;
  g.r_max = -2000.0;
  const InjectivityCertificate cert = certify_injectivity(g, kWave, 5000, 9);
  CHECK(cert.pass);
  CHECK(cert.min_pair_ratio >= 1.0 - 2.1e-9);
}

TEST_CASE("injectivity: coincident labels are skipped, not divided") {
  LabelGrid g = small_grid(kWave);
  // Cell so small that draws collapse onto the same double.
  g.q_max = std::numeric_limits<double>::denorm_min();
  g.r_min = -std::numeric_limits<double>::denorm_min();
  g.r_max = 0.0;
  const InjectivityCertificate cert = certify_injectivity(g, kWave, 1000, 1);
  CHECK(cert.degenerate_pairs > 0u);
  CHECK(cert.operator_bound_violations == 0u);
  CHECK(std::isfinite(cert.min_pair_ratio));
}

TEST_CASE("injectivity requires r0 < 0") {
  const WaveField wave(0.01, 0.0);
  CHECK_THROWS_AS(certify_injectivity(small_grid(wave), wave, 10, 1), DomainError);
}

TEST_CASE("no-collision witness: distinct labels stay apart") {
  // Same-latitude particles never meet: the lower bound times the label
  // distance is a positive separation at every time.
  oracle::Gen gen(17);
  const WaveField wave(0.01, -1.0);
  for (int n = 0; n < 2000; ++n) {
    const double s = gen.uniform(-5e5, 5e5);
    const double r0s = solve_r0_of_s(s, wave);
    const LabelPoint a{gen.uniform(0, wave.wavelength()), gen.uniform(r0s - 300, r0s), s};
    const LabelPoint b{gen.uniform(0, wave.wavelength()), gen.uniform(r0s - 300, r0s), s};
    const double dist = std::hypot(a.q - b.q, a.r - b.r);
    const double bound =
        -std::expm1(wave.k() * (std::max(a.r, b.r) - decay_f(s, wave))) * dist;
    for (double frac : {0.0, 0.21, 0.5, 0.93}) {
      const double t = frac * wave.period();
      const PhysicalPoint pa = flow_map(a, t, wave);
      const PhysicalPoint pb = flow_map(b, t, wave);
      REQUIRE(std::hypot(pa.x - pb.x, pa.z - pb.z) >= bound * (1.0 - 1e-9));
    }
  }
}

TEST_CASE("inversion round trip and reported diagnostics") {
  oracle::Gen gen(5);
  for (int n = 0; n < 300; ++n) {
    const double s = gen.uniform(-5e5, 5e5);
    const double r0s = solve_r0_of_s(s, kWave);
    const LabelPoint l{gen.uniform(0, kWave.wavelength()), gen.uniform(r0s - 300, r0s), s};
    const double t = gen.uniform(0, kWave.period());
    const InversionResult res = invert_map(flow_map(l, t, kWave), t, kWave);
    REQUIRE(res.label.s == s);
    const double err = std::hypot(res.label.q - l.q, res.label.r - l.r);
    REQUIRE(err <= 1e-10);
    REQUIRE(res.residual <= 1e-10);
    REQUIRE(res.label.r <= r0s);
    REQUIRE(res.contraction_bound == doctest::Approx(std::exp(0.01 * (r0s - decay_f(s, kWave)))));
    REQUIRE(res.observed_contraction <= res.contraction_bound + 1e-3);
  }
}

TEST_CASE("inversion: deep points resolve in one or two steps") {
  const LabelPoint l{123.0, -3500.0, 0.0};
  const InversionResult res = invert_map(flow_map(l, 0.0, kWave), 0.0, kWave);
  CHECK(res.iterations <= 2);
  CHECK(std::abs(res.label.q - l.q) <= 1e-10);
  CHECK(std::abs(res.label.r - l.r) <= 1e-10);
}

TEST_CASE("inversion: iteration count follows the contraction rate") {
  // At r0 = -1 the factor is exp(-0.01): fixed-point steps shrink
  // geometrically at that rate and no Newton steps are needed.
  for (double q : {0.0, 1.0, 150.0, 314.0}) {
    const LabelPoint l{q, -1.0, 0.0};
    const InversionResult res = invert_map(flow_map(l, 0.0, kWave), 0.0, kWave);
    const double lambda = res.contraction_bound;
    CHECK(res.newton_steps == 0);
    if (res.initial_residual == 0.0) {
      CHECK(res.iterations == 0);  // the starting guess is exact at the crest
      continue;
    }
    const double bound =
        std::ceil(std::log(1e-11 * (1.0 - lambda) / res.initial_residual) / std::log(lambda)) + 2;
    CHECK(res.iterations <= bound);
    // log |step| decreases at least at the contraction rate.
    const auto& h = res.step_history;
    for (std::size_t i = 1; i < h.size(); ++i) {
      if (h[i] < 1e-9) break;
      REQUIRE(h[i] <= h[i - 1] * (lambda + 1e-3));
    }
  }
}

TEST_CASE("inversion near the cusp switches to the nested solve") {
  const WaveField wave(0.01, -1e-6);
  for (double q : {0.05, 0.5, 5.0, 50.0, 400.0}) {
    for (double depth : {0.0, 1e-3, 1.0}) {
      const LabelPoint l{q, wave.r0() - depth, 0.0};
      const InversionResult res = invert_map(flow_map(l, 0.0, wave), 0.0, wave);
      CHECK(res.residual <= 1e-10);
      CHECK(res.label.r <= wave.r0());
      // det DF = 1 - lam^2 ~ 2e-8 on the surface line: the smallest singular
      // value is that small, so label accuracy there is round-off / 2e-8.
      const double allowed = depth == 0.0 ? 1e-6 : 1e-10 / (0.01 * depth) + 1e-10;
      CHECK(std::hypot(res.label.q - l.q, res.label.r - l.r) <= allowed);
    }
  }
  const InversionResult res = invert_map(flow_map({5.0, -0.5, 0.0}, 0.0, wave), 0.0, wave);
  CHECK(res.newton_steps > 0);
}

TEST_CASE("inversion rejects points above the surface") {
  const PhysicalPoint crest = flow_map({0.0, -1.0, 0.0}, 0.0, kWave);
  CHECK_THROWS_AS(invert_map({crest.x, 0.0, crest.z + 1e-3}, 0.0, kWave), OutOfDomainError);
  CHECK_THROWS_AS(invert_map({0.0, 0.0, 200.0}, 0.0, kWave), OutOfDomainError);
  // The crest itself is in the domain.
  CHECK_NOTHROW(invert_map(crest, 0.0, kWave));
}

TEST_CASE("inversion reports the iteration cap") {
  const LabelPoint l{40.0, -1.0, 0.0};
  InversionOptions opts;
  opts.max_iter = 3;
  CHECK_THROWS_AS(invert_map(flow_map(l, 0.0, kWave), 0.0, kWave, opts), ConvergenceError);
}

TEST_CASE("inversion certificate") {
  const LabelGrid g = small_grid(kWave);
  const InversionCertificate cert = certify_inversion(g, kWave, 12.5, 500, 4);
  CHECK(cert.pass);
  CHECK(cert.samples == 500u);
  CHECK(cert.max_roundtrip_error <= 1e-10);
  CHECK(cert.max_contraction_excess <= 1e-3);
}

TEST_CASE("boundary certificate") {
  const std::vector<double> s_samples{-5e5, -1e5, 0.0, 2e5};
  for (double t : {0.0, 7.0, kWave.period()}) {
    const BoundaryCertificate cert = certify_boundary(kWave, t, s_samples, 32);
    CHECK(cert.pass);
    CHECK(cert.max_edge_error <= 1e-9);
    CHECK(cert.max_crest_excess <= 1e-9);
    CHECK(cert.cusp_points == 0u);
  }
  const WaveField cusped(0.01, 0.0);
  const BoundaryCertificate c0 = certify_boundary(cusped, 0.0, {0.0, 1e5}, 32);
  CHECK(c0.cusp_points > 0u);
}

TEST_CASE("incompressibility certificate") {
  const LabelGrid g = small_grid(kWave);
  const IncompressibilityCertificate cert =
      certify_incompressibility(g, kWave, period_times(kWave, 4));
  CHECK(cert.pass);
  CHECK(cert.max_det_time_variation <= 1e-12);
  CHECK(cert.max_det_formula_error <= 1e-12);
  CHECK(cert.max_fd_divergence <= 1e-6);
}

TEST_CASE("Euler compatibility: the exact wave admits a pressure") {
  const double rho = 1000.0;
  const LabelGrid g = small_grid(kWave);
  const EulerCompatibility e = certify_euler_compatibility(g, kWave, 0.0, 1.0, rho);
  const double c = kWave.c();
  CHECK(e.pass);
  CHECK(e.points > 0u);
  CHECK(e.max_asymmetry <= 1e-6 * c * c * kWave.k() * rho);
  CHECK(e.threshold == euler_asymmetry_threshold(kWave, rho));
  // Plain central differences are truncation dominated: halving h quarters them.
  CHECK(e.max_asymmetry_coarse / e.max_asymmetry_fine == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("Euler compatibility: beta = 0 reduces to the Gerstner balance") {
  const WaveField flat(0.01, -1.0, PhysicalConstants::with_beta(7.3e-5, 9.8, 6.378e6, 0.0));
  const LabelGrid g = small_grid(flat);
  const EulerCompatibility e = certify_euler_compatibility(g, flat, 3.0, 1.0);
  CHECK(e.pass);
}

TEST_CASE("Euler compatibility: a wrong phase speed is detected") {
  const LabelGrid g = small_grid(kWave);
  const EulerCompatibility good = certify_euler_compatibility(g, kWave, 0.0, 1.0);
  const WaveField bad = kWave.with_phase_speed(1.01 * kWave.c());
  const EulerCompatibility wrong = certify_euler_compatibility(g, bad, 0.0, 1.0);
  CHECK_FALSE(wrong.pass);
  CHECK(wrong.max_asymmetry >= 10.0 * good.max_asymmetry);
}

TEST_CASE("required pressure gradient is hydrostatic at depth") {
  const double rho = 1000.0;
  const Vec3 grad = required_pressure_gradient({10.0, -5000.0, 0.0}, 0.0, kWave, rho);
  CHECK(std::abs(grad.x) < 1e-12 * rho * 9.8);
  CHECK(std::abs(grad.y) < 1e-12 * rho * 9.8);
  CHECK(grad.z == doctest::Approx(-rho * 9.8).epsilon(1e-12));
  const Vec3 twice = required_pressure_gradient({10.0, -1.0, 1e5}, 2.0, kWave, 2.0 * rho);
  const Vec3 once = required_pressure_gradient({10.0, -1.0, 1e5}, 2.0, kWave, rho);
  CHECK(twice.z == doctest::Approx(2.0 * once.z));
}

TEST_CASE("kinematic boundary condition") {
  const KinematicCertificate cert =
      certify_kinematic_bc(kWave, period_times(kWave, 5), {-5e5, 0.0, 3e5}, 24);
  CHECK(cert.pass);
  CHECK(cert.max_surface_error <= 10.0 * cert.threshold);
  CHECK(cert.min_interior_clearance > 0.0);
}

TEST_CASE("composite certify is independent of the worker count") {
  CertifyOptions opts;
  opts.grid = small_grid(kWave);
  opts.pair_count = 3000;
  opts.inversion_count = 200;
  opts.boundary_q_samples = 16;
  opts.boundary_s_samples = 3;
  const CertificateReport one = certify(kWave, opts);
  opts.exec.workers = 4;
  const CertificateReport four = certify(kWave, opts);
  CHECK(one.pass);
  CHECK(one.min_jacobian_det == four.min_jacobian_det);
  CHECK(one.max_fd_jacobian_error == four.max_fd_jacobian_error);
  CHECK(*one.min_pair_ratio == *four.min_pair_ratio);
  CHECK(*one.max_inversion_roundtrip_error == *four.max_inversion_roundtrip_error);
  CHECK(*one.max_gradient_asymmetry == *four.max_gradient_asymmetry);
  CHECK(one.max_det_time_variation == four.max_det_time_variation);
}

TEST_CASE("composite certify at r0 = 0 fails and skips the r0 < 0 checks") {
  const WaveField wave(0.01, 0.0);
  CertifyOptions opts;
  opts.grid = small_grid(wave);
  opts.boundary_q_samples = 16;
  opts.boundary_s_samples = 3;
  const CertificateReport rep = certify(wave, opts);
  CHECK_FALSE(rep.pass);
  CHECK(rep.min_jacobian_det == 0.0);
  CHECK_FALSE(rep.injectivity.has_value());
  CHECK_FALSE(rep.min_pair_ratio.has_value());
  CHECK_FALSE(rep.max_gradient_asymmetry.has_value());
}

}  // TEST_SUITE
