#include "eqwave/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <memory>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "eqwave/certifier.hpp"
#include "eqwave/errors.hpp"
#include "eqwave/io.hpp"

namespace eqwave {
namespace {

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct WaveOptions {
  double k = 0.01;
  double r0 = -1.0;
  std::optional<double> omega;
  std::optional<double> g;
  std::optional<double> beta;
  std::optional<double> earth_radius;
  std::optional<double> c;

  void add_to(CLI::App& app, bool with_r0 = true) {
    app.add_option("--k", k, "wave number, 1/m")->capture_default_str();
    if (with_r0) app.add_option("--r0", r0, "reference surface label, m (<= 0)")->capture_default_str();
    app.add_option("--omega", omega, "rotation rate, rad/s");
    app.add_option("--g", g, "gravitational acceleration, m/s^2");
    app.add_option("--beta", beta, "beta-plane parameter, 1/(m s); default 2 omega / R");
    app.add_option("--R", earth_radius, "earth radius, m");
    app.add_option("--c", c, "phase speed override, m/s (breaks the dispersion relation)");
  }

  PhysicalConstants constants() const {
    const double om = omega.value_or(PhysicalConstants::kDefaultOmega);
    const double gg = g.value_or(PhysicalConstants::kDefaultG);
    const double rr = earth_radius.value_or(PhysicalConstants::kDefaultEarthRadius);
    if (beta) return PhysicalConstants::with_beta(om, gg, rr, *beta);
    return PhysicalConstants(om, gg, rr);
  }

  WaveField wave() const {
    WaveField w(k, r0, constants());
    return c ? w.with_phase_speed(*c) : w;
  }
};

io::Format parse_format(const std::string& name) {
  if (name == "csv") return io::Format::Csv;
  if (name == "json") return io::Format::Json;
  throw DomainError("unknown format '" + name + "' (expected csv or json)");
}

// Writes to `path`, or to `fallback` when the path is empty.
template <class Fn>
void emit(const std::string& path, std::ostream& fallback, Fn write) {
  if (path.empty()) {
    write(fallback);
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  write(file);
  file.flush();
  if (!file) throw IoError("write to '" + path + "' failed");
}

void parse_grid(const std::string& spec, LabelGrid& grid) {
  int counts[3];
  const char* p = spec.data();
  const char* end = spec.data() + spec.size();
  for (int i = 0; i < 3; ++i) {
    const auto res = std::from_chars(p, end, counts[i]);
    if (res.ec != std::errc()) throw DomainError("malformed --grid '" + spec + "'");
    p = res.ptr;
    if (i < 2) {
      if (p == end || *p != 'x') throw DomainError("malformed --grid '" + spec + "'");
      ++p;
    }
  }
  if (p != end) throw DomainError("malformed --grid '" + spec + "'");
  grid.q_count = counts[0];
  grid.r_count = counts[1];
  grid.s_count = counts[2];
}

void add_solver_options(CLI::App& app, SurfaceSolverConfig& cfg) {
  app.add_option("--tol", cfg.tol, "surface solver tolerance, m")->capture_default_str();
  app.add_option("--max-iter", cfg.max_iter, "surface solver iteration cap")->capture_default_str();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Equatorially trapped Gerstner-type waves: flow map, surface and certificates",
               "eqwave"};
  app.require_subcommand(1);

  // dispersion
  WaveOptions disp_wave;
  auto* disp = app.add_subcommand("dispersion", "print phase speed c and wavelength L");
  disp_wave.add_to(*disp, false);

  // surface
  WaveOptions surf_wave;
  SurfaceSolverConfig surf_cfg;
  double surf_t = 0.0;
  std::optional<double> surf_s_max;
  int surf_s_count = 9;
  int surf_q_count = 65;
  std::string surf_out, surf_format = "csv";
  auto* surf = app.add_subcommand("surface", "sample the free surface (s outer, q inner)");
  surf_wave.add_to(*surf);
  add_solver_options(*surf, surf_cfg);
  surf->add_option("--t", surf_t, "time, s")->capture_default_str();
  surf->add_option("--s-max", surf_s_max, "latitude half-width, m; default: trapping width");
  surf->add_option("--s-count", surf_s_count, "latitudes in [-s_max, s_max]")->capture_default_str();
  surf->add_option("--q-count", surf_q_count, "zonal labels in [0, 2 pi/k]")->capture_default_str();
  surf->add_option("--out", surf_out, "output file; stdout when omitted");
  surf->add_option("--format", surf_format, "csv | json")->capture_default_str();

  // trajectory
  WaveOptions traj_wave;
  LabelPoint traj_label{0.0, -1.0, 0.0};
  double traj_t0 = 0.0;
  std::optional<double> traj_t1;
  double traj_periods = 1.0;
  int traj_samples = 101;
  std::string traj_out, traj_format = "csv";
  auto* traj = app.add_subcommand("trajectory", "sample one particle path");
  traj_wave.add_to(*traj);
  traj->add_option("--q", traj_label.q, "zonal label, m")->capture_default_str();
  traj->add_option("--r", traj_label.r, "vertical label, m")->capture_default_str();
  traj->add_option("--s", traj_label.s, "meridional label, m")->capture_default_str();
  traj->add_option("--t0", traj_t0, "start time, s")->capture_default_str();
  auto* t1_opt = traj->add_option("--t1", traj_t1, "end time, s");
  traj->add_option("--periods", traj_periods, "end time as t0 + N 2 pi/(k c)")
      ->capture_default_str()
      ->excludes(t1_opt);
  traj->add_option("--samples", traj_samples, "rows, endpoints included")->capture_default_str();
  traj->add_option("--out", traj_out, "output file; stdout when omitted");
  traj->add_option("--format", traj_format, "csv | json")->capture_default_str();

  // invert
  WaveOptions inv_wave;
  InversionOptions inv_opts;
  PhysicalPoint inv_p;
  double inv_t = 0.0;
  std::string inv_out;
  auto* inv = app.add_subcommand("invert", "recover the label of a physical point");
  inv_wave.add_to(*inv);
  inv->add_option("--x", inv_p.x, "zonal position, m")->required();
  inv->add_option("--y", inv_p.y, "meridional position, m")->required();
  inv->add_option("--z", inv_p.z, "vertical position, m")->required();
  inv->add_option("--t", inv_t, "time, s")->capture_default_str();
  inv->add_option("--tol", inv_opts.tol, "residual tolerance, m")->capture_default_str();
  inv->add_option("--max-iter", inv_opts.max_iter, "iteration cap")->capture_default_str();
  inv->add_option("--out", inv_out, "output file; stdout when omitted");

  // certify
  WaveOptions cert_wave;
  CertifyOptions cert_opts;
  std::string cert_grid = "64x32x33", cert_out;
  std::optional<double> cert_r_min, cert_s_max;
  unsigned cert_workers = 1;
  auto* cert = app.add_subcommand("certify", "run all diffeomorphism certificates");
  cert_wave.add_to(*cert);
  add_solver_options(*cert, cert_opts.surface);
  cert->add_option("--grid", cert_grid, "NQxNRxNS")->capture_default_str();
  cert->add_option("--r-min", cert_r_min, "deepest label, m; default r0 - 3/k");
  cert->add_option("--s-max", cert_s_max, "latitude half-width, m; default: trapping width");
  cert->add_option("--t", cert_opts.t, "time, s")->capture_default_str();
  cert->add_option("--pairs", cert_opts.pair_count, "injectivity pairs")->capture_default_str();
  cert->add_option("--inversions", cert_opts.inversion_count, "round-trip samples")
      ->capture_default_str();
  cert->add_option("--seed", cert_opts.seed, "RNG seed")->capture_default_str();
  cert->add_option("--fd-step", cert_opts.fd_step, "Euler check FD step, m; 0 selects 0.01/k")
      ->capture_default_str();
  cert->add_option("--rho", cert_opts.rho, "density, kg/m^3")->capture_default_str();
  cert->add_option("--workers", cert_workers, "sweep threads")->capture_default_str();
  cert->add_option("--out", cert_out, "output file; stdout when omitted");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }

  try {
    if (disp->parsed()) {
      const PhysicalConstants constants = disp_wave.constants();
      const double c = disp_wave.c ? *disp_wave.c : dispersion_speed(disp_wave.k, constants);
      if (!(disp_wave.k > 0.0)) throw DomainError("wave number k must be finite and positive");
      out << "c_m_per_s=" << io::format_double(c) << '\n';
      out << "L_m=" << io::format_double(2.0 * std::numbers::pi / disp_wave.k) << '\n';
      return kExitOk;
    }

    if (surf->parsed()) {
      const WaveField wave = surf_wave.wave();
      surf_cfg.validate();
      if (surf_s_count < 1 || surf_q_count < 2) throw DomainError("need s-count >= 1, q-count >= 2");
      LabelGrid lat;
      lat.s_count = surf_s_count;
      lat.s_max = surf_s_max.value_or(trapping_width(wave));
      if (!(lat.s_max >= 0.0)) throw DomainError("s-max must be >= 0");
      const SurfaceLabelCache r0_of_s(wave, surf_cfg);
      std::vector<SurfaceSample> samples;
      for (int l = 0; l < surf_s_count; ++l) {
        const double s = surf_s_count == 1 ? 0.0 : lat.s(l);
        const double r0s = r0_of_s(s);
        for (int i = 0; i < surf_q_count; ++i) {
          const double q = i == surf_q_count - 1
                               ? wave.wavelength()
                               : wave.wavelength() * static_cast<double>(i) / (surf_q_count - 1);
          const PhysicalPoint p = flow_map({q, r0s, s}, surf_t, wave);
          samples.push_back({surf_t, s, q, p.x, p.y, p.z, r0s});
        }
      }
      const io::Format format = parse_format(surf_format);
      emit(surf_out, out, [&](std::ostream& os) { io::write_surface(os, samples, format); });
      return kExitOk;
    }

    if (traj->parsed()) {
      const WaveField wave = traj_wave.wave();
      if (!(traj_label.r <= wave.r0())) throw DomainError("label outside the domain r <= r0");
      if (traj_samples < 2) throw DomainError("need samples >= 2");
      const double t1 = traj_t1.value_or(traj_t0 + traj_periods * wave.period());
      std::vector<io::TrajectorySample> rows;
      for (int i = 0; i < traj_samples; ++i) {
        const double t = i == traj_samples - 1
                             ? t1
                             : traj_t0 + (t1 - traj_t0) * static_cast<double>(i) / (traj_samples - 1);
        rows.push_back({t, flow_map(traj_label, t, wave), traj_label});
      }
      const io::Format format = parse_format(traj_format);
      emit(traj_out, out, [&](std::ostream& os) { io::write_trajectory(os, rows, format); });
      return kExitOk;
    }

    if (inv->parsed()) {
      const WaveField wave = inv_wave.wave();
      const InversionResult res = invert_map(inv_p, inv_t, wave, inv_opts);
      emit(inv_out, out, [&](std::ostream& os) { os << io::inversion_json(res) << '\n'; });
      return kExitOk;
    }

    if (cert->parsed()) {
      const WaveField wave = cert_wave.wave();
      LabelGrid grid = LabelGrid::standard(wave, 2, 2, 2);
      parse_grid(cert_grid, grid);
      if (cert_r_min) grid.r_min = *cert_r_min;
      if (cert_s_max) grid.s_max = *cert_s_max;
      grid.validate();
      cert_opts.grid = grid;
      cert_opts.exec.workers = cert_workers;
      const CertificateReport rep = certify(wave, cert_opts);
      emit(cert_out, out, [&](std::ostream& os) { os << io::report_json(rep); });
      return rep.pass ? kExitOk : kExitCertificationFailed;
    }
  } catch (const OutOfDomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitOutOfDomain;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIoError;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << " (residual " << io::format_double(e.residual()) << ")\n";
    return kExitCertificationFailed;
  }
  return kExitConfigError;
}

}  // namespace eqwave
