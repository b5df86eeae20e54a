#include "eqwave/io.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>

namespace eqwave::io {
namespace {

// Minimal ordered JSON emitter; numbers go through format_double.
class JsonWriter {
public:
  JsonWriter& begin() {
    separator();
    buf_ << '{';
    first_ = true;
    return *this;
  }
  JsonWriter& end() {
    buf_ << '}';
    first_ = false;
    return *this;
  }
  JsonWriter& key(const char* name) {
    separator();
    buf_ << '"' << name << "\":";
    pending_value_ = true;
    return *this;
  }
  JsonWriter& number(double v) {
    separator();
    if (std::isfinite(v)) buf_ << format_double(v); else buf_ << "null";
    return *this;
  }
  JsonWriter& integer(long long v) {
    separator();
    buf_ << v;
    return *this;
  }
  JsonWriter& boolean(bool v) {
    separator();
    buf_ << (v ? "true" : "false");
    return *this;
  }
  JsonWriter& null() {
    separator();
    buf_ << "null";
    return *this;
  }
  template <class T>
  JsonWriter& optional_number(const std::optional<T>& v) {
    return v ? number(*v) : null();
  }
  std::string str() const { return buf_.str(); }

private:
  void separator() {
    if (pending_value_) {
      pending_value_ = false;
      return;
    }
    if (!first_) buf_ << ',';
    first_ = false;
  }

  std::ostringstream buf_;
  bool first_ = true;
  bool pending_value_ = false;
};

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_surface(std::ostream& out, const std::vector<SurfaceSample>& samples, Format format) {
  if (format == Format::Csv) {
    out << "t,s,q,x,y,z,r0s\n";
    for (const auto& p : samples) {
      out << format_double(p.t) << ',' << format_double(p.s) << ',' << format_double(p.q) << ','
          << format_double(p.x) << ',' << format_double(p.y) << ',' << format_double(p.z) << ','
          << format_double(p.r0s) << '\n';
    }
    return;
  }
  out << '[';
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& p = samples[i];
    JsonWriter w;
    w.begin();
    w.key("t").number(p.t).key("s").number(p.s).key("q").number(p.q);
    w.key("x").number(p.x).key("y").number(p.y).key("z").number(p.z);
    w.key("r0s").number(p.r0s);
    w.end();
    out << (i ? "," : "") << w.str();
  }
  out << "]\n";
}

void write_trajectory(std::ostream& out, const std::vector<TrajectorySample>& samples,
                      Format format) {
  if (format == Format::Csv) {
    out << "t,x,y,z,q,r,s\n";
    for (const auto& p : samples) {
      out << format_double(p.t) << ',' << format_double(p.position.x) << ','
          << format_double(p.position.y) << ',' << format_double(p.position.z) << ','
          << format_double(p.label.q) << ',' << format_double(p.label.r) << ','
          << format_double(p.label.s) << '\n';
    }
    return;
  }
  out << '[';
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& p = samples[i];
    JsonWriter w;
    w.begin();
    w.key("t").number(p.t);
    w.key("x").number(p.position.x).key("y").number(p.position.y).key("z").number(p.position.z);
    w.key("q").number(p.label.q).key("r").number(p.label.r).key("s").number(p.label.s);
    w.end();
    out << (i ? "," : "") << w.str();
  }
  out << "]\n";
}

std::string inversion_json(const InversionResult& result) {
  JsonWriter w;
  w.begin();
  w.key("q").number(result.label.q);
  w.key("r").number(result.label.r);
  w.key("s").number(result.label.s);
  w.key("iterations").integer(result.iterations);
  w.key("residual_m").number(result.residual);
  w.end();
  return w.str();
}

std::string report_json(const CertificateReport& rep) {
  const LabelGrid& g = rep.grid;
  JsonWriter w;
  w.begin();
  w.key("grid").begin();
  w.key("q_count").integer(g.q_count).key("r_count").integer(g.r_count);
  w.key("s_count").integer(g.s_count);
  w.key("q_min").number(0.0).key("q_max").number(g.q_max);
  w.key("r_min").number(g.r_min).key("r_max").number(g.r_max);
  w.key("s_min").number(-g.s_max).key("s_max").number(g.s_max);
  w.key("t").number(rep.t);
  w.end();
  w.key("min_jacobian_det").number(rep.min_jacobian_det);
  w.key("max_fd_jacobian_error").number(rep.max_fd_jacobian_error);
  w.key("contraction_constant_operator").optional_number(rep.contraction_constant_operator);
  w.key("contraction_constant_paper").optional_number(rep.contraction_constant_paper);
  w.key("min_pair_ratio").optional_number(rep.min_pair_ratio);
  w.key("max_inversion_roundtrip_error").optional_number(rep.max_inversion_roundtrip_error);
  w.key("max_det_time_variation").number(rep.max_det_time_variation);
  w.key("max_gradient_asymmetry").optional_number(rep.max_gradient_asymmetry);
  w.key("max_kinematic_bc_error").number(rep.max_kinematic_bc_error);
  w.key("boundary_checks_passed").boolean(rep.boundary_checks_passed);
  w.key("pass").boolean(rep.pass);

  w.key("details").begin();
  const auto& jac = rep.jacobian;
  w.key("jacobian").begin();
  w.key("min_det_q").number(jac.argmin.q).key("min_det_r").number(jac.argmin.r);
  w.key("min_det_s").number(jac.argmin.s);
  w.key("nonpositive_count").integer(static_cast<long long>(jac.nonpositive_count));
  w.key("degeneracy_at_equator_only").boolean(jac.degeneracy_at_equator_only);
  w.key("pass").boolean(jac.pass);
  w.end();
  w.key("injectivity");
  if (rep.injectivity) {
    const auto& inj = *rep.injectivity;
    w.begin();
    w.key("pairs").integer(static_cast<long long>(inj.pairs));
    w.key("degenerate_pairs").integer(static_cast<long long>(inj.degenerate_pairs));
    w.key("operator_bound_violations").integer(static_cast<long long>(inj.operator_bound_violations));
    w.key("squared_bound_violations").integer(static_cast<long long>(inj.squared_bound_violations));
    w.key("min_operator_margin").number(inj.min_operator_margin);
    w.key("pass").boolean(inj.pass);
    w.end();
  } else {
    w.null();
  }
  w.key("inversion");
  if (rep.inversion) {
    const auto& inv = *rep.inversion;
    w.begin();
    w.key("samples").integer(static_cast<long long>(inv.samples));
    w.key("max_iterations").integer(inv.max_iterations);
    w.key("max_contraction_excess").number(inv.max_contraction_excess);
    w.key("pass").boolean(inv.pass);
    w.end();
  } else {
    w.null();
  }
  const auto& inc = rep.incompressibility;
  w.key("incompressibility").begin();
  w.key("max_det_formula_error").number(inc.max_det_formula_error);
  w.key("max_fd_divergence").number(inc.max_fd_divergence);
  w.key("pass").boolean(inc.pass);
  w.end();
  w.key("euler");
  if (rep.euler) {
    const auto& eu = *rep.euler;
    w.begin();
    w.key("max_asymmetry_coarse").number(eu.max_asymmetry_coarse);
    w.key("max_asymmetry_fine").number(eu.max_asymmetry_fine);
    w.key("threshold").number(eu.threshold);
    w.key("points").integer(static_cast<long long>(eu.points));
    w.key("pass").boolean(eu.pass);
    w.end();
  } else {
    w.null();
  }
  const auto& kin = rep.kinematic;
  w.key("kinematic_bc").begin();
  w.key("min_interior_clearance").number(kin.min_interior_clearance);
  w.key("threshold").number(kin.threshold);
  w.key("pass").boolean(kin.pass);
  w.end();
  const auto& bnd = rep.boundary;
  w.key("boundary").begin();
  w.key("max_edge_error").number(bnd.max_edge_error);
  w.key("max_crest_excess").number(bnd.max_crest_excess);
  w.key("max_surface_error").number(bnd.max_surface_error);
  w.key("cusp_points").integer(static_cast<long long>(bnd.cusp_points));
  w.end();
  w.end();

  w.end();
  return w.str() + "\n";
}

}  // namespace eqwave::io
