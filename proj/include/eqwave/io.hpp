#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "eqwave/certifier.hpp"

namespace eqwave::io {

/// Shortest-independent, locale-free decimal with 17 significant digits.
/// Parsing the result with strtod and formatting again gives the same bytes.
std::string format_double(double value);

struct TrajectorySample {
  double t = 0.0;
  PhysicalPoint position{};
  LabelPoint label{};
};

enum class Format { Csv, Json };

/// Header t,s,q,x,y,z,r0s; LF line endings.
void write_surface(std::ostream& out, const std::vector<SurfaceSample>& samples, Format format);

/// Header t,x,y,z,q,r,s.
void write_trajectory(std::ostream& out, const std::vector<TrajectorySample>& samples,
                      Format format);

/// {"q", "r", "s", "iterations", "residual_m"}
std::string inversion_json(const InversionResult& result);

/// CertificateReport fields in declaration order followed by a "details" object.
std::string report_json(const CertificateReport& report);

}  // namespace eqwave::io
