#include <cmath>
#include <limits>

#include "eqwave/certifier.hpp"
#include "eqwave/errors.hpp"

namespace eqwave {
namespace {

double linspace(double lo, double hi, int count, int i) noexcept {
  if (i == count - 1) return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
}

}  // namespace

double trapping_width(const WaveField& wave) {
  const double beta = wave.constants().beta();
  if (beta == 0.0) return wave.wavelength();  // no trapping; one wavelength either side
  // k f(s) = ln 100
  const double f_target = std::log(100.0) / wave.k();
  return std::sqrt(2.0 * wave.constants().g() * f_target / (wave.c() * beta));
}

LabelGrid LabelGrid::standard(const WaveField& wave, int q_count, int r_count, int s_count) {
  LabelGrid grid;
  grid.q_count = q_count;
  grid.r_count = r_count;
  grid.s_count = s_count;
  grid.q_max = wave.wavelength();
  grid.r_max = wave.r0();
  grid.r_min = wave.r0() - 3.0 / wave.k();
  grid.s_max = trapping_width(wave);
  grid.validate();
  return grid;
}

void LabelGrid::validate() const {
  if (q_count < 2 || r_count < 2 || s_count < 2) {
    throw DomainError("label grid counts must all be >= 2");
  }
  if (!(q_max > 0.0 && std::isfinite(q_max))) throw DomainError("label grid q range is empty");
  if (!(r_min < r_max && std::isfinite(r_min) && std::isfinite(r_max))) {
    throw DomainError("label grid needs r_min < r_max");
  }
  if (!(s_max >= 0.0 && std::isfinite(s_max))) throw DomainError("label grid needs s_max >= 0");
}

double LabelGrid::q(int i) const noexcept { return linspace(0.0, q_max, q_count, i); }
double LabelGrid::r(int j) const noexcept { return linspace(r_min, r_max, r_count, j); }

double LabelGrid::s(int l) const noexcept {
  // Symmetric by construction so that odd counts hit s = 0 exactly.
  const int mirror = s_count - 1 - l;
  if (l == mirror) return 0.0;
  if (l > mirror) return -s(mirror);
  return linspace(-s_max, s_max, s_count, l);
}

std::size_t LabelGrid::size() const noexcept {
  return static_cast<std::size_t>(q_count) * static_cast<std::size_t>(r_count) *
         static_cast<std::size_t>(s_count);
}

LabelPoint LabelGrid::at(std::size_t index) const noexcept {
  const auto nq = static_cast<std::size_t>(q_count);
  const auto nr = static_cast<std::size_t>(r_count);
  const int i = static_cast<int>(index % nq);
  const int j = static_cast<int>((index / nq) % nr);
  const int l = static_cast<int>(index / (nq * nr));
  return {q(i), r(j), s(l)};
}

double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) noexcept {
  // Nested SplitMix64 finalizers over (index, stream, seed).
  auto mix = [](std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  };
  const std::uint64_t z = mix(seed ^ mix(stream ^ mix(index)));
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

}  // namespace eqwave
