#include <cmath>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "tracerec/kernels.hpp"

namespace tracerec::kernels {

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(TRACEREC_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() noexcept {
  static const Isa chosen = [] {
    const char* env = std::getenv("TRACEREC_SIMD");
    if (env != nullptr && std::strcmp(env, "scalar") == 0) return Isa::scalar;
    return isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar;
  }();
  return chosen;
}

const char* isa_name(Isa isa) noexcept { return isa == Isa::avx2 ? "avx2" : "scalar"; }

namespace {
void require(Isa isa) {
  if (!isa_available(isa)) throw std::runtime_error(std::string("kernel ISA not available: ") + isa_name(isa));
}
}  // namespace

void circle_defect_sums(std::span<const double> coeffs, std::span<const double> angles, std::span<cplx> out,
                        Isa isa) {
  if (out.size() != angles.size()) throw std::invalid_argument("circle_defect_sums: output size mismatch");
  require(isa);
#if defined(TRACEREC_HAVE_AVX2)
  if (isa == Isa::avx2) return detail::circle_defect_sums_avx2(coeffs, angles, out);
#endif
  detail::circle_defect_sums_scalar(coeffs, angles, out);
}

void circle_defect_sums(std::span<const double> coeffs, std::span<const double> angles, std::span<cplx> out) {
  circle_defect_sums(coeffs, angles, out, active_isa());
}

void sparse_arc_sums(std::span<const std::uint64_t> degrees, std::span<const cplx> coeffs, double theta0,
                     double step, std::span<cplx> out, Isa isa) {
  if (degrees.size() != coeffs.size()) throw std::invalid_argument("sparse_arc_sums: degree/coefficient mismatch");
  require(isa);
#if defined(TRACEREC_HAVE_AVX2)
  if (isa == Isa::avx2) return detail::sparse_arc_sums_avx2(degrees, coeffs, theta0, step, out);
#endif
  detail::sparse_arc_sums_scalar(degrees, coeffs, theta0, step, out);
}

void sparse_arc_sums(std::span<const std::uint64_t> degrees, std::span<const cplx> coeffs, double theta0,
                     double step, std::span<cplx> out) {
  sparse_arc_sums(degrees, coeffs, theta0, step, out, active_isa());
}

cplx detail::unit_phasor(std::uint64_t deg, double theta) noexcept {
  // long double gives 64 mantissa bits; enough to reduce deg * theta for
  // degrees up to ~1e13 without losing the fractional turn.
  constexpr long double two_pi = 6.283185307179586476925286766559L;
  long double phase = static_cast<long double>(deg) * static_cast<long double>(theta);
  phase = std::fmod(phase, two_pi);
  const double ph = static_cast<double>(phase);
  return {std::cos(ph), std::sin(ph)};
}

}  // namespace tracerec::kernels
