#pragma once
// Hot loops behind the circle scans. Each kernel has a scalar reference and,
// on x86-64, an AVX2/FMA variant picked at runtime. TRACEREC_SIMD=scalar
// forces the reference path.

#include <cstdint>
#include <span>

#include "tracerec/numeric.hpp"

namespace tracerec::kernels {

enum class Isa { scalar, avx2 };

[[nodiscard]] bool isa_available(Isa isa) noexcept;
/// Best available ISA unless overridden through TRACEREC_SIMD.
[[nodiscard]] Isa active_isa() noexcept;
[[nodiscard]] const char* isa_name(Isa isa) noexcept;

/// out[k] = sum_{j=1..r} coeffs[j-1] * (1 - e^{i j angles[k]}), evaluated
/// without forming 1 - (sum) so small defects keep full relative accuracy.
void circle_defect_sums(std::span<const double> coeffs, std::span<const double> angles, std::span<cplx> out,
                        Isa isa);
void circle_defect_sums(std::span<const double> coeffs, std::span<const double> angles, std::span<cplx> out);

/// out[g] = sum_k coeffs[k] * e^{i degrees[k] (theta0 + g * step)} for
/// g < out.size(). Phasors advance by rotation and are recomputed directly
/// every kArcBlock grid points.
inline constexpr std::size_t kArcBlock = 256;
void sparse_arc_sums(std::span<const std::uint64_t> degrees, std::span<const cplx> coeffs, double theta0,
                     double step, std::span<cplx> out, Isa isa);
void sparse_arc_sums(std::span<const std::uint64_t> degrees, std::span<const cplx> coeffs, double theta0,
                     double step, std::span<cplx> out);

namespace detail {
void circle_defect_sums_scalar(std::span<const double>, std::span<const double>, std::span<cplx>);
void sparse_arc_sums_scalar(std::span<const std::uint64_t>, std::span<const cplx>, double, double, std::span<cplx>);
#if defined(TRACEREC_HAVE_AVX2)
void circle_defect_sums_avx2(std::span<const double>, std::span<const double>, std::span<cplx>);
void sparse_arc_sums_avx2(std::span<const std::uint64_t>, std::span<const cplx>, double, double, std::span<cplx>);
#endif
/// e^{i * deg * theta} with the product reduced modulo 2 pi in extended precision.
cplx unit_phasor(std::uint64_t deg, double theta) noexcept;
}  // namespace detail

}  // namespace tracerec::kernels
