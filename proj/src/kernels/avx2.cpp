#include <immintrin.h>

#include <array>
#include <cmath>

#include "tracerec/kernels.hpp"

namespace tracerec::kernels::detail {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

// Four angles per vector, same recurrence as the scalar path.
void circle_defect_sums_avx2(std::span<const double> coeffs, std::span<const double> angles, std::span<cplx> out) {
  const std::size_t count = angles.size();
  std::size_t k = 0;
  for (; k + 4 <= count; k += 4) {
    alignas(32) std::array<double, 4> a1r{};
    alignas(32) std::array<double, 4> a1i{};
    for (int l = 0; l < 4; ++l) {
      const double t = angles[k + l];
      const double s = std::sin(0.5 * t);
      a1r[l] = 2.0 * s * s;
      a1i[l] = -std::sin(t);
    }
    const __m256d u1r = _mm256_load_pd(a1r.data());
    const __m256d u1i = _mm256_load_pd(a1i.data());
    __m256d ur = u1r;
    __m256d ui = u1i;
    __m256d accr = _mm256_setzero_pd();
    __m256d acci = _mm256_setzero_pd();
    for (const double c : coeffs) {
      const __m256d cv = _mm256_set1_pd(c);
      accr = _mm256_fmadd_pd(cv, ur, accr);
      acci = _mm256_fmadd_pd(cv, ui, acci);
      const __m256d pr = _mm256_fmsub_pd(ur, u1r, _mm256_mul_pd(ui, u1i));
      const __m256d pi = _mm256_fmadd_pd(ur, u1i, _mm256_mul_pd(ui, u1r));
      ur = _mm256_sub_pd(_mm256_add_pd(ur, u1r), pr);
      ui = _mm256_sub_pd(_mm256_add_pd(ui, u1i), pi);
    }
    alignas(32) std::array<double, 4> rr{};
    alignas(32) std::array<double, 4> ri{};
    _mm256_store_pd(rr.data(), accr);
    _mm256_store_pd(ri.data(), acci);
    for (int l = 0; l < 4; ++l) out[k + l] = {rr[l], ri[l]};
  }
  if (k < count) circle_defect_sums_scalar(coeffs, angles.subspan(k), out.subspan(k));
}

// Four terms per vector; each grid point reduces the lanes once.
void sparse_arc_sums_avx2(std::span<const std::uint64_t> degrees, std::span<const cplx> coeffs, double theta0,
                          double step, std::span<cplx> out) {
  for (auto& v : out) v = {0.0, 0.0};
  const std::size_t terms = degrees.size();
  const std::size_t groups = (terms + 3) / 4;
  alignas(32) std::array<double, 4> rot_r{};
  alignas(32) std::array<double, 4> rot_i{};
  alignas(32) std::array<double, 4> ph_r{};
  alignas(32) std::array<double, 4> ph_i{};
  __m256d acc_r[kArcBlock];
  __m256d acc_i[kArcBlock];

  for (std::size_t g0 = 0; g0 < out.size(); g0 += kArcBlock) {
    const std::size_t g1 = std::min(out.size(), g0 + kArcBlock);
    const std::size_t len = g1 - g0;
    for (std::size_t g = 0; g < len; ++g) {
      acc_r[g] = _mm256_setzero_pd();
      acc_i[g] = _mm256_setzero_pd();
    }
    const double theta_start = theta0 + static_cast<double>(g0) * step;
    for (std::size_t grp = 0; grp < groups; ++grp) {
      for (int l = 0; l < 4; ++l) {
        const std::size_t t = grp * 4 + l;
        if (t < terms) {
          const cplx rot = unit_phasor(degrees[t], step);
          const cplx ph = unit_phasor(degrees[t], theta_start) * coeffs[t];
          rot_r[l] = rot.real();
          rot_i[l] = rot.imag();
          ph_r[l] = ph.real();
          ph_i[l] = ph.imag();
        } else {
          rot_r[l] = 1.0;
          rot_i[l] = 0.0;
          ph_r[l] = 0.0;
          ph_i[l] = 0.0;
        }
      }
      const __m256d rr = _mm256_load_pd(rot_r.data());
      const __m256d ri = _mm256_load_pd(rot_i.data());
      __m256d pr = _mm256_load_pd(ph_r.data());
      __m256d pi = _mm256_load_pd(ph_i.data());
      for (std::size_t g = 0; g < len; ++g) {
        acc_r[g] = _mm256_add_pd(acc_r[g], pr);
        acc_i[g] = _mm256_add_pd(acc_i[g], pi);
        const __m256d nr = _mm256_fmsub_pd(pr, rr, _mm256_mul_pd(pi, ri));
        const __m256d ni = _mm256_fmadd_pd(pr, ri, _mm256_mul_pd(pi, rr));
        pr = nr;
        pi = ni;
      }
    }
    for (std::size_t g = 0; g < len; ++g) out[g0 + g] = {hsum(acc_r[g]), hsum(acc_i[g])};
  }
}

}  // namespace tracerec::kernels::detail
