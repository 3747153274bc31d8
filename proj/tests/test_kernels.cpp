#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "tracerec/kernels.hpp"

using namespace tracerec;
namespace k = tracerec::kernels;

namespace {

// Direct evaluation in long double.
std::complex<long double> direct_defect(const std::vector<double>& coeffs, double angle) {
  std::complex<long double> s{0.0L, 0.0L};
  for (std::size_t j = 1; j <= coeffs.size(); ++j) {
    const long double ph = static_cast<long double>(j) * angle;
    // 1 - e^{i ph} = 2 sin^2(ph/2) - i sin(ph)
    const long double h = std::sin(ph / 2.0L);
    s += static_cast<long double>(coeffs[j - 1]) * std::complex<long double>{2.0L * h * h, -std::sin(ph)};
  }
  return s;
}

std::complex<long double> direct_arc(const std::vector<std::uint64_t>& deg, const std::vector<cplx>& c,
                                     double theta) {
  std::complex<long double> s{0.0L, 0.0L};
  for (std::size_t j = 0; j < deg.size(); ++j) {
    const cplx ph = k::detail::unit_phasor(deg[j], theta);
    s += std::complex<long double>(c[j]) * std::complex<long double>(ph);
  }
  return s;
}

}  // namespace

TEST_CASE("active kernel is reported") {
  const k::Isa isa = k::active_isa();
  CHECK(k::isa_available(isa));
  CHECK(k::isa_available(k::Isa::scalar));
  MESSAGE("active kernel: " << k::isa_name(isa));
}

TEST_CASE("circle defect sums match direct evaluation") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> coeffs(137);
  for (auto& c : coeffs) c = u(rng) / 50.0;
  std::vector<double> angles;
  for (int i = 0; i < 203; ++i) angles.push_back(3.2 * u(rng));
  for (double t : {0.0, 1e-9, -1e-7, 1e-4}) angles.push_back(t);
  std::vector<cplx> out(angles.size());
  k::circle_defect_sums(coeffs, angles, out);
  for (std::size_t i = 0; i < angles.size(); ++i) {
    const auto ref = direct_defect(coeffs, angles[i]);
    const double scale = std::abs(cplx(ref)) + 1e-300;
    INFO("angle " << angles[i]);
    CHECK(std::abs(out[i] - cplx(ref)) <= 1e-12 * std::max(1.0, scale) + 1e-13 * scale);
  }
  // Tiny angles keep relative accuracy.
  const std::vector<double> tiny{1e-8};
  std::vector<cplx> one(1);
  k::circle_defect_sums(coeffs, tiny, one);
  const auto ref = direct_defect(coeffs, 1e-8);
  CHECK(std::abs(one[0] - cplx(ref)) <= 1e-9 * std::abs(cplx(ref)));
}

TEST_CASE("sparse arc sums match direct evaluation, across block resyncs") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::uint64_t> deg;
  std::vector<cplx> c;
  for (int i = 0; i < 61; ++i) {
    deg.push_back(rng() % 2000000);
    c.push_back({u(rng), u(rng)});
  }
  const double theta0 = -0.013;
  const double step = 2.5e-5;
  std::vector<cplx> out(3 * k::kArcBlock + 17);
  k::sparse_arc_sums(deg, c, theta0, step, out);
  for (std::size_t g = 0; g < out.size(); g += 7) {
    const auto ref = direct_arc(deg, c, theta0 + static_cast<double>(g) * step);
    INFO("g " << g);
    CHECK(std::abs(out[g] - cplx(ref)) <= 1e-9);
  }
}

TEST_CASE("scalar and AVX2 kernels agree") {
  if (!k::isa_available(k::Isa::avx2)) {
    MESSAGE("AVX2 not available; equivalence skipped");
    return;
  }
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const std::size_t r : {1UL, 3UL, 4UL, 17UL, 439UL}) {
    std::vector<double> coeffs(r);
    for (auto& v : coeffs) v = u(rng);
    for (const std::size_t count : {1UL, 3UL, 4UL, 5UL, 1001UL}) {
      std::vector<double> angles(count);
      for (auto& a : angles) a = 3.14 * u(rng);
      std::vector<cplx> s(count);
      std::vector<cplx> v(count);
      k::circle_defect_sums(coeffs, angles, s, k::Isa::scalar);
      k::circle_defect_sums(coeffs, angles, v, k::Isa::avx2);
      for (std::size_t i = 0; i < count; ++i) REQUIRE(std::abs(s[i] - v[i]) <= 1e-11 * (1.0 + std::abs(s[i])));
    }
  }
  for (const std::size_t terms : {1UL, 2UL, 4UL, 7UL, 64UL, 131UL}) {
    std::vector<std::uint64_t> deg(terms);
    std::vector<cplx> c(terms);
    for (std::size_t i = 0; i < terms; ++i) {
      deg[i] = rng() % 100000;
      c[i] = {u(rng), u(rng)};
    }
    for (const std::size_t count : {1UL, 255UL, 256UL, 257UL, 1000UL}) {
      std::vector<cplx> s(count);
      std::vector<cplx> v(count);
      k::sparse_arc_sums(deg, c, -0.02, 4e-5, s, k::Isa::scalar);
      k::sparse_arc_sums(deg, c, -0.02, 4e-5, v, k::Isa::avx2);
      for (std::size_t i = 0; i < count; ++i) REQUIRE(std::abs(s[i] - v[i]) <= 1e-11 * (1.0 + std::abs(s[i])));
    }
  }
}

TEST_CASE("kernel argument checks") {
  std::vector<double> coeffs{1.0};
  std::vector<double> angles{0.1, 0.2};
  std::vector<cplx> out(1);
  CHECK_THROWS_AS(k::circle_defect_sums(coeffs, angles, out), std::invalid_argument);
  std::vector<std::uint64_t> deg{1, 2};
  std::vector<cplx> c{{1.0, 0.0}};
  CHECK_THROWS_AS(k::sparse_arc_sums(deg, c, 0.0, 0.1, out), std::invalid_argument);
}

TEST_CASE("phasor reduction for large degrees") {
  const std::uint64_t deg = 16305067506199ULL;
  const double theta = 1e-5;
  const cplx z = k::detail::unit_phasor(deg, theta);
  CHECK(std::abs(std::abs(z) - 1.0) < 1e-15);
  // Compare against two-step reduction: deg = hi * 2^20 + lo.
  const std::uint64_t lo = deg & ((1U << 20) - 1);
  const std::uint64_t hi = deg >> 20;
  const cplx z2 = k::detail::unit_phasor(hi, theta * 1048576.0) * k::detail::unit_phasor(lo, theta);
  CHECK(std::abs(z - z2) < 1e-6);
  CHECK(k::detail::unit_phasor(0, 1.0) == cplx{1.0, 0.0});
}
