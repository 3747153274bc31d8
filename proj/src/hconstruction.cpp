#include <cmath>
#include <numbers>
#include <string>

#include "tracerec/kernels.hpp"
#include "tracerec/parallel.hpp"
#include "tracerec/polyarc.hpp"

namespace tracerec {

double to_radians(double t, AngleUnit unit) noexcept {
  return unit == AngleUnit::turns ? 2.0 * std::numbers::pi * t : t;
}

namespace {

double log_weight(std::uint64_t j) {
  const double l = std::log(static_cast<double>(j) + 3.0);
  return 1.0 / (l * l);
}

struct SignedSplit {
  std::uint64_t r_star = 0;
  double signed_sum = 0.0;
  bool ok = false;
  bool reachable = false;
};

// Smallest r* with 2 P(r*) - P(r) >= 20, and whether it lands in the window.
SignedSplit split_for(std::uint64_t r) {
  const double total = log_weight_sum(r);
  SignedSplit s;
  CompensatedSum prefix;
  for (std::uint64_t k = 1; k <= r; ++k) {
    prefix.add(log_weight(k));
    const double signed_sum = 2.0 * prefix.value() - total;
    if (signed_sum >= kSignedSumLow) {
      s.r_star = k;
      s.signed_sum = signed_sum;
      s.reachable = true;
      s.ok = signed_sum <= kSignedSumHigh;
      return s;
    }
  }
  return s;
}

}  // namespace

double log_weight_sum(std::uint64_t r) {
  CompensatedSum s;
  for (std::uint64_t j = 1; j <= r; ++j) s.add(log_weight(j));
  return s.value();
}

std::uint64_t smallest_constructible_r() {
  static const std::uint64_t value = [] {
    CompensatedSum p;
    for (std::uint64_t r = 1;; ++r) {
      p.add(log_weight(r));
      if (r >= 2 && p.value() >= kSignedSumLow && split_for(r).ok) return r;
    }
  }();
  return value;
}

std::uint64_t smallest_constructible_n() {
  const std::uint64_t r = smallest_constructible_r();
  return r * r * r * r * r;
}

HConstruction build_h(std::uint64_t n) {
  if (n < 16) throw std::invalid_argument("build_h requires n >= 16, got " + std::to_string(n));
  HConstruction h;
  h.n = n;
  h.a = std::pow(static_cast<double>(n), -0.4);
  h.r = floor_root(n, 5);
  const SignedSplit split = split_for(h.r);
  if (!split.ok) {
    const std::uint64_t nmin = smallest_constructible_n();
    std::string why = split.reachable
                          ? "signed sum " + std::to_string(split.signed_sum) + " overshoots [20, 21]"
                          : "sum of 1/log^2(j+3) up to r = " + std::to_string(h.r) + " is " +
                                std::to_string(log_weight_sum(h.r)) + " < 20";
    throw HConstructionError("h cannot be built for n = " + std::to_string(n) + ": " + why +
                                 "; smallest valid n is " + std::to_string(nmin) + " (r = " +
                                 std::to_string(smallest_constructible_r()) + ")",
                             nmin);
  }
  h.r_star = split.r_star;
  h.signed_sum = split.signed_sum;

  CompensatedSum inv_lambda;
  std::vector<double> base(h.r);
  for (std::uint64_t j = 1; j <= h.r; ++j) {
    const double jj = static_cast<double>(j);
    base[j - 1] = log_weight(j) / (jj * jj);
    inv_lambda.add(base[j - 1]);
  }
  h.lambda_a = 1.0 / inv_lambda.value();
  h.coeffs.resize(h.r);
  CompensatedSum inv_tilde;
  for (std::uint64_t j = 1; j <= h.r; ++j) {
    const double eps = j <= h.r_star ? 1.0 : -1.0;
    h.coeffs[j - 1] = eps * h.lambda_a * base[j - 1];
    inv_tilde.add(h.coeffs[j - 1]);
  }
  h.lambda_tilde_a = 1.0 / inv_tilde.value();
  h.scaled.resize(h.r);
  for (std::size_t j = 0; j < h.r; ++j) h.scaled[j] = h.lambda_tilde_a * h.coeffs[j];
  h.a_pow10 = std::pow(h.a, 10.0);
  h.shrink = 1.0 - h.a_pow10;
  return h;
}

// htilde is represented through its defect 1 - htilde(e^{it}) =
// sum c_j (1 - e^{ijt}), which uses htilde(1) = 1 exactly.
cplx htilde_defect(const HConstruction& h, double t, AngleUnit unit) {
  const double angle = to_radians(t, unit);
  cplx out;
  kernels::circle_defect_sums(h.scaled, std::span<const double>(&angle, 1), std::span<cplx>(&out, 1),
                              kernels::Isa::scalar);
  return out;
}

cplx h_defect(const HConstruction& h, double t, AngleUnit unit) {
  return h.a_pow10 + h.shrink * htilde_defect(h, t, unit);
}

cplx eval_htilde(const HConstruction& h, double t, AngleUnit unit) { return 1.0 - htilde_defect(h, t, unit); }

cplx eval_h(const HConstruction& h, double t, AngleUnit unit) { return 1.0 - h_defect(h, t, unit); }

void htilde_defects(const HConstruction& h, std::span<const double> radians, std::span<cplx> out, unsigned jobs) {
  if (out.size() != radians.size()) throw std::invalid_argument("htilde_defects: output size mismatch");
  parallel_blocks<int>(radians.size(), jobs, [&](std::uint64_t lo, std::uint64_t hi) {
    kernels::circle_defect_sums(h.scaled, radians.subspan(lo, hi - lo), out.subspan(lo, hi - lo));
    return 0;
  });
}

void h_defects(const HConstruction& h, std::span<const double> radians, std::span<cplx> out, unsigned jobs) {
  htilde_defects(h, radians, out, jobs);
  for (auto& d : out) d = h.a_pow10 + h.shrink * d;
}

}  // namespace tracerec
