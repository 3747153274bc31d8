#pragma once
// Small numerical helpers shared by every module: compensated summation,
// exact integer powers and roots, and a golden-section maximizer.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

namespace tracerec {

using cplx = std::complex<double>;

/// Neumaier (improved Kahan-Babuska) running sum.
class CompensatedSum {
public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  void merge(const CompensatedSum& other) noexcept {
    add(other.sum_);
    add(other.comp_);
  }
  [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class CompensatedComplexSum {
public:
  void add(cplx v) noexcept {
    re_.add(v.real());
    im_.add(v.imag());
  }
  void merge(const CompensatedComplexSum& other) noexcept {
    re_.merge(other.re_);
    im_.merge(other.im_);
  }
  [[nodiscard]] cplx value() const noexcept { return {re_.value(), im_.value()}; }

private:
  CompensatedSum re_;
  CompensatedSum im_;
};

/// z^k by binary exponentiation, with 0^0 = 1.
inline cplx ipow(cplx z, std::uint64_t k) noexcept {
  cplx result{1.0, 0.0};
  while (k != 0) {
    if (k & 1U) result *= z;
    k >>= 1U;
    if (k != 0) z *= z;
  }
  return result;
}

inline double ipow(double z, std::uint64_t k) noexcept {
  double result = 1.0;
  while (k != 0) {
    if (k & 1U) result *= z;
    k >>= 1U;
    if (k != 0) z *= z;
  }
  return result;
}

/// log(1 + z) accurate for small |z|.
inline cplx clog1p(cplx z) noexcept {
  const double x = z.real();
  const double y = z.imag();
  if (std::abs(z) > 0.5) return std::log(1.0 + z);
  return {0.5 * std::log1p(2.0 * x + x * x + y * y), std::atan2(y, 1.0 + x)};
}

/// exp(z) - 1 accurate for small |z|.
inline cplx cexpm1(cplx z) noexcept {
  const double x = z.real();
  const double y = z.imag();
  const double s = std::sin(0.5 * y);
  return {std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
}

/// Largest r with r^k <= n.
inline std::uint64_t floor_root(std::uint64_t n, unsigned k) noexcept {
  if (n < 2 || k == 1) return n;
  auto pow_le = [&](std::uint64_t r) {
    __extension__ using u128 = unsigned __int128;
    u128 acc = 1;
    for (unsigned i = 0; i < k; ++i) {
      acc *= r;
      if (acc > n) return false;
    }
    return true;
  };
  auto r = static_cast<std::uint64_t>(std::pow(static_cast<double>(n), 1.0 / k));
  while (r > 0 && !pow_le(r)) --r;
  while (pow_le(r + 1)) ++r;
  return r;
}

inline double log_binomial(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

/// Running log(sum(exp(x_i))) without overflow.
class LogSumExp {
public:
  void add(double log_term) noexcept {
    if (log_term == -std::numeric_limits<double>::infinity()) return;
    if (log_term <= max_) {
      scaled_ += std::exp(log_term - max_);
    } else {
      scaled_ = scaled_ * std::exp(max_ - log_term) + 1.0;
      max_ = log_term;
    }
  }
  [[nodiscard]] double value() const noexcept {
    return scaled_ == 0.0 ? -std::numeric_limits<double>::infinity() : max_ + std::log(scaled_);
  }

private:
  double max_ = -std::numeric_limits<double>::infinity();
  double scaled_ = 0.0;
};

struct ScalarMax {
  double x = 0.0;
  double value = -std::numeric_limits<double>::infinity();
};

/// Golden-section search for a maximum of f on [lo, hi]. Assumes f is
/// unimodal on the bracket; the caller supplies a bracket around a grid
/// maximum. Endpoints are compared too, so the result is never worse than
/// max(f(lo), f(hi)).
template <class F>
ScalarMax golden_section_max(F&& f, double lo, double hi, double rel_tol = 1e-10,
                             int max_iter = 200) {
  constexpr double inv_phi = 0.6180339887498948482;
  ScalarMax best{lo, f(lo)};
  if (const double fh = f(hi); fh > best.value) best = {hi, fh};
  if (!(hi > lo)) return best;

  const double scale = std::max({std::fabs(lo), std::fabs(hi), hi - lo});
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < max_iter && (b - a) > rel_tol * scale; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  if (fc > best.value) best = {c, fc};
  if (fd > best.value) best = {d, fd};
  return best;
}

/// Maximum of f on [lo, hi]: uniform grid of `count` points, then golden
/// refinement around the `keep` best local maxima of the grid.
template <class F>
ScalarMax grid_search_max(F&& f, double lo, double hi, std::size_t count, std::size_t keep = 4) {
  if (count < 2 || !(hi > lo)) return {lo, f(lo)};
  std::vector<double> x(count);
  std::vector<double> v(count);
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t k = 0; k < count; ++k) {
    x[k] = k + 1 == count ? hi : lo + static_cast<double>(k) * step;
    v[k] = f(x[k]);
  }
  std::vector<std::size_t> peaks;
  for (std::size_t k = 0; k < count; ++k) {
    const bool left = k == 0 || v[k] >= v[k - 1];
    const bool right = k + 1 == count || v[k] >= v[k + 1];
    if (left && right) peaks.push_back(k);
  }
  std::stable_sort(peaks.begin(), peaks.end(), [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
  if (peaks.size() > keep) peaks.resize(keep);
  ScalarMax best;
  for (const auto k : peaks) {
    if (v[k] > best.value) best = {x[k], v[k]};
    const ScalarMax r = golden_section_max(f, x[k == 0 ? 0 : k - 1], x[k + 1 == count ? k : k + 1]);
    if (r.value > best.value) best = r;
  }
  return best;
}

}  // namespace tracerec
