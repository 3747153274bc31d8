#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/sinc.hpp>
#include <cmath>
#include <string>

#include "tracerec/polyarc.hpp"

namespace tracerec {

double sinc_defect(double y) {
  const double u = 0.5 * y;
  if (std::abs(u) < 1e-2) {
    const double u2 = u * u;
    return u2 * (1.0 / 6.0 - u2 * (1.0 / 45.0 - u2 * (1.0 / 630.0 - u2 / 14175.0)));
  }
  const double s = std::sin(u) / u;
  return 0.5 - 0.5 * s * s;
}

double sinc_family(double c, double x) {
  if (c < 0.0) throw std::invalid_argument("sinc_family needs c >= 0");
  if (c == 0.0) return x * x * x * x / 24.0;
  return sinc_defect(c * x) / (c * c * c * c);
}

double sinc_squared_integral(double lo, double hi) {
  auto f = [](double x) {
    const double s = boost::math::sinc_pi(x);
    return s * s;
  };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, 1e-13);
}

AppendixReport appendix_claim_check(std::span<const double> c_values, std::uint64_t m, double eps,
                                    std::span<const double> b_values) {
  if (m < 100) throw std::invalid_argument("appendix check needs m >= 100, got " + std::to_string(m));
  if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("appendix check needs eps in (0, 1/2)");
  AppendixReport rep;
  rep.m = m;
  rep.eps = eps;
  rep.pass = true;
  const double mm = static_cast<double>(m);
  for (const double c : c_values) {
    std::vector<double> prefix(m + 1, 0.0);
    CompensatedSum run;
    for (std::uint64_t j = 1; j <= m; ++j) {
      const double l = std::log(static_cast<double>(j) + 3.0);
      run.add(sinc_family(c, static_cast<double>(j) / mm) / (l * l));
      prefix[j] = run.value();
    }
    DiscreteInequalityResult d;
    d.c = c;
    // open interval ((1/2 - eps) m, (1/2 + eps) m)
    d.m_star_lo = static_cast<std::uint64_t>(std::floor((0.5 - eps) * mm)) + 1;
    d.m_star_hi = static_cast<std::uint64_t>(std::ceil((0.5 + eps) * mm)) - 1;
    d.pass = true;
    d.worst_ratio = -std::numeric_limits<double>::infinity();
    for (std::uint64_t ms = d.m_star_lo; ms <= d.m_star_hi; ++ms) {
      const double lhs = prefix[ms];
      const double rhs = prefix[m] - prefix[ms];
      const double ratio = lhs / rhs;
      if (ratio > d.worst_ratio) {
        d.worst_ratio = ratio;
        d.worst_m_star = ms;
      }
      if (!(lhs < rhs)) d.pass = false;
    }
    rep.pass = rep.pass && d.pass;
    rep.discrete.push_back(d);
  }
  for (const double b : b_values) {
    SincIntegralResult s;
    s.b = b;
    s.inner = sinc_squared_integral(0.0, b);
    s.outer = sinc_squared_integral(b, 2.0 * b);
    s.pass = s.inner > s.outer;
    rep.pass = rep.pass && s.pass;
    rep.integrals.push_back(s);
  }
  constexpr double kSmallC = 1e-4;
  for (int k = 1; k <= 10; ++k) {
    const double x = 0.1 * k;
    const double fc = sinc_family(kSmallC, x);
    rep.rescaled_limit_error = std::max(rep.rescaled_limit_error, std::abs(kSmallC * kSmallC * fc - x * x / 24.0));
    rep.literal_limit_gap = std::max(rep.literal_limit_gap, std::abs(fc - sinc_family(0.0, x)));
  }
  return rep;
}

}  // namespace tracerec
