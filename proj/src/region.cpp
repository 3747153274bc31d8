#include <cmath>
#include <numbers>

#include "tracerec/polyarc.hpp"

namespace tracerec {

RegionSpec make_region(double a) {
  if (!(a > 0.0 && a < std::numbers::pi)) throw std::invalid_argument("region parameter a must lie in (0, pi)");
  RegionSpec reg;
  reg.a = a;
  reg.alpha = std::polar(1.0, a);
  reg.beta = std::polar(1.0, -a);
  const double s = std::sin(0.5 * a);
  reg.alpha_minus_one = {-2.0 * s * s, std::sin(a)};
  return reg;
}

double region_coordinate(cplx z, const RegionSpec& reg) {
  const cplx num = reg.alpha - z;
  const cplx den = z - reg.beta;
  if (num == cplx{0.0, 0.0} || den == cplx{0.0, 0.0}) throw PoleError("region coordinate has a pole at alpha and beta");
  return std::arg(num * std::conj(den));
}

// With z = 1 - D and u = D / (alpha - 1):
//   (alpha - z) / (z - beta) = alpha (1 + u) / (1 - alpha u),
// so the coordinate is a + arg(1 + u) - arg(1 - alpha u).
double region_gap_from_defect(cplx defect, const RegionSpec& reg) {
  const cplx u = defect / reg.alpha_minus_one;
  const cplx plus = 1.0 + u;
  const cplx minus = 1.0 - reg.alpha * u;
  if (plus == cplx{0.0, 0.0} || minus == cplx{0.0, 0.0}) {
    throw PoleError("region coordinate has a pole at alpha and beta");
  }
  const double gap = std::arg(minus) - std::arg(plus);
  const double theta = reg.a - gap;
  if (theta > -std::numbers::pi && theta <= std::numbers::pi) return gap;
  return reg.a - std::remainder(theta, 2.0 * std::numbers::pi);
}

bool in_G_a(cplx z, const RegionSpec& reg) {
  const double c = region_coordinate(z, reg);
  return c > 0.5 * reg.a && c < reg.a;
}

bool in_G_a_from_defect(cplx defect, const RegionSpec& reg) {
  const double gap = region_gap_from_defect(defect, reg);
  return gap > 0.0 && gap < 0.5 * reg.a;
}

cplx level_curve_point(const RegionSpec& reg, double t, double phi) {
  const cplx e = std::polar(1.0, t);
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  return (reg.alpha * c + reg.beta * e * s) / (c + e * s);
}

}  // namespace tracerec
