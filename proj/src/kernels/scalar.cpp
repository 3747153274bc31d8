#include <cmath>

#include "tracerec/kernels.hpp"

namespace tracerec::kernels::detail {

void circle_defect_sums_scalar(std::span<const double> coeffs, std::span<const double> angles,
                               std::span<cplx> out) {
  for (std::size_t k = 0; k < angles.size(); ++k) {
    const double t = angles[k];
    const double s = std::sin(0.5 * t);
    // u_1 = 1 - e^{it}; u_{j+1} = 1 - (1 - u_j)(1 - u_1).
    const double u1r = 2.0 * s * s;
    const double u1i = -std::sin(t);
    double ur = u1r;
    double ui = u1i;
    double accr = 0.0;
    double acci = 0.0;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      accr += coeffs[j] * ur;
      acci += coeffs[j] * ui;
      const double pr = ur * u1r - ui * u1i;
      const double pi = ur * u1i + ui * u1r;
      ur = ur + u1r - pr;
      ui = ui + u1i - pi;
    }
    out[k] = {accr, acci};
  }
}

void sparse_arc_sums_scalar(std::span<const std::uint64_t> degrees, std::span<const cplx> coeffs, double theta0,
                            double step, std::span<cplx> out) {
  for (auto& v : out) v = {0.0, 0.0};
  for (std::size_t k = 0; k < degrees.size(); ++k) {
    const cplx rot = unit_phasor(degrees[k], step);
    for (std::size_t g0 = 0; g0 < out.size(); g0 += kArcBlock) {
      const std::size_t g1 = std::min(out.size(), g0 + kArcBlock);
      cplx ph = unit_phasor(degrees[k], theta0 + static_cast<double>(g0) * step) * coeffs[k];
      for (std::size_t g = g0; g < g1; ++g) {
        out[g] += ph;
        ph *= rot;
      }
    }
  }
}

}  // namespace tracerec::kernels::detail
