#pragma once
// Numerical side of the arc argument: the auxiliary polynomial h, the lens
// region between the chord and the arc, products of polynomial values along
// h(circle), arc maxima, the three-curve inequality and the sinc checks.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tracerec/numeric.hpp"
#include "tracerec/polynomial.hpp"

namespace tracerec {

enum class AngleUnit { radians, turns };

/// Converts t to radians (turns are multiplied by 2 pi).
[[nodiscard]] double to_radians(double t, AngleUnit unit) noexcept;

// --- h ----------------------------------------------------------------------

struct HConstruction {
  std::uint64_t n = 0;
  double a = 0.0;              // n^(-2/5)
  std::uint64_t r = 0;         // floor(n^(1/5))
  std::uint64_t r_star = 0;    // last index with a + sign
  double signed_sum = 0.0;     // sum_{j<=r*} w_j - sum_{j>r*} w_j, w_j = 1/log^2(j+3)
  double lambda_a = 0.0;
  double lambda_tilde_a = 0.0;
  double shrink = 0.0;         // 1 - a^10
  double a_pow10 = 0.0;
  std::vector<double> coeffs;  // eps_j * d_j for j = 1..r
  std::vector<double> scaled;  // lambda_tilde_a * eps_j * d_j
};

/// Raised when the signed-sum window [20, 21] cannot be met.
class HConstructionError : public std::domain_error {
public:
  HConstructionError(const std::string& what, std::uint64_t smallest_valid_n)
      : std::domain_error(what), smallest_valid_n_(smallest_valid_n) {}
  [[nodiscard]] std::uint64_t smallest_valid_n() const noexcept { return smallest_valid_n_; }

private:
  std::uint64_t smallest_valid_n_;
};

inline constexpr double kSignedSumLow = 20.0;
inline constexpr double kSignedSumHigh = 21.0;

/// Requires n >= 16. Throws HConstructionError naming the smallest n for
/// which the construction succeeds.
HConstruction build_h(std::uint64_t n);

/// Smallest r whose construction meets the signed-sum window.
std::uint64_t smallest_constructible_r();
std::uint64_t smallest_constructible_n();

/// sum_{j=1..r} 1 / log^2(j+3).
double log_weight_sum(std::uint64_t r);

cplx eval_htilde(const HConstruction& h, double t, AngleUnit unit);
cplx eval_h(const HConstruction& h, double t, AngleUnit unit);
/// 1 - htilde(e^{it}) and 1 - h(e^{it}), accurate when the value is near 1.
cplx htilde_defect(const HConstruction& h, double t, AngleUnit unit);
cplx h_defect(const HConstruction& h, double t, AngleUnit unit);
/// Batched defects at angles in radians, through the circle kernel.
void htilde_defects(const HConstruction& h, std::span<const double> radians, std::span<cplx> out,
                    unsigned jobs = 1);
void h_defects(const HConstruction& h, std::span<const double> radians, std::span<cplx> out, unsigned jobs = 1);

// --- region -----------------------------------------------------------------

struct RegionSpec {
  double a = 0.0;
  cplx alpha;            // e^{ia}
  cplx beta;             // e^{-ia}
  cplx alpha_minus_one;  // e^{ia} - 1 without cancellation
};

RegionSpec make_region(double a);

class PoleError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Principal argument of (alpha - z) / (z - beta). Throws PoleError at alpha
/// or beta.
double region_coordinate(cplx z, const RegionSpec& reg);

/// For z = 1 - defect: a minus the region coordinate, computed so that tiny
/// defects are not lost to rounding.
double region_gap_from_defect(cplx defect, const RegionSpec& reg);

bool in_G_a(cplx z, const RegionSpec& reg);
bool in_G_a_from_defect(cplx defect, const RegionSpec& reg);

/// Point of the level curve I_t for phi in [0, pi/2]; phi = 0 gives alpha
/// and phi = pi/2 gives beta.
cplx level_curve_point(const RegionSpec& reg, double t, double phi);

// --- verification of h --------------------------------------------------------

struct UnitDiskReport {
  std::size_t grid_size = 0;
  double max_modulus = 0.0;
  double argmax_t = 0.0;
  double margin = 0.0;             // 1 - max_modulus
  double band_max_excess = 0.0;    // max of |htilde|^2 - (1 - 6 t^2) on |t| <= 1/100
  double band_argmax_t = 0.0;
  double modulus_at_zero = 0.0;
  bool disk_pass = false;
  bool band_pass = false;
};

inline constexpr double kDiskTolerance = 1e-9;
inline constexpr double kDiskBand = 0.01;

/// Angles in radians over [-pi, pi); the band check uses its own grid of the
/// same size over [-1/100, 1/100].
UnitDiskReport verify_unit_disk(const HConstruction& h, std::size_t grid_size, unsigned jobs = 1);

struct HPropertiesReport {
  // Empirical constants; none of them has a closed form.
  double c4 = 0.0;        // membership in G_a holds for |t| <= c4 a (turns)
  double c5 = 0.0;        // 1 - |h| >= c5 |t| / log^2(1/a) for |t| >= C6 a^(1/2)
  double C6 = 0.0;
  double c5_at_ref = 0.0; // the same bound on the reference range |t| >= C_ref a^(1/2)
  double C_ref = 0.0;
  bool member_at_zero = false;
  bool c4_capped = false; // membership held on the whole scanned range
  std::size_t membership_grid = 0;
  std::size_t decay_grid = 0;
};

/// Membership scan on |t| <= a and decay fit on |t| in [a^(1/2), 1/2], both
/// in turns. `points_per_oscillation` sets the decay grid density.
HPropertiesReport verify_h_properties(const HConstruction& h, const RegionSpec& reg,
                                      std::size_t membership_grid = 4096,
                                      std::size_t points_per_oscillation = 64, unsigned jobs = 1);

// --- products along h(circle) -------------------------------------------------

struct ProductGrid {
  std::uint64_t m = 0;
  std::uint64_t J1 = 0;
  std::uint64_t J2 = 0;
  bool valid = false;  // 0 <= J1 < J2 <= m and m >= 4
  std::string reason;
};

/// m = floor(n^(2/5) / c4), J1 = floor(m log^4 n / (c5 n^(1/5))), J2 = m - J1.
ProductGrid product_grid(std::uint64_t n, double c4, double c5);

enum class FactorKind {
  unit_root,  // z - zeta with |zeta| = 1
  gap,        // 1 when d = 0, else 1 - z^d
  full        // (z - alpha)(z - beta) p(z) with p an arc polynomial
};

struct ProductFactor {
  FactorKind kind = FactorKind::gap;
  cplx zeta{1.0, 0.0};
  std::uint64_t d = 0;
  std::optional<ArcPolynomial> p;

  static ProductFactor unit_root(cplx zeta) { return {FactorKind::unit_root, zeta, 0, std::nullopt}; }
  static ProductFactor gap(std::uint64_t d) { return {FactorKind::gap, {1.0, 0.0}, d, std::nullopt}; }
  static ProductFactor full(ArcPolynomial p) { return {FactorKind::full, {1.0, 0.0}, 0, std::move(p)}; }
};

/// log|factor(w)| for w = 1 - defect.
double log_abs_factor(const ProductFactor& f, cplx defect, const RegionSpec& reg);

struct ProductBoundResult {
  double log_product = 0.0;
  std::uint64_t terms = 0;
  std::uint64_t clamped_terms = 0;
  bool clamped = false;
  double min_log_term = 0.0;
};

inline constexpr double kLogFloor = -690.7755278982137;  // log(1e-300)

/// Sum over j in [J1, J2) of log|factor(h(e^{2 pi i (j + delta) / m}))|.
/// Throws std::invalid_argument for m < 4, J1 >= J2, J2 > m or delta
/// outside [0, 1).
ProductBoundResult log_product_bound(const ProductFactor& f, const HConstruction& h, const RegionSpec& reg,
                                     std::uint64_t m, std::uint64_t J1, std::uint64_t J2, double delta,
                                     unsigned jobs = 1);

/// The same sum over every j in [1, m - 2].
ProductBoundResult log_product_outside_ends(const ProductFactor& f, const HConstruction& h, const RegionSpec& reg,
                                            std::uint64_t m, double delta, unsigned jobs = 1);

// --- arc maxima ---------------------------------------------------------------

struct ArcMaxResult {
  double theta = 0.0;
  double value = 0.0;
  std::size_t grid_points = 0;
};

/// Points needed for 64 samples per oscillation of the highest degree.
std::size_t arc_grid_points(std::uint64_t degree, double theta_bound, std::size_t requested);

/// max of |p(e^{i theta})| over |theta| <= theta_bound: grid scan, then
/// golden-section refinement of the best grid maxima.
ArcMaxResult arc_max(const SparsePolynomial& p, double theta_bound, std::size_t grid_size);
ArcMaxResult arc_max(const ArcPolynomial& p, double theta_bound, std::size_t grid_size);

/// Uniform samples of |p| on the arc (for CSV output).
struct ArcSample {
  double theta;
  cplx value;
};
std::vector<ArcSample> scan_arc(const SparsePolynomial& p, double theta_bound, std::size_t grid_size);

// --- three-curve inequality ---------------------------------------------------

struct ThreeRegionReport {
  double max_chord = 0.0;  // on I_0
  double max_mid = 0.0;    // on I_{a/2}
  double max_arc = 0.0;    // on I_a
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

inline constexpr double kThreeRegionSlack = 1e-6;

ThreeRegionReport three_region_check(const DensePolynomial& g, const RegionSpec& reg, std::size_t grid_size);

/// Largest |g| along I_t, by phi grid and golden refinement.
double level_curve_max(const std::function<cplx(cplx)>& g, const RegionSpec& reg, double t, std::size_t grid_size);

// --- lower bound over the region ----------------------------------------------

struct RegionProbeResult {
  double max_value = 0.0;
  double max_mid = 0.0;
  double max_arc = 0.0;
};

/// Maximum of |(z - alpha)(z - beta) p(z)| over I_{a/2} and I_a.
RegionProbeResult region_lower_bound_probe(const ArcPolynomial& p, const RegionSpec& reg, std::size_t grid_size);

/// Empirical constant C in exp(-C n^(1/5) log^5 n) matching `value`.
double lower_bound_constant(double value, std::uint64_t n);
double lower_bound_scale(std::uint64_t n);  // n^(1/5) log^5 n

// --- appendix inequalities ----------------------------------------------------

/// 1/2 - 1/2 (sin(y/2) / (y/2))^2, with a series near 0.
double sinc_defect(double y);
/// c^{-4} sinc_defect(c x) for c > 0; x^4/24 for c = 0.
double sinc_family(double c, double x);

struct DiscreteInequalityResult {
  double c = 0.0;
  std::uint64_t m_star_lo = 0;
  std::uint64_t m_star_hi = 0;
  double worst_ratio = 0.0;  // max over m_* of lhs / rhs
  std::uint64_t worst_m_star = 0;
  bool pass = false;
};

struct SincIntegralResult {
  double b = 0.0;
  double inner = 0.0;  // integral over [0, b]
  double outer = 0.0;  // integral over [b, 2b]
  bool pass = false;
};

struct AppendixReport {
  std::uint64_t m = 0;
  double eps = 0.0;
  std::vector<DiscreteInequalityResult> discrete;
  std::vector<SincIntegralResult> integrals;
  /// max over sample x of |c^2 f_c(x) - x^2/24| at the smallest positive c
  double rescaled_limit_error = 0.0;
  /// max over sample x of |f_c(x) - x^4/24| at the same c; large, since the
  /// c^{-4} family does not converge to x^4/24
  double literal_limit_gap = 0.0;
  bool pass = false;
};

/// Checks sum_{j<=m*} f_c(j/m)/log^2(j+3) < sum_{m*<j<=m} f_c(j/m)/log^2(j+3)
/// for every m* in ((1/2 - eps) m, (1/2 + eps) m), plus the sinc-squared
/// integral inequality at each b. Requires m >= 100.
AppendixReport appendix_claim_check(std::span<const double> c_values, std::uint64_t m, double eps,
                                    std::span<const double> b_values);

/// Integral of (sin x / x)^2 over [lo, hi] by adaptive Gauss-Kronrod.
double sinc_squared_integral(double lo, double hi);

}  // namespace tracerec
