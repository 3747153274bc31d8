#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "tracerec/parallel.hpp"
#include "tracerec/polyarc.hpp"

namespace tracerec {

namespace {

constexpr double kPi = std::numbers::pi;

// 1 - |1 - D| without cancellation.
double modulus_defect(cplx d) {
  const double num = 2.0 * d.real() - std::norm(d);
  return num / (1.0 + std::abs(1.0 - d));
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t count) {
  std::vector<double> g(count);
  if (count == 1) {
    g[0] = lo;
    return g;
  }
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t k = 0; k < count; ++k) g[k] = lo + static_cast<double>(k) * step;
  return g;
}

// Indices of the `keep` largest interior local maxima (plateaus and the
// endpoints included), largest first.
std::vector<std::size_t> top_local_maxima(std::span<const double> v, std::size_t keep) {
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const bool left = k == 0 || v[k] >= v[k - 1];
    const bool right = k + 1 == v.size() || v[k] >= v[k + 1];
    if (left && right) idx.push_back(k);
  }
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
  if (idx.size() > keep) idx.resize(keep);
  return idx;
}

template <class F>
ScalarMax refine_grid_max(F&& f, std::span<const double> grid, std::span<const double> values, std::size_t keep) {
  ScalarMax best;
  for (const auto k : top_local_maxima(values, keep)) {
    if (values[k] > best.value) best = {grid[k], values[k]};
    const double lo = grid[k == 0 ? 0 : k - 1];
    const double hi = grid[k + 1 == grid.size() ? k : k + 1];
    const ScalarMax r = golden_section_max(f, lo, hi);
    if (r.value > best.value) best = r;
  }
  return best;
}

}  // namespace

// --- unit disk ----------------------------------------------------------------

UnitDiskReport verify_unit_disk(const HConstruction& h, std::size_t grid_size, unsigned jobs) {
  if (grid_size < 1000) throw std::invalid_argument("verify_unit_disk needs a grid of at least 1000 points");
  UnitDiskReport rep;
  rep.grid_size = grid_size;

  std::vector<double> t(grid_size);
  for (std::size_t k = 0; k < grid_size; ++k) {
    t[k] = -kPi + 2.0 * kPi * static_cast<double>(k) / static_cast<double>(grid_size);
  }
  std::vector<cplx> d(grid_size);
  htilde_defects(h, t, d, jobs);
  rep.max_modulus = -1.0;
  for (std::size_t k = 0; k < grid_size; ++k) {
    const double mod = 1.0 - modulus_defect(d[k]);
    if (mod > rep.max_modulus) {
      rep.max_modulus = mod;
      rep.argmax_t = t[k];
    }
  }
  rep.margin = 1.0 - rep.max_modulus;
  rep.disk_pass = rep.max_modulus <= 1.0 + kDiskTolerance;

  const auto band = uniform_grid(-kDiskBand, kDiskBand, grid_size);
  htilde_defects(h, band, d, jobs);
  rep.band_max_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < grid_size; ++k) {
    // |1 - D|^2 - (1 - 6 t^2)
    const double excess = -2.0 * d[k].real() + std::norm(d[k]) + 6.0 * band[k] * band[k];
    if (excess > rep.band_max_excess) {
      rep.band_max_excess = excess;
      rep.band_argmax_t = band[k];
    }
  }
  rep.band_pass = rep.band_max_excess <= kDiskTolerance;
  rep.modulus_at_zero = std::abs(eval_htilde(h, 0.0, AngleUnit::radians));
  return rep;
}

// --- Lemma-style properties of h ----------------------------------------------

HPropertiesReport verify_h_properties(const HConstruction& h, const RegionSpec& reg, std::size_t membership_grid,
                                      std::size_t points_per_oscillation, unsigned jobs) {
  HPropertiesReport rep;
  const double a = h.a;
  auto member = [&](double turns) { return in_G_a_from_defect(h_defect(h, turns, AngleUnit::turns), reg); };
  rep.member_at_zero = member(0.0);

  // Membership for t in (0, a], turns; conjugate symmetry covers t < 0.
  rep.membership_grid = membership_grid;
  std::vector<double> mt(membership_grid);
  std::vector<double> mrad(membership_grid);
  for (std::size_t k = 0; k < membership_grid; ++k) {
    mt[k] = a * static_cast<double>(k + 1) / static_cast<double>(membership_grid);
    mrad[k] = to_radians(mt[k], AngleUnit::turns);
  }
  std::vector<cplx> md(membership_grid);
  h_defects(h, mrad, md, jobs);
  std::size_t first_out = membership_grid;
  for (std::size_t k = 0; k < membership_grid; ++k) {
    if (!in_G_a_from_defect(md[k], reg)) {
      first_out = k;
      break;
    }
  }
  if (first_out == membership_grid) {
    rep.c4 = 1.0;
    rep.c4_capped = true;
  } else if (!rep.member_at_zero) {
    rep.c4 = 0.0;
  } else {
    double lo = first_out == 0 ? 0.0 : mt[first_out - 1];
    double hi = mt[first_out];
    for (int it = 0; it < 80 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (member(mid) ? lo : hi) = mid;
    }
    rep.c4 = lo / a;
  }

  // Decay: g(t) = (1 - |h|) log^2(1/a) / t on t in [a^(1/2), 1/2].
  const double sqrt_a = std::sqrt(a);
  const double log_sq = std::log(1.0 / a) * std::log(1.0 / a);
  const double step = 1.0 / (static_cast<double>(points_per_oscillation) * static_cast<double>(h.r));
  const double t_lo = sqrt_a;
  const auto count = static_cast<std::size_t>(std::ceil((0.5 - t_lo) / step)) + 1;
  rep.decay_grid = count;
  const auto dt = uniform_grid(t_lo, 0.5, count);
  std::vector<double> drad(count);
  for (std::size_t k = 0; k < count; ++k) drad[k] = to_radians(dt[k], AngleUnit::turns);
  std::vector<cplx> dd(count);
  h_defects(h, drad, dd, jobs);
  auto decay = [&](double turns) {
    return modulus_defect(h_defect(h, turns, AngleUnit::turns)) * log_sq / turns;
  };
  std::vector<double> g(count);
  for (std::size_t k = 0; k < count; ++k) g[k] = modulus_defect(dd[k]) * log_sq / dt[k];
  // suffix minima
  std::vector<std::size_t> arg_suffix(count);
  arg_suffix[count - 1] = count - 1;
  for (std::size_t k = count - 1; k-- > 0;) {
    arg_suffix[k] = g[k] < g[arg_suffix[k + 1]] ? k : arg_suffix[k + 1];
  }
  auto first_at_least = [&](double t) {
    return static_cast<std::size_t>(std::lower_bound(dt.begin(), dt.end(), t) - dt.begin());
  };
  // Minimum of g over t >= C a^(1/2), refined around the grid minimiser.
  auto c5_for = [&](double C, bool refine) {
    const double t_min = C * sqrt_a;
    const std::size_t start = std::min(first_at_least(t_min), count - 1);
    const std::size_t k = arg_suffix[start];
    double best = g[k];
    if (refine) {
      const double lo = std::max(t_min, dt[k == 0 ? 0 : k - 1]);
      const double hi = dt[k + 1 == count ? k : k + 1];
      const ScalarMax r = golden_section_max([&](double t) { return -decay(t); }, lo, hi);
      best = std::min(best, -r.value);
    }
    return best;
  };

  rep.C_ref = std::min(100.0, 0.5 / sqrt_a);
  rep.c5_at_ref = c5_for(rep.C_ref, true);
  rep.C6 = rep.C_ref;
  for (double C = 1.0; C < rep.C_ref; C *= 1.02) {
    if (c5_for(C, false) >= 0.5 * rep.c5_at_ref) {
      rep.C6 = C;
      break;
    }
  }
  rep.c5 = c5_for(rep.C6, true);
  return rep;
}

// --- products -------------------------------------------------------------------

ProductGrid product_grid(std::uint64_t n, double c4, double c5) {
  ProductGrid g;
  if (!(c4 > 0.0) || !(c5 > 0.0)) {
    g.reason = "constants c4 and c5 must be positive";
    return g;
  }
  const double nn = static_cast<double>(n);
  const double ln = std::log(nn);
  const double m = std::floor(std::pow(nn, 0.4) / c4);
  g.m = static_cast<std::uint64_t>(m);
  const double j1 = std::floor(m * ln * ln * ln * ln / (c5 * std::pow(nn, 0.2)));
  g.J1 = j1 >= m ? g.m : static_cast<std::uint64_t>(j1);
  g.J2 = g.m - g.J1;
  if (g.m < 4) {
    g.reason = "degenerate grid: m = " + std::to_string(g.m) + " < 4";
  } else if (j1 >= 0.5 * m) {
    g.reason = "J1 = " + std::to_string(j1) + " is not below m/2 = " + std::to_string(0.5 * m) +
               ", so the range [J1, m - J1) is empty";
  } else {
    g.valid = true;
  }
  return g;
}

double log_abs_factor(const ProductFactor& f, cplx defect, const RegionSpec& reg) {
  switch (f.kind) {
    case FactorKind::unit_root:
      return std::log(std::abs((1.0 - f.zeta) - defect));
    case FactorKind::gap: {
      if (f.d == 0) return 0.0;
      const cplx power_minus_one = cexpm1(static_cast<double>(f.d) * clog1p(-defect));
      return std::log(std::abs(power_minus_one));
    }
    case FactorKind::full: {
      const cplx w_minus_alpha = -reg.alpha_minus_one - defect;
      const cplx w_minus_beta = -std::conj(reg.alpha_minus_one) - defect;
      const cplx log_w = clog1p(-defect);
      cplx sum{1.0, 0.0};
      const ArcPolynomial& p = *f.p;
      if (p.sigma() == 1) sum -= std::exp(static_cast<double>(p.d()) * log_w);
      for (const auto& t : p.tail()) sum += t.coeff * std::exp(static_cast<double>(t.degree) * log_w);
      return std::log(std::abs(w_minus_alpha)) + std::log(std::abs(w_minus_beta)) + std::log(std::abs(sum));
    }
  }
  return 0.0;
}

namespace {

struct LogAccumulator {
  CompensatedSum sum;
  std::uint64_t terms = 0;
  std::uint64_t clamped = 0;
  double min_term = std::numeric_limits<double>::infinity();
};

ProductBoundResult product_over(const ProductFactor& f, const HConstruction& h, const RegionSpec& reg,
                                std::uint64_t m, std::uint64_t j_lo, std::uint64_t j_hi, double delta,
                                unsigned jobs) {
  if (f.kind == FactorKind::full && !f.p) throw std::invalid_argument("full factor needs an arc polynomial");
  const auto parts = parallel_blocks<LogAccumulator>(j_hi - j_lo, jobs, [&](std::uint64_t lo, std::uint64_t hi) {
    LogAccumulator acc;
    constexpr std::uint64_t chunk = 1 << 14;
    std::vector<double> ang;
    std::vector<cplx> def;
    for (std::uint64_t c0 = lo; c0 < hi; c0 += chunk) {
      const std::uint64_t c1 = std::min(hi, c0 + chunk);
      ang.resize(c1 - c0);
      def.resize(c1 - c0);
      for (std::uint64_t k = c0; k < c1; ++k) {
        const double j = static_cast<double>(j_lo + k);
        ang[k - c0] = 2.0 * kPi * (j + delta) / static_cast<double>(m);
      }
      h_defects(h, ang, def, 1);
      for (const auto& d : def) {
        double term = log_abs_factor(f, d, reg);
        if (!(term >= kLogFloor)) {
          term = kLogFloor;
          ++acc.clamped;
        }
        acc.sum.add(term);
        acc.min_term = std::min(acc.min_term, term);
        ++acc.terms;
      }
    }
    return acc;
  });
  ProductBoundResult r;
  CompensatedSum total;
  r.min_log_term = std::numeric_limits<double>::infinity();
  for (const auto& p : parts) {
    total.merge(p.sum);
    r.terms += p.terms;
    r.clamped_terms += p.clamped;
    r.min_log_term = std::min(r.min_log_term, p.min_term);
  }
  r.log_product = total.value();
  r.clamped = r.clamped_terms > 0;
  if (r.terms == 0) r.min_log_term = 0.0;
  return r;
}

void check_product_args(std::uint64_t m, double delta) {
  if (m < 4) throw std::invalid_argument("degenerate product grid: m = " + std::to_string(m) + " < 4");
  if (!(delta >= 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in [0, 1)");
}

}  // namespace

ProductBoundResult log_product_bound(const ProductFactor& f, const HConstruction& h, const RegionSpec& reg,
                                     std::uint64_t m, std::uint64_t J1, std::uint64_t J2, double delta,
                                     unsigned jobs) {
  check_product_args(m, delta);
  if (!(J1 < J2 && J2 <= m)) {
    throw std::invalid_argument("product range needs J1 < J2 <= m, got J1 = " + std::to_string(J1) +
                                ", J2 = " + std::to_string(J2) + ", m = " + std::to_string(m));
  }
  return product_over(f, h, reg, m, J1, J2, delta, jobs);
}

ProductBoundResult log_product_outside_ends(const ProductFactor& f, const HConstruction& h, const RegionSpec& reg,
                                            std::uint64_t m, double delta, unsigned jobs) {
  check_product_args(m, delta);
  return product_over(f, h, reg, m, 1, m - 1, delta, jobs);
}

// --- arc maxima -------------------------------------------------------------------

std::size_t arc_grid_points(std::uint64_t degree, double theta_bound, std::size_t requested) {
  constexpr std::size_t kMaxPoints = std::size_t{1} << 22;
  const double oscillations = static_cast<double>(degree) * 2.0 * theta_bound / (2.0 * kPi);
  const double needed = std::ceil(64.0 * oscillations) + 1.0;
  std::size_t pts = std::max<std::size_t>(requested, 2);
  if (needed > static_cast<double>(pts)) pts = needed >= kMaxPoints ? kMaxPoints : static_cast<std::size_t>(needed);
  return pts;
}

ArcMaxResult arc_max(const SparsePolynomial& p, double theta_bound, std::size_t grid_size) {
  if (grid_size < 2) throw std::invalid_argument("arc_max needs at least 2 grid points");
  ArcMaxResult res;
  const std::size_t pts = arc_grid_points(p.degree(), theta_bound, grid_size);
  res.grid_points = pts;
  const double step = 2.0 * theta_bound / static_cast<double>(pts - 1);
  std::vector<cplx> vals(pts);
  p.on_arc(-theta_bound, step, vals);
  std::vector<double> grid(pts);
  std::vector<double> mod(pts);
  for (std::size_t k = 0; k < pts; ++k) {
    grid[k] = -theta_bound + static_cast<double>(k) * step;
    mod[k] = std::abs(vals[k]);
  }
  grid[pts - 1] = theta_bound;
  const ScalarMax best =
      refine_grid_max([&](double th) { return std::abs(p.on_circle(th)); }, grid, mod, 8);
  res.theta = best.x;
  res.value = best.value;
  return res;
}

ArcMaxResult arc_max(const ArcPolynomial& p, double theta_bound, std::size_t grid_size) {
  return arc_max(p.to_sparse(), theta_bound, grid_size);
}

std::vector<ArcSample> scan_arc(const SparsePolynomial& p, double theta_bound, std::size_t grid_size) {
  if (grid_size < 2) throw std::invalid_argument("scan_arc needs at least 2 grid points");
  const double step = 2.0 * theta_bound / static_cast<double>(grid_size - 1);
  std::vector<cplx> vals(grid_size);
  p.on_arc(-theta_bound, step, vals);
  std::vector<ArcSample> out(grid_size);
  for (std::size_t k = 0; k < grid_size; ++k) out[k] = {-theta_bound + static_cast<double>(k) * step, vals[k]};
  return out;
}

// --- three curves -------------------------------------------------------------------

double level_curve_max(const std::function<cplx(cplx)>& g, const RegionSpec& reg, double t, std::size_t grid_size) {
  if (grid_size < 2) throw std::invalid_argument("level curve scan needs at least 2 points");
  const auto phi = uniform_grid(0.0, 0.5 * kPi, grid_size);
  std::vector<double> mod(grid_size);
  auto f = [&](double ph) { return std::abs(g(level_curve_point(reg, t, ph))); };
  for (std::size_t k = 0; k < grid_size; ++k) mod[k] = f(phi[k]);
  return refine_grid_max(f, phi, mod, 4).value;
}

ThreeRegionReport three_region_check(const DensePolynomial& g, const RegionSpec& reg, std::size_t grid_size) {
  ThreeRegionReport rep;
  const std::function<cplx(cplx)> fn = [&](cplx z) { return g(z); };
  rep.max_chord = level_curve_max(fn, reg, 0.0, grid_size);
  rep.max_mid = level_curve_max(fn, reg, 0.5 * reg.a, grid_size);
  rep.max_arc = level_curve_max(fn, reg, reg.a, grid_size);
  rep.lhs = rep.max_mid;
  rep.rhs = std::sqrt(rep.max_chord * rep.max_arc);
  rep.pass = rep.lhs <= rep.rhs * (1.0 + kThreeRegionSlack);
  return rep;
}

// --- region probe -------------------------------------------------------------------

RegionProbeResult region_lower_bound_probe(const ArcPolynomial& p, const RegionSpec& reg, std::size_t grid_size) {
  const SparsePolynomial sp = p.to_sparse();
  const std::function<cplx(cplx)> q = [&](cplx z) { return (z - reg.alpha) * (z - reg.beta) * sp(z); };
  RegionProbeResult r;
  r.max_mid = level_curve_max(q, reg, 0.5 * reg.a, grid_size);
  r.max_arc = level_curve_max(q, reg, reg.a, grid_size);
  r.max_value = std::max(r.max_mid, r.max_arc);
  return r;
}

double lower_bound_scale(std::uint64_t n) {
  const double nn = static_cast<double>(n);
  const double l = std::log(nn);
  return std::pow(nn, 0.2) * l * l * l * l * l;
}

double lower_bound_constant(double value, std::uint64_t n) { return -std::log(value) / lower_bound_scale(n); }

}  // namespace tracerec
