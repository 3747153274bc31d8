#include "tracerec/reconstruct.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "tracerec/polyarc.hpp"
#include "tracerec/strings.hpp"

namespace tracerec {

std::uint64_t separation_length(std::uint64_t n) { return floor_root(n, 5); }
std::uint64_t window_length(std::uint64_t n) { return 2 * separation_length(n); }
double arc_half_width(std::uint64_t n) { return std::pow(static_cast<double>(n), -0.4); }

// --- window -------------------------------------------------------------------

WindowChoice select_w(const BitString& x, const BitString& y) {
  if (x.size() != y.size()) throw std::invalid_argument("select_w needs strings of equal length");
  const std::size_t n = x.size();
  const std::size_t i = first_difference(x, y);
  if (i == n) throw std::invalid_argument("select_w needs distinct strings");
  const std::size_t l = window_length(n);
  if (l == 0 || i + 1 < l) {
    throw std::invalid_argument("first difference at " + std::to_string(i) + " is before the window length " +
                                std::to_string(l) + "; pad the pair first");
  }
  const std::size_t d = separation_length(n);
  BitString prefix;
  for (std::size_t k = i + 1 - l; k < i; ++k) prefix.push_back(x[k]);

  WindowChoice fallback;
  bool have_fallback = false;
  for (const int bit : {x[i], 1 - x[i]}) {
    BitString w = prefix;
    w.push_back(bit);
    auto px = occurrence_positions(x, w);
    auto py = occurrence_positions(y, w);
    if (is_d_separated(px, d) && is_d_separated(py, d)) {
      WindowChoice c{std::move(w), i, std::move(px), std::move(py)};
      if (bit == x[i]) return c;
      if (!have_fallback) {
        fallback = std::move(c);
        have_fallback = true;
      }
    }
  }
  if (have_fallback) return fallback;
  throw SeparationError("no window ending at index " + std::to_string(i) + " is " + std::to_string(d) +
                            "-separated in both strings",
                        x.to_string(), y.to_string());
}

std::size_t padding_needed(std::size_t n, std::size_t first_difference) {
  for (std::size_t k = 0;; ++k) {
    if (first_difference + k + 1 >= window_length(n + k)) return k;
  }
}

PaddedPair pad_pair(const BitString& x, const BitString& y) {
  if (x.size() != y.size()) throw std::invalid_argument("pad_pair needs strings of equal length");
  const std::size_t k = padding_needed(x.size(), first_difference(x, y));
  return {prepend_zeros<BitString>(x, k), prepend_zeros<BitString>(y, k), k};
}

// --- evaluation points -----------------------------------------------------------

SparsePolynomial difference_polynomial(const BitString& x, const BitString& y, const BitString& w) {
  std::vector<Term> terms;
  for (const auto k : occurrence_positions(x, w)) terms.push_back({k, {1.0, 0.0}});
  for (const auto k : occurrence_positions(y, w)) terms.push_back({k, {-1.0, 0.0}});
  return SparsePolynomial(std::move(terms));
}

Z0Choice select_z0(const BitString& x, const BitString& y, const BitString& w, std::size_t grid_size) {
  const SparsePolynomial diff = difference_polynomial(x, y, w);
  if (diff.is_zero()) throw std::invalid_argument("difference polynomial vanishes; the window does not separate");
  const ArcMaxResult r = arc_max(diff, arc_half_width(x.size()), grid_size);
  return {r.theta, std::polar(1.0, r.theta), r.value, r.grid_points};
}

namespace {

// E_x - E_y with z2..z_{l-1} = z1 is sum_{k0, e} z0^{k0} z1^e M[k0][e],
// where M counts matching tuples of x minus those of y by start k0 and by
// total gap e = k_{l-1} - k0 - (l - 1).
class GapSurface {
public:
  GapSurface(const BitString& x, const BitString& y, const BitString& w) : n_(x.size()), l_(w.size()) {
    span_ = n_ >= l_ ? n_ - l_ + 1 : 0;
    m_.assign(span_ * span_, 0.0);
    add(x, w, 1.0);
    add(y, w, -1.0);
  }

  /// Whether the table stays small enough to build.
  static bool fits(std::size_t n, std::size_t l) {
    const std::size_t span = n >= l ? n - l + 1 : 0;
    return span <= 4096;
  }

  [[nodiscard]] cplx operator()(cplx z0, cplx z1) const {
    cplx outer{0.0, 0.0};
    for (std::size_t k0 = span_; k0-- > 0;) {
      cplx inner{0.0, 0.0};
      for (std::size_t e = span_; e-- > 0;) inner = inner * z1 + m_[k0 * span_ + e];
      outer = outer * z0 + inner;
    }
    return outer;
  }

  /// Coefficients in z1 once z0 is fixed.
  [[nodiscard]] std::vector<cplx> in_z1(cplx z0) const {
    std::vector<cplx> c(span_, cplx{0.0, 0.0});
    for (std::size_t k0 = span_; k0-- > 0;) {
      for (std::size_t e = 0; e < span_; ++e) c[e] = c[e] * z0 + m_[k0 * span_ + e];
    }
    return c;
  }

private:
  void add(const BitString& s, const BitString& w, double sign) {
    std::vector<double> ways(n_);
    std::vector<double> next(n_);
    for (std::size_t k0 = 0; k0 < span_; ++k0) {
      if (s[k0] != w[0]) continue;
      std::fill(ways.begin(), ways.end(), 0.0);
      ways[k0] = 1.0;
      for (std::size_t i = 1; i < l_; ++i) {
        double run = 0.0;
        for (std::size_t j = 0; j < n_; ++j) {
          next[j] = s[j] == w[i] ? run : 0.0;
          run += ways[j];
        }
        std::swap(ways, next);
      }
      for (std::size_t end = k0 + l_ - 1; end < n_; ++end) {
        m_[k0 * span_ + (end - k0 - (l_ - 1))] += sign * ways[end];
      }
    }
  }

  std::size_t n_;
  std::size_t l_;
  std::size_t span_ = 0;
  std::vector<double> m_;
};

EvalVector make_eval(cplx z0, double z1, std::size_t l) {
  EvalVector zv;
  zv.z0 = z0;
  zv.rest.assign(l - 1, cplx{z1, 0.0});
  return zv;
}

}  // namespace

Z1Choice select_z1(const BitString& x, const BitString& y, const BitString& w, cplx z0, const ChannelParams& ch,
                   std::size_t grid_size) {
  Z1Choice out;
  if (w.size() <= 1) {
    const EvalVector zv = make_eval(z0, 1.0, 1);
    out.value = std::abs(weighted_subsequence_sum(x, w, zv) - weighted_subsequence_sum(y, w, zv));
    return out;
  }
  const double lo = 1.0 - 2.0 * ch.p();
  ScalarMax best;
  if (GapSurface::fits(x.size(), w.size())) {
    const std::vector<cplx> c = GapSurface(x, y, w).in_z1(z0);
    best = grid_search_max(
        [&](double z1) {
          cplx v{0.0, 0.0};
          for (std::size_t e = c.size(); e-- > 0;) v = v * z1 + c[e];
          return std::abs(v);
        },
        lo, 1.0, grid_size);
  } else {
    best = grid_search_max(
        [&](double z1) {
          const EvalVector zv = make_eval(z0, z1, w.size());
          return std::abs(weighted_subsequence_sum(x, w, zv) - weighted_subsequence_sum(y, w, zv));
        },
        lo, 1.0, grid_size);
  }
  out.z1 = best.x;
  out.rest.assign(w.size() - 1, cplx{best.x, 0.0});
  const EvalVector zv = make_eval(z0, best.x, w.size());
  out.value = std::abs(weighted_subsequence_sum(x, w, zv) - weighted_subsequence_sum(y, w, zv));
  return out;
}

// --- Hoeffding plan ------------------------------------------------------------

StatisticBound distinguisher_statistic_bound(cplx z0, std::size_t l, std::size_t n, const ChannelParams& ch) {
  if (l == 0 || l > n) throw std::invalid_argument("statistic bound needs 1 <= l <= n");
  const double p = ch.p();
  const double log_zeta = std::log(std::abs((z0 - ch.q()) / p));
  LogSumExp sum;
  for (std::size_t j0 = 0; j0 + l <= n; ++j0) {
    sum.add(static_cast<double>(j0) * log_zeta +
            log_binomial(static_cast<double>(n - 1 - j0), static_cast<double>(l - 1)));
  }
  StatisticBound b;
  b.log_value = sum.value() - static_cast<double>(l) * std::log(p);
  b.overflow = b.log_value > std::log(std::numeric_limits<double>::max());
  b.value = b.overflow ? std::numeric_limits<double>::infinity() : std::exp(b.log_value);
  return b;
}

double required_traces_unchecked(double gap, double bound, double delta) {
  if (!(gap > 0.0)) throw std::invalid_argument("required_traces needs gap > 0");
  if (!(bound >= 0.5 * gap)) throw std::invalid_argument("required_traces needs bound >= gap / 2");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("required_traces needs 0 < delta < 1");
  const double ratio = bound / gap;
  return std::ceil(8.0 * ratio * ratio * std::log(4.0 / delta));
}

std::uint64_t required_traces(double gap, double bound, double delta, std::uint64_t t_max) {
  const double t = std::max(1.0, required_traces_unchecked(gap, bound, delta));
  if (!(t <= static_cast<double>(t_max))) {
    throw TraceBudgetError("required traces " + std::to_string(t) + " exceed the budget " + std::to_string(t_max));
  }
  return static_cast<std::uint64_t>(t);
}

namespace {

struct PointChoice {
  double theta = 0.0;
  double z1 = 1.0;
  double z0_value = 0.0;
};

double log_bound_at(double theta, std::size_t l, std::size_t n, const ChannelParams& ch) {
  return distinguisher_statistic_bound(std::polar(1.0, theta), l, n, ch).log_value;
}

// Joint search of log(|gap| / bound) over |theta| <= arc width and z1 in
// [1 - 2p, 1]; the objective is even in theta.
PointChoice ratio_search(const BitString& x, const BitString& y, const BitString& w, const ChannelParams& ch) {
  const std::size_t n = x.size();
  const std::size_t l = w.size();
  const double width = arc_half_width(n);
  const double lo = 1.0 - 2.0 * ch.p();
  if (!GapSurface::fits(n, l)) throw std::invalid_argument("the ratio objective supports n - l < 4096 only");
  const GapSurface surface(x, y, w);
  auto objective = [&](double theta, double z1) {
    const double g = std::abs(surface(std::polar(1.0, theta), z1));
    return g > 0.0 ? std::log(g) - log_bound_at(theta, l, n, ch) : -std::numeric_limits<double>::infinity();
  };
  constexpr std::size_t kTheta = 65;
  constexpr std::size_t kZ1 = 33;
  PointChoice best;
  double best_val = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < kTheta; ++a) {
    const double th = width * static_cast<double>(a) / (kTheta - 1);
    for (std::size_t b = 0; b < kZ1; ++b) {
      const double z1 = l > 1 ? lo + (1.0 - lo) * static_cast<double>(b) / (kZ1 - 1) : 1.0;
      const double v = objective(th, z1);
      if (v > best_val) {
        best_val = v;
        best.theta = th;
        best.z1 = z1;
      }
      if (l == 1) break;
    }
  }
  // Coordinate refinement inside neighbouring cells.
  double th_step = width / (kTheta - 1);
  double z_step = (1.0 - lo) / (kZ1 - 1);
  for (int round = 0; round < 3; ++round) {
    const ScalarMax t = golden_section_max([&](double th) { return objective(th, best.z1); },
                                           std::max(0.0, best.theta - th_step), std::min(width, best.theta + th_step));
    if (t.value >= best_val) {
      best_val = t.value;
      best.theta = t.x;
    }
    if (l > 1) {
      const ScalarMax z = golden_section_max([&](double z1) { return objective(best.theta, z1); },
                                             std::max(lo, best.z1 - z_step), std::min(1.0, best.z1 + z_step));
      if (z.value >= best_val) {
        best_val = z.value;
        best.z1 = z.x;
      }
    }
    th_step *= 0.5;
    z_step *= 0.5;
  }
  return best;
}

DistinguisherPlan plan_canonical(const BitString& x, const BitString& y, const ChannelParams& ch, double delta,
                                 const PlanOptions& opt) {
  DistinguisherPlan plan;
  plan.x = x;
  plan.y = y;
  const PaddedPair padded = pad_pair(x, y);
  plan.pad = padded.pad;
  const BitString& px = padded.x;
  const BitString& py = padded.y;
  const std::size_t n = px.size();
  const WindowChoice win = select_w(px, py);
  plan.w = win.w;

  if (opt.objective == PlanObjective::gap) {
    const Z0Choice z0 = select_z0(px, py, win.w, opt.z0_grid);
    plan.theta = z0.theta;
    plan.z0_search_value = z0.value;
    const Z1Choice z1 = select_z1(px, py, win.w, z0.z0, ch, opt.z1_grid);
    plan.zv = make_eval(z0.z0, z1.z1, win.w.size());
  } else {
    const PointChoice pc = ratio_search(px, py, win.w, ch);
    plan.theta = pc.theta;
    plan.z0_search_value = std::abs(difference_polynomial(px, py, win.w).on_circle(pc.theta));
    plan.zv = make_eval(std::polar(1.0, pc.theta), pc.z1, win.w.size());
  }
  plan.expect_x = weighted_subsequence_sum(px, win.w, plan.zv);
  plan.expect_y = weighted_subsequence_sum(py, win.w, plan.zv);
  plan.threshold = 0.5 * (plan.expect_x + plan.expect_y);
  plan.gap = std::abs(plan.expect_x - plan.expect_y);
  plan.bound = distinguisher_statistic_bound(plan.zv.z0, win.w.size(), n, ch);
  if (!(plan.gap > 0.0)) throw std::runtime_error("selected evaluation point gives a zero gap for " + x.to_string() +
                                                  " vs " + y.to_string());
  plan.traces_needed = plan.bound.overflow ? std::numeric_limits<double>::infinity()
                                           : required_traces_unchecked(plan.gap, plan.bound.value, delta);
  plan.traces_needed = std::max(1.0, plan.traces_needed);
  plan.over_budget = !(plan.traces_needed <= static_cast<double>(opt.t_max));
  plan.T = plan.over_budget ? 0 : static_cast<std::uint64_t>(plan.traces_needed);
  return plan;
}

}  // namespace

DistinguisherPlan build_plan(const BitString& x, const BitString& y, const ChannelParams& ch, double delta,
                             const PlanOptions& opt) {
  ch.require_interior("build_plan");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("build_plan needs 0 < delta < 1");
  if (y < x) {
    DistinguisherPlan plan = plan_canonical(y, x, ch, delta, opt);
    std::swap(plan.x, plan.y);
    std::swap(plan.expect_x, plan.expect_y);
    return plan;
  }
  return plan_canonical(x, y, ch, delta, opt);
}

Verdict decide(cplx mean, const DistinguisherPlan& plan) {
  Verdict v;
  v.statistic = mean;
  const double dx = std::abs(mean - plan.expect_x);
  const double dy = std::abs(mean - plan.expect_y);
  // Exact ties go to the lexicographically smaller candidate.
  const bool x_first = plan.x < plan.y;
  v.winner = dx < dy ? 0 : dy < dx ? 1 : (x_first ? 0 : 1);
  v.margin = 0.5 * std::abs(dx - dy);
  return v;
}

Verdict distinguish(const TracePool& pool, const DistinguisherPlan& plan, const ChannelParams& ch,
                    bool enforce_budget) {
  if (enforce_budget) {
    if (plan.over_budget) {
      throw TraceBudgetError("plan needs " + std::to_string(plan.traces_needed) + " traces, over the budget");
    }
    if (pool.total() < plan.T) {
      throw std::invalid_argument("pool holds " + std::to_string(pool.total()) + " traces, plan needs " +
                                  std::to_string(plan.T));
    }
  }
  const MeanResult mean = plan.pad == 0 ? mean_statistic(pool, plan.w, plan.zv, ch)
                                        : mean_statistic(pad_pool(pool, plan.pad, ch), plan.w, plan.zv, ch);
  return decide(mean.mean, plan);
}

}  // namespace tracerec
