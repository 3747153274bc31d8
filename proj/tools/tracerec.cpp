// Command-line front end. Every subcommand writes CSV or JSON to stdout (or
// --output) and exits 0 on success, 1 when a verification fails and 2 on
// usage errors.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tracerec/estimator.hpp"
#include "tracerec/kernels.hpp"
#include "tracerec/oracle.hpp"
#include "tracerec/parallel.hpp"
#include "tracerec/polyarc.hpp"
#include "tracerec/reconstruct.hpp"
#include "tracerec/strings.hpp"

using namespace tracerec;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::uint64_t seed = kDefaultSeed;
  unsigned jobs = 1;
  std::string output;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "64-bit master seed")->capture_default_str();
  sub->add_option("--jobs", c.jobs, "worker threads (TRACEREC_JOBS overrides)")->capture_default_str();
  sub->add_option("--output", c.output, "write to this file instead of stdout");
}

void emit(const Common& c, const std::string& text) {
  if (c.output.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(c.output, std::ios::binary);
  if (!out) throw UsageError("cannot open output file " + c.output);
  out << text;
}

void emit_json(const Common& c, json j) {
  json doc;
  doc["schema"] = 1;
  for (auto& [k, v] : j.items()) doc[k] = v;
  emit(c, doc.dump(2) + "\n");
}

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

BitString read_single_string(const std::string& path) {
  const auto all = read_strings(path);
  if (all.size() != 1) throw FormatError(path + ": expected exactly one string, found " + std::to_string(all.size()));
  return all.front();
}

BitString random_string(std::uint64_t seed, std::uint64_t stream, std::size_t n) {
  auto rng = SplitMix64::substream(seed, stream);
  BitString s;
  for (std::size_t j = 0; j < n; ++j) s.push_back(static_cast<int>(rng() >> 63));
  return s;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

PlanObjective parse_objective(const std::string& s) {
  if (s == "gap") return PlanObjective::gap;
  if (s == "ratio") return PlanObjective::hoeffding_ratio;
  throw UsageError("unknown objective '" + s + "' (expected gap or ratio)");
}

HConstruction build_h_from(std::uint64_t n, std::uint64_t r) {
  if (r != 0) {
    if (r > 6000) throw UsageError("--r must be at most 6000");
    n = r * r * r * r * r;
  }
  return build_h(n);
}

json h_error_json(const HConstructionError& e) {
  return json{{"error", e.what()}, {"smallest_valid_n", e.smallest_valid_n()}};
}

// --- subcommands -------------------------------------------------------------

struct SimulateArgs {
  Common c;
  std::size_t n = 0;
  double q = 0.5;
  std::string input;
  std::string input_file;
  std::uint64_t traces = 1;
};

int run_simulate(const SimulateArgs& a) {
  const BitString x = a.input_file.empty() ? BitString(a.input) : read_single_string(a.input_file);
  if (a.n != 0 && a.n != x.size()) {
    throw UsageError("--n " + std::to_string(a.n) + " does not match the input length " + std::to_string(x.size()));
  }
  if (a.traces > 10'000'000) throw UsageError("--traces is limited to 1e7");
  const ChannelParams ch = ChannelParams::simulation_only(a.q);
  std::string out;
  for (std::uint64_t t = 0; t < a.traces; ++t) {
    out += sample_trace(x, ch, a.c.seed, t).to_string();
    out += '\n';
  }
  emit(a.c, out);
  return kExitOk;
}

struct EstimateArgs {
  Common c;
  double q = 0.5;
  std::string input;
  std::string traces_file;
  std::uint64_t traces = 1000;
  std::string w = "1";
  double z0_re = 1.0;
  double z0_im = 0.0;
  double z1 = 1.0;
};

int run_estimate(const EstimateArgs& a) {
  const ChannelParams ch(a.q);
  std::vector<Trace> traces;
  if (!a.traces_file.empty()) {
    traces = read_traces(a.traces_file);
  } else {
    if (a.input.empty()) throw UsageError("estimate needs --input or --traces-file");
    traces = sample_traces(BitString(a.input), ch, a.traces, a.c.seed);
  }
  const BitString w(a.w);
  if (w.empty()) throw UsageError("--w must be nonempty");
  const EvalVector zv{{a.z0_re, a.z0_im}, std::vector<cplx>(w.size() - 1, cplx{a.z1, 0.0})};
  std::string out = "trace_index,re,im\n";
  for (std::size_t t = 0; t < traces.size(); ++t) {
    const cplx v = subsequence_statistic(traces[t], w, zv, ch);
    out += std::to_string(t) + "," + fmt(v.real()) + "," + fmt(v.imag()) + "\n";
  }
  emit(a.c, out);
  return kExitOk;
}

struct IdentityArgs {
  Common c;
  std::size_t n_max = 8;
  std::size_t trials = 20;
  std::size_t l_max = 3;
};

int run_verify_identity(const IdentityArgs& a) {
  if (a.n_max > 12) throw UsageError("--n-max is limited to 12");
  std::mt19937_64 rng(a.c.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> qd(0.05, 0.95);
  auto disk = [&] {
    while (true) {
      const cplx z{u(rng), u(rng)};
      if (std::abs(z) <= 1.0) return z;
    }
  };
  double worst = 0.0;
  std::uint64_t checks = 0;
  for (std::size_t n = 1; n <= a.n_max; ++n) {
    for (std::uint64_t xv = 0; xv < (std::uint64_t{1} << n); ++xv) {
      const BitString x = BitString::from_integer(xv, n);
      for (std::size_t t = 0; t < a.trials; ++t) {
        const ChannelParams ch(qd(rng));
        const std::size_t l = 1 + rng() % std::max<std::size_t>(1, a.l_max);
        const BitString w = BitString::from_integer(rng() & ((std::uint64_t{1} << l) - 1), l);
        EvalVector zv{disk(), {}};
        for (std::size_t i = 1; i < l; ++i) zv.rest.push_back(disk());
        const cplx lhs =
            exact_statistic_expectation(x, ch, [&](const Trace& tr) { return subsequence_statistic(tr, w, zv, ch); });
        worst = std::max(worst, std::abs(lhs - weighted_subsequence_sum(x, w, zv)));
        ++checks;
      }
    }
  }
  const bool pass = worst <= 1e-10;
  emit_json(a.c, {{"n_max", a.n_max}, {"trials", a.trials}, {"checks", checks}, {"max_abs_error", worst},
                  {"tolerance", 1e-10}, {"pass", pass}});
  return pass ? kExitOk : kExitFailed;
}

struct HArgs {
  Common c;
  std::uint64_t n = 0;
  std::uint64_t r = 0;
  std::size_t grid = 1000000;
  std::size_t membership_grid = 4096;
  std::size_t density = 64;
};

int run_build_h(const HArgs& a) {
  try {
    const HConstruction h = build_h_from(a.n, a.r);
    emit_json(a.c, {{"n", h.n},
                    {"a", h.a},
                    {"r", h.r},
                    {"r_star", h.r_star},
                    {"signed_sum", h.signed_sum},
                    {"lambda_a", h.lambda_a},
                    {"lambda_tilde_a", h.lambda_tilde_a},
                    {"shrink", h.shrink},
                    {"htilde_at_one", eval_htilde(h, 0.0, AngleUnit::radians).real()},
                    {"coeffs", h.coeffs}});
    return kExitOk;
  } catch (const HConstructionError& e) {
    emit_json(a.c, h_error_json(e));
    return kExitFailed;
  }
}

int run_verify_h(const HArgs& a) {
  try {
    const HConstruction h = build_h_from(a.n, a.r);
    const unsigned jobs = resolve_jobs(a.c.jobs);
    const UnitDiskReport disk = verify_unit_disk(h, a.grid, jobs);
    const HPropertiesReport props = verify_h_properties(h, make_region(h.a), a.membership_grid, a.density, jobs);
    const bool pass = disk.disk_pass && disk.band_pass && props.member_at_zero && props.c4 > 0 && props.c5 > 0;
    emit_json(a.c, {{"n", h.n},
                    {"r", h.r},
                    {"a", h.a},
                    {"kernel", kernels::isa_name(kernels::active_isa())},
                    {"unit_disk",
                     {{"grid_size", disk.grid_size},
                      {"max_modulus", disk.max_modulus},
                      {"argmax_t", disk.argmax_t},
                      {"margin", disk.margin},
                      {"band_max_excess", disk.band_max_excess},
                      {"band_argmax_t", disk.band_argmax_t},
                      {"disk_pass", disk.disk_pass},
                      {"band_pass", disk.band_pass}}},
                    {"properties",
                     {{"c4", props.c4},
                      {"c4_capped", props.c4_capped},
                      {"c5", props.c5},
                      {"C6", props.C6},
                      {"c5_at_ref", props.c5_at_ref},
                      {"C_ref", props.C_ref},
                      {"member_at_zero", props.member_at_zero},
                      {"membership_grid", props.membership_grid},
                      {"decay_grid", props.decay_grid},
                      {"empirical", true}}},
                    {"pass", pass}});
    return pass ? kExitOk : kExitFailed;
  } catch (const HConstructionError& e) {
    emit_json(a.c, h_error_json(e));
    return kExitFailed;
  }
}

struct ArcArgs {
  Common c;
  std::string x;
  std::string y;
  std::size_t n = 1000;
  std::size_t grid = 2048;
};

std::pair<BitString, BitString> arc_pair(const ArcArgs& a) {
  if (!a.x.empty() || !a.y.empty()) {
    if (a.x.empty() || a.y.empty()) throw UsageError("give both --x and --y, or neither");
    return {BitString(a.x), BitString(a.y)};
  }
  const BitString x = random_string(a.c.seed, 0, a.n);
  BitString y = random_string(a.c.seed, 1, a.n);
  return {x, y};
}

int run_scan_arc(const ArcArgs& a) {
  const auto [x0, y0] = arc_pair(a);
  const PaddedPair p = pad_pair(x0, y0);
  const WindowChoice win = select_w(p.x, p.y);
  const SparsePolynomial diff = difference_polynomial(p.x, p.y, win.w);
  std::string out = "theta,re,im,abs\n";
  for (const auto& s : scan_arc(diff, arc_half_width(p.x.size()), a.grid)) {
    out += fmt(s.theta) + "," + fmt(s.value.real()) + "," + fmt(s.value.imag()) + "," + fmt(std::abs(s.value)) + "\n";
  }
  emit(a.c, out);
  return kExitOk;
}

struct ProductArgs {
  Common c;
  std::uint64_t n = 0;
  std::uint64_t r = 439;
  std::string factor = "gap";
  std::uint64_t d = 1;
  double zeta_angle = 0.5;
  std::uint64_t m = 0;
  std::uint64_t J1 = 0;
  std::uint64_t J2 = 0;
  double delta = 0.0;
  std::size_t tail_terms = 20;
};

int run_product_bound(const ProductArgs& a) {
  try {
    const HConstruction h = build_h_from(a.n, a.n != 0 ? 0 : a.r);
    const RegionSpec reg = make_region(h.a);
    ProductFactor f = ProductFactor::gap(a.d);
    if (a.factor == "unit-root") {
      f = ProductFactor::unit_root(std::polar(1.0, a.zeta_angle));
    } else if (a.factor == "full") {
      auto rng = SplitMix64::substream(a.c.seed, 7);
      const std::uint64_t cut = std::max<std::uint64_t>(1, floor_root(h.n, 5));
      std::vector<Term> tail;
      for (std::size_t k = 0; k < a.tail_terms; ++k) {
        const std::uint64_t deg = cut + rng() % (std::min<std::uint64_t>(h.n, 1'000'000) - cut + 1);
        tail.push_back({deg, std::polar(rng.uniform(), 2.0 * std::numbers::pi * rng.uniform())});
      }
      const std::uint64_t d = cut > 1 ? 1 + rng() % (cut - 1) : 0;
      f = ProductFactor::full(ArcPolynomial(h.n, d, d > 0 ? 1 : 0, tail));
    } else if (a.factor != "gap") {
      throw UsageError("unknown --factor '" + a.factor + "' (expected unit-root, gap or full)");
    }
    const unsigned jobs = resolve_jobs(a.c.jobs);
    json out{{"n", h.n}, {"r", h.r}, {"factor", a.factor}};
    const ProductGrid grid = product_grid(h.n, 0.0217, 96.4);
    std::uint64_t m = a.m != 0 ? a.m : std::min<std::uint64_t>(grid.m, 1u << 20);
    ProductBoundResult res;
    if (a.J2 != 0) {
      res = log_product_bound(f, h, reg, m, a.J1, a.J2, a.delta, jobs);
    } else {
      res = log_product_outside_ends(f, h, reg, m, a.delta, jobs);
    }
    out["m"] = m;
    out["J1"] = a.J2 != 0 ? a.J1 : 1;
    out["J2"] = a.J2 != 0 ? a.J2 : m - 1;
    out["delta"] = a.delta;
    out["log_product"] = res.log_product;
    out["terms"] = res.terms;
    out["clamped_terms"] = res.clamped_terms;
    out["clamped"] = res.clamped;
    out["min_log_term"] = res.min_log_term;
    out["scale"] = lower_bound_scale(h.n);
    out["reference_grid"] = {{"m", grid.m}, {"J1", grid.J1}, {"J2", grid.J2}, {"valid", grid.valid},
                             {"reason", grid.reason}};
    emit_json(a.c, out);
    return kExitOk;
  } catch (const HConstructionError& e) {
    emit_json(a.c, h_error_json(e));
    return kExitFailed;
  }
}

struct AppendixArgs {
  Common c;
  std::uint64_t m = 1000;
  double eps = 0.05;
  std::vector<double> c_values{0.0, 0.5, 1.0, 2.0, 5.0};
  std::size_t b_count = 100;
  double b_max = 20.0;
};

int run_appendix(const AppendixArgs& a) {
  std::vector<double> bs;
  for (std::size_t k = 1; k <= a.b_count; ++k) bs.push_back(a.b_max * static_cast<double>(k) / a.b_count);
  const AppendixReport rep = appendix_claim_check(a.c_values, a.m, a.eps, bs);
  json discrete = json::array();
  for (const auto& d : rep.discrete) {
    discrete.push_back({{"c", d.c}, {"m_star_lo", d.m_star_lo}, {"m_star_hi", d.m_star_hi},
                        {"worst_ratio", d.worst_ratio}, {"worst_m_star", d.worst_m_star}, {"pass", d.pass}});
  }
  std::size_t integral_pass = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  for (const auto& s : rep.integrals) {
    integral_pass += s.pass;
    worst_margin = std::min(worst_margin, s.inner - s.outer);
  }
  emit_json(a.c, {{"m", rep.m},
                  {"eps", rep.eps},
                  {"discrete", discrete},
                  {"integrals", {{"count", rep.integrals.size()}, {"pass", integral_pass},
                                 {"min_inner_minus_outer", worst_margin}}},
                  {"rescaled_limit_error", rep.rescaled_limit_error},
                  {"literal_limit_gap", rep.literal_limit_gap},
                  {"pass", rep.pass}});
  return rep.pass ? kExitOk : kExitFailed;
}

struct DistinguishArgs {
  Common c;
  std::string x;
  std::string y;
  std::string truth = "x";
  double q = 0.5;
  double delta = 0.1;
  std::string objective = "gap";
  std::uint64_t t_max = kDefaultTraceBudget;
};

int run_distinguish(const DistinguishArgs& a) {
  const BitString x(a.x);
  const BitString y(a.y);
  if (x.size() != y.size() || x == y) throw UsageError("--x and --y must be distinct strings of equal length");
  if (a.truth != "x" && a.truth != "y") throw UsageError("--truth must be x or y");
  const ChannelParams ch(a.q);
  PlanOptions opt;
  opt.objective = parse_objective(a.objective);
  opt.t_max = a.t_max;
  const DistinguisherPlan plan = build_plan(x, y, ch, a.delta, opt);
  json out{{"x", a.x}, {"y", a.y}, {"truth", a.truth}, {"q", a.q}, {"delta", a.delta}, {"objective", a.objective},
           {"pad", plan.pad}, {"w", plan.w.to_string()}, {"z0", cplx_json(plan.zv.z0)},
           {"z1", plan.zv.rest.empty() ? json(nullptr) : json(plan.zv.rest.front().real())},
           {"gap", plan.gap}, {"bound", plan.bound.value}, {"log_bound", plan.bound.log_value},
           {"traces_needed", plan.traces_needed}};
  if (plan.over_budget) {
    out["error"] = "required traces exceed the budget of " + std::to_string(a.t_max);
    emit_json(a.c, out);
    return kExitFailed;
  }
  const TracePool pool = x.size() <= 20 ? sample_pool_multinomial(a.truth == "x" ? x : y, ch, plan.T, a.c.seed)
                                        : sample_pool(a.truth == "x" ? x : y, ch, plan.T, a.c.seed,
                                                      resolve_jobs(a.c.jobs));
  const Verdict v = distinguish(pool, plan, ch);
  out["T"] = plan.T;
  out["winner"] = v.winner == 0 ? "x" : "y";
  out["statistic"] = cplx_json(v.statistic);
  out["margin"] = v.margin;
  out["correct"] = (v.winner == 0) == (a.truth == "x");
  emit_json(a.c, out);
  return kExitOk;
}

struct ReconstructArgs {
  Common c;
  std::size_t n = 10;
  double q = 0.1;
  double delta = 0.1;
  std::string traces_file;
  std::string truth_file;
  std::string truth;
  std::string objective = "gap";
  std::uint64_t t_max = kDefaultTraceBudget;
};

int run_reconstruct(const ReconstructArgs& a) {
  if (a.n < 1 || a.n > 20) throw SizeLimitError("reconstruct supports 1 <= n <= 20, got " + std::to_string(a.n));
  const auto start = std::chrono::steady_clock::now();
  const ChannelParams ch(a.q);
  PlanOptions opt;
  opt.objective = parse_objective(a.objective);
  opt.t_max = a.t_max;
  const unsigned jobs = resolve_jobs(a.c.jobs);
  PlanCache cache(ch, a.delta, opt);
  std::optional<BitString> truth;
  if (!a.truth.empty()) truth = BitString(a.truth);
  if (!a.truth_file.empty()) truth = read_single_string(a.truth_file);
  if (truth && truth->size() != a.n) throw UsageError("truth length differs from --n");

  TracePool pool;
  json out;
  if (!a.traces_file.empty()) {
    const auto traces = read_traces(a.traces_file);
    for (const auto& t : traces) {
      if (t.size() > a.n) throw FormatError(a.traces_file + ": trace longer than n");
    }
    pool = TracePool(traces);
    pool.set_derived_seed(a.c.seed);
  } else {
    if (!truth) truth = random_string(a.c.seed, 0, a.n);
    const PairwiseRequirement req = max_pairwise_traces(a.n, ch, a.delta, opt, &cache, jobs);
    out["max_pairwise_traces"] = req.max_traces;
    out["worst_pair"] = {req.worst_x.to_string(), req.worst_y.to_string()};
    if (!(req.max_traces <= static_cast<double>(a.t_max))) {
      out["error"] = "required traces " + fmt(req.max_traces) + " exceed the budget of " + std::to_string(a.t_max);
      emit_json(a.c, out);
      return kExitFailed;
    }
    pool = sample_pool_multinomial(*truth, ch, static_cast<std::uint64_t>(req.max_traces), a.c.seed);
  }
  ReconstructOptions ropt;
  ropt.plan = opt;
  ropt.jobs = jobs;
  try {
    const ReconstructResult r = reconstruct(pool, a.n, cache, ropt);
    out["estimate"] = r.estimate.to_string();
    out["correct"] = truth ? json(r.estimate == *truth) : json(nullptr);
    out["T_used"] = r.traces_used;
    out["max_T_tested"] = r.max_T_tested;
    out["pairs_tested"] = r.pairs_tested;
  } catch (const TournamentError& e) {
    json cycle = json::array();
    for (const auto& s : e.cycle()) cycle.push_back(s.to_string());
    out["error"] = e.what();
    out["cycle"] = cycle;
    emit_json(a.c, out);
    return kExitFailed;
  } catch (const TraceBudgetError& e) {
    out["error"] = e.what();
    emit_json(a.c, out);
    return kExitFailed;
  }
  out["runtime_ms"] =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  emit_json(a.c, out);
  return kExitOk;
}

struct RobsonArgs {
  Common c;
  std::vector<std::size_t> n_values{32, 64, 128, 256, 512, 1024};
  std::uint64_t pairs = 10000;
};

int run_robson(const RobsonArgs& a) {
  json per_n = json::array();
  std::uint64_t total_errors = 0;
  for (const auto n : a.n_values) {
    if (n < 2 || n > 1 << 16) throw UsageError("--n values must lie in [2, 65536]");
    // Each block of pairs draws from its own stream so jobs do not matter.
    struct Tally {
      std::uint64_t errors = 0;
      std::uint64_t padded = 0;
      std::vector<std::string> examples;
    };
    const auto parts = parallel_blocks<Tally>(a.pairs, resolve_jobs(a.c.jobs), [&](std::uint64_t lo, std::uint64_t hi) {
      Tally t;
      for (std::uint64_t k = lo; k < hi; ++k) {
        const BitString x = random_string(a.c.seed ^ n, 2 * k, n);
        BitString y = random_string(a.c.seed ^ n, 2 * k + 1, n);
        if (x == y) continue;
        const PaddedPair p = pad_pair(x, y);
        t.padded += p.pad > 0;
        try {
          (void)select_w(p.x, p.y);
        } catch (const SeparationError& e) {
          ++t.errors;
          if (t.examples.size() < 3) t.examples.push_back(e.x() + " / " + e.y());
        }
      }
      return t;
    });
    Tally all;
    for (const auto& t : parts) {
      all.errors += t.errors;
      all.padded += t.padded;
      for (const auto& e : t.examples) {
        if (all.examples.size() < 3) all.examples.push_back(e);
      }
    }
    total_errors += all.errors;
    per_n.push_back({{"n", n}, {"pairs", a.pairs}, {"padded", all.padded}, {"hard_errors", all.errors},
                     {"examples", all.examples}});
  }
  emit_json(a.c, {{"runs", per_n}, {"hard_errors", total_errors}, {"pass", total_errors == 0}});
  return total_errors == 0 ? kExitOk : kExitFailed;
}

struct BenchArgs {
  Common c;
  std::size_t size = 1 << 16;
};

int run_bench(const BenchArgs& a) {
  std::mt19937_64 rng(a.c.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> coeffs(439);
  for (auto& v : coeffs) v = u(rng) / 439.0;
  std::vector<double> angles(a.size);
  for (auto& v : angles) v = 3.0 * u(rng);
  std::vector<std::uint64_t> deg(256);
  std::vector<cplx> cf(256);
  for (std::size_t k = 0; k < deg.size(); ++k) {
    deg[k] = rng() % 100000;
    cf[k] = {u(rng), u(rng)};
  }
  std::vector<cplx> out(a.size);
  json runs = json::array();
  for (const auto isa : {kernels::Isa::scalar, kernels::Isa::avx2}) {
    if (!kernels::isa_available(isa)) continue;
    auto t0 = std::chrono::steady_clock::now();
    kernels::circle_defect_sums(coeffs, angles, out, isa);
    const double circle_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    t0 = std::chrono::steady_clock::now();
    kernels::sparse_arc_sums(deg, cf, -0.01, 1e-6, out, isa);
    const double arc_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    runs.push_back({{"kernel", kernels::isa_name(isa)}, {"circle_defect_ms", circle_ms}, {"sparse_arc_ms", arc_ms}});
  }
  emit_json(a.c, {{"size", a.size}, {"runs", runs}});
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tracerec: deletion-channel trace reconstruction laboratory"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "help for every subcommand");

  SimulateArgs sim;
  auto* s_sim = app.add_subcommand("simulate", "sample traces of a source string");
  add_common(s_sim, sim.c);
  s_sim->add_option("--n", sim.n, "source length (checked against the input)");
  s_sim->add_option("--q", sim.q, "deletion probability in [0, 1]")->capture_default_str();
  auto* in_opt = s_sim->add_option("--input", sim.input, "source string of 0/1");
  auto* in_file = s_sim->add_option("--input-file", sim.input_file, "file holding the source string");
  in_opt->excludes(in_file);
  s_sim->add_option("--traces", sim.traces, "number of traces")->capture_default_str();

  EstimateArgs est;
  auto* s_est = app.add_subcommand("estimate", "per-trace statistic values as CSV");
  add_common(s_est, est.c);
  s_est->add_option("--q", est.q, "deletion probability in (0, 1)")->capture_default_str();
  s_est->add_option("--input", est.input, "source string to simulate from");
  s_est->add_option("--traces-file", est.traces_file, "traces, one per line");
  s_est->add_option("--traces", est.traces, "traces to simulate")->capture_default_str();
  s_est->add_option("--w", est.w, "pattern word")->capture_default_str();
  s_est->add_option("--z0-re", est.z0_re, "real part of z0")->capture_default_str();
  s_est->add_option("--z0-im", est.z0_im, "imaginary part of z0")->capture_default_str();
  s_est->add_option("--z1", est.z1, "common value of z1..z_{l-1}")->capture_default_str();

  IdentityArgs ident;
  auto* s_id = app.add_subcommand("verify-identity", "exact expectation versus weighted subsequence sum");
  add_common(s_id, ident.c);
  s_id->add_option("--n-max", ident.n_max, "largest source length")->capture_default_str();
  s_id->add_option("--trials", ident.trials, "random (w, z, q) per source")->capture_default_str();
  s_id->add_option("--l-max", ident.l_max, "largest pattern length")->capture_default_str();

  HArgs hb;
  auto* s_bh = app.add_subcommand("build-h", "construct the auxiliary polynomial h");
  add_common(s_bh, hb.c);
  s_bh->add_option("--n", hb.n, "size parameter n");
  s_bh->add_option("--r", hb.r, "build at n = r^5 instead");

  HArgs hv;
  auto* s_vh = app.add_subcommand("verify-h", "unit-disk and arc property checks for h");
  add_common(s_vh, hv.c);
  s_vh->add_option("--n", hv.n, "size parameter n");
  s_vh->add_option("--r", hv.r, "build at n = r^5 instead");
  s_vh->add_option("--grid", hv.grid, "angles in the unit-disk scan")->capture_default_str();
  s_vh->add_option("--membership-grid", hv.membership_grid, "points in the membership scan")->capture_default_str();
  s_vh->add_option("--density", hv.density, "decay grid points per oscillation")->capture_default_str();

  ArcArgs arc;
  auto* s_arc = app.add_subcommand("scan-arc", "difference polynomial of a pair along the arc, as CSV");
  add_common(s_arc, arc.c);
  s_arc->add_option("--x", arc.x, "first string");
  s_arc->add_option("--y", arc.y, "second string");
  s_arc->add_option("--n", arc.n, "length of a random pair when --x/--y are absent")->capture_default_str();
  s_arc->add_option("--grid", arc.grid, "sample count")->capture_default_str();

  ProductArgs prod;
  auto* s_pb = app.add_subcommand("product-bound", "log of products of |factor(h)| along the circle");
  add_common(s_pb, prod.c);
  s_pb->add_option("--n", prod.n, "size parameter n");
  s_pb->add_option("--r", prod.r, "build at n = r^5 (used when --n is absent)")->capture_default_str();
  s_pb->add_option("--factor", prod.factor, "unit-root, gap or full")->capture_default_str();
  s_pb->add_option("--d", prod.d, "gap degree")->capture_default_str();
  s_pb->add_option("--zeta-angle", prod.zeta_angle, "angle of the unit root")->capture_default_str();
  s_pb->add_option("--m", prod.m, "grid size (default: the reference grid, capped at 2^20)");
  s_pb->add_option("--J1", prod.J1, "first index");
  s_pb->add_option("--J2", prod.J2, "end index; 0 means all of [1, m-2]");
  s_pb->add_option("--delta", prod.delta, "grid offset in [0, 1)")->capture_default_str();
  s_pb->add_option("--tail-terms", prod.tail_terms, "random tail terms for a full factor")->capture_default_str();

  AppendixArgs app_args;
  auto* s_ap = app.add_subcommand("appendix-check", "discrete inequality and sinc-squared integrals");
  add_common(s_ap, app_args.c);
  s_ap->add_option("--m", app_args.m, "sum length")->capture_default_str();
  s_ap->add_option("--eps", app_args.eps, "half-width of the m_* window over m")->capture_default_str();
  s_ap->add_option("--c", app_args.c_values, "family parameters")->capture_default_str();
  s_ap->add_option("--b-count", app_args.b_count, "number of b values")->capture_default_str();
  s_ap->add_option("--b-max", app_args.b_max, "largest b")->capture_default_str();

  DistinguishArgs dist;
  auto* s_di = app.add_subcommand("distinguish", "plan and run one pairwise test");
  add_common(s_di, dist.c);
  s_di->add_option("--x", dist.x, "first candidate")->required();
  s_di->add_option("--y", dist.y, "second candidate")->required();
  s_di->add_option("--truth", dist.truth, "which candidate generates traces (x or y)")->capture_default_str();
  s_di->add_option("--q", dist.q, "deletion probability")->capture_default_str();
  s_di->add_option("--delta", dist.delta, "failure probability")->capture_default_str();
  s_di->add_option("--objective", dist.objective, "gap or ratio")->capture_default_str();
  s_di->add_option("--t-max", dist.t_max, "trace budget")->capture_default_str();

  ReconstructArgs rec;
  auto* s_re = app.add_subcommand("reconstruct", "tournament reconstruction of a short source");
  add_common(s_re, rec.c);
  s_re->add_option("--n", rec.n, "source length, at most 20")->capture_default_str();
  s_re->add_option("--q", rec.q, "deletion probability")->capture_default_str();
  s_re->add_option("--delta", rec.delta, "failure probability")->capture_default_str();
  s_re->add_option("--traces-file", rec.traces_file, "use these traces instead of simulating");
  s_re->add_option("--truth-file", rec.truth_file, "file with the true source");
  s_re->add_option("--truth", rec.truth, "true source string");
  s_re->add_option("--objective", rec.objective, "gap or ratio")->capture_default_str();
  s_re->add_option("--t-max", rec.t_max, "trace budget")->capture_default_str();

  RobsonArgs rob;
  auto* s_ro = app.add_subcommand("robson-stress", "window separation over random pairs");
  add_common(s_ro, rob.c);
  s_ro->add_option("--n", rob.n_values, "string lengths")->capture_default_str();
  s_ro->add_option("--pairs", rob.pairs, "pairs per length")->capture_default_str();

  BenchArgs bench;
  auto* s_be = app.add_subcommand("bench", "time the scalar and AVX2 kernels");
  add_common(s_be, bench.c);
  s_be->add_option("--size", bench.size, "grid points")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*s_sim) return run_simulate(sim);
    if (*s_est) return run_estimate(est);
    if (*s_id) return run_verify_identity(ident);
    if (*s_bh) return run_build_h(hb);
    if (*s_vh) return run_verify_h(hv);
    if (*s_arc) return run_scan_arc(arc);
    if (*s_pb) return run_product_bound(prod);
    if (*s_ap) return run_appendix(app_args);
    if (*s_di) return run_distinguish(dist);
    if (*s_re) return run_reconstruct(rec);
    if (*s_ro) return run_robson(rob);
    if (*s_be) return run_bench(bench);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const FormatError& e) {
    std::cerr << "malformed input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SizeLimitError& e) {
    std::cerr << "size limit: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailed;
  }
  return kExitUsage;
}
