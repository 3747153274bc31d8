#pragma once
// Pairwise distinguishing of two candidate sources from a trace pool, and
// reconstruction of the source by a tournament over all candidates.

#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "tracerec/bits.hpp"
#include "tracerec/channel.hpp"
#include "tracerec/estimator.hpp"
#include "tracerec/polynomial.hpp"

namespace tracerec {

/// floor(n^(1/5)), the separation length.
std::uint64_t separation_length(std::uint64_t n);
/// 2 floor(n^(1/5)), the window length.
std::uint64_t window_length(std::uint64_t n);
/// n^(-2/5), half-width of the arc searched for z0.
double arc_half_width(std::uint64_t n);

// --- window -------------------------------------------------------------------

struct WindowChoice {
  BitString w;
  std::size_t first_difference = 0;
  std::vector<std::size_t> positions_x;
  std::vector<std::size_t> positions_y;
};

/// Neither candidate window is separated in both strings.
class SeparationError : public std::runtime_error {
public:
  SeparationError(const std::string& what, std::string x, std::string y)
      : std::runtime_error(what), x_(std::move(x)), y_(std::move(y)) {}
  [[nodiscard]] const std::string& x() const noexcept { return x_; }
  [[nodiscard]] const std::string& y() const noexcept { return y_; }

private:
  std::string x_;
  std::string y_;
};

/// Window of length l ending at the first difference i. Requires equal
/// lengths, x != y and i >= l - 1. Throws SeparationError if neither
/// candidate qualifies and std::invalid_argument on bad input.
WindowChoice select_w(const BitString& x, const BitString& y);

struct PaddedPair {
  BitString x;
  BitString y;
  std::size_t pad = 0;
};

/// Smallest k with i + k >= 2 floor((n + k)^(1/5)) - 1 for the first
/// difference i.
std::size_t padding_needed(std::size_t n, std::size_t first_difference);
PaddedPair pad_pair(const BitString& x, const BitString& y);

// --- evaluation points -----------------------------------------------------------

/// sum_k [x has w at k] z^k - [y has w at k] z^k.
SparsePolynomial difference_polynomial(const BitString& x, const BitString& y, const BitString& w);

struct Z0Choice {
  double theta = 0.0;
  cplx z0{1.0, 0.0};
  double value = 0.0;  // |difference polynomial| at z0
  std::size_t grid_points = 0;
};

/// Throws std::invalid_argument if the difference polynomial vanishes.
Z0Choice select_z0(const BitString& x, const BitString& y, const BitString& w, std::size_t grid_size = 4096);

struct Z1Choice {
  double z1 = 1.0;
  std::vector<cplx> rest;  // l - 1 copies of z1
  double value = 0.0;      // |E_x - E_y| at the choice
};

/// Maximizes |E_x - E_y| over z1 in [1 - 2p, 1] with z2..z_{l-1} = z1.
Z1Choice select_z1(const BitString& x, const BitString& y, const BitString& w, cplx z0, const ChannelParams& ch,
                   std::size_t grid_size = 4096);

// --- Hoeffding plan ------------------------------------------------------------

struct StatisticBound {
  double value = 0.0;      // +inf when it overflows
  double log_value = 0.0;
  bool overflow = false;
};

/// Almost-sure bound on |subsequence_statistic| for traces of a length-n
/// source, valid for any rest values in [1 - 2p, 1]:
///   p^{-l} sum_{j0 = 0}^{n - l} |zeta0|^{j0} C(n - 1 - j0, l - 1).
StatisticBound distinguisher_statistic_bound(cplx z0, std::size_t l, std::size_t n, const ChannelParams& ch);

inline constexpr std::uint64_t kDefaultTraceBudget = 100'000'000;

class TraceBudgetError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Smallest T with 2 exp(-T (gap/2)^2 / (2 bound^2)) <= delta / 2, i.e.
/// T = ceil(8 bound^2 log(4 / delta) / gap^2). Throws TraceBudgetError when T
/// exceeds t_max and std::invalid_argument on bad arguments.
std::uint64_t required_traces(double gap, double bound, double delta, std::uint64_t t_max = kDefaultTraceBudget);
/// The same value without the budget check (may be +inf as a double).
double required_traces_unchecked(double gap, double bound, double delta);

enum class PlanObjective {
  gap,             // z0 maximizes the substring difference, then z1 maximizes the gap
  hoeffding_ratio  // (z0, z1) jointly maximize gap / bound, i.e. minimize T
};

struct PlanOptions {
  PlanObjective objective = PlanObjective::gap;
  std::size_t z0_grid = 4096;
  std::size_t z1_grid = 4096;
  std::uint64_t t_max = kDefaultTraceBudget;
};

struct DistinguisherPlan {
  BitString x;  // candidates in the order the plan was requested
  BitString y;
  std::size_t pad = 0;  // zeros prepended to both before planning
  BitString w;
  EvalVector zv;
  double theta = 0.0;
  double z0_search_value = 0.0;
  double gap = 0.0;
  StatisticBound bound;
  double traces_needed = 0.0;  // unchecked T as a real
  std::uint64_t T = 0;         // 0 when over budget
  bool over_budget = false;
  cplx expect_x;
  cplx expect_y;
  cplx threshold;  // midpoint of the two expectations
};

/// Builds the plan for the canonical order (smaller candidate first) and
/// then orients it as (x, y), so plan(x, y) and plan(y, x) agree.
DistinguisherPlan build_plan(const BitString& x, const BitString& y, const ChannelParams& ch, double delta,
                             const PlanOptions& opt = {});

struct Verdict {
  int winner = 0;  // 0 = plan.x, 1 = plan.y
  cplx statistic;
  double margin = 0.0;
};

/// Winner for an observed mean statistic: the nearer expectation.
Verdict decide(cplx mean, const DistinguisherPlan& plan);

/// Mean statistic of the pool (padded when the plan pads) against the two
/// expectations. Throws std::invalid_argument if the pool holds fewer than
/// plan.T traces or the plan is over budget; `enforce_budget = false` skips
/// that check for diagnostics.
Verdict distinguish(const TracePool& pool, const DistinguisherPlan& plan, const ChannelParams& ch,
                    bool enforce_budget = true);

/// Plans keyed by the candidate pair, for sources of at most 31 bits.
class PlanCache {
public:
  PlanCache(const ChannelParams& ch, double delta, PlanOptions opt = {}) : ch_(ch), delta_(delta), opt_(opt) {}

  /// Plan for the unordered pair, oriented with the smaller candidate as
  /// plan.x. All candidates must share one length.
  const DistinguisherPlan& get(const BitString& x, const BitString& y);
  void insert(DistinguisherPlan plan);
  [[nodiscard]] std::size_t size() const noexcept { return plans_.size(); }
  [[nodiscard]] const ChannelParams& channel() const noexcept { return ch_; }
  [[nodiscard]] double delta() const noexcept { return delta_; }
  [[nodiscard]] const PlanOptions& options() const noexcept { return opt_; }

private:
  ChannelParams ch_;
  double delta_;
  PlanOptions opt_;
  std::unordered_map<std::uint64_t, std::unique_ptr<DistinguisherPlan>> plans_;
};

struct PairwiseRequirement {
  double max_traces = 0.0;  // largest unchecked T over all pairs
  std::uint64_t pairs = 0;
  BitString worst_x;
  BitString worst_y;
  double median_traces = 0.0;
};

/// Plans every pair of length-n candidates (n <= 20) and reports the
/// largest trace requirement. Fills `cache` when given.
PairwiseRequirement max_pairwise_traces(std::size_t n, const ChannelParams& ch, double delta,
                                        const PlanOptions& opt = {}, PlanCache* cache = nullptr,
                                        unsigned jobs = 1);

// --- tournament ------------------------------------------------------------------

struct ReconstructOptions {
  PlanOptions plan;
  bool enforce_budget = true;
  unsigned jobs = 1;
  /// When set, each pair is decided on its own pool drawn by this callback
  /// (keyed by the pair index) instead of the shared pool.
  std::function<TracePool(std::uint64_t pair_index)> fresh_pool;
};

struct ReconstructResult {
  BitString estimate;
  std::uint64_t pairs_tested = 0;
  std::uint64_t max_T_tested = 0;
  std::uint64_t traces_used = 0;
};

/// No candidate beats every other one; carries a cycle of candidates where
/// each one is beaten by the next.
class TournamentError : public std::runtime_error {
public:
  TournamentError(const std::string& what, std::vector<BitString> cycle)
      : std::runtime_error(what), cycle_(std::move(cycle)) {}
  [[nodiscard]] const std::vector<BitString>& cycle() const noexcept { return cycle_; }

private:
  std::vector<BitString> cycle_;
};

/// Candidate that beats every other length-n string, found by a champion
/// sweep in lexicographic order followed by a verification pass. Requires
/// 1 <= n <= 20.
ReconstructResult reconstruct(const TracePool& pool, std::size_t n, PlanCache& cache,
                              const ReconstructOptions& opt = {});
ReconstructResult reconstruct(const TracePool& pool, std::size_t n, const ChannelParams& ch, double delta,
                              const ReconstructOptions& opt = {});

}  // namespace tracerec
