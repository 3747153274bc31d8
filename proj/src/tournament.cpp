#include <algorithm>
#include <map>
#include <string>

#include "tracerec/parallel.hpp"
#include "tracerec/reconstruct.hpp"

namespace tracerec {

namespace {

constexpr std::size_t kMaxCacheLength = 31;

std::uint64_t pair_key(std::uint64_t lo, std::uint64_t hi) { return (lo << 32U) | hi; }

}  // namespace

const DistinguisherPlan& PlanCache::get(const BitString& x, const BitString& y) {
  if (x.size() > kMaxCacheLength || y.size() != x.size()) {
    throw std::invalid_argument("plan cache needs candidates of one length up to 31 bits");
  }
  const bool ordered = x < y;
  const BitString& lo = ordered ? x : y;
  const BitString& hi = ordered ? y : x;
  const std::uint64_t key = pair_key(lo.to_integer(), hi.to_integer());
  auto it = plans_.find(key);
  if (it == plans_.end()) {
    auto plan = std::make_unique<DistinguisherPlan>(build_plan(lo, hi, ch_, delta_, opt_));
    it = plans_.emplace(key, std::move(plan)).first;
  }
  return *it->second;
}

void PlanCache::insert(DistinguisherPlan plan) {
  if (plan.y < plan.x) {
    std::swap(plan.x, plan.y);
    std::swap(plan.expect_x, plan.expect_y);
  }
  const std::uint64_t key = pair_key(plan.x.to_integer(), plan.y.to_integer());
  plans_.emplace(key, std::make_unique<DistinguisherPlan>(std::move(plan)));
}

PairwiseRequirement max_pairwise_traces(std::size_t n, const ChannelParams& ch, double delta,
                                        const PlanOptions& opt, PlanCache* cache, unsigned jobs) {
  if (n < 1 || n > 20) throw std::invalid_argument("max_pairwise_traces needs 1 <= n <= 20");
  const std::uint64_t count = std::uint64_t{1} << n;
  struct Part {
    std::vector<double> needed;
    std::vector<DistinguisherPlan> plans;
    double worst = -1.0;
    std::uint64_t wx = 0;
    std::uint64_t wy = 0;
  };
  const auto parts = parallel_blocks<Part>(count, jobs, [&](std::uint64_t lo, std::uint64_t hi) {
    Part part;
    for (std::uint64_t x = lo; x < hi; ++x) {
      for (std::uint64_t y = x + 1; y < count; ++y) {
        DistinguisherPlan plan =
            build_plan(BitString::from_integer(x, n), BitString::from_integer(y, n), ch, delta, opt);
        part.needed.push_back(plan.traces_needed);
        if (plan.traces_needed > part.worst) {
          part.worst = plan.traces_needed;
          part.wx = x;
          part.wy = y;
        }
        if (cache != nullptr) part.plans.push_back(std::move(plan));
      }
    }
    return part;
  });
  PairwiseRequirement req;
  std::vector<double> all;
  double worst = -1.0;
  for (const auto& part : parts) {
    all.insert(all.end(), part.needed.begin(), part.needed.end());
    if (part.worst > worst) {
      worst = part.worst;
      req.worst_x = BitString::from_integer(part.wx, n);
      req.worst_y = BitString::from_integer(part.wy, n);
    }
    if (cache != nullptr) {
      for (const auto& plan : part.plans) cache->insert(plan);
    }
  }
  req.pairs = all.size();
  req.max_traces = worst;
  if (!all.empty()) {
    auto mid = all.begin() + static_cast<std::ptrdiff_t>(all.size() / 2);
    std::nth_element(all.begin(), mid, all.end());
    req.median_traces = *mid;
  }
  return req;
}

ReconstructResult reconstruct(const TracePool& pool, std::size_t n, PlanCache& cache, const ReconstructOptions& opt) {
  if (n < 1 || n > 20) throw std::invalid_argument("reconstruct needs 1 <= n <= 20");
  const ChannelParams& ch = cache.channel();
  const std::uint64_t count = std::uint64_t{1} << n;
  std::map<std::size_t, TracePool> padded;
  std::unordered_map<std::uint64_t, std::uint64_t> decided;
  ReconstructResult res;
  res.traces_used = pool.total();
  std::uint64_t fresh_index = 0;

  // Winner of a against b, as an integer candidate.
  auto duel = [&](std::uint64_t a, std::uint64_t b) -> std::uint64_t {
    const std::uint64_t lo = std::min(a, b);
    const std::uint64_t hi = std::max(a, b);
    const std::uint64_t key = pair_key(lo, hi);
    if (const auto it = decided.find(key); it != decided.end()) return it->second;
    const DistinguisherPlan& plan = cache.get(BitString::from_integer(lo, n), BitString::from_integer(hi, n));
    TracePool fresh;
    const TracePool* source = &pool;
    if (opt.fresh_pool) {
      fresh = opt.fresh_pool(fresh_index++);
      source = &fresh;
    }
    if (opt.enforce_budget) {
      if (plan.over_budget) {
        throw TraceBudgetError("pair " + plan.x.to_string() + " / " + plan.y.to_string() + " needs " +
                               std::to_string(plan.traces_needed) + " traces, over the budget");
      }
      if (source->total() < plan.T) {
        throw std::invalid_argument("pool holds " + std::to_string(source->total()) + " traces, pair " +
                                    plan.x.to_string() + " / " + plan.y.to_string() + " needs " +
                                    std::to_string(plan.T));
      }
    }
    if (plan.pad > 0) {
      if (opt.fresh_pool) {
        fresh = pad_pool(fresh, plan.pad, ch);
      } else {
        auto it = padded.find(plan.pad);
        if (it == padded.end()) it = padded.emplace(plan.pad, pad_pool(pool, plan.pad, ch)).first;
        source = &it->second;
      }
    }
    const MeanResult mean = mean_statistic(*source, plan.w, plan.zv, ch, opt.jobs);
    const Verdict v = decide(mean.mean, plan);
    ++res.pairs_tested;
    res.max_T_tested = std::max(res.max_T_tested, plan.T);
    const std::uint64_t winner = v.winner == 0 ? lo : hi;
    decided.emplace(key, winner);
    return winner;
  };

  std::uint64_t champion = 0;
  for (std::uint64_t v = 1; v < count; ++v) champion = duel(champion, v);
  bool undefeated = true;
  for (std::uint64_t v = 0; v < count && undefeated; ++v) {
    if (v != champion && duel(champion, v) != champion) undefeated = false;
  }
  if (undefeated) {
    res.estimate = BitString::from_integer(champion, n);
    return res;
  }

  // Follow the first beater from the champion until a candidate repeats.
  std::vector<std::uint64_t> path{champion};
  std::map<std::uint64_t, std::size_t> seen{{champion, 0}};
  while (path.size() <= count) {
    const std::uint64_t cur = path.back();
    std::uint64_t beater = cur;
    for (std::uint64_t v = 0; v < count; ++v) {
      if (v != cur && duel(cur, v) == v) {
        beater = v;
        break;
      }
    }
    if (const auto it = seen.find(beater); it != seen.end()) {
      std::vector<BitString> cycle;
      for (std::size_t k = it->second; k < path.size(); ++k) cycle.push_back(BitString::from_integer(path[k], n));
      std::string text;
      for (const auto& c : cycle) text += (text.empty() ? "" : " < ") + c.to_string();
      throw TournamentError("no candidate beats all others; cycle: " + text, std::move(cycle));
    }
    seen.emplace(beater, path.size());
    path.push_back(beater);
  }
  throw TournamentError("no candidate beats all others", {});
}

ReconstructResult reconstruct(const TracePool& pool, std::size_t n, const ChannelParams& ch, double delta,
                              const ReconstructOptions& opt) {
  PlanCache cache(ch, delta, opt.plan);
  return reconstruct(pool, n, cache, opt);
}

}  // namespace tracerec
