#include "tracerec/oracle.hpp"

#include <algorithm>
#include <bit>
#include <random>
#include <string>
#include <vector>


namespace tracerec {

double ExactDistribution::total_mass() const {
  CompensatedSum s;
  for (const auto& [t, pr] : entries) s.add(pr);
  return s.value();
}

double ExactDistribution::probability(const Trace& w) const {
  const auto it = entries.find(w);
  return it == entries.end() ? 0.0 : it->second;
}

ExactDistribution exact_trace_distribution(BitsView x, const ChannelParams& ch) {
  const std::size_t n = x.size();
  if (n > kOracleMaxLength) {
    throw SizeLimitError("exact trace distribution enumerates 2^n masks; n = " + std::to_string(n) +
                         " exceeds the limit " + std::to_string(kOracleMaxLength));
  }
  std::vector<double> weight(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    weight[k] = ipow(ch.p(), k) * ipow(ch.q(), n - k);
  }
  std::uint64_t source = 0;
  for (std::size_t j = 0; j < n; ++j) source |= static_cast<std::uint64_t>(x[j]) << j;

  // Slot (1 << len) | bits identifies a trace, as in the sampler. Each slot
  // collects the integer embedding count, so every probability is one
  // product and the result never depends on summation order.
  const std::size_t slots = std::size_t{2} << n;
  const std::uint64_t masks = std::uint64_t{1} << n;
  std::vector<std::uint32_t> hits(slots, 0);
  for (std::uint64_t mask = 0; mask < masks; ++mask) {
    std::uint64_t bits = 0;
    unsigned len = 0;
    for (std::uint64_t m = mask; m != 0; m &= m - 1) {
      const int j = std::countr_zero(m);
      bits |= ((source >> j) & 1U) << len;
      ++len;
    }
    ++hits[(std::uint64_t{1} << len) | bits];
  }

  ExactDistribution out;
  out.n = n;
  out.q = ch.q();
  for (std::size_t s = 1; s < slots; ++s) {
    if (hits[s] == 0) continue;
    const int len = 63 - std::countl_zero(static_cast<std::uint64_t>(s));
    Trace t;
    for (int j = 0; j < len; ++j) t.push_back(static_cast<int>((s >> j) & 1U));
    out.entries.emplace(std::move(t), weight[len] * hits[s]);
  }
  return out;
}

cplx exact_statistic_expectation(const ExactDistribution& dist, const TraceStatistic& stat) {
  CompensatedComplexSum s;
  for (const auto& [t, pr] : dist.entries) s.add(pr * stat(t));
  return s.value();
}

cplx exact_statistic_expectation(BitsView x, const ChannelParams& ch, const TraceStatistic& stat) {
  return exact_statistic_expectation(exact_trace_distribution(x, ch), stat);
}

TracePool sample_pool_multinomial(BitsView x, const ChannelParams& ch, std::uint64_t count,
                                  std::uint64_t master_seed) {
  const ExactDistribution dist = exact_trace_distribution(x, ch);
  TracePool pool;
  pool.set_derived_seed(SplitMix64::mix(master_seed ^ 0xA54FF53A5F1D36F1ULL));
  SplitMix64 rng(SplitMix64::mix(master_seed ^ 0x3C6EF372FE94F82BULL));
  std::uint64_t remaining = count;
  double mass = 1.0;
  std::size_t left = dist.entries.size();
  for (const auto& [trace, prob] : dist.entries) {
    if (remaining == 0) break;
    std::uint64_t take = remaining;
    if (--left > 0 && mass > prob) {
      std::binomial_distribution<std::uint64_t> draw(remaining, std::clamp(prob / mass, 0.0, 1.0));
      take = draw(rng);
    }
    mass -= prob;
    remaining -= take;
    if (take > 0) pool.add(trace, take);
  }
  return pool;
}

}  // namespace tracerec
