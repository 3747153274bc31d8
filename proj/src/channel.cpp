#include "tracerec/channel.hpp"

#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>

#include "tracerec/parallel.hpp"

namespace tracerec {

ChannelParams::ChannelParams(double q) : q_(q), p_(1.0 - q) {
  if (!(q > 0.0 && q < 1.0)) {
    throw std::domain_error("deletion probability must satisfy 0 < q < 1, got " + std::to_string(q));
  }
}

ChannelParams ChannelParams::simulation_only(double q) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::domain_error("deletion probability must lie in [0, 1], got " + std::to_string(q));
  }
  return {q, Unchecked{}};
}

void ChannelParams::require_interior(const char* op) const {
  if (!interior()) throw std::domain_error(std::string(op) + " requires 0 < q < 1");
}

SplitMix64 SplitMix64::substream(std::uint64_t master_seed, std::uint64_t index) noexcept {
  const std::uint64_t a = mix(master_seed ^ 0x6A09E667F3BCC909ULL);
  const std::uint64_t b = mix(index + 0xBB67AE8584CAA73BULL);
  return SplitMix64(mix(a ^ (b * 0x9E3779B97F4A7C15ULL)));
}

Trace sample_trace(BitsView x, const ChannelParams& ch, SplitMix64& rng) {
  Trace out;
  const double p = ch.p();
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (rng.uniform() < p) out.push_back(x[j]);
  }
  return out;
}

Trace sample_trace(BitsView x, const ChannelParams& ch, std::uint64_t master_seed,
                   std::uint64_t index) {
  auto rng = SplitMix64::substream(master_seed, index);
  return sample_trace(x, ch, rng);
}

std::vector<Trace> sample_traces(BitsView x, const ChannelParams& ch, std::size_t count,
                                 std::uint64_t master_seed) {
  std::vector<Trace> out;
  out.reserve(count);
  for (std::size_t t = 0; t < count; ++t) out.push_back(sample_trace(x, ch, master_seed, t));
  return out;
}

TracePool::TracePool(std::span<const Trace> traces) {
  for (const auto& t : traces) add(t);
}

void TracePool::add(const Trace& trace, std::uint64_t count) {
  if (count == 0) return;
  counts_[trace] += count;
  total_ += count;
}

void TracePool::merge(const TracePool& other) {
  for (const auto& [t, c] : other.counts_) add(t, c);
}

namespace {

// Dense histogram path for short sources: trace of length L with bits b is
// stored at slot (1 << L) | b, bit j of b holding trace position j.
constexpr std::size_t kDenseLimit = 16;

Trace decode_slot(std::uint64_t slot) {
  const int len = 63 - std::countl_zero(slot);
  Trace t;
  for (int j = 0; j < len; ++j) t.push_back(static_cast<int>((slot >> j) & 1U));
  return t;
}

}  // namespace

TracePool sample_pool(BitsView x, const ChannelParams& ch, std::uint64_t count,
                      std::uint64_t master_seed, unsigned jobs) {
  TracePool pool;
  pool.set_derived_seed(SplitMix64::mix(master_seed ^ 0xA54FF53A5F1D36F1ULL));
  const std::size_t n = x.size();
  const double p = ch.p();

  if (n <= kDenseLimit) {
    std::uint64_t source = 0;
    for (std::size_t j = 0; j < n; ++j) source |= static_cast<std::uint64_t>(x[j]) << j;
    const std::size_t slots = std::size_t{2} << n;
    const auto block_counts = parallel_blocks<std::vector<std::uint64_t>>(
        count, jobs, [&](std::uint64_t begin, std::uint64_t end) {
          std::vector<std::uint64_t> hist(slots, 0);
          for (std::uint64_t t = begin; t < end; ++t) {
            auto rng = SplitMix64::substream(master_seed, t);
            std::uint64_t bits = 0;
            unsigned len = 0;
            for (std::size_t j = 0; j < n; ++j) {
              if (rng.uniform() < p) {
                bits |= ((source >> j) & 1U) << len;
                ++len;
              }
            }
            ++hist[(std::uint64_t{1} << len) | bits];
          }
          return hist;
        });
    std::vector<std::uint64_t> hist(slots, 0);
    for (const auto& part : block_counts) {
      for (std::size_t s = 0; s < slots; ++s) hist[s] += part[s];
    }
    for (std::size_t s = 1; s < slots; ++s) {
      if (hist[s] != 0) pool.add(decode_slot(s), hist[s]);
    }
    return pool;
  }

  const auto parts = parallel_blocks<TracePool>(count, jobs, [&](std::uint64_t begin, std::uint64_t end) {
    TracePool part;
    for (std::uint64_t t = begin; t < end; ++t) part.add(sample_trace(x, ch, master_seed, t));
    return part;
  });
  for (const auto& part : parts) pool.merge(part);
  return pool;
}

TracePool pad_pool(const TracePool& pool, std::size_t zeros, const ChannelParams& ch) {
  if (zeros == 0) return pool;
  TracePool out;
  out.set_derived_seed(pool.derived_seed());
  const double p = ch.p();
  // pmf of Binomial(zeros, p).
  std::vector<double> pmf(zeros + 1);
  for (std::size_t b = 0; b <= zeros; ++b) {
    pmf[b] = std::exp(std::lgamma(zeros + 1.0) - std::lgamma(b + 1.0) - std::lgamma(zeros - b + 1.0)) *
             std::pow(p, static_cast<double>(b)) * std::pow(1.0 - p, static_cast<double>(zeros - b));
  }
  for (const auto& [trace, count] : pool.entries()) {
    std::uint64_t key = pool.derived_seed() ^ (zeros * 0x9E3779B97F4A7C15ULL);
    key = SplitMix64::mix(key ^ trace.size());
    for (const auto w : trace.words()) key = SplitMix64::mix(key ^ w);
    SplitMix64 rng(key);
    std::uint64_t remaining = count;
    double mass = 1.0;
    for (std::size_t b = 0; b <= zeros && remaining > 0; ++b) {
      std::uint64_t take = remaining;
      if (b < zeros && mass > 0.0) {
        const double frac = std::min(1.0, pmf[b] / mass);
        std::binomial_distribution<std::uint64_t> dist(remaining, frac);
        take = dist(rng);
      }
      mass -= pmf[b];
      remaining -= take;
      if (take > 0) out.add(prepend_zeros<Trace>(trace, b), take);
    }
  }
  return out;
}

}  // namespace tracerec
