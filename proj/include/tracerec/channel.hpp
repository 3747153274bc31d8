#pragma once
// The deletion channel: parameters, a counter-based random stream, trace
// sampling, and trace pools (multisets of traces kept as histograms).

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <vector>

#include "tracerec/bits.hpp"

namespace tracerec {

/// Deletion probability q and retention p = 1 - q.
class ChannelParams {
public:
  /// Requires 0 < q < 1.
  explicit ChannelParams(double q);

  /// Also admits the degenerate endpoints q = 0 and q = 1; only the
  /// simulator accepts such parameters.
  static ChannelParams simulation_only(double q);

  [[nodiscard]] double q() const noexcept { return q_; }
  [[nodiscard]] double p() const noexcept { return p_; }
  [[nodiscard]] bool interior() const noexcept { return q_ > 0.0 && q_ < 1.0; }

  /// Throws std::domain_error naming `op` unless 0 < q < 1.
  void require_interior(const char* op) const;

private:
  struct Unchecked {};
  ChannelParams(double q, Unchecked) : q_(q), p_(1.0 - q) {}
  double q_ = 0.5;
  double p_ = 0.5;
};

/// SplitMix64 used as a counter-based generator: output k of a stream is
/// mix(base + (k+1) * gamma). A stream for (seed, index) is independent of
/// how many other streams were drawn, so results never depend on workers.
class SplitMix64 {
public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t state = 0) : state_(state) {}

  static SplitMix64 substream(std::uint64_t master_seed, std::uint64_t index) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

private:
  std::uint64_t state_;
};

/// Fixed default seed used whenever a caller does not supply one.
inline constexpr std::uint64_t kDefaultSeed = 20240229;

/// Keeps each bit independently with probability p.
Trace sample_trace(BitsView x, const ChannelParams& ch, SplitMix64& rng);

/// Trace number `index` of the stream for `master_seed`.
Trace sample_trace(BitsView x, const ChannelParams& ch, std::uint64_t master_seed,
                   std::uint64_t index);

std::vector<Trace> sample_traces(BitsView x, const ChannelParams& ch, std::size_t count,
                                 std::uint64_t master_seed);

/// Multiset of traces. Iteration follows the canonical trace order, so any
/// reduction over a pool is independent of insertion order.
class TracePool {
public:
  TracePool() = default;
  explicit TracePool(std::span<const Trace> traces);

  void add(const Trace& trace, std::uint64_t count = 1);
  void merge(const TracePool& other);

  [[nodiscard]] std::uint64_t total() const noexcept { return total_; }
  [[nodiscard]] std::size_t distinct() const noexcept { return counts_.size(); }
  [[nodiscard]] bool empty() const noexcept { return total_ == 0; }
  [[nodiscard]] const std::map<Trace, std::uint64_t>& entries() const noexcept { return counts_; }

  /// Seed for randomness derived from the pool (zero padding); set by the
  /// sampler, or explicitly for pools read from disk.
  [[nodiscard]] std::uint64_t derived_seed() const noexcept { return derived_seed_; }
  void set_derived_seed(std::uint64_t seed) noexcept { derived_seed_ = seed; }

private:
  std::map<Trace, std::uint64_t> counts_;
  std::uint64_t total_ = 0;
  std::uint64_t derived_seed_ = kDefaultSeed;
};

/// `count` traces of x from the (master_seed, index) streams, aggregated.
/// Equal to TracePool(sample_traces(...)) but without materializing them.
TracePool sample_pool(BitsView x, const ChannelParams& ch, std::uint64_t count,
                      std::uint64_t master_seed, unsigned jobs = 1);

/// Traces of 0^zeros x obtained from traces of x: each trace gets an
/// independent Binomial(zeros, p) run of leading zeros. Copies of one trace
/// are split multinomially with a stream keyed by the trace itself, so the
/// result depends only on the pool contents and its derived seed.
TracePool pad_pool(const TracePool& pool, std::size_t zeros, const ChannelParams& ch);

}  // namespace tracerec
