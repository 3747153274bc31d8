#pragma once
// The generalized subsequence statistic of a trace and its expectation
// counterpart on the source string, both via the same O(length * l) sweep.

#include <cstddef>
#include <span>
#include <vector>

#include "tracerec/bits.hpp"
#include "tracerec/channel.hpp"
#include "tracerec/numeric.hpp"

namespace tracerec {

/// Evaluation point (z0, z1, ..., z_{l-1}); l = 1 + rest.size().
struct EvalVector {
  cplx z0{1.0, 0.0};
  std::vector<cplx> rest;

  [[nodiscard]] std::size_t l() const noexcept { return 1 + rest.size(); }
  [[nodiscard]] cplx at(std::size_t i) const { return i == 0 ? z0 : rest.at(i - 1); }
};

struct StatisticResult {
  cplx value;
  double magnitude_bound = 0.0;
};

/// Unbiased per-trace estimator: p^{-l} times the sum over increasing index
/// tuples j of U matching w of zeta0^{j0} prod zeta_i^{j_i - j_{i-1} - 1},
/// where zeta_i = (z_i - q) / p and 0^0 = 1. Zero when |U| < l.
/// Throws std::invalid_argument if |w| != zv.l().
cplx subsequence_statistic(BitsView trace, BitsView w, const EvalVector& zv, const ChannelParams& ch);

/// Sum over increasing tuples k of x matching w of z0^{k0} prod z_i^{k_i - k_{i-1} - 1}.
cplx weighted_subsequence_sum(BitsView x, BitsView w, const EvalVector& zv);

/// Sum of z^k over the contiguous occurrences k of w in x.
cplx substring_statistic(BitsView x, BitsView w, cplx z);

struct MeanResult {
  cplx mean;
  /// sqrt((var Re + var Im) / N) from the sample variance; 0 for one trace.
  double stderr_ = 0.0;
  std::uint64_t count = 0;
};

/// Throws std::invalid_argument on an empty input.
MeanResult mean_statistic(std::span<const Trace> traces, BitsView w, const EvalVector& zv,
                          const ChannelParams& ch, unsigned jobs = 1);
MeanResult mean_statistic(const TracePool& pool, BitsView w, const EvalVector& zv, const ChannelParams& ch,
                          unsigned jobs = 1);

}  // namespace tracerec
