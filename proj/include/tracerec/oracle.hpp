#pragma once
// Brute-force ground truth for short sources: the full trace distribution by
// enumerating every keep/delete mask, and exact expectations under it.

#include <cstddef>
#include <functional>
#include <map>
#include <stdexcept>

#include "tracerec/bits.hpp"
#include "tracerec/channel.hpp"
#include "tracerec/numeric.hpp"

namespace tracerec {

/// Largest source length the mask enumeration accepts.
inline constexpr std::size_t kOracleMaxLength = 20;

class SizeLimitError : public std::length_error {
public:
  using std::length_error::length_error;
};

struct ExactDistribution {
  std::map<Trace, double> entries;
  std::size_t n = 0;
  double q = 0.5;

  [[nodiscard]] double total_mass() const;
  /// Probability of `w`, zero if it is not in the support.
  [[nodiscard]] double probability(const Trace& w) const;
};

/// Throws SizeLimitError when |x| > kOracleMaxLength.
ExactDistribution exact_trace_distribution(BitsView x, const ChannelParams& ch);

/// `count` traces of x drawn as one multinomial over the exact trace
/// distribution (sequential conditional binomials in canonical trace order).
/// Same law as sample_pool, far cheaper for large counts on short sources,
/// but a different random stream.
TracePool sample_pool_multinomial(BitsView x, const ChannelParams& ch, std::uint64_t count,
                                  std::uint64_t master_seed);

using TraceStatistic = std::function<cplx(const Trace&)>;

cplx exact_statistic_expectation(const ExactDistribution& dist, const TraceStatistic& stat);
cplx exact_statistic_expectation(BitsView x, const ChannelParams& ch, const TraceStatistic& stat);

}  // namespace tracerec
