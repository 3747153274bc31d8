#pragma once
// Combinatorics on source strings: subsequence counts, contiguous
// occurrences and separation of occurrence sets.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tracerec/bits.hpp"
#include "tracerec/channel.hpp"

namespace tracerec {

/// Number of strictly increasing index tuples embedding w into x. Zero when
/// |w| > |x|; the empty word embeds exactly once. Throws std::overflow_error
/// if the count does not fit in 64 bits.
std::uint64_t subsequence_count(BitsView w, BitsView x);

/// Exact probability that the deletion channel maps x to w:
/// p^|w| q^(n-|w|) f(w; x).
double trace_probability(BitsView w, BitsView x, const ChannelParams& ch);

/// Ascending start indices k with x[k..k+|w|) == w.
std::vector<std::size_t> occurrence_positions(BitsView x, BitsView w);

/// True iff consecutive entries of the ascending list differ by at least d.
bool is_d_separated(const std::vector<std::size_t>& positions, std::size_t d);

/// First index where x and y differ, or min(|x|,|y|) if one is a prefix.
std::size_t first_difference(BitsView x, BitsView y);

}  // namespace tracerec
