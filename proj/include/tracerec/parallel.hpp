#pragma once
// Deterministic fork-join helpers. Work is cut into a fixed set of blocks
// that does not depend on the worker count; results come back in block
// order, so floating-point reductions are identical for any --jobs value.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace tracerec {

/// Worker count: TRACEREC_JOBS if set, else `requested`, else 1.
unsigned resolve_jobs(unsigned requested = 0);

inline constexpr std::uint64_t kParallelBlocks = 64;

template <class R, class F>
std::vector<R> parallel_blocks(std::uint64_t count, unsigned jobs, F&& fn) {
  const std::uint64_t blocks = std::min<std::uint64_t>(kParallelBlocks, std::max<std::uint64_t>(count, 1));
  std::vector<R> results(blocks);
  auto bounds = [&](std::uint64_t b) {
    return std::pair<std::uint64_t, std::uint64_t>{count * b / blocks, count * (b + 1) / blocks};
  };
  jobs = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(blocks)));
  if (jobs == 1) {
    for (std::uint64_t b = 0; b < blocks; ++b) {
      auto [lo, hi] = bounds(b);
      results[b] = fn(lo, hi);
    }
    return results;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  for (unsigned w = 0; w < jobs; ++w) {
    workers.emplace_back([&, w] {
      for (std::uint64_t b = w; b < blocks; b += jobs) {
        try {
          auto [lo, hi] = bounds(b);
          results[b] = fn(lo, hi);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (error) std::rethrow_exception(error);
  return results;
}

}  // namespace tracerec
