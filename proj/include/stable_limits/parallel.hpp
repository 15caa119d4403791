#ifndef STABLE_LIMITS_PARALLEL_HPP
#define STABLE_LIMITS_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace stable_limits {

// Fixed work-partition granularity; begin indices handed to parallel_for_chunks
// callbacks are always multiples of this.
inline constexpr std::size_t kParallelChunk = 1024;

// Worker count derived from STABLE_LIMITS_THREADS (0 or unset = hardware
// concurrency). Read once per call so tests can override the env var.
std::size_t worker_count();

// Runs fn(begin, end) over a partition of [0, total). Work is split into
// fixed-size chunks independent of the worker count, so any routine that
// derives its randomness from the chunk/index keeps bit-identical output
// whether it runs on 1 thread or 64.
void parallel_for_chunks(std::size_t total,
                         const std::function<void(std::size_t, std::size_t)>& fn);

// Deterministic pairwise (tree) summation of fn(i) over [0, n).
double pairwise_sum(std::size_t n, const std::function<double(std::size_t)>& fn);

}  // namespace stable_limits

#endif
