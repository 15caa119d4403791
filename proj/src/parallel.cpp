#include "stable_limits/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace stable_limits {

namespace {
constexpr std::size_t kChunk = kParallelChunk;
}

std::size_t worker_count() {
  if (const char* env = std::getenv("STABLE_LIMITS_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

void parallel_for_chunks(std::size_t total,
                         const std::function<void(std::size_t, std::size_t)>& fn) {
  if (total == 0) return;
  const std::size_t chunks = (total + kChunk - 1) / kChunk;
  const std::size_t workers = std::min(worker_count(), chunks);
  if (workers <= 1) {
    // same chunk boundaries as the threaded path, so chunk-indexed callers
    // see identical partitions either way
    for (std::size_t c = 0; c < chunks; ++c)
      fn(c * kChunk, std::min((c + 1) * kChunk, total));
    return;
  }
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (;;) {
      std::size_t c = next.fetch_add(1);
      if (c >= chunks) break;
      std::size_t begin = c * kChunk;
      std::size_t end = std::min(begin + kChunk, total);
      fn(begin, end);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
}

namespace {
double pairwise_range(std::size_t lo, std::size_t hi,
                      const std::function<double(std::size_t)>& fn) {
  const std::size_t n = hi - lo;
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += fn(i);
    return s;
  }
  const std::size_t mid = lo + n / 2;
  return pairwise_range(lo, mid, fn) + pairwise_range(mid, hi, fn);
}
}  // namespace

double pairwise_sum(std::size_t n, const std::function<double(std::size_t)>& fn) {
  if (n == 0) return 0.0;
  return pairwise_range(0, n, fn);
}

}  // namespace stable_limits
