#ifndef RISLAB_PARALLEL_HPP
#define RISLAB_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace rislab {

/// Worker count: RIS_LAB_THREADS if set and positive, else the hardware count.
inline int worker_count() {
  if (const char* env = std::getenv("RIS_LAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<int>(std::min<long>(v, 256));
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Calls fn(i) for i in [0, n). Work items must write only to their own slot;
/// the first exception thrown is rethrown on the caller.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn, int threads = worker_count()) {
  threads = std::max(1, std::min<int>(threads, static_cast<int>(std::min<std::size_t>(n, 1 << 20))));
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

/// Pairwise summation of x[begin, end) with a fixed split, so the result does
/// not depend on how the values were produced.
template <typename Get>
double pairwise_sum(std::size_t begin, std::size_t end, Get&& get) {
  const std::size_t n = end - begin;
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = begin; i < end; ++i) s += get(i);
    return s;
  }
  const std::size_t mid = begin + n / 2;
  return pairwise_sum(begin, mid, get) + pairwise_sum(mid, end, get);
}

}  // namespace rislab

#endif  // RISLAB_PARALLEL_HPP
