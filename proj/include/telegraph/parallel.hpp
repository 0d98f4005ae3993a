#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace telegraph {

/// Worker count for the parallel paths; 0 means hardware concurrency, 1 serial.
struct Execution {
  unsigned threads = 0;

  unsigned resolved() const {
    if (threads != 0) return threads;
    return std::max(1u, std::thread::hardware_concurrency());
  }
  static Execution serial() { return Execution{1}; }
};

/// Calls body(begin, end) on contiguous chunks of [0, count). Chunk
/// boundaries depend only on `count` and the worker count, never on timing.
template <class Body>
void parallel_chunks(std::size_t count, Execution exec, Body&& body) {
  const std::size_t workers = std::min<std::size_t>(exec.resolved(), std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    body(std::size_t{0}, count);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = count * w / workers;
    const std::size_t end = count * (w + 1) / workers;
    pool.emplace_back([&, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

/// Pairwise (cascade) summation of term(i) for i in [begin, end), in index order.
template <class Term>
double pairwise_sum(std::size_t begin, std::size_t end, const Term& term) {
  const std::size_t n = end - begin;
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = begin; i < end; ++i) s += term(i);
    return s;
  }
  const std::size_t mid = begin + n / 2;
  return pairwise_sum(begin, mid, term) + pairwise_sum(mid, end, term);
}

}  // namespace telegraph
