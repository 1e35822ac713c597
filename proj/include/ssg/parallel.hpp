#pragma once

// Splitting index ranges across worker threads with a deterministic merge.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace ssg {

// Runs work(begin, end) on jobs contiguous slices of [0, total) and returns
// the per-slice results in slice order.
template <typename Work>
auto parallel_ranges(std::uint64_t total, int jobs, Work&& work) {
  using Result = decltype(work(std::uint64_t{0}, std::uint64_t{0}));
  const std::uint64_t n = std::max<std::uint64_t>(1, std::min<std::uint64_t>(static_cast<std::uint64_t>(std::max(jobs, 1)), total));
  std::vector<Result> results(static_cast<std::size_t>(n));
  if (n == 1) {
    results[0] = work(0, total);
    return results;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
  std::vector<std::thread> threads;
  for (std::uint64_t s = 0; s < n; ++s) {
    threads.emplace_back([&, s] {
      try {
        results[s] = work(total * s / n, total * (s + 1) / n);
      } catch (...) {
        errors[s] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

template <typename Work>
std::uint64_t parallel_sum(std::uint64_t total, int jobs, Work&& work) {
  std::uint64_t sum = 0;
  for (std::uint64_t v : parallel_ranges(total, jobs, work)) sum += v;
  return sum;
}

}  // namespace ssg
