#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <type_traits>
#include <vector>

#include "mia/error.hpp"
#include "mia/sim/rng.hpp"

namespace mia::sim {

/// Runs `n` independent replications. Replication k receives
/// replication_seed(base_seed, k) and its index; results come back ordered by
/// index no matter how many worker threads ran them.
template <class Fn>
auto run_replications(std::size_t n, std::uint64_t base_seed, Fn&& run_one, unsigned threads = 1)
    -> std::vector<std::invoke_result_t<Fn&, std::uint64_t, std::size_t>> {
  using Result = std::invoke_result_t<Fn&, std::uint64_t, std::size_t>;
  if (n == 0) throw Error(Errc::ValidationError, "replications: n must be at least 1");

  std::vector<std::optional<Result>> slots(n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::size_t k = next++; k < n; k = next++) {
      try {
        slots[k].emplace(run_one(replication_seed(base_seed, k), k));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<Result> out;
  out.reserve(n);
  for (auto& slot : slots) out.push_back(std::move(*slot));
  return out;
}

}  // namespace mia::sim
