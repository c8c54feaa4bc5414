#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace bdlab {

/// Per-replica results indexed by replica number. Results may arrive in any
/// order; ordered() hands them back in ascending replica order and refuses
/// incomplete sets.
template <class R>
class ReplicaResults {
 public:
  explicit ReplicaResults(std::size_t expected = 0) : slots_(expected) {}

  void insert(std::size_t replica, R value) {
    if (replica >= slots_.size()) slots_.resize(replica + 1);
    if (slots_[replica]) throw std::logic_error("ReplicaResults: replica " + std::to_string(replica) + " twice");
    slots_[replica] = std::move(value);
  }

  /// Union with a disjoint set.
  void merge(ReplicaResults&& other) {
    for (std::size_t i = 0; i < other.slots_.size(); ++i)
      if (other.slots_[i]) insert(i, std::move(*other.slots_[i]));
  }

  [[nodiscard]] std::size_t expected() const { return slots_.size(); }

  [[nodiscard]] std::vector<std::size_t> missing() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < slots_.size(); ++i)
      if (!slots_[i]) out.push_back(i);
    return out;
  }

  /// Throws std::runtime_error listing missing replica indices.
  [[nodiscard]] std::vector<R> ordered() const {
    const auto gaps = missing();
    if (!gaps.empty()) {
      std::string msg = "missing replicas:";
      for (std::size_t i = 0; i < gaps.size() && i < 50; ++i) msg += " " + std::to_string(gaps[i]);
      if (gaps.size() > 50) msg += " ... (" + std::to_string(gaps.size()) + " total)";
      throw std::runtime_error(msg);
    }
    std::vector<R> out;
    out.reserve(slots_.size());
    for (const auto& s : slots_) out.push_back(*s);
    return out;
  }

 private:
  std::vector<std::optional<R>> slots_;
};

/// Runs fn(i) for i in [0, n) on up to `threads` workers and returns the
/// results in index order. The first exception thrown by any call is
/// rethrown after all workers stop.
template <class Fn>
auto parallel_replicas(std::size_t n, int threads, Fn&& fn) {
  using R = decltype(fn(std::size_t{0}));
  ReplicaResults<R> results(n);
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) results.insert(i, fn(i));
    return results.ordered();
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex mu;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n || failed.load()) return;
      try {
        R r = fn(i);
        std::lock_guard lock(mu);
        results.insert(i, std::move(r));
      } catch (...) {
        std::lock_guard lock(mu);
        if (!error) error = std::current_exception();
        failed = true;
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, n); ++w) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  return results.ordered();
}

}  // namespace bdlab
