// Internal helpers shared by the estimators: a static-partition parallel loop
// and mergeable running statistics.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

namespace relaynet::detail {

// Draws are grouped into fixed-size chunks; each chunk is reduced on its own
// and chunk results are merged in index order, so the result does not depend
// on how chunks were spread over workers.
inline constexpr std::uint64_t kChunkDraws = 1024;

template <typename F>
void parallel_for(std::uint64_t count, unsigned workers, F&& body) {
  workers = std::max(1u, workers);
  if (workers == 1 || count < 2) {
    for (std::uint64_t i = 0; i < count; ++i) body(i);
    return;
  }
  const std::uint64_t n_threads = std::min<std::uint64_t>(workers, count);
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (std::uint64_t t = 0; t < n_threads; ++t) {
    const std::uint64_t begin = count * t / n_threads;
    const std::uint64_t end = count * (t + 1) / n_threads;
    pool.emplace_back([begin, end, &body] {
      for (std::uint64_t i = begin; i < end; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

// Welford mean/M2 with a Neumaier-compensated running sum for the mean.
class RunningStats {
 public:
  void add(double x) {
    ++count_;
    const double delta = x - welford_mean_;
    welford_mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - welford_mean_);
    neumaier(x);
  }

  void merge(const RunningStats& other) {
    if (other.count_ == 0) return;
    if (count_ == 0) {
      *this = other;
      return;
    }
    const auto na = static_cast<double>(count_);
    const auto nb = static_cast<double>(other.count_);
    const double delta = other.welford_mean_ - welford_mean_;
    const double n = na + nb;
    m2_ += other.m2_ + delta * delta * na * nb / n;
    welford_mean_ += delta * nb / n;
    count_ += other.count_;
    neumaier(other.sum_);
    neumaier(other.comp_);
  }

  std::uint64_t count() const { return count_; }
  double mean() const { return count_ ? (sum_ + comp_) / static_cast<double>(count_) : 0.0; }
  double variance() const { return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0; }
  double std_error() const {
    return count_ ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
  }

 private:
  void neumaier(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  std::uint64_t count_ = 0;
  double welford_mean_ = 0.0;
  double m2_ = 0.0;
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace relaynet::detail
