#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace firesl {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(begin, end) over fixed-size chunks of [0, n). Chunk boundaries
// depend only on n, never on the thread count, so any writer that fills
// disjoint output slots produces identical results for every thread count.
inline void parallel_for_chunks(
    std::size_t n, int threads,
    const std::function<void(std::size_t, std::size_t)>& fn,
    std::size_t chunk = 1024) {
  if (n == 0) return;
  const int t = resolve_threads(threads);
  const std::size_t nchunks = (n + chunk - 1) / chunk;
  if (t <= 1 || nchunks <= 1) {
    for (std::size_t c = 0; c < nchunks; ++c)
      fn(c * chunk, std::min(n, (c + 1) * chunk));
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t c = next.fetch_add(1);
      if (c >= nchunks) return;
      fn(c * chunk, std::min(n, (c + 1) * chunk));
    }
  };
  std::vector<std::thread> pool;
  const int nt = static_cast<int>(std::min<std::size_t>(t, nchunks));
  pool.reserve(nt);
  for (int i = 0; i < nt; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

// Neumaier compensated accumulator. Summation order is fixed by the caller,
// so totals are reproducible bit-for-bit; compensation keeps them accurate.
class CompensatedSum {
 public:
  void add(double v) {
    double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }

  void add(const CompensatedSum& other) {
    add(other.sum_);
    add(other.comp_);
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Deterministic parallel map-reduce: per-chunk partial sums are produced in
// parallel, then combined serially in chunk order.
inline double parallel_sum(
    std::size_t n, int threads,
    const std::function<double(std::size_t)>& term,
    std::size_t chunk = 1024) {
  if (n == 0) return 0.0;
  const std::size_t nchunks = (n + chunk - 1) / chunk;
  std::vector<CompensatedSum> partial(nchunks);
  parallel_for_chunks(
      n, threads,
      [&](std::size_t b, std::size_t e) {
        CompensatedSum s;
        for (std::size_t i = b; i < e; ++i) s.add(term(i));
        partial[b / chunk] = s;
      },
      chunk);
  CompensatedSum total;
  for (const auto& p : partial) total.add(p);
  return total.value();
}

}  // namespace firesl
