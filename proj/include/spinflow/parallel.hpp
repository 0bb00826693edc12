#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace spinflow {

// Number of worker threads for field sweeps. Read once from SPINFLOW_THREADS;
// results must never depend on it (all reductions use a fixed summation order).
int max_threads();

// Override the thread cap programmatically (tests use this to compare runs
// under different thread counts in one process).
void set_max_threads(int n);

namespace detail {
constexpr std::size_t kParallelGrain = 16384;   // below this, stay serial
constexpr std::size_t kReduceChunk = 4096;      // fixed reduction chunk size
}

// Runs body(begin, end) over a partition of [0, n). Partition boundaries are
// fixed multiples of kReduceChunk regardless of thread count, so any chunked
// reduction built on top is thread-count independent.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
  if (n == 0) return;
  const int nthreads = max_threads();
  if (nthreads <= 1 || n < detail::kParallelGrain) {
    body(std::size_t{0}, n);
    return;
  }
  const std::size_t nblocks = (n + detail::kReduceChunk - 1) / detail::kReduceChunk;
  const std::size_t per = (nblocks + nthreads - 1) / nthreads;
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(nthreads));
  for (int t = 0; t < nthreads; ++t) {
    const std::size_t b0 = static_cast<std::size_t>(t) * per;
    if (b0 >= nblocks) break;
    const std::size_t b1 = std::min(nblocks, b0 + per);
    const std::size_t i0 = b0 * detail::kReduceChunk;
    const std::size_t i1 = std::min(n, b1 * detail::kReduceChunk);
    workers.emplace_back([&body, i0, i1] { body(i0, i1); });
  }
  for (auto& w : workers) w.join();
}

// Deterministic sum of term(i) for i in [0, n): per-chunk serial partials in
// index order, combined by a pairwise tree. Bit-identical for any thread count.
template <typename Term>
double reduce_add(std::size_t n, Term&& term) {
  if (n == 0) return 0.0;
  const std::size_t nchunks = (n + detail::kReduceChunk - 1) / detail::kReduceChunk;
  std::vector<double> partial(nchunks, 0.0);
  parallel_for(n, [&](std::size_t lo, std::size_t hi) {
    std::size_t c = lo / detail::kReduceChunk;
    std::size_t i = lo;
    while (i < hi) {
      const std::size_t stop = std::min(hi, (c + 1) * detail::kReduceChunk);
      double s = 0.0;
      for (; i < stop; ++i) s += term(i);
      partial[c] = s;
      ++c;
    }
  });
  // pairwise tree over the fixed chunk partials
  std::size_t len = nchunks;
  while (len > 1) {
    const std::size_t half = len / 2;
    for (std::size_t i = 0; i < half; ++i) partial[i] = partial[2 * i] + partial[2 * i + 1];
    if (len % 2 == 1) {
      partial[half] = partial[len - 1];
      len = half + 1;
    } else {
      len = half;
    }
  }
  return partial[0];
}

// Deterministic min/max over term(i); n must be positive.
template <typename Term>
double reduce_min(std::size_t n, Term&& term) {
  const std::size_t nchunks = (n + detail::kReduceChunk - 1) / detail::kReduceChunk;
  std::vector<double> partial(nchunks, 0.0);
  parallel_for(n, [&](std::size_t lo, std::size_t hi) {
    std::size_t c = lo / detail::kReduceChunk;
    std::size_t i = lo;
    while (i < hi) {
      const std::size_t stop = std::min(hi, (c + 1) * detail::kReduceChunk);
      double m = term(i);
      for (++i; i < stop; ++i) m = std::min(m, term(i));
      partial[c] = m;
      ++c;
    }
  });
  double m = partial[0];
  for (std::size_t c = 1; c < nchunks; ++c) m = std::min(m, partial[c]);
  return m;
}

template <typename Term>
double reduce_max(std::size_t n, Term&& term) {
  const std::size_t nchunks = (n + detail::kReduceChunk - 1) / detail::kReduceChunk;
  std::vector<double> partial(nchunks, 0.0);
  parallel_for(n, [&](std::size_t lo, std::size_t hi) {
    std::size_t c = lo / detail::kReduceChunk;
    std::size_t i = lo;
    while (i < hi) {
      const std::size_t stop = std::min(hi, (c + 1) * detail::kReduceChunk);
      double m = term(i);
      for (++i; i < stop; ++i) m = std::max(m, term(i));
      partial[c] = m;
      ++c;
    }
  });
  double m = partial[0];
  for (std::size_t c = 1; c < nchunks; ++c) m = std::max(m, partial[c]);
  return m;
}

}  // namespace spinflow
