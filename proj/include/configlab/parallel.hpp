#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace configlab {

// Process-wide worker count for the internally parallel estimators.
// Results never depend on it: work is split into a fixed chunk layout and
// chunk results are merged in index order.
int workers();
void set_workers(int n);

// Runs fn(chunk) for chunk = 0..n_chunks-1 on the configured workers.
// fn must only write to per-chunk storage owned by the caller.
void parallel_for_chunks(std::int64_t n_chunks,
                         const std::function<void(std::int64_t)>& fn);

// Fixed chunk layout for an index range [0, n): `n_chunks` nearly equal
// contiguous spans, independent of the worker count.
struct ChunkLayout {
  std::int64_t n = 0;
  std::int64_t n_chunks = 0;

  ChunkLayout(std::int64_t total, std::int64_t chunks)
      : n(total), n_chunks(total > 0 ? (chunks < 1 ? 1 : (chunks > total ? total : chunks)) : 0) {}

  std::int64_t begin(std::int64_t c) const { return n * c / n_chunks; }
  std::int64_t end(std::int64_t c) const { return n * (c + 1) / n_chunks; }
};

}  // namespace configlab
