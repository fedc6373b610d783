#include "configlab/parallel.hpp"

namespace configlab {

namespace {
std::atomic<int> g_workers{1};
}

int workers() { return g_workers.load(std::memory_order_relaxed); }

void set_workers(int n) { g_workers.store(n < 1 ? 1 : n, std::memory_order_relaxed); }

void parallel_for_chunks(std::int64_t n_chunks,
                         const std::function<void(std::int64_t)>& fn) {
  if (n_chunks <= 0) return;
  const int nw = workers();
  if (nw <= 1 || n_chunks == 1) {
    for (std::int64_t c = 0; c < n_chunks; ++c) fn(c);
    return;
  }

  std::atomic<std::int64_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;

  auto body = [&]() {
    for (;;) {
      const std::int64_t c = next.fetch_add(1, std::memory_order_relaxed);
      if (c >= n_chunks) return;
      try {
        fn(c);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  const int nthreads = static_cast<int>(n_chunks < nw ? n_chunks : nw);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(nthreads) - 1);
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(body);
  body();
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace configlab
