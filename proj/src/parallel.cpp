#include "spacenorm/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace spacenorm {

namespace {
std::atomic<int> g_threads{0};
}

void set_thread_count(int n) { g_threads.store(n < 0 ? 0 : n); }

int thread_count() {
  const int n = g_threads.load();
  if (n > 0) return n;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(thread_count()), std::max<std::size_t>(n, 1));
  if (workers <= 1 || n < 64) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t b = std::min(n, w * chunk);
    const std::size_t e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&fn, b, e] { fn(b, e); });
  }
  for (auto& th : pool) th.join();
}

double parallel_max(std::size_t n, const std::function<double(std::size_t)>& fn) {
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(thread_count()), std::max<std::size_t>(n, 1));
  const std::size_t chunk = std::max<std::size_t>(1, (n + workers - 1) / workers);
  const std::size_t n_chunks = (n + chunk - 1) / chunk;
  std::vector<double> partial(n_chunks, 0.0);
  parallel_for(n, [&](std::size_t b, std::size_t e) {
    for (std::size_t c = b / chunk; c * chunk < e; ++c) {
      const std::size_t cb = std::max(b, c * chunk);
      const std::size_t ce = std::min(e, (c + 1) * chunk);
      double m = partial[c];
      for (std::size_t i = cb; i < ce; ++i) m = std::max(m, fn(i));
      partial[c] = m;
    }
  });
  double best = 0.0;
  for (double m : partial) best = std::max(best, m);
  return best;
}

}  // namespace spacenorm
