#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace slitsim {

/// Runs fn(chunk_index) for every chunk in [0, n_chunks). Work is handed out
/// dynamically but each chunk index is processed exactly once, so any
/// per-chunk results can be reduced in index order afterwards for
/// thread-count-independent output.
template <typename Fn>
void for_each_chunk(std::size_t n_chunks, unsigned n_threads, Fn&& fn) {
  if (n_chunks == 0) return;
  if (n_threads <= 1 || n_chunks == 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) fn(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= n_chunks) return;
      fn(c);
    }
  };
  const unsigned nt =
      static_cast<unsigned>(std::min<std::size_t>(n_threads, n_chunks));
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (unsigned t = 0; t < nt; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace slitsim
