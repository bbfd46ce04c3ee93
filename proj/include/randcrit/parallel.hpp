#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace randcrit {

// Thread count from an explicit request, else RANDCRIT_THREADS, else 1.
int resolve_threads(int requested);

inline std::size_t chunk_count(std::size_t n, std::size_t chunk) {
  return (n + chunk - 1) / chunk;
}

// Calls body(chunk_index, begin, end) once for every fixed-size chunk of
// [0, n). The partition depends only on n and chunk, never on the thread
// count, so per-chunk results merged in chunk order are reproducible.
template <typename Body>
void for_each_chunk(std::size_t n, std::size_t chunk, int threads, Body&& body) {
  const std::size_t chunks = chunk_count(n, chunk);
  if (chunks == 0) return;
  const int workers =
      static_cast<int>(std::min<std::size_t>(std::max(threads, 1), chunks));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        const std::size_t begin = c * chunk;
        body(c, begin, std::min(n, begin + chunk));
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(chunks);
        return;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace randcrit
