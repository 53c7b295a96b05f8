#ifndef MVP_COMMON_PARALLEL_HPP
#define MVP_COMMON_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mvp {

/// Worker count from MVP_THREADS, else the hardware concurrency.
inline int thread_count() {
  if (const char* env = std::getenv("MVP_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Calls body(begin, end) on contiguous blocks covering [0, n). Blocks run
/// concurrently; body must only write state owned by its block.
template <class Body>
void parallel_blocks(std::size_t n, Body&& body) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), std::max<std::size_t>(n, 1));
  if (workers <= 1 || n < 2) {
    body(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  parallel_blocks(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) body(i);
  });
}

/// Sums per-chunk vectors in a fixed binary-tree order. Every chunk covers
/// chunk_size items regardless of the worker count, so the result is
/// reproducible bit for bit.
template <class Accumulate>
std::vector<double> chunked_tree_sum(std::size_t n_items, std::size_t chunk_size, std::size_t width,
                                     Accumulate&& accumulate) {
  const std::size_t n_chunks = std::max<std::size_t>(1, (n_items + chunk_size - 1) / chunk_size);
  std::vector<std::vector<double>> partial(n_chunks, std::vector<double>(width, 0.0));
  parallel_for(n_chunks, [&](std::size_t c) {
    const std::size_t begin = c * chunk_size;
    const std::size_t end = std::min(n_items, begin + chunk_size);
    accumulate(begin, end, partial[c]);
  });
  for (std::size_t stride = 1; stride < n_chunks; stride *= 2)
    for (std::size_t c = 0; c + stride < n_chunks; c += 2 * stride)
      for (std::size_t k = 0; k < width; ++k) partial[c][k] += partial[c + stride][k];
  return std::move(partial[0]);
}

}  // namespace mvp

#endif
