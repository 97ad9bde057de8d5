#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <type_traits>
#include <vector>

namespace progset {

struct Chunk {
  std::size_t index;
  std::size_t begin;
  std::size_t end;
};

// Chunk boundaries depend only on n, never on the worker count, so any
// per-chunk floating point reduction is bit-identical for every --workers.
inline std::vector<Chunk> make_chunks(std::size_t n, std::size_t max_chunks = 64) {
  std::vector<Chunk> out;
  if (n == 0) return out;
  const std::size_t count = std::min(n, max_chunks);
  const std::size_t base = n / count, extra = n % count;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t len = base + (i < extra ? 1 : 0);
    out.push_back({i, pos, pos + len});
    pos += len;
  }
  return out;
}

// Runs fn(chunk) for every chunk on up to `workers` threads and returns the
// results in chunk order.
template <class Fn>
auto parallel_chunks(const std::vector<Chunk>& chunks, unsigned workers, Fn&& fn)
    -> std::vector<std::invoke_result_t<Fn&, const Chunk&>> {
  using R = std::invoke_result_t<Fn&, const Chunk&>;
  std::vector<R> results(chunks.size());
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(chunks.size())));
  if (workers <= 1) {
    for (const auto& c : chunks) results[c.index] = fn(c);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(chunks.size());
  auto body = [&] {
    for (std::size_t i = next++; i < chunks.size(); i = next++) {
      try {
        results[i] = fn(chunks[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

template <class Fn>
auto parallel_chunks(std::size_t n, unsigned workers, Fn&& fn) {
  return parallel_chunks(make_chunks(n), workers, std::forward<Fn>(fn));
}

}  // namespace progset
