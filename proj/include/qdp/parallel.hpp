#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace qdp {

// Runs job(segment_index) for segments 0..num_segments-1 on `workers` threads
// and returns per-segment results in segment order. Segmentation is fixed by
// the caller, so any deterministic reduction over the returned vector is
// independent of the worker count.
template <class R>
std::vector<R> parallel_segments(std::uint64_t num_segments, int workers,
                                 const std::function<R(std::uint64_t)>& job) {
  std::vector<R> out(num_segments);
  if (workers <= 1) {
    for (std::uint64_t s = 0; s < num_segments; ++s) out[s] = job(s);
    return out;
  }
  std::atomic<std::uint64_t> next{0};
  auto run = [&] {
    for (;;) {
      std::uint64_t s = next.fetch_add(1);
      if (s >= num_segments) return;
      out[s] = job(s);
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < workers; ++t) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  return out;
}

// Deterministic pairwise reduction: combines adjacent pairs repeatedly, so
// the combination tree depends only on the number of segments.
template <class R, class F>
R tree_reduce(std::vector<R> xs, F&& combine) {
  while (xs.size() > 1) {
    std::vector<R> nxt;
    nxt.reserve((xs.size() + 1) / 2);
    for (size_t i = 0; i + 1 < xs.size(); i += 2)
      nxt.push_back(combine(xs[i], xs[i + 1]));
    if (xs.size() % 2) nxt.push_back(xs.back());
    xs = std::move(nxt);
  }
  return xs.front();
}

}  // namespace qdp
