#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <vector>

#include "eisenlab/quadrature.hpp"

namespace eisenlab {

// Global worker-count setting used by parallel_chunks. Always >= 1.
int worker_count();
void set_worker_count(int n);

// Runs fn(c) once for each chunk index c in [0, chunks). Workers pull chunk
// indices from a shared counter, so the set of chunks (and anything keyed by
// chunk index) is independent of how many workers execute them.
void parallel_chunks(int chunks, const std::function<void(int)>& fn);

// Deterministic sum of f(i) for i in [0, n). The chunk layout depends only on
// n and chunk_size; each chunk's partial is a fixed-tree pairwise sum stored in
// its own slot, and the partials are combined pairwise afterwards. The result
// is bit-identical for any worker count.
template <class F>
double parallel_sum(std::size_t n, std::size_t chunk_size, F&& f) {
  if (n == 0) return 0.0;
  if (chunk_size == 0) chunk_size = 1;
  const std::size_t chunks = (n + chunk_size - 1) / chunk_size;
  std::vector<double> partial(chunks, 0.0);
  parallel_chunks(static_cast<int>(chunks), [&](int c) {
    const std::size_t lo = static_cast<std::size_t>(c) * chunk_size;
    const std::size_t hi = std::min(n, lo + chunk_size);
    std::vector<double> vals(hi - lo);
    for (std::size_t i = lo; i < hi; ++i) vals[i - lo] = f(i);
    partial[static_cast<std::size_t>(c)] = pairwise_sum(vals);
  });
  return pairwise_sum(partial);
}

}  // namespace eisenlab
