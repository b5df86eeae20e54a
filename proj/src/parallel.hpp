#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace eqwave::detail {

// Splits [0, n) into contiguous chunks, one per worker, accumulates each chunk
// into a copy of `init` and merges the partial results in chunk order. With
// order-independent merges (min, max, counts) the result does not depend on
// the worker count.
template <class Acc, class Body, class Merge>
Acc parallel_reduce(std::size_t n, unsigned workers, const Acc& init, Body body, Merge merge) {
  const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(workers, n));
  std::vector<Acc> partial(chunks, init);
  std::vector<std::exception_ptr> errors(chunks);
  auto run = [&](std::size_t c) {
    const std::size_t begin = n * c / chunks;
    const std::size_t end = n * (c + 1) / chunks;
    try {
      for (std::size_t i = begin; i < end; ++i) body(i, partial[c]);
    } catch (...) {
      errors[c] = std::current_exception();
    }
  };
  if (chunks == 1) {
    run(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(chunks);
    for (std::size_t c = 0; c < chunks; ++c) threads.emplace_back(run, c);
    for (auto& th : threads) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  Acc out = init;
  for (const auto& p : partial) merge(out, p);
  return out;
}

}  // namespace eqwave::detail
