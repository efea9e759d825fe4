// Order-stable parallel reduction. The index range is cut into fixed chunks
// that do not depend on the worker count; chunk partials are added in chunk
// order, so results are bit-identical for any number of workers.

#ifndef CUTPROJ_SRC_PARALLEL_HPP_
#define CUTPROJ_SRC_PARALLEL_HPP_

#include <algorithm>
#include <complex>
#include <cstddef>
#include <thread>
#include <vector>

#include "cutproj/spectral.hpp"

namespace cutproj::detail {

inline constexpr std::size_t chunk_size = 4096;

template <class Term>
std::complex<double> ordered_sum(std::size_t n, const Term& term) {
  const std::size_t chunks = (n + chunk_size - 1) / chunk_size;
  std::vector<std::complex<double>> partial(chunks);
  auto run_chunk = [&](std::size_t c) {
    std::complex<double> acc = 0.0;
    std::size_t end = std::min(n, (c + 1) * chunk_size);
    for (std::size_t i = c * chunk_size; i < end; ++i)
      acc += term(i);
    partial[c] = acc;
  };
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(std::max(1, worker_count())), chunks);
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c)
      run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t c = w; c < chunks; c += workers)
          run_chunk(c);
      });
    for (auto& t : pool)
      t.join();
  }
  std::complex<double> total = 0.0;
  for (const auto& p : partial)
    total += p;
  return total;
}

}  // namespace cutproj::detail

#endif  // CUTPROJ_SRC_PARALLEL_HPP_
