// Copyright 2026  The spoofeval authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPOOFEVAL_PARALLEL_HPP_
#define SPOOFEVAL_PARALLEL_HPP_

#include <cstddef>
#include <vector>

namespace spoofeval {

/// Fixed block size for deterministic reductions.  Work over [0, n) is cut
/// into blocks of this many indices; each block produces an independent
/// partial result and the partials are folded in block order.  Because the
/// block boundaries and the fold order never depend on the thread count, the
/// result is bitwise identical whether the blocks run serially or in
/// parallel.
inline constexpr std::size_t kReduceBlock = 256;

/// Deterministic blocked reduction.  `block(begin, end)` computes the
/// partial result for indices [begin, end); `merge(into, part)` folds a
/// partial into the running result.  Partials are folded in ascending block
/// order.  With `parallel` false the blocks are evaluated on the calling
/// thread; with it true they are distributed over OpenMP threads.  Both
/// paths produce bitwise identical results.
template <typename Acc, typename BlockFn, typename MergeFn>
Acc blocked_reduce(std::size_t n, Acc init, BlockFn block, MergeFn merge,
                   bool parallel) {
  const std::size_t num_blocks = (n + kReduceBlock - 1) / kReduceBlock;
  if (num_blocks <= 1) {
    if (n > 0) {
      Acc part = block(0, n);
      merge(init, part);
    }
    return init;
  }

  std::vector<Acc> partials(num_blocks);
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(num_blocks);
         ++b) {
      std::size_t begin = static_cast<std::size_t>(b) * kReduceBlock;
      std::size_t end = begin + kReduceBlock < n ? begin + kReduceBlock : n;
      partials[static_cast<std::size_t>(b)] = block(begin, end);
    }
  } else {
    for (std::size_t b = 0; b < num_blocks; ++b) {
      std::size_t begin = b * kReduceBlock;
      std::size_t end = begin + kReduceBlock < n ? begin + kReduceBlock : n;
      partials[b] = block(begin, end);
    }
  }
  for (std::size_t b = 0; b < num_blocks; ++b) merge(init, partials[b]);
  return init;
}

/// Runs `fn(i)` for i in [0, n), optionally across OpenMP threads.  Each
/// index must write only its own outputs; under that contract the result
/// does not depend on the thread count.
template <typename Fn>
void parallel_for(std::size_t n, bool parallel, Fn fn) {
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
      fn(static_cast<std::size_t>(i));
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) fn(i);
  }
}

}  // namespace spoofeval

#endif  // SPOOFEVAL_PARALLEL_HPP_
