#pragma once

#include <cstddef>

namespace gowers::simd::detail {

inline constexpr std::size_t kLeaf = 64;

// Pairwise reduction with split points on leaf boundaries. The tree shape is a
// function of n alone, which is what makes sums reproducible.
template <class R, class T, class Leaf>
R tree_reduce(const T* a, std::size_t n, Leaf leaf) {
  if (n <= kLeaf) return leaf(a, n);
  const std::size_t half = ((n / 2 + kLeaf - 1) / kLeaf) * kLeaf;
  return tree_reduce<R>(a, half, leaf) + tree_reduce<R>(a + half, n - half, leaf);
}

}  // namespace gowers::simd::detail
