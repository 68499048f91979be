#pragma once

#include <bit>
#include <cstdint>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace localdep {

// Index subsets as bitmasks; bit i set means variable i belongs to the set.
using SubsetMask = std::uint32_t;

using RhoMap = std::map<SubsetMask, double>;

inline SubsetMask make_mask(std::span<const std::size_t> indices) {
  SubsetMask m = 0;
  for (std::size_t i : indices) m |= SubsetMask(1) << i;
  return m;
}

inline SubsetMask make_mask(std::initializer_list<std::size_t> indices) {
  return make_mask(std::span<const std::size_t>(indices.begin(), indices.size()));
}

inline std::vector<std::size_t> subset_indices(SubsetMask mask) {
  std::vector<std::size_t> out;
  out.reserve(std::size_t(std::popcount(mask)));
  while (mask != 0) {
    out.push_back(std::size_t(std::countr_zero(mask)));
    mask &= mask - 1;
  }
  return out;
}

inline std::size_t subset_size(SubsetMask mask) { return std::size_t(std::popcount(mask)); }

namespace detail {

// Advances a k-combination of {0..n-1} to its lexicographic successor.
inline bool next_combination(std::vector<std::size_t>& comb, std::size_t n) {
  const std::size_t k = comb.size();
  std::size_t i = k;
  while (i-- > 0) {
    if (comb[i] != i + n - k) {
      ++comb[i];
      for (std::size_t j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
      return true;
    }
    if (i == 0) break;
  }
  return false;
}

}  // namespace detail

// All subsets of {0..n-1} with at least two elements, ordered by size and
// then lexicographically within a size.
inline std::vector<SubsetMask> subsets_ge2(std::size_t n) {
  std::vector<SubsetMask> out;
  for (std::size_t k = 2; k <= n; ++k) {
    std::vector<std::size_t> comb(k);
    for (std::size_t i = 0; i < k; ++i) comb[i] = i;
    do {
      out.push_back(make_mask(comb));
    } while (detail::next_combination(comb, n));
  }
  return out;
}

}  // namespace localdep
