#pragma once

// Subset-enumeration helpers shared by the brute-force oracles.

#include <algorithm>
#include <vector>

#include "bpdyn/types.hpp"

namespace bpdyn::detail {

inline double binomial(Index n, Index k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double out = 1.0;
    for (Index i = 1; i <= k; ++i) {
        out *= static_cast<double>(n - k + i) / static_cast<double>(i);
    }
    return out;
}

// Advances `idx` to the next k-subset of {0, ..., limit-1} in
// lexicographic order; returns false after the last one.
inline bool next_combination(std::vector<Index>& idx, Index limit) {
    const Index k = static_cast<Index>(idx.size());
    Index i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == limit - k + i) --i;
    if (i < 0) return false;
    ++idx[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < k; ++j) {
        idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
    return true;
}

inline std::vector<Index> first_combination(Index k) {
    std::vector<Index> idx(static_cast<std::size_t>(k));
    for (Index i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    return idx;
}

} // namespace bpdyn::detail
