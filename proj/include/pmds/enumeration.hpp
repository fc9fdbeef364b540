// Lexicographic k-subset enumeration with ranking support, so pattern
// sweeps can be partitioned across workers and sampled reproducibly.

#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "pmds/field.hpp"

namespace pmds {

inline u64 binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    u128 r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * u128(n - k + i) / i;
        if (r > ~0ull) throw std::overflow_error("binomial overflow");
    }
    return static_cast<u64>(r);
}

// rank-th k-subset of [0, n) in lexicographic order
inline void unrank_combination(u64 rank, int n, int k, std::vector<int>& out) {
    out.clear();
    out.reserve(k);
    for (int i = 0; i < n && (int)out.size() < k; ++i) {
        u64 cnt = binomial(n - 1 - i, k - 1 - (int)out.size());
        if (rank < cnt) {
            out.push_back(i);
        } else {
            rank -= cnt;
        }
    }
    if ((int)out.size() != k) throw std::out_of_range("combination rank out of range");
}

// advance to the next k-subset of [0, n); false after the last one
inline bool next_combination(std::vector<int>& c, int n) {
    int k = (int)c.size();
    for (int i = k - 1; i >= 0; --i) {
        if (c[i] < n - k + i) {
            ++c[i];
            for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
            return true;
        }
    }
    return false;
}

inline i64 ipow(i64 b, int e) {
    i64 r = 1;
    for (int i = 0; i < e; ++i) {
        if (b != 0 && r > (i64(1) << 62) / (b < 0 ? -b : b)) throw std::overflow_error("ipow overflow");
        r *= b;
    }
    return r;
}

}  // namespace pmds
