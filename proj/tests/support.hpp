#pragma once

#include <algorithm>
#include <vector>

namespace support {

/// Partitions of n as nondecreasing block-size lists.
inline std::vector<std::vector<int>> partitions(int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int left, int maxpart) -> void {
        if (left == 0) {
            out.emplace_back(cur.rbegin(), cur.rend());
            return;
        }
        for (int k = std::min(left, maxpart); k >= 1; --k) {
            cur.push_back(k);
            self(self, left - k, k);
            cur.pop_back();
        }
    };
    rec(rec, n, n);
    return out;
}

/// Every partition of every n in [lo, hi].
inline std::vector<std::vector<int>> partitions_up_to(int lo, int hi) {
    std::vector<std::vector<int>> out;
    for (int n = lo; n <= hi; ++n)
        for (auto& p : partitions(n)) out.push_back(p);
    return out;
}

}  // namespace support
