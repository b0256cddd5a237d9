#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

#include "pmuplace/network.hpp"

namespace pmuplace {

// Complete list of minimum dominating sets, found by iterative deepening on
// the target size with branching over an uncovered bus's closed neighborhood.
struct OracleResult {
    int minimum_size = -1;                    // -1 when size_cap cut the search short
    std::vector<std::vector<int>> optima;     // each sorted ascending; list sorted lexicographically
    long long nodes = 0;
};

inline OracleResult min_dominating_set_exact(const Network& net, int size_cap = -1,
                                             int n_cap = 30) {
    const int n = net.n;
    if (n > n_cap || n > 64) throw std::invalid_argument("oracle cap exceeded");

    std::vector<std::uint64_t> nmask(n + 1, 0);
    for (int i = 1; i <= n; ++i) nmask[i] = 1ull << (i - 1);
    for (auto [u, v] : net.branches) {
        nmask[u] |= 1ull << (v - 1);
        nmask[v] |= 1ull << (u - 1);
    }
    const std::uint64_t full = (n == 64) ? ~0ull : ((1ull << n) - 1);

    OracleResult out;
    const int kmax = size_cap > 0 ? std::min(size_cap, n) : n;

    std::vector<int> chosen;
    std::set<std::vector<int>> found;
    int k_target = 0;

    auto dfs = [&](auto&& self, std::uint64_t covered) -> void {
        ++out.nodes;
        if (covered == full) {
            std::vector<int> s = chosen;
            std::sort(s.begin(), s.end());
            found.insert(std::move(s));
            return;
        }
        if ((int)chosen.size() == k_target) return;

        int u = -1, deg = 65;
        for (int i = 1; i <= n; ++i) {
            if (covered & (1ull << (i - 1))) continue;
            int d = __builtin_popcountll(nmask[i]);
            if (d < deg) {
                deg = d;
                u = i;
            }
        }
        for (int v = 1; v <= n; ++v) {
            if (!(nmask[u] & (1ull << (v - 1)))) continue;
            chosen.push_back(v);
            self(self, covered | nmask[v]);
            chosen.pop_back();
        }
    };

    for (int k = 1; k <= kmax; ++k) {
        found.clear();
        chosen.clear();
        k_target = k;
        dfs(dfs, 0);
        if (!found.empty()) {
            out.minimum_size = k;
            out.optima.assign(found.begin(), found.end());
            return out;
        }
    }
    return out;   // size_cap exhausted without a dominating set
}

}  // namespace pmuplace
