#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pmuplace/network.hpp"

namespace pmuplace {

// Binary decision vector; x[i-1] == 1 means a PMU sits at bus i.
struct Placement {
    std::vector<int> x;

    int n() const { return (int)x.size(); }
    std::vector<int> buses() const {
        std::vector<int> b;
        for (int i = 0; i < (int)x.size(); ++i)
            if (x[i]) b.push_back(i + 1);
        return b;
    }
    static Placement from_buses(int n, const std::vector<int>& buses) {
        Placement p;
        p.x.assign(n, 0);
        for (int b : buses) {
            if (b < 1 || b > n) throw std::out_of_range("bus index out of range");
            p.x[b - 1] = 1;
        }
        return p;
    }
    bool operator==(const Placement& o) const { return x == o.x; }
    bool operator<(const Placement& o) const { return buses() < o.buses(); }
};

// Relaxed decision vector, 0 <= x_i <= 1.
using ContinuousPoint = std::vector<double>;

struct Weights {
    std::vector<double> w;

    static Weights unit(int n) { return Weights{std::vector<double>(n, 1.0)}; }
    bool all_integer() const {
        for (double v : w)
            if (v != (long long)v) return false;
        return true;
    }
};

// Closed neighborhoods N[i] = {i} union a(i), sorted; the support pattern of
// both the connectivity matrix rows and the constraint Jacobian rows.
struct Neighborhoods {
    int n = 0;
    std::vector<std::vector<int>> nb;   // 1-based outer, each sorted ascending

    static Neighborhoods build(const Network& net) {
        Neighborhoods h;
        h.n = net.n;
        h.nb.assign(net.n + 1, {});
        for (int i = 1; i <= net.n; ++i) h.nb[i].push_back(i);
        for (auto [u, v] : net.branches) {
            h.nb[u].push_back(v);
            h.nb[v].push_back(u);
        }
        for (auto& row : h.nb) std::sort(row.begin(), row.end());
        return h;
    }
};

inline void check_dim(int n, size_t len) {
    if ((size_t)n != len) throw std::invalid_argument("dimension mismatch");
}

// A*x: entry i counts PMUs at bus i or adjacent to it.
inline std::vector<int> coverage(const ConnectivityMatrix& A, const Placement& x) {
    check_dim(A.n, x.x.size());
    std::vector<int> c(A.n, 0);
    for (int i = 1; i <= A.n; ++i) {
        const std::uint8_t* r = A.row(i);
        int s = 0;
        for (int j = 0; j < A.n; ++j) s += r[j] * x.x[j];
        c[i - 1] = s;
    }
    return c;
}

inline bool is_observable(const ConnectivityMatrix& A, const Placement& x) {
    for (int c : coverage(A, x))
        if (c < 1) return false;
    return true;
}

// f_i(x) = prod_{k in N[i]} (1 - x_k); zero exactly when bus i or a neighbor
// carries a full PMU.
inline std::vector<double> constraint_values(const Neighborhoods& h, const ContinuousPoint& x) {
    check_dim(h.n, x.size());
    std::vector<double> f(h.n);
    for (int i = 1; i <= h.n; ++i) {
        double p = 1.0;
        for (int k : h.nb[i]) p *= 1.0 - x[k - 1];
        f[i - 1] = p;
    }
    return f;
}

inline std::vector<double> constraint_values(const Network& net, const ContinuousPoint& x) {
    return constraint_values(Neighborhoods::build(net), x);
}

// Sparse Jacobian of f: row i has support N[i],
// df_i/dx_j = -prod_{k in N[i], k != j} (1 - x_k).
struct JacobianRows {
    std::vector<std::vector<int>> col;      // bus indices, 1-based
    std::vector<std::vector<double>> val;
};

inline JacobianRows constraint_jacobian(const Neighborhoods& h, const ContinuousPoint& x) {
    check_dim(h.n, x.size());
    JacobianRows J;
    J.col.resize(h.n);
    J.val.resize(h.n);
    std::vector<double> prefix, suffix;
    for (int i = 1; i <= h.n; ++i) {
        const auto& nb = h.nb[i];
        size_t d = nb.size();
        prefix.assign(d + 1, 1.0);
        suffix.assign(d + 1, 1.0);
        for (size_t j = 0; j < d; ++j) prefix[j + 1] = prefix[j] * (1.0 - x[nb[j] - 1]);
        for (size_t j = d; j-- > 0;) suffix[j] = suffix[j + 1] * (1.0 - x[nb[j] - 1]);
        J.col[i - 1] = nb;
        auto& v = J.val[i - 1];
        v.resize(d);
        for (size_t j = 0; j < d; ++j) v[j] = -(prefix[j] * suffix[j + 1]);
    }
    return J;
}

inline std::vector<std::vector<double>> constraint_jacobian(const Network& net,
                                                            const ContinuousPoint& x) {
    auto h = Neighborhoods::build(net);
    JacobianRows J = constraint_jacobian(h, x);
    std::vector<std::vector<double>> dense(net.n, std::vector<double>(net.n, 0.0));
    for (int i = 0; i < net.n; ++i)
        for (size_t j = 0; j < J.col[i].size(); ++j) dense[i][J.col[i][j] - 1] = J.val[i][j];
    return dense;
}

// Total observation count 1' * A * x; ranks equal-size placements (more
// redundancy is better).
inline long long sori(const ConnectivityMatrix& A, const Placement& x) {
    long long s = 0;
    for (int c : coverage(A, x)) s += c;
    return s;
}

}  // namespace pmuplace
