#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <vector>

#include "pmuplace/network.hpp"
#include "pmuplace/observability.hpp"
#include "pmuplace/report.hpp"
#include "pmuplace/simplex.hpp"

namespace pmuplace {

// Feasible incumbent: repeatedly place a PMU at the bus covering the most
// still-uncovered buses per unit weight; ties go to the lowest index.
inline Placement greedy_cover(const ConnectivityMatrix& A, const Weights& w) {
    const int n = A.n;
    Placement p;
    p.x.assign(n, 0);
    std::vector<char> covered(n, 0);
    int remaining = n;
    while (remaining > 0) {
        int best = -1;
        double best_score = -1;
        for (int j = 1; j <= n; ++j) {
            if (p.x[j - 1]) continue;
            int newly = 0;
            for (int i = 1; i <= n; ++i)
                if (!covered[i - 1] && A.at(i, j)) ++newly;
            if (newly == 0) continue;
            double score = newly / w.w[j - 1];
            if (score > best_score + 1e-12) {
                best_score = score;
                best = j;
            }
        }
        p.x[best - 1] = 1;
        for (int i = 1; i <= n; ++i)
            if (!covered[i - 1] && A.at(i, best)) {
                covered[i - 1] = 1;
                --remaining;
            }
    }
    return p;
}

struct BipOptions {
    long long node_limit = 2'000'000;
};

// Exact minimum-cost observable placement by branch-and-bound over LP
// relaxations of the covering model. Nodes are bounded when created and
// explored best-bound-first; branching picks the most fractional variable.
inline SolveReport solve_bip(const ConnectivityMatrix& A, const Weights& w,
                             const BipOptions& opt = {}) {
    const int n = A.n;
    SolveReport rep;
    rep.method = "bip";

    std::vector<std::vector<int>> rows(n);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            if (A.at(i, j)) rows[i - 1].push_back(j - 1);
    LpProblem base = LpProblem::covering(n, rows, w.w);
    dedup_rows(base);

    const bool integral_w = w.all_integer();
    auto lift = [&](double v) {
        if (!integral_w) return v;
        return std::ceil(v - 1e-6 * std::max(1.0, std::abs(v)));
    };

    Placement incumbent = greedy_cover(A, w);
    double inc_obj = 0;
    for (int j = 0; j < n; ++j)
        if (incumbent.x[j]) inc_obj += w.w[j];

    struct Node {
        double bound;
        int depth;
        long long seq;
        int branch_var;                             // 0-based, always fractional
        std::vector<std::pair<int, int>> fixings;   // (0-based var, 0/1)
    };
    struct Order {
        bool operator()(const Node& a, const Node& b) const {
            if (a.bound != b.bound) return a.bound > b.bound;
            if (a.depth != b.depth) return a.depth < b.depth;   // deeper first
            return a.seq > b.seq;
        }
    };
    std::priority_queue<Node, std::vector<Node>, Order> open;
    long long seq = 0;
    long long processed = 0;
    bool hit_limit = false;
    bool root_feasible = false;

    // Solves a node's relaxation; integral nodes fold into the incumbent on
    // the spot, fractional ones go to the queue carrying their branch var.
    auto make_node = [&](std::vector<std::pair<int, int>>&& fix, double parent_bound) {
        LpProblem p = base;
        for (auto [j, v] : fix) p.fix(j, v);
        LpSolution sol = solve_lp(p);
        if (sol.status != LpStatus::Optimal) return false;
        double bound = std::max(parent_bound, lift(sol.objective));
        if (bound >= inc_obj - 1e-9) return true;   // feasible but dominated

        int frac = -1;
        double center_best = 1.0;
        for (int j = 0; j < n; ++j) {
            double v = sol.x[j];
            if (std::min(v, 1.0 - v) <= 1e-6) continue;
            double center = std::abs(v - 0.5);
            if (frac < 0 || center < center_best - 1e-12) {
                frac = j;
                center_best = center;
            }
        }
        if (frac < 0) {
            Placement cand;
            cand.x.assign(n, 0);
            double obj = 0;
            for (int j = 0; j < n; ++j) {
                cand.x[j] = sol.x[j] > 0.5 ? 1 : 0;
                if (cand.x[j]) obj += w.w[j];
            }
            if (obj < inc_obj - 1e-9 && is_observable(A, cand)) {
                incumbent = cand;
                inc_obj = obj;
            }
            return true;
        }
        Node node;
        node.bound = bound;
        node.depth = (int)fix.size();
        node.seq = seq++;
        node.branch_var = frac;
        node.fixings = std::move(fix);
        open.push(std::move(node));
        return true;
    };

    root_feasible = make_node({}, 0.0);

    double best_open = inc_obj;
    while (!open.empty()) {
        if (processed >= opt.node_limit) {
            hit_limit = true;
            best_open = open.top().bound;
            break;
        }
        Node node = open.top();
        open.pop();
        ++processed;
        if (node.bound >= inc_obj - 1e-9) break;   // best-bound exhausted

        for (int v : {1, 0}) {
            auto fix = node.fixings;
            fix.push_back({node.branch_var, v});
            make_node(std::move(fix), node.bound);
        }
    }

    rep.nodes = processed;
    if (!root_feasible) {
        rep.status = SolveStatus::Infeasible;
        return rep;
    }
    rep.placement = incumbent;
    rep.objective = inc_obj;
    rep.x.assign(n, 0.0);
    for (int j = 0; j < n; ++j) rep.x[j] = incumbent.x[j];
    rep.residuals.bound_gap = hit_limit ? std::max(0.0, inc_obj - best_open) : 0.0;
    rep.status = hit_limit ? SolveStatus::IterationLimit : SolveStatus::Optimal;
    return rep;
}

inline SolveReport solve_bip(const Network& net, const Weights& w, const BipOptions& opt = {}) {
    return solve_bip(build_connectivity(net), w, opt);
}

}  // namespace pmuplace
