#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pmuplace {

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// Bus/branch topology. Internal bus indices are 1..n; original_labels maps
// internal index i (slot i, slot 0 unused) back to the source file's label.
struct Network {
    int n = 0;
    std::vector<std::pair<int, int>> branches;   // unordered pairs, stored u < v, deduplicated
    std::vector<long long> original_labels;      // size n + 1, [0] unused

    // Closed-neighborhood-free adjacency lists a(i), 1-based outer index.
    std::vector<std::vector<int>> adjacency() const {
        std::vector<std::vector<int>> a(n + 1);
        for (auto [u, v] : branches) {
            a[u].push_back(v);
            a[v].push_back(u);
        }
        for (auto& row : a) std::sort(row.begin(), row.end());
        return a;
    }
};

namespace detail {

inline bool parse_int(const std::string& tok, long long& out) {
    if (tok.empty()) return false;
    size_t pos = 0;
    bool neg = tok[0] == '-';
    if (neg) pos = 1;
    if (pos == tok.size()) return false;
    long long v = 0;
    for (; pos < tok.size(); ++pos) {
        if (tok[pos] < '0' || tok[pos] > '9') return false;
        v = v * 10 + (tok[pos] - '0');
        if (v < 0) return false;   // overflow
    }
    out = neg ? -v : v;
    return true;
}

}  // namespace detail

// Parses the plain-text edge-list format: first non-comment line "n m",
// then m lines "u v". '#' starts a comment. Bus labels are either the
// internal indices themselves (all within 1..n) or, when any label falls
// outside 1..n, a set of exactly n distinct raw identifiers that get
// internal indices in order of first appearance (renumber() normalizes the
// order afterwards). Duplicate branches collapse to one.
inline Network parse_network(std::string_view text) {
    struct Row {
        long long a, b;
        int line;
    };
    std::vector<Row> rows;
    long long n = -1, m = -1;
    int header_line = 0;

    int line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string line(text.substr(pos, eol - pos));
        pos = eol + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);

        std::istringstream iss(line);
        std::vector<std::string> toks;
        std::string tok;
        while (iss >> tok) toks.push_back(tok);
        if (toks.empty()) {
            if (pos > text.size()) break;
            continue;
        }

        if (n < 0) {
            if (toks.size() != 2) throw ParseError(line_no, "expected header \"n m\"");
            long long hn, hm;
            if (!detail::parse_int(toks[0], hn) || !detail::parse_int(toks[1], hm))
                throw ParseError(line_no, "expected header \"n m\"");
            if (hn <= 0) throw ParseError(line_no, "empty system (bus count must be positive)");
            if (hm < 0) throw ParseError(line_no, "negative branch count");
            n = hn;
            m = hm;
            header_line = line_no;
            continue;
        }

        if ((long long)rows.size() == m)
            throw ParseError(line_no, "unexpected content after " + std::to_string(m) + " branches");
        long long a, b;
        if (toks.size() != 2 || !detail::parse_int(toks[0], a) || !detail::parse_int(toks[1], b))
            throw ParseError(line_no, "malformed branch line (expected \"u v\")");
        if (a < 1 || b < 1) throw ParseError(line_no, "bus labels must be positive");
        if (a == b) throw ParseError(line_no, "self-loop branch " + toks[0] + " " + toks[1]);
        rows.push_back({a, b, line_no});
    }

    if (n < 0) throw ParseError(line_no, "empty system (no header found)");
    if ((long long)rows.size() < m)
        throw ParseError(line_no, "expected " + std::to_string(m) + " branches, found " +
                                      std::to_string(rows.size()));

    bool labels_in_range = true;
    for (const auto& r : rows)
        if (r.a > n || r.b > n) {
            labels_in_range = false;
            break;
        }

    Network net;
    net.n = (int)n;
    net.original_labels.assign(n + 1, 0);

    std::map<long long, int> id;
    if (labels_in_range) {
        for (long long i = 1; i <= n; ++i) {
            id[i] = (int)i;
            net.original_labels[i] = i;
        }
    } else {
        for (const auto& r : rows)
            for (long long lab : {r.a, r.b})
                if (!id.count(lab)) {
                    if ((long long)id.size() == n)
                        throw ParseError(r.line, "branch references undeclared bus " +
                                                     std::to_string(lab) + " (more than " +
                                                     std::to_string(n) + " distinct labels)");
                    int next = (int)id.size() + 1;
                    id[lab] = next;
                    net.original_labels[next] = lab;
                }
        if ((long long)id.size() < n)
            throw ParseError(header_line, "header declares " + std::to_string(n) +
                                              " buses but only " + std::to_string(id.size()) +
                                              " distinct labels appear");
    }

    std::set<std::pair<int, int>> dedup;
    for (const auto& r : rows) {
        int u = id[r.a], v = id[r.b];
        dedup.insert({std::min(u, v), std::max(u, v)});
    }
    net.branches.assign(dedup.begin(), dedup.end());
    return net;
}

// Reorders internal indices so that index order follows ascending original
// label; the result has a dense 1..n numbering regardless of how sparse the
// source labels were.
inline Network renumber(const Network& net) {
    std::vector<int> order(net.n);
    for (int i = 0; i < net.n; ++i) order[i] = i + 1;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return net.original_labels[a] < net.original_labels[b];
    });
    std::vector<int> newid(net.n + 1, 0);
    for (int rank = 0; rank < net.n; ++rank) newid[order[rank]] = rank + 1;

    Network out;
    out.n = net.n;
    out.original_labels.assign(net.n + 1, 0);
    for (int i = 1; i <= net.n; ++i) out.original_labels[newid[i]] = net.original_labels[i];
    std::set<std::pair<int, int>> dedup;
    for (auto [u, v] : net.branches) {
        int a = newid[u], b = newid[v];
        dedup.insert({std::min(a, b), std::max(a, b)});
    }
    out.branches.assign(dedup.begin(), dedup.end());
    return out;
}

// Binary connectivity matrix: unit diagonal, A[k][m] = 1 iff k and m share a
// branch. Stored dense row-major.
struct ConnectivityMatrix {
    int n = 0;
    std::vector<std::uint8_t> e;   // n*n entries

    std::uint8_t at(int k, int m) const { return e[(size_t)(k - 1) * n + (m - 1)]; }
    const std::uint8_t* row(int k) const { return &e[(size_t)(k - 1) * n]; }
};

inline ConnectivityMatrix build_connectivity(const Network& net) {
    ConnectivityMatrix A;
    A.n = net.n;
    A.e.assign((size_t)net.n * net.n, 0);
    for (int i = 1; i <= net.n; ++i) A.e[(size_t)(i - 1) * net.n + (i - 1)] = 1;
    for (auto [u, v] : net.branches) {
        A.e[(size_t)(u - 1) * net.n + (v - 1)] = 1;
        A.e[(size_t)(v - 1) * net.n + (u - 1)] = 1;
    }
    return A;
}

inline std::vector<int> row_support(const ConnectivityMatrix& A, int k) {
    std::vector<int> s;
    const std::uint8_t* r = A.row(k);
    for (int j = 0; j < A.n; ++j)
        if (r[j]) s.push_back(j + 1);
    return s;
}

inline bool is_connected(const Network& net) {
    if (net.n <= 1) return true;
    auto adj = net.adjacency();
    std::vector<char> seen(net.n + 1, 0);
    std::vector<int> stack{1};
    seen[1] = 1;
    int count = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int v : adj[u])
            if (!seen[v]) {
                seen[v] = 1;
                ++count;
                stack.push_back(v);
            }
    }
    return count == net.n;
}

}  // namespace pmuplace
