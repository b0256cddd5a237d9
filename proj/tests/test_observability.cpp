#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "pmuplace/observability.hpp"
#include "pmuplace/runner.hpp"
#include "support/finite_diff.hpp"
#include "support/graphs.hpp"

using namespace pmuplace;

namespace {

ContinuousPoint relax(const Placement& p) {
    ContinuousPoint x(p.x.size());
    for (size_t i = 0; i < p.x.size(); ++i) x[i] = p.x[i];
    return x;
}

}  // namespace

TEST_CASE("placement bookkeeping", "[observability]") {
    Placement p = Placement::from_buses(5, {2, 4});
    CHECK(p.n() == 5);
    CHECK(p.x == std::vector<int>{0, 1, 0, 1, 0});
    CHECK(p.buses() == std::vector<int>{2, 4});
    CHECK_THROWS_AS(Placement::from_buses(3, {4}), std::out_of_range);
    CHECK_THROWS_AS(Placement::from_buses(3, {0}), std::out_of_range);
}

TEST_CASE("coverage counts locally measurable buses", "[observability]") {
    LoadedNetwork ld = load_network("ieee14");
    ConnectivityMatrix A = build_connectivity(ld.net);

    Placement none = Placement::from_buses(14, {});
    CHECK(coverage(A, none) == std::vector<int>(14, 0));

    Placement p = Placement::from_buses(14, {2, 6, 7, 9});
    std::vector<int> cov = coverage(A, p);
    CHECK(cov[4 - 1] == 3);   // buses 2, 7 and 9 all border bus 4
    CHECK(cov[8 - 1] == 1);
    for (int c : cov) CHECK(c >= 1);

    CHECK(is_observable(A, p));
    CHECK(is_observable(A, Placement::from_buses(14, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14})));
    CHECK_FALSE(is_observable(A, Placement::from_buses(14, {2, 6, 7})));
}

TEST_CASE("coverage is additive over disjoint placements", "[observability]") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 3 + (int)(rng() % 10);
        Network net = testsupport::random_connected_network(rng, n, (int)(rng() % n));
        ConnectivityMatrix A = build_connectivity(net);
        Placement a, b;
        a.x.assign(n, 0);
        b.x.assign(n, 0);
        for (int i = 0; i < n; ++i) {
            int r = (int)(rng() % 3);
            if (r == 1) a.x[i] = 1;
            if (r == 2) b.x[i] = 1;
        }
        Placement both;
        both.x.resize(n);
        for (int i = 0; i < n; ++i) both.x[i] = a.x[i] + b.x[i];
        std::vector<int> ca = coverage(A, a), cb = coverage(A, b), cc = coverage(A, both);
        for (int i = 0; i < n; ++i) CHECK(cc[i] == ca[i] + cb[i]);
    }
}

TEST_CASE("constraint values are neighborhood products", "[observability]") {
    LoadedNetwork ld = load_network("ieee14");
    Neighborhoods h = Neighborhoods::build(ld.net);

    ContinuousPoint ones(14, 1.0), zeros(14, 0.0);
    for (double f : constraint_values(h, ones)) CHECK(f == 0.0);
    for (double f : constraint_values(h, zeros)) CHECK(f == 1.0);

    ContinuousPoint x(14, 0.0);
    x[7 - 1] = 1.0;
    std::vector<double> f = constraint_values(h, x);
    CHECK(f[8 - 1] == 0.0);
    CHECK(f[1 - 1] == 1.0);

    // fractional point, one row checked by hand: N[8] = {7, 8}
    ContinuousPoint y(14, 0.0);
    y[7 - 1] = 0.25;
    y[8 - 1] = 0.5;
    std::vector<double> fy = constraint_values(h, y);
    CHECK_THAT(fy[8 - 1], Catch::Matchers::WithinAbs(0.75 * 0.5, 1e-15));

    CHECK_THROWS_AS(constraint_values(h, ContinuousPoint(13, 0.0)), std::invalid_argument);
}

TEST_CASE("a binary point satisfies the constraints exactly when observable", "[observability]") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 5; ++trial) {
        int n = 4 + (int)(rng() % 6);   // 4..9, exhaustive over all 2^n placements
        Network net = testsupport::random_connected_network(rng, n, (int)(rng() % n));
        ConnectivityMatrix A = build_connectivity(net);
        Neighborhoods h = Neighborhoods::build(net);
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
            Placement p;
            p.x.resize(n);
            for (int i = 0; i < n; ++i) p.x[i] = (mask >> i) & 1;
            bool all_zero = true;
            for (double f : constraint_values(h, relax(p)))
                if (f != 0.0) all_zero = false;
            CHECK(is_observable(A, p) == all_zero);
        }
    }
}

TEST_CASE("constraint jacobian matches finite differences", "[observability]") {
    SECTION("hand-checked entries") {
        LoadedNetwork ld = load_network("ieee14");
        Neighborhoods h = Neighborhoods::build(ld.net);
        ContinuousPoint zeros(14, 0.0);
        JacobianRows J = constraint_jacobian(h, zeros);
        // row 8 touches exactly N[8] = {7, 8}, each entry -1 at the origin
        REQUIRE(J.col[7] == std::vector<int>{7, 8});
        CHECK(J.val[7] == std::vector<double>{-1.0, -1.0});

        ContinuousPoint ones(14, 1.0);
        JacobianRows J1 = constraint_jacobian(h, ones);
        for (int i = 0; i < 14; ++i)
            for (double v : J1.val[i]) CHECK(v == 0.0);   // every row has two or more factors
    }

    SECTION("random graphs at random interior points") {
        std::mt19937_64 rng(23);
        for (int trial = 0; trial < 10; ++trial) {
            int n = 6;
            int extra = (int)(rng() % 6);
            Network net = testsupport::random_connected_network(rng, n, extra);
            Neighborhoods h = Neighborhoods::build(net);
            ContinuousPoint x = testsupport::random_interior_point(rng, n);

            auto fd = testsupport::fd_jacobian(
                [&](const std::vector<double>& z) { return constraint_values(h, z); }, x);
            std::vector<std::vector<double>> dense = constraint_jacobian(net, x);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    CHECK_THAT(dense[i][j], Catch::Matchers::WithinAbs(fd[i][j], 1e-7));

            // sparse rows carry the same values on the neighborhood support
            JacobianRows J = constraint_jacobian(h, x);
            for (int i = 1; i <= n; ++i) {
                CHECK(J.col[i - 1] == h.nb[i]);
                for (size_t k = 0; k < J.col[i - 1].size(); ++k)
                    CHECK(J.val[i - 1][k] == dense[i - 1][J.col[i - 1][k] - 1]);
            }
        }
    }
}

TEST_CASE("redundancy index sums coverage", "[observability]") {
    LoadedNetwork ld = load_network("ieee14");
    ConnectivityMatrix A = build_connectivity(ld.net);

    CHECK(sori(A, Placement::from_buses(14, {2, 6, 7, 9})) == 19);
    CHECK(sori(A, Placement::from_buses(14, {2, 8, 10, 13})) == 14);
    CHECK(sori(A, Placement::from_buses(14, {})) == 0);

    // every bus counts itself once and each incident branch twice in total
    Placement all = Placement::from_buses(14, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14});
    CHECK(sori(A, all) == 14 + 2 * (long long)ld.net.branches.size());
}

TEST_CASE("relabeling preserves observability and redundancy", "[observability]") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 5 + (int)(rng() % 8);
        Network net = testsupport::random_connected_network(rng, n, (int)(rng() % n));
        std::vector<int> perm(n);
        for (int i = 0; i < n; ++i) perm[i] = i + 1;
        std::shuffle(perm.begin(), perm.end(), rng);

        Network mapped;
        mapped.n = n;
        mapped.original_labels.resize(n + 1);
        for (int i = 1; i <= n; ++i) mapped.original_labels[i] = i;
        for (auto [u, v] : net.branches) {
            int a = perm[u - 1], b = perm[v - 1];
            mapped.branches.push_back({std::min(a, b), std::max(a, b)});
        }

        ConnectivityMatrix A = build_connectivity(net);
        ConnectivityMatrix B = build_connectivity(mapped);
        Placement p;
        p.x.resize(n);
        for (int i = 0; i < n; ++i) p.x[i] = (int)(rng() % 2);
        Placement q;
        q.x.assign(n, 0);
        for (int i = 0; i < n; ++i)
            if (p.x[i]) q.x[perm[i] - 1] = 1;

        CHECK(is_observable(A, p) == is_observable(B, q));
        CHECK(sori(A, p) == sori(B, q));
    }
}
