#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace pmuplace {

// Strictly convex box-constrained equality QP:
//   minimize 1/2 d' diag(h) d + g' d   s.t.  E d = r,  lb <= d <= ub
// solved through its dual: d(lambda) = clip(-(g + E'lambda)/h, lb, ub) and a
// semismooth Newton ascent on the concave dual function, whose gradient is
// the equality residual E d(lambda) - r.
//
// With a finite `lambda_box` rho the multipliers are confined to
// [-rho, rho]^m, which is the dual of relaxing each equality to
// E d - r = s with an l1 charge rho*|s_i|; the relaxed problem is always
// feasible, and whenever the strict optimum has multipliers below rho the
// two coincide. A nonempty `lambda_box_rows` gives each row its own bound,
// which lets a caller charge violations in units other than the row scaling.
struct QpEq {
    std::vector<std::vector<int>> col;     // 0-based column indices per row
    std::vector<std::vector<double>> val;
    std::vector<double> r;

    int rows() const { return (int)r.size(); }
};

enum class QpStatus { Solved, Infeasible, IterationLimit };

struct QpResult {
    QpStatus status = QpStatus::IterationLimit;
    std::vector<double> d;
    std::vector<double> lambda;
    int iterations = 0;
};

namespace detail {

// Dense SPD solve via Cholesky; returns false if the factorization breaks.
inline bool cholesky_solve(std::vector<double>& M, int n, std::vector<double>& b) {
    for (int k = 0; k < n; ++k) {
        double diag = M[(size_t)k * n + k];
        for (int j = 0; j < k; ++j) {
            double l = M[(size_t)k * n + j];
            diag -= l * l;
        }
        if (diag <= 0) return false;
        double lkk = std::sqrt(diag);
        M[(size_t)k * n + k] = lkk;
        for (int i = k + 1; i < n; ++i) {
            double v = M[(size_t)i * n + k];
            for (int j = 0; j < k; ++j) v -= M[(size_t)i * n + j] * M[(size_t)k * n + j];
            M[(size_t)i * n + k] = v / lkk;
        }
    }
    for (int i = 0; i < n; ++i) {
        double v = b[i];
        for (int j = 0; j < i; ++j) v -= M[(size_t)i * n + j] * b[j];
        b[i] = v / M[(size_t)i * n + i];
    }
    for (int i = n; i-- > 0;) {
        double v = b[i];
        for (int j = i + 1; j < n; ++j) v -= M[(size_t)j * n + i] * b[j];
        b[i] = v / M[(size_t)i * n + i];
    }
    return true;
}

}  // namespace detail

inline QpResult solve_box_eq_qp(const std::vector<double>& h, const std::vector<double>& g,
                                const QpEq& eq, const std::vector<double>& lb,
                                const std::vector<double>& ub,
                                const std::vector<double>& lambda0 = {},
                                double lambda_box = std::numeric_limits<double>::infinity(),
                                const std::vector<double>& lambda_box_rows = {}) {
    const int n = (int)h.size();
    const int me = eq.rows();
    std::vector<double> rho(me, lambda_box);
    if (!lambda_box_rows.empty()) {
        if ((int)lambda_box_rows.size() != me)
            throw std::invalid_argument("per-row multiplier box size mismatch");
        rho = lambda_box_rows;
    }
    for (double v : h)
        if (!(v > 0)) throw std::invalid_argument("QP requires positive diagonal Hessian");

    QpResult out;
    out.lambda.assign(me, 0.0);
    if (!lambda0.empty() && (int)lambda0.size() == me) out.lambda = lambda0;
    for (int i = 0; i < me; ++i)
        out.lambda[i] = std::min(std::max(out.lambda[i], -rho[i]), rho[i]);

    std::vector<double> dunc(n), d(n);
    std::vector<char> free_coord(n);
    auto eval = [&](const std::vector<double>& lam, std::vector<double>& phi) -> double {
        std::vector<double> et(n, 0.0);
        for (int i = 0; i < me; ++i)
            for (size_t k = 0; k < eq.col[i].size(); ++k) et[eq.col[i][k]] += eq.val[i][k] * lam[i];
        for (int j = 0; j < n; ++j) {
            dunc[j] = -(g[j] + et[j]) / h[j];
            double v = std::min(std::max(dunc[j], lb[j]), ub[j]);
            free_coord[j] = (dunc[j] > lb[j] && dunc[j] < ub[j]) ? 1 : 0;
            d[j] = v;
        }
        phi.assign(me, 0.0);
        double q = 0;
        for (int j = 0; j < n; ++j) q += 0.5 * h[j] * d[j] * d[j] + g[j] * d[j];
        for (int i = 0; i < me; ++i) {
            double s = 0;
            for (size_t k = 0; k < eq.col[i].size(); ++k) s += eq.val[i][k] * d[eq.col[i][k]];
            phi[i] = s - eq.r[i];
            q += lam[i] * phi[i];
        }
        return q;
    };

    if (me == 0) {
        std::vector<double> phi;
        eval(out.lambda, phi);
        out.d = d;
        out.status = QpStatus::Solved;
        return out;
    }

    // column -> rows-touching-it index, built once
    std::vector<std::vector<std::pair<int, double>>> by_col(n);
    for (int i = 0; i < me; ++i)
        for (size_t k = 0; k < eq.col[i].size(); ++k)
            by_col[eq.col[i][k]].push_back({i, eq.val[i][k]});

    double rn = 1.0;
    for (double v : eq.r) rn = std::max(rn, std::abs(v));
    const double tol = 1e-10 * rn;
    const int max_iter = 200;

    std::vector<double> phi, pg(me);
    double q = eval(out.lambda, phi);

    std::vector<int> freerow(me), pos(me);
    std::vector<double> lam_try(me), phi_try, step(me), red;

    for (int it = 0; it < max_iter; ++it) {
        out.iterations = it + 1;
        // projected dual gradient; zero exactly where a pegged multiplier is
        // pushed further outward
        double pn = 0;
        for (int i = 0; i < me; ++i) {
            pg[i] = std::min(std::max(out.lambda[i] + phi[i], -rho[i]), rho[i]) - out.lambda[i];
            pn = std::max(pn, std::abs(pg[i]));
        }
        if (pn <= tol) {
            out.d = d;
            out.status = QpStatus::Solved;
            return out;
        }
        double ln = 0;
        for (double v : out.lambda) ln = std::max(ln, std::abs(v));
        if (ln > 1e10) {
            out.d = d;
            out.status = QpStatus::Infeasible;
            return out;
        }

        int nf = 0;
        for (int i = 0; i < me; ++i) {
            pos[i] = -1;
            if (pg[i] != 0.0) {
                freerow[nf] = i;
                pos[i] = nf++;
            }
        }

        // generalized Hessian of the dual on the free rows, regularized
        std::vector<double> M((size_t)nf * nf, 0.0);
        for (int j = 0; j < n; ++j) {
            if (!free_coord[j]) continue;
            const auto& touch = by_col[j];
            double invh = 1.0 / h[j];
            for (size_t a = 0; a < touch.size(); ++a) {
                int ia = pos[touch[a].first];
                if (ia < 0) continue;
                for (size_t b = 0; b <= a; ++b) {
                    int ib = pos[touch[b].first];
                    if (ib < 0) continue;
                    double add = touch[a].second * touch[b].second * invh;
                    M[(size_t)ia * nf + ib] += add;
                    if (ia != ib) M[(size_t)ib * nf + ia] += add;
                }
            }
        }
        double mx = 0;
        for (int i = 0; i < nf; ++i) mx = std::max(mx, M[(size_t)i * nf + i]);
        double delta = 1e-10 * (1.0 + mx);
        bool factored = false;
        for (int attempt = 0; attempt < 4 && !factored; ++attempt) {
            std::vector<double> Mreg = M;
            for (int i = 0; i < nf; ++i) Mreg[(size_t)i * nf + i] += delta;
            red.assign(nf, 0.0);
            for (int i = 0; i < nf; ++i) red[i] = phi[freerow[i]];
            factored = detail::cholesky_solve(Mreg, nf, red);
            if (!factored) delta *= 1e4;
        }
        std::fill(step.begin(), step.end(), 0.0);
        if (factored)
            for (int i = 0; i < nf; ++i) step[freerow[i]] = red[i];
        else
            step = pg;   // steepest ascent fallback

        bool accepted = false;
        for (int pass = 0; pass < 2 && !accepted; ++pass) {
            double alpha = 1.0;
            for (int bt = 0; bt < 60; ++bt) {
                double gain = 0;
                for (int i = 0; i < me; ++i) {
                    lam_try[i] =
                        std::min(std::max(out.lambda[i] + alpha * step[i], -rho[i]), rho[i]);
                    gain += phi[i] * (lam_try[i] - out.lambda[i]);
                }
                if (gain > 0) {
                    double q_try = eval(lam_try, phi_try);
                    if (q_try >= q + 1e-4 * gain) {
                        out.lambda = lam_try;
                        phi = phi_try;
                        q = q_try;
                        accepted = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if (!accepted) step = pg;   // Newton direction fought the box; retry steepest
        }
        if (!accepted) {
            eval(out.lambda, phi);   // restore d for the current lambda
            out.d = d;
            // Near the optimum the Armijo gain underflows against the ULP of
            // q, so no step can be certified even though the residual is
            // already tiny; that is convergence, not failure.
            if (pn <= 1e-7 * rn) out.status = QpStatus::Solved;
            return out;
        }
    }
    eval(out.lambda, phi);
    out.d = d;
    double pn = 0;
    for (int i = 0; i < me; ++i) {
        double pg_i = std::min(std::max(out.lambda[i] + phi[i], -rho[i]), rho[i]) - out.lambda[i];
        pn = std::max(pn, std::abs(pg_i));
    }
    if (pn <= 1e-7 * rn) out.status = QpStatus::Solved;
    return out;   // IterationLimit when the residual stayed large
}

}  // namespace pmuplace
