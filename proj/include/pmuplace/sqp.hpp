#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "pmuplace/network.hpp"
#include "pmuplace/observability.hpp"
#include "pmuplace/qp.hpp"
#include "pmuplace/report.hpp"

namespace pmuplace {

struct SqpConfig {
    double tol_con = 1e-6;        // constraint tolerance, also the binarity tolerance
    double tol_x = 1e-6;          // step tolerance
    double tol_fun = 1e-6;        // stationarity tolerance
    int max_iter = 200;
    double penalty_growth = 2.0;  // merit penalty stays >= growth * |multipliers|
    double round_threshold = 0.5;
};

struct StartStrategy {
    enum class Kind { AllOnes, GridRandom, UniformRandom };
    Kind kind = Kind::AllOnes;
    int count = 1;
    std::uint64_t seed = 0;
    double grid_step = 0.1;
};

inline std::pair<double, std::vector<double>> objective_value_grad(const ContinuousPoint& x,
                                                                   const Weights& w) {
    check_dim((int)w.w.size(), x.size());
    double val = 0;
    std::vector<double> grad(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        val += w.w[i] * x[i] * x[i];
        grad[i] = 2.0 * w.w[i] * x[i];
    }
    return {val, grad};
}

inline Placement round_to_binary(const ContinuousPoint& x, double threshold,
                                 double* residual = nullptr) {
    Placement p;
    p.x.resize(x.size());
    double res = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        p.x[i] = x[i] >= threshold ? 1 : 0;
        res = std::max(res, std::min(std::abs(x[i]), std::abs(1.0 - x[i])));
    }
    if (residual) *residual = res;
    return p;
}

namespace detail {

inline bool binary_observable(const Neighborhoods& h, const Placement& p) {
    for (int i = 1; i <= h.n; ++i) {
        bool hit = false;
        for (int k : h.nb[i])
            if (p.x[k - 1]) {
                hit = true;
                break;
            }
        if (!hit) return false;
    }
    return true;
}

struct Subproblem {
    QpResult qp;
    QpEq eq;                    // the scaled rows the QP saw
    std::vector<int> kept;      // row indices (0-based) that stayed in the QP
    std::vector<double> scale;  // max-norm each kept row was divided by
    bool degenerate_violation = false;   // zero gradient row with |f| above tolerance
};

// Collects the non-degenerate constraint rows. Every |df_i/dx_j| is a
// product of factors in [0,1] that also divides f_i, so a row whose largest
// entry is below the constraint tolerance is itself satisfied to tolerance
// and carries no usable linearization: it is dropped. Kept rows are scaled
// to unit max-norm.
inline Subproblem build_subproblem(const Neighborhoods& h, const JacobianRows& J,
                                   const std::vector<double>& f, const SqpConfig& cfg,
                                   const std::vector<double>& warm_lambda,
                                   std::vector<double>& lam0) {
    Subproblem sp;
    QpEq& eq = sp.eq;
    for (int i = 0; i < h.n; ++i) {
        double rn = 0;
        for (double v : J.val[i]) rn = std::max(rn, std::abs(v));
        if (rn <= cfg.tol_con) {
            if (std::abs(f[i]) > cfg.tol_con) sp.degenerate_violation = true;
            continue;
        }
        sp.kept.push_back(i);
        sp.scale.push_back(rn);
        std::vector<int> cols = J.col[i];
        for (int& c : cols) --c;
        std::vector<double> vals = J.val[i];
        for (double& v : vals) v /= rn;
        eq.col.push_back(std::move(cols));
        eq.val.push_back(std::move(vals));
        eq.r.push_back(-f[i] / rn);
        lam0.push_back(warm_lambda.empty() ? 0.0 : warm_lambda[i]);
    }
    return sp;
}

// Builds and solves the step QP in one shot. A finite `lambda_box` solves
// the l1-relaxed QP (multiplier box) instead of the strict equalities.
inline Subproblem build_and_solve_subproblem(
    const Neighborhoods& h, const Weights& w, const ContinuousPoint& x, const JacobianRows& J,
    const std::vector<double>& f, const SqpConfig& cfg, const std::vector<double>& warm_lambda,
    double lambda_box = std::numeric_limits<double>::infinity()) {
    const int n = h.n;
    std::vector<double> lam0;
    Subproblem sp = build_subproblem(h, J, f, cfg, warm_lambda, lam0);
    std::vector<double> hd(n), g(n), lb(n), ub(n);
    for (int j = 0; j < n; ++j) {
        hd[j] = 2.0 * w.w[j];
        g[j] = 2.0 * w.w[j] * x[j];
        lb[j] = -x[j];
        ub[j] = 1.0 - x[j];
    }
    sp.qp = solve_box_eq_qp(hd, g, sp.eq, lb, ub, lam0, lambda_box);
    return sp;
}

// Drops every placement whose removal keeps all buses covered, lowest bus
// first; the survivor set is minimal, hence a stationary point of the NLP.
inline bool strip_redundant(const Neighborhoods& h, Placement& p) {
    std::vector<int> cover(h.n + 1, 0);
    for (int i = 1; i <= h.n; ++i)
        for (int k : h.nb[i])
            if (p.x[k - 1]) ++cover[i];
    bool stripped = false;
    for (int j = 1; j <= h.n; ++j) {
        if (!p.x[j - 1]) continue;
        bool removable = true;
        for (int i : h.nb[j])
            if (cover[i] < 2) {
                removable = false;
                break;
            }
        if (removable) {
            p.x[j - 1] = 0;
            for (int i : h.nb[j]) --cover[i];
            stripped = true;
        }
    }
    return stripped;
}

// Feasibility recovery when the QP step cannot make progress. Near the
// constraint surface the rounded placement, when observable, satisfies every
// product constraint exactly; taking it (minus redundant placements, whose
// removal is the descent the line search cannot navigate through the
// product curvature) beats any damped iteration. Otherwise one damped
// Gauss-Newton descent on sum f_i^2 runs. Returns true if the violation
// shrank meaningfully or the snap made progress.
inline bool restoration_step(const Neighborhoods& h, ContinuousPoint& x, const SqpConfig& cfg) {
    const int n = h.n;
    auto ssq = [&](const ContinuousPoint& p) {
        double s = 0;
        for (double v : constraint_values(h, p)) s += v * v;
        return s;
    };
    double before = ssq(x);
    double current = before;

    double binarity = 0;
    Placement rounded = round_to_binary(x, 0.5, &binarity);
    if (binarity <= 0.1 && binary_observable(h, rounded)) {
        bool stripped = strip_redundant(h, rounded);
        bool moved = stripped;
        for (int j = 0; j < n; ++j) {
            if (x[j] != (double)rounded.x[j]) moved = true;
            x[j] = rounded.x[j];
        }
        return moved;
    }
    for (int it = 0; it < 15 && current > cfg.tol_con * cfg.tol_con; ++it) {
        std::vector<double> f = constraint_values(h, x);
        JacobianRows J = constraint_jacobian(h, x);
        std::vector<double> JtJ((size_t)n * n, 0.0), Jtf(n, 0.0);
        for (int i = 0; i < n; ++i)
            for (size_t a = 0; a < J.col[i].size(); ++a) {
                int ca = J.col[i][a] - 1;
                double va = J.val[i][a];
                Jtf[ca] += va * f[i];
                for (size_t b = 0; b <= a; ++b) {
                    int cb = J.col[i][b] - 1;
                    double add = va * J.val[i][b];
                    JtJ[(size_t)ca * n + cb] += add;
                    if (a != b) JtJ[(size_t)cb * n + ca] += add;
                }
            }
        double mx = 0;
        for (int j = 0; j < n; ++j) mx = std::max(mx, JtJ[(size_t)j * n + j]);
        double nu = 1e-8 * (1.0 + mx);
        bool moved = false;
        for (int attempt = 0; attempt < 6 && !moved; ++attempt) {
            std::vector<double> M = JtJ;
            for (int j = 0; j < n; ++j) M[(size_t)j * n + j] += nu;
            std::vector<double> p(n);
            for (int j = 0; j < n; ++j) p[j] = -Jtf[j];
            if (!pmuplace::detail::cholesky_solve(M, n, p)) {
                nu *= 100;
                continue;
            }
            double alpha = 1.0;
            for (int bt = 0; bt < 20; ++bt) {
                ContinuousPoint trial = x;
                for (int j = 0; j < n; ++j)
                    trial[j] = std::min(1.0, std::max(0.0, trial[j] + alpha * p[j]));
                double s = ssq(trial);
                if (s < current * (1.0 - 1e-4)) {
                    x = trial;
                    current = s;
                    moved = true;
                    break;
                }
                alpha *= 0.5;
            }
            if (!moved) nu *= 100;
        }
        if (!moved) break;
    }
    // Gauss-Newton leaves coordinates a hair off the bounds it was driving
    // them to; settle those exactly so later subproblems see clean rows.
    for (int j = 0; j < n; ++j) {
        if (x[j] <= 1e-8) x[j] = 0.0;
        if (x[j] >= 1.0 - 1e-8) x[j] = 1.0;
    }
    current = ssq(x);
    return current < before * 0.999 || current <= cfg.tol_con * cfg.tol_con;
}

}  // namespace detail

// Minimizes sum w_i x_i^2 subject to the product-form observability
// equalities and box bounds, by SQP with an l1 exact-penalty line search.
// Each iteration solves the QP in its l1-relaxed form with the multiplier box
// at the current penalty: the relaxation is exact once the penalty dominates
// the true multipliers, and it stays well-posed at points where the strict
// linearization is infeasible inside the box.
inline SolveReport solve_nlp(const Network& net, const Weights& w, const ContinuousPoint& x0,
                             const SqpConfig& cfg = {}) {
    const Neighborhoods h = Neighborhoods::build(net);
    const int n = net.n;
    check_dim(n, x0.size());
    check_dim(n, w.w.size());

    SolveReport rep;
    rep.method = "nlp";

    ContinuousPoint x = x0;
    for (double& v : x) v = std::min(1.0, std::max(0.0, v));

    // The penalty starts light so early iterations chase the objective, and
    // the multiplier-driven updates below raise it as constraints tighten;
    // at a binary optimum the pinning multipliers sit at 2 w_i, so the
    // growth factor keeps the final penalty above the exactness level.
    const double mu_floor = 1.0;
    double mu = mu_floor;
    const double mu_cap = 1e8;

    std::vector<double> lambda_full(n, 0.0);
    bool converged = false;
    bool stalled = false;
    int consecutive_restorations = 0;
    double kkt = 0, maxf = 0;

    auto l1 = [](const std::vector<double>& f) {
        double s = 0;
        for (double v : f) s += std::abs(v);
        return s;
    };

    for (int iter = 1; iter <= cfg.max_iter; ++iter) {
        std::vector<double> f = constraint_values(h, x);
        maxf = 0;
        for (double v : f) maxf = std::max(maxf, std::abs(v));
        JacobianRows J = constraint_jacobian(h, x);

        std::vector<double> lam0;
        detail::Subproblem sp = detail::build_subproblem(h, J, f, cfg, lambda_full, lam0);

        bool need_restoration = sp.degenerate_violation;
        bool grew_mu = false;
        double step_norm = 0;
        double kept_l1 = 0, s_l1 = 0;
        if (!need_restoration) {
            std::vector<double> hd(n), g(n), lb(n), ub(n);
            for (int j = 0; j < n; ++j) {
                hd[j] = 2.0 * w.w[j];
                g[j] = 2.0 * w.w[j] * x[j];
                lb[j] = -x[j];
                ub[j] = 1.0 - x[j];
            }
            for (int i : sp.kept) kept_l1 += std::abs(f[i]);

            // Per-row multiplier boxes mu*scale charge the QP for violations
            // in the same unscaled units the merit uses; unit-norm scaling
            // then only conditions the linear algebra. Without this, a row
            // whose gradient is shrinking makes its own violation look ever
            // more expensive, and the steps that trade a small linearized
            // violation for a real objective gain never get proposed.
            auto boxes_at = [&](double m) {
                std::vector<double> b(sp.kept.size());
                for (size_t k = 0; k < sp.kept.size(); ++k) b[k] = m * sp.scale[k];
                return b;
            };

            // Best linearized residual the box allows, from a feasibility-only
            // QP; the step QP is then re-solved with a growing penalty until
            // it claims a decent share of that achievable correction, which
            // is what stops the relaxation from trading feasibility away when
            // the penalty is still light.
            double best_resid = 0;
            if (!sp.kept.empty()) {
                std::vector<double> hf(n, 1e-4), gf(n, 0.0);
                QpResult fqp =
                    solve_box_eq_qp(hf, gf, sp.eq, lb, ub, {}, 0.0, boxes_at(1.0));
                for (size_t k = 0; k < sp.kept.size(); ++k) {
                    double si = -sp.eq.r[k];
                    for (size_t a = 0; a < sp.eq.col[k].size(); ++a)
                        si += sp.eq.val[k][a] * fqp.d[sp.eq.col[k][a]];
                    best_resid += sp.scale[k] * std::abs(si);
                }
            }
            auto resid_of = [&](const std::vector<double>& d) {
                double t = 0;
                for (size_t k = 0; k < sp.kept.size(); ++k) {
                    double si = -sp.eq.r[k];
                    for (size_t a = 0; a < sp.eq.col[k].size(); ++a)
                        si += sp.eq.val[k][a] * d[sp.eq.col[k][a]];
                    t += sp.scale[k] * std::abs(si);
                }
                return t;
            };
            for (;;) {
                sp.qp = solve_box_eq_qp(hd, g, sp.eq, lb, ub, lam0, 0.0, boxes_at(mu));
                if (sp.qp.status != QpStatus::Solved) break;
                s_l1 = resid_of(sp.qp.d);
                if (kept_l1 - s_l1 >= 0.5 * (kept_l1 - best_resid) - 1e-12) break;
                if (mu >= mu_cap) break;
                mu = std::min(mu_cap, mu * cfg.penalty_growth);
                grew_mu = true;
            }

            need_restoration = sp.qp.status != QpStatus::Solved;
        }
        if (!need_restoration) {
            for (double v : sp.qp.d) step_norm = std::max(step_norm, std::abs(v));

            std::fill(lambda_full.begin(), lambda_full.end(), 0.0);
            for (size_t k = 0; k < sp.kept.size(); ++k) lambda_full[sp.kept[k]] = sp.qp.lambda[k];

            auto [J0, g] = objective_value_grad(x, w);
            std::vector<double> lagr = g;
            for (size_t k = 0; k < sp.kept.size(); ++k) {
                int i = sp.kept[k];
                double lam = sp.qp.lambda[k] / sp.scale[k];
                for (size_t a = 0; a < J.col[i].size(); ++a)
                    lagr[J.col[i][a] - 1] += lam * J.val[i][a];
            }
            kkt = 0;
            for (int j = 0; j < n; ++j) {
                double proj = std::min(1.0, std::max(0.0, x[j] - lagr[j]));
                kkt = std::max(kkt, std::abs(x[j] - proj));
            }

            if (maxf <= cfg.tol_con && (step_norm <= cfg.tol_x || kkt <= cfg.tol_fun)) {
                converged = true;
                rep.nodes = iter - 1;
                break;
            }

            // Multiplier-driven penalty target, in unscaled units; multipliers
            // the box clamped only certify that the relaxation is active, so
            // they are left out, and a decay toward the target keeps a past
            // spike from stunting later steps, whose accepted length shrinks
            // like 1/mu near the constraint surface.
            double lam_inf = 0;
            for (size_t k = 0; k < sp.qp.lambda.size(); ++k) {
                double v = std::abs(sp.qp.lambda[k]);
                if (v < 0.999 * mu * sp.scale[k]) lam_inf = std::max(lam_inf, v / sp.scale[k]);
            }
            double mu_target =
                std::min(mu_cap, std::max(mu_floor, cfg.penalty_growth * lam_inf));
            if (mu < mu_target)
                mu = mu_target;
            else if (!grew_mu)
                mu = std::max(mu_target, 0.5 * mu);

            // Directional bound for the l1 merit: the linearized residual the
            // relaxed QP chose not to remove counts against the step.
            double gd = 0;
            for (int j = 0; j < n; ++j) gd += g[j] * sp.qp.d[j];
            double phi0 = J0 + mu * l1(f);
            double slope = gd + mu * (s_l1 - kept_l1);

            if (slope < -1e-12 * std::max(1.0, std::abs(phi0))) {
                auto clip_snap = [](double v) {
                    v = std::min(1.0, std::max(0.0, v));
                    if (v < 1e-12) v = 0.0;
                    if (v > 1.0 - 1e-12) v = 1.0;
                    return v;
                };
                auto merit_of = [&](const ContinuousPoint& p) {
                    return objective_value_grad(p, w).first + mu * l1(constraint_values(h, p));
                };
                double alpha = 1.0;
                bool accepted = false;
                double phi_acc = 0;
                ContinuousPoint trial(n);
                for (int bt = 0; bt < 30 && !accepted; ++bt) {
                    for (int j = 0; j < n; ++j) trial[j] = clip_snap(x[j] + alpha * sp.qp.d[j]);
                    double phit = merit_of(trial);
                    if (phit <= phi0 + 1e-4 * alpha * slope) {
                        accepted = true;
                        phi_acc = phit;
                        break;
                    }
                    if (bt == 0) {
                        // Second-order correction: the full step's constraint
                        // surge is quadratic in the step, so retry it with the
                        // least-norm displacement cancelling that surge; this
                        // is what lets steps along the curved constraint
                        // surface pass the merit test at full length.
                        std::vector<double> fc = constraint_values(h, trial);
                        QpEq ceq = sp.eq;
                        for (size_t k = 0; k < sp.kept.size(); ++k)
                            ceq.r[k] = -fc[sp.kept[k]] / sp.scale[k];
                        std::vector<double> hc(n, 1.0), gc(n, 0.0), lbc(n), ubc(n);
                        for (int j = 0; j < n; ++j) {
                            lbc[j] = -trial[j];
                            ubc[j] = 1.0 - trial[j];
                        }
                        std::vector<double> cbox(sp.kept.size());
                        for (size_t k = 0; k < sp.kept.size(); ++k)
                            cbox[k] = mu * sp.scale[k];
                        QpResult cqp =
                            solve_box_eq_qp(hc, gc, ceq, lbc, ubc, sp.qp.lambda, 0.0, cbox);
                        if (cqp.status == QpStatus::Solved) {
                            ContinuousPoint t2(n);
                            for (int j = 0; j < n; ++j) t2[j] = clip_snap(trial[j] + cqp.d[j]);
                            double phi2 = merit_of(t2);
                            if (phi2 <= phi0 + 1e-4 * slope) {
                                trial = std::move(t2);
                                accepted = true;
                                phi_acc = phi2;
                                break;
                            }
                        }
                    }
                    alpha *= 0.5;
                }
                if (accepted) {
                    IterationRecord tr;
                    tr.iter = iter;
                    tr.objective = objective_value_grad(trial, w).first;
                    tr.max_violation = maxf;
                    tr.step_norm = step_norm;
                    tr.alpha = alpha;
                    tr.merit_before = phi0;
                    tr.merit_after = phi_acc;
                    tr.penalty = mu;
                    tr.rows_kept = (int)sp.kept.size();
                    rep.trace.push_back(tr);
                    x = std::move(trial);
                    consecutive_restorations = 0;
                    continue;
                }
                need_restoration = true;
            } else {
                // No descent in the current merit. Either we are done, or the
                // penalty is still too light to make feasibility pay.
                if (maxf <= cfg.tol_con && step_norm <= cfg.tol_x) {
                    converged = true;
                    rep.nodes = iter - 1;
                    break;
                }
                if (mu < mu_cap) {
                    mu = std::min(mu_cap, mu * cfg.penalty_growth);
                    continue;
                }
                need_restoration = true;
            }
        }

        if (need_restoration) {
            ++consecutive_restorations;
            bool improved = detail::restoration_step(h, x, cfg);
            IterationRecord tr;
            tr.iter = iter;
            tr.objective = objective_value_grad(x, w).first;
            tr.max_violation = maxf;
            tr.penalty = mu;
            tr.restoration = true;
            rep.trace.push_back(tr);
            std::fill(lambda_full.begin(), lambda_full.end(), 0.0);
            if (!improved || consecutive_restorations >= 3) {
                stalled = true;
                rep.nodes = iter;
                break;
            }
        }
    }

    if (!converged && !stalled) rep.nodes = cfg.max_iter;

    std::vector<double> f_final = constraint_values(h, x);
    maxf = 0;
    for (double v : f_final) maxf = std::max(maxf, std::abs(v));

    double binarity = 0;
    Placement rounded = round_to_binary(x, cfg.round_threshold, &binarity);
    bool observable = detail::binary_observable(h, rounded);

    rep.x = x;
    rep.placement = rounded;
    rep.objective = 0;
    for (int j = 0; j < n; ++j)
        if (rounded.x[j]) rep.objective += w.w[j];
    rep.residuals.max_violation = maxf;
    rep.residuals.kkt = kkt;
    rep.residuals.binarity = binarity;

    if (converged) {
        if (binarity > cfg.tol_con)
            rep.status = SolveStatus::NonBinary;
        else if (!observable)
            rep.status = SolveStatus::RoundingFailed;
        else
            rep.status = SolveStatus::Optimal;
    } else if (stalled) {
        rep.status = SolveStatus::Stalled;
    } else {
        rep.status = SolveStatus::IterationLimit;
    }
    return rep;
}

// The raw SQP step at a point, from the strict-equality subproblem (no
// multiplier box).
inline std::vector<double> sqp_subproblem(const ContinuousPoint& x, const Weights& w,
                                          const Network& net, const SqpConfig& cfg = {}) {
    Neighborhoods h = Neighborhoods::build(net);
    std::vector<double> f = constraint_values(h, x);
    JacobianRows J = constraint_jacobian(h, x);
    auto sp = detail::build_and_solve_subproblem(h, w, x, J, f, cfg, {});
    return sp.qp.d;
}

inline double uniform01(std::mt19937_64& rng) {
    return (double)(rng() >> 11) * 0x1.0p-53;
}

inline ContinuousPoint make_start(const StartStrategy& s, int n, int index,
                                  std::mt19937_64& rng) {
    ContinuousPoint x(n, 1.0);
    if (index == 1 || s.kind == StartStrategy::Kind::AllOnes) return x;
    if (s.kind == StartStrategy::Kind::GridRandom) {
        double inv = 1.0 / s.grid_step;
        for (int j = 0; j < n; ++j)
            x[j] = std::round(uniform01(rng) * inv) * s.grid_step;
    } else {
        for (int j = 0; j < n; ++j) x[j] = uniform01(rng);
    }
    return x;
}

struct MultistartStats {
    int total_starts = 0;
    int failed_starts = 0;
    std::vector<SolveReport> failures;   // one representative per failed start
};

// Runs solve_nlp from `count` starts (start 1 is always the all-ones point),
// keeps distinct successful placements, and orders them by objective, then
// SORI (descending), then lexicographic placement.
inline std::vector<SolveReport> multistart(const Network& net, const Weights& w,
                                           const StartStrategy& strategy, const SqpConfig& cfg = {},
                                           MultistartStats* stats = nullptr) {
    const ConnectivityMatrix A = build_connectivity(net);
    std::mt19937_64 rng(strategy.seed);
    std::map<std::vector<int>, SolveReport> distinct;
    MultistartStats st;
    st.total_starts = std::max(1, strategy.count);

    for (int s = 1; s <= st.total_starts; ++s) {
        ContinuousPoint x0 = make_start(strategy, net.n, s, rng);
        SolveReport rep = solve_nlp(net, w, x0, cfg);
        rep.start_index = s;
        if (is_success(rep.status)) {
            auto key = rep.placement.buses();
            if (!distinct.count(key)) distinct.emplace(std::move(key), std::move(rep));
        } else {
            ++st.failed_starts;
            st.failures.push_back(std::move(rep));
        }
    }

    std::vector<SolveReport> out;
    out.reserve(distinct.size());
    for (auto& [k, v] : distinct) out.push_back(std::move(v));
    std::vector<long long> soris(out.size());
    for (size_t i = 0; i < out.size(); ++i) soris[i] = sori(A, out[i].placement);
    std::vector<size_t> idx(out.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
        if (out[a].objective != out[b].objective) return out[a].objective < out[b].objective;
        if (soris[a] != soris[b]) return soris[a] > soris[b];
        return out[a].placement.buses() < out[b].placement.buses();
    });
    std::vector<SolveReport> sorted;
    sorted.reserve(out.size());
    for (size_t i : idx) sorted.push_back(std::move(out[i]));
    if (stats) *stats = std::move(st);
    return sorted;
}

// Stable SORI-descending order; ties resolved lexicographically.
inline std::vector<SolveReport> rank_by_sori(std::vector<SolveReport> solutions,
                                             const ConnectivityMatrix& A) {
    std::vector<long long> soris(solutions.size());
    for (size_t i = 0; i < solutions.size(); ++i) soris[i] = sori(A, solutions[i].placement);
    std::vector<size_t> idx(solutions.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
        if (soris[a] != soris[b]) return soris[a] > soris[b];
        return solutions[a].placement.buses() < solutions[b].placement.buses();
    });
    std::vector<SolveReport> out;
    out.reserve(solutions.size());
    for (size_t i : idx) out.push_back(std::move(solutions[i]));
    return out;
}

}  // namespace pmuplace
