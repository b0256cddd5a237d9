#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <vector>

namespace pmuplace {

// Covering-relaxation LP: minimize c'x subject to sum_{j in rows[i]} x_j >= 1
// for every row, lb <= x <= ub with 0 <= lb <= ub <= 1. Variables pinned by
// branch-and-bound fixings are expressed as lb == ub.
struct LpProblem {
    int n = 0;
    std::vector<double> c;
    std::vector<std::vector<int>> rows;   // 0-based column indices, each row's binary support
    std::vector<double> lb, ub;

    static LpProblem covering(int n_, const std::vector<std::vector<int>>& rows_,
                              const std::vector<double>& c_) {
        LpProblem p;
        p.n = n_;
        p.c = c_;
        p.rows = rows_;
        p.lb.assign(n_, 0.0);
        p.ub.assign(n_, 1.0);
        return p;
    }
    void fix(int j, double v) { lb[j] = ub[j] = v; }
};

enum class LpStatus { Optimal, Infeasible, NumericalFailure };

struct LpSolution {
    LpStatus status = LpStatus::NumericalFailure;
    double objective = 0.0;
    std::vector<double> x;
    int iterations = 0;
};

inline void dedup_rows(LpProblem& p) {
    std::set<std::vector<int>> seen;
    std::vector<std::vector<int>> keep;
    for (auto& r : p.rows) {
        std::vector<int> s = r;
        std::sort(s.begin(), s.end());
        if (seen.insert(s).second) keep.push_back(std::move(s));
    }
    p.rows = std::move(keep);
}

template <class Real = double>
class SimplexSolver {
public:
    explicit SimplexSolver(const LpProblem& p) : p_(p), m_((int)p.rows.size()), n_(p.n) {
        ncols_ = n_ + m_ + m_;   // structural, surplus, artificial slots
        T_.assign((size_t)m_ * ncols_, Real(0));
        lo_.assign(ncols_, Real(0));
        hi_.assign(ncols_, Real(0));
        stat_.assign(ncols_, AtLower);
        basis_.assign(m_, -1);
        rowof_.assign(ncols_, -1);
        beta_.assign(m_, Real(0));
        z_.assign(ncols_, Real(0));
        for (int j = 0; j < n_; ++j) {
            lo_[j] = p.lb[j];
            hi_[j] = p.ub[j];
        }
        for (int i = 0; i < m_; ++i) {
            lo_[n_ + i] = 0;
            hi_[n_ + i] = inf();
        }
    }

    LpSolution solve() {
        LpSolution out;
        crash();
        if (need_phase1_) {
            std::vector<Real> c1(ncols_, Real(0));
            for (int i = 0; i < m_; ++i)
                if (art_used_[i]) c1[n_ + m_ + i] = 1;
            if (!run(c1, out.iterations)) return out;   // NumericalFailure
            Real infeas = objective_of(c1);
            if (infeas > Real(1e-7)) {
                out.status = LpStatus::Infeasible;
                out.objective = 0;
                return out;
            }
            expel_artificials();
        }
        std::vector<Real> c2(ncols_, Real(0));
        for (int j = 0; j < n_; ++j) c2[j] = p_.c[j];
        for (int i = 0; i < m_; ++i) {
            // artificials are dead after phase 1
            int a = n_ + m_ + i;
            lo_[a] = hi_[a] = 0;
        }
        if (!run(c2, out.iterations)) return out;
        out.status = LpStatus::Optimal;
        out.x.assign(n_, 0.0);
        for (int j = 0; j < n_; ++j) out.x[j] = (double)value_of(j);
        out.objective = 0;
        for (int j = 0; j < n_; ++j) out.objective += p_.c[j] * out.x[j];
        return out;
    }

private:
    enum Stat { AtLower, AtUpper, Basic };

    static Real inf() { return std::numeric_limits<Real>::infinity(); }
    Real& T(int i, int j) { return T_[(size_t)i * ncols_ + j]; }

    Real value_of(int j) const {
        if (stat_[j] == Basic) return beta_[rowof_[j]];
        return stat_[j] == AtLower ? lo_[j] : hi_[j];
    }

    Real objective_of(const std::vector<Real>& c) const {
        Real v = 0;
        for (int j = 0; j < ncols_; ++j)
            if (c[j] != Real(0)) v += c[j] * value_of(j);
        return v;
    }

    // Start with structurals nonbasic at their upper bounds and a surplus
    // basis; rows left infeasible by that point get an artificial instead.
    void crash() {
        art_used_.assign(m_, false);
        need_phase1_ = false;
        for (int j = 0; j < n_; ++j) stat_[j] = AtUpper;
        std::vector<Real> act(m_, Real(0));
        for (int i = 0; i < m_; ++i)
            for (int j : p_.rows[i]) act[i] += hi_[j];
        for (int i = 0; i < m_; ++i) {
            Real resid = act[i] - Real(1);   // value the surplus would need
            Real sign;
            if (resid >= Real(0)) {
                int s = n_ + i;
                basis_[i] = s;
                stat_[s] = Basic;
                rowof_[s] = i;
                beta_[i] = resid;
                sign = Real(-1);   // surplus basis column is -e_i
            } else {
                int a = n_ + m_ + i;
                lo_[a] = 0;
                hi_[a] = inf();
                basis_[i] = a;
                stat_[a] = Basic;
                rowof_[a] = i;
                beta_[i] = -resid;
                art_used_[i] = true;
                need_phase1_ = true;
                sign = Real(1);    // artificial basis column is +e_i
            }
            // T row = B^{-1} * M row = sign * (structural, -e_i surplus, +e_i artificial)
            for (int j : p_.rows[i]) T(i, j) = sign;
            T(i, n_ + i) = -sign;
            T(i, n_ + m_ + i) = sign;
        }
    }

    void price_from_scratch(const std::vector<Real>& c) {
        for (int j = 0; j < ncols_; ++j) z_[j] = c[j];
        for (int i = 0; i < m_; ++i) {
            Real cb = c[basis_[i]];
            if (cb == Real(0)) continue;
            const Real* row = &T_[(size_t)i * ncols_];
            for (int j = 0; j < ncols_; ++j) z_[j] -= cb * row[j];
        }
        for (int i = 0; i < m_; ++i) z_[basis_[i]] = 0;
    }

    bool run(const std::vector<Real>& c, int& iters) {
        price_from_scratch(c);
        Real cmax = Real(1);
        for (int j = 0; j < ncols_; ++j) cmax = std::max(cmax, std::abs(c[j]));
        const Real tol_d = Real(1e-9) * cmax;
        const Real tol_t = Real(1e-11);
        long long degen = 0;
        const long long bland_after = 5LL * std::max(1, n_);
        bool bland = false;
        const int cap = 200 * (m_ + n_) + 2000;

        for (int it = 0; it < cap; ++it) {
            int j_in = -1, dir = 0;
            Real best = tol_d;
            for (int j = 0; j < ncols_; ++j) {
                if (stat_[j] == Basic || hi_[j] - lo_[j] <= Real(0)) continue;
                Real d = z_[j];
                Real viol = 0;
                int dr = 0;
                if (stat_[j] == AtLower && d < -tol_d) {
                    viol = -d;
                    dr = +1;
                } else if (stat_[j] == AtUpper && d > tol_d) {
                    viol = d;
                    dr = -1;
                }
                if (dr == 0) continue;
                if (bland) {
                    j_in = j;
                    dir = dr;
                    break;
                }
                if (viol > best) {
                    best = viol;
                    j_in = j;
                    dir = dr;
                }
            }
            if (j_in < 0) {
                iters += it;
                return true;   // optimal for this phase
            }

            // ratio test: x_{j_in} moves by dir*t, basics move by -dir*t*Tcol
            Real t_limit = hi_[j_in] - lo_[j_in];   // bound flip
            int r_leave = -1;
            Real leave_piv = 0;
            int leave_to = 0;
            for (int i = 0; i < m_; ++i) {
                Real a = T(i, j_in);
                if (std::abs(a) <= Real(1e-11)) continue;
                Real coef = -Real(dir) * a;
                Real room, tl;
                int to;
                if (coef > Real(0)) {
                    room = hi_[basis_[i]] - beta_[i];
                    if (room >= inf()) continue;
                    tl = room / coef;
                    to = AtUpper;
                } else {
                    room = beta_[i] - lo_[basis_[i]];
                    tl = room / (-coef);
                    to = AtLower;
                }
                if (tl < Real(0)) tl = 0;
                bool better;
                if (r_leave < 0 && tl < t_limit - Real(1e-12))
                    better = true;
                else if (r_leave >= 0 && tl < t_limit - Real(1e-9))
                    better = true;
                else if (r_leave >= 0 && tl <= t_limit + Real(1e-9)) {
                    better = bland ? basis_[i] < basis_[r_leave]
                                   : std::abs(a) > std::abs(leave_piv);
                    t_limit = std::min(t_limit, tl);
                } else
                    better = false;
                if (better) {
                    t_limit = std::min(t_limit, std::max(tl, Real(0)));
                    r_leave = i;
                    leave_piv = a;
                    leave_to = to;
                }
            }
            if (t_limit >= inf()) return false;   // unbounded: numerical breakdown here
            Real t = std::max(t_limit, Real(0));
            if (t <= tol_t) {
                if (++degen > bland_after) bland = true;
            }

            for (int i = 0; i < m_; ++i) {
                Real a = T(i, j_in);
                if (a != Real(0)) beta_[i] -= Real(dir) * t * a;
            }
            Real v_in = (stat_[j_in] == AtLower ? lo_[j_in] : hi_[j_in]) + Real(dir) * t;

            if (r_leave < 0) {
                stat_[j_in] = (stat_[j_in] == AtLower) ? AtUpper : AtLower;   // bound flip
                continue;
            }

            int leaving = basis_[r_leave];
            stat_[leaving] = (Stat)leave_to;
            rowof_[leaving] = -1;
            if (leaving >= n_ + m_) lo_[leaving] = hi_[leaving] = 0;   // artificials never return
            basis_[r_leave] = j_in;
            stat_[j_in] = Basic;
            rowof_[j_in] = r_leave;
            beta_[r_leave] = v_in;

            Real piv = T(r_leave, j_in);
            if (std::abs(piv) < Real(1e-12)) return false;
            Real* prow = &T_[(size_t)r_leave * ncols_];
            Real inv = Real(1) / piv;
            for (int j = 0; j < ncols_; ++j) prow[j] *= inv;
            prow[j_in] = Real(1);
            for (int i = 0; i < m_; ++i) {
                if (i == r_leave) continue;
                Real f = T(i, j_in);
                if (f == Real(0)) continue;
                Real* row = &T_[(size_t)i * ncols_];
                for (int j = 0; j < ncols_; ++j) row[j] -= f * prow[j];
                row[j_in] = Real(0);
            }
            Real zf = z_[j_in];
            if (zf != Real(0)) {
                for (int j = 0; j < ncols_; ++j) z_[j] -= zf * prow[j];
                z_[j_in] = Real(0);
            }
            if ((it + 1) % 512 == 0) price_from_scratch(c);   // drift control
        }
        return false;
    }

    // After a feasible phase 1, kick remaining artificials off the basis via
    // degenerate pivots; rows that reduce to nothing are redundant and keep a
    // zero artificial parked on them harmlessly.
    void expel_artificials() {
        for (int i = 0; i < m_; ++i) {
            int b = basis_[i];
            if (b < n_ + m_) continue;
            int j_in = -1;
            for (int j = 0; j < n_ + m_; ++j)
                if (stat_[j] != Basic && hi_[j] > lo_[j] && std::abs(T(i, j)) > Real(1e-9)) {
                    j_in = j;
                    break;
                }
            if (j_in < 0) continue;
            int leaving = basis_[i];
            stat_[leaving] = AtLower;
            rowof_[leaving] = -1;
            basis_[i] = j_in;
            Real v = value_of(j_in);
            stat_[j_in] = Basic;
            rowof_[j_in] = i;
            beta_[i] = v;
            Real piv = T(i, j_in);
            Real* prow = &T_[(size_t)i * ncols_];
            Real inv = Real(1) / piv;
            for (int j = 0; j < ncols_; ++j) prow[j] *= inv;
            prow[j_in] = Real(1);
            for (int k = 0; k < m_; ++k) {
                if (k == i) continue;
                Real f = T(k, j_in);
                if (f == Real(0)) continue;
                Real* row = &T_[(size_t)k * ncols_];
                for (int j = 0; j < ncols_; ++j) row[j] -= f * prow[j];
                row[j_in] = Real(0);
            }
        }
    }

    const LpProblem& p_;
    int m_, n_, ncols_;
    std::vector<Real> T_, lo_, hi_, beta_, z_;
    std::vector<int> basis_, rowof_;
    std::vector<Stat> stat_;
    std::vector<bool> art_used_;
    bool need_phase1_ = false;
};

inline LpSolution solve_lp(const LpProblem& p) {
    SimplexSolver<double> s(p);
    return s.solve();
}

}  // namespace pmuplace
