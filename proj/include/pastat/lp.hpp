// Exact linear programming: dense two-phase primal simplex over rationals
// with Bland's anti-cycling rule.
//
// The standard-form core (min c'x, Ax = b, x >= 0) is exposed because the
// polytope layer builds membership and separation problems directly in that
// shape; lp_solve() wraps it for free-variable problems with inequality and
// equality rows.

#pragma once

#include "pastat/rational.hpp"

#include <cassert>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace pastat {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpProblem {
    std::size_t dim = 0;
    RVec objective;                                // maximize <objective, x>
    std::vector<std::pair<RVec, Rational>> ineqs;  // <a, x> <= b
    std::vector<std::pair<RVec, Rational>> eqs;    // <a, x> == b

    void check() const {
        if (objective.size() != dim) throw input_error("lp: objective dimension mismatch");
        for (const auto& [a, b] : ineqs)
            if (a.size() != dim) throw input_error("lp: inequality row dimension mismatch");
        for (const auto& [a, b] : eqs)
            if (a.size() != dim) throw input_error("lp: equality row dimension mismatch");
    }
};

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    std::optional<RVec> point;
    std::optional<Rational> value;
    // Infeasibility certificate: y >= 0 on inequality rows, z free on equality
    // rows, with y'A + z'E = 0 and y'b + z'e < 0.
    std::optional<RVec> farkas_ineq;
    std::optional<RVec> farkas_eq;
};

namespace detail {

struct StdResult {
    LpStatus status = LpStatus::Infeasible;
    RVec x;              // primal solution (Optimal only)
    Rational value = 0;  // c'x (Optimal only)
    RVec infeas_dual;    // phase-one duals y with y'A_j <= 0 for all j, y'b > 0
};

// min c'x  s.t.  A x = b, x >= 0.  A is m x n, rows need not be independent.
inline StdResult simplex_std(RMat a, RVec b, const RVec& c) {
    const std::size_t m = a.size();
    const std::size_t n = m ? a[0].size() : c.size();
    std::vector<int> row_sign(m, 1);
    for (std::size_t i = 0; i < m; ++i) {
        if (b[i] < 0) {
            row_sign[i] = -1;
            b[i] = -b[i];
            for (auto& v : a[i]) v = -v;
        }
    }

    // Tableau columns: n structural, m artificial, then rhs.
    const std::size_t cols = n + m + 1;
    RMat t(m + 1, RVec(cols, Rational(0)));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) t[i][j] = a[i][j];
        t[i][n + i] = 1;
        t[i][cols - 1] = b[i];
    }
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

    RVec& obj = t[m];
    auto set_cost_row = [&](const RVec& cost) {
        for (std::size_t j = 0; j < cols; ++j) obj[j] = j < cost.size() ? cost[j] : Rational(0);
        obj[cols - 1] = 0;
        for (std::size_t i = 0; i < m; ++i) {
            const Rational cb = basis[i] < cost.size() ? cost[basis[i]] : Rational(0);
            if (cb == 0) continue;
            for (std::size_t j = 0; j < cols; ++j) obj[j] -= cb * t[i][j];
        }
    };

    auto pivot = [&](std::size_t r, std::size_t col) {
        const Rational inv = Rational(1) / t[r][col];
        for (std::size_t j = 0; j < cols; ++j) t[r][j] *= inv;
        for (std::size_t i = 0; i < t.size(); ++i) {  // t shrinks in drive-out
            if (i == r || t[i][col] == 0) continue;
            const Rational f = t[i][col];
            for (std::size_t j = 0; j < cols; ++j) t[i][j] -= f * t[r][j];
        }
        basis[r] = col;
    };

    // Bland: entering = lowest-index negative reduced cost; leaving = minimum
    // ratio, ties broken by lowest basis index.
    auto iterate = [&](std::size_t limit) -> bool {  // false on unbounded
        for (;;) {
            std::size_t enter = limit;
            for (std::size_t j = 0; j < limit; ++j) {
                if (obj[j] < 0) {
                    enter = j;
                    break;
                }
            }
            if (enter == limit) return true;
            std::size_t leave = m;
            Rational best;
            for (std::size_t i = 0; i < m; ++i) {
                if (t[i][enter] <= 0) continue;
                Rational ratio = t[i][cols - 1] / t[i][enter];
                if (leave == m || ratio < best ||
                    (ratio == best && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave == m) return false;
            pivot(leave, enter);
        }
    };

    // Phase one: minimize the artificial sum.
    {
        RVec phase1(n + m, Rational(0));
        for (std::size_t i = 0; i < m; ++i) phase1[n + i] = 1;
        set_cost_row(phase1);
    }
    iterate(n + m);
    StdResult res;
    if (obj[cols - 1] != 0) {  // artificial sum positive: infeasible
        res.status = LpStatus::Infeasible;
        res.infeas_dual.assign(m, Rational(0));
        for (std::size_t i = 0; i < m; ++i) {
            // reduced cost of artificial i is 1 - y_i
            Rational y = Rational(1) - obj[n + i];
            res.infeas_dual[i] = row_sign[i] < 0 ? -y : y;
        }
        return res;
    }

    // Drive remaining artificials out of the basis; drop redundant rows.
    for (std::size_t i = m; i-- > 0;) {
        if (basis[i] < n) continue;
        std::size_t col = n;
        for (std::size_t j = 0; j < n; ++j) {
            if (t[i][j] != 0) {
                col = j;
                break;
            }
        }
        if (col < n) {
            pivot(i, col);
        } else {
            t.erase(t.begin() + static_cast<std::ptrdiff_t>(i));
            basis.erase(basis.begin() + static_cast<std::ptrdiff_t>(i));
        }
    }
    const std::size_t m2 = basis.size();

    // Phase two on the structural columns only.
    {
        RMat t2(m2 + 1, RVec(n + 1));
        for (std::size_t i = 0; i < m2; ++i) {
            for (std::size_t j = 0; j < n; ++j) t2[i][j] = t[i][j];
            t2[i][n] = t[i][cols - 1];
        }
        t = std::move(t2);
    }
    const std::size_t cols2 = n + 1;
    RMat& tt = t;
    RVec& obj2 = tt[m2];
    {
        for (std::size_t j = 0; j < cols2; ++j) obj2[j] = j < n ? c[j] : Rational(0);
        for (std::size_t i = 0; i < m2; ++i) {
            const Rational cb = c[basis[i]];
            if (cb == 0) continue;
            for (std::size_t j = 0; j < cols2; ++j) obj2[j] -= cb * tt[i][j];
        }
    }
    auto pivot2 = [&](std::size_t r, std::size_t col) {
        const Rational inv = Rational(1) / tt[r][col];
        for (std::size_t j = 0; j < cols2; ++j) tt[r][j] *= inv;
        for (std::size_t i = 0; i <= m2; ++i) {
            if (i == r || tt[i][col] == 0) continue;
            const Rational f = tt[i][col];
            for (std::size_t j = 0; j < cols2; ++j) tt[i][j] -= f * tt[r][j];
        }
        basis[r] = col;
    };
    for (;;) {
        std::size_t enter = n;
        for (std::size_t j = 0; j < n; ++j) {
            if (obj2[j] < 0) {
                enter = j;
                break;
            }
        }
        if (enter == n) break;
        std::size_t leave = m2;
        Rational best;
        for (std::size_t i = 0; i < m2; ++i) {
            if (tt[i][enter] <= 0) continue;
            Rational ratio = tt[i][cols2 - 1] / tt[i][enter];
            if (leave == m2 || ratio < best ||
                (ratio == best && basis[i] < basis[leave])) {
                leave = i;
                best = ratio;
            }
        }
        if (leave == m2) {
            res.status = LpStatus::Unbounded;
            return res;
        }
        pivot2(leave, enter);
    }

    res.status = LpStatus::Optimal;
    res.x.assign(n, Rational(0));
    for (std::size_t i = 0; i < m2; ++i) res.x[basis[i]] = tt[i][cols2 - 1];
    res.value = dot(c, res.x);
    return res;
}

}  // namespace detail

inline LpResult lp_solve(const LpProblem& p) {
    p.check();
    const std::size_t d = p.dim;
    const std::size_t mi = p.ineqs.size();
    const std::size_t me = p.eqs.size();
    const std::size_t n = 2 * d + mi;  // x = xp - xm, one slack per inequality

    RMat a(mi + me, RVec(n, Rational(0)));
    RVec b(mi + me);
    for (std::size_t i = 0; i < mi; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            a[i][j] = p.ineqs[i].first[j];
            a[i][d + j] = -p.ineqs[i].first[j];
        }
        a[i][2 * d + i] = 1;
        b[i] = p.ineqs[i].second;
    }
    for (std::size_t i = 0; i < me; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            a[mi + i][j] = p.eqs[i].first[j];
            a[mi + i][d + j] = -p.eqs[i].first[j];
        }
        b[mi + i] = p.eqs[i].second;
    }
    RVec c(n, Rational(0));
    for (std::size_t j = 0; j < d; ++j) {
        c[j] = -p.objective[j];  // core minimizes
        c[d + j] = p.objective[j];
    }

    const auto core = detail::simplex_std(std::move(a), std::move(b), c);
    LpResult res;
    res.status = core.status;
    if (core.status == LpStatus::Optimal) {
        RVec x(d);
        for (std::size_t j = 0; j < d; ++j) x[j] = core.x[j] - core.x[d + j];
        res.value = dot(p.objective, x);
        res.point = std::move(x);
    } else if (core.status == LpStatus::Infeasible) {
        // Core duals w satisfy w'[A;E] = 0, w_i <= 0 on slack columns,
        // w'(b;e) > 0; negate to the standard orientation.
        RVec y(mi), z(me);
        for (std::size_t i = 0; i < mi; ++i) y[i] = -core.infeas_dual[i];
        for (std::size_t i = 0; i < me; ++i) z[i] = -core.infeas_dual[mi + i];
        res.farkas_ineq = std::move(y);
        res.farkas_eq = std::move(z);
    }
    return res;
}

}  // namespace pastat
