// Exact Euclidean projection of the origin.
//
//  * min_norm_vrep: Wolfe's minimum-norm-point algorithm over the convex
//    hull of finitely many rational points.
//  * min_norm_hrep: projection onto {s : Cs <= c, Es = e}.  Small systems use
//    an exhaustive KKT subset search; larger ones a primal active-set
//    iteration with least-index tie-breaking (the subset search remains as a
//    fallback should the iteration ever stall on a degenerate vertex).

#pragma once

#include "pastat/lp.hpp"
#include "pastat/rational.hpp"

#include <algorithm>
#include <cassert>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace pastat {

struct MinNormV {
    RVec point;
    Rational dist_sq = 0;
    RVec coeffs;  // convex coefficients over the input points
};

namespace detail {

// Minimum-norm point of the affine hull of {pts[i] : i in idx}: solves the
// bordered Gram system; requires affine independence.
inline std::pair<RVec, RVec> affine_min_norm(const std::vector<RVec>& pts,
                                             const std::vector<std::size_t>& idx) {
    const std::size_t k = idx.size();
    RMat sys(k + 1, RVec(k + 1, Rational(0)));
    RVec rhs(k + 1, Rational(0));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) sys[i][j] = dot(pts[idx[i]], pts[idx[j]]);
        sys[i][k] = 1;
        sys[k][i] = 1;
    }
    rhs[k] = 1;
    auto sol = solve_square(std::move(sys), std::move(rhs));
    if (!sol) throw std::logic_error("min_norm_vrep: corral lost affine independence");
    RVec alpha(sol->begin(), sol->begin() + static_cast<std::ptrdiff_t>(k));
    RVec y = zero_vec(pts[idx[0]].size());
    for (std::size_t i = 0; i < k; ++i) y = add(y, scale(alpha[i], pts[idx[i]]));
    return {std::move(y), std::move(alpha)};
}

}  // namespace detail

inline MinNormV min_norm_vrep(const std::vector<RVec>& pts) {
    if (pts.empty())
        throw input_error("min_norm_vrep: empty point set (dist(0, empty) is +inf by convention)");
    const std::size_t d = pts[0].size();
    for (const auto& p : pts)
        if (p.size() != d) throw input_error("min_norm_vrep: dimension mismatch");

    std::size_t start = 0;
    Rational best = norm_sq(pts[0]);
    for (std::size_t j = 1; j < pts.size(); ++j) {
        Rational n = norm_sq(pts[j]);
        if (n < best) {
            best = n;
            start = j;
        }
    }
    std::vector<std::size_t> corral = {start};
    RVec lambda = {Rational(1)};
    RVec x = pts[start];

    const std::size_t max_major = 1000 + 40 * pts.size();
    for (std::size_t iter = 0;; ++iter) {
        if (iter > max_major) throw std::logic_error("min_norm_vrep: iteration guard tripped");
        const Rational xx = norm_sq(x);
        std::size_t enter = pts.size();
        Rational low = xx;
        for (std::size_t j = 0; j < pts.size(); ++j) {
            Rational v = dot(x, pts[j]);
            if (v < low) {
                low = v;
                enter = j;
            }
        }
        if (enter == pts.size()) break;  // <x, p - x> >= 0 for every input point
        corral.push_back(enter);
        lambda.push_back(0);

        for (;;) {  // minor loop: restore a corral with positive coefficients
            auto [y, alpha] = detail::affine_min_norm(pts, corral);
            bool interior = true;
            for (const auto& a : alpha)
                if (a <= 0) {
                    interior = false;
                    break;
                }
            if (interior) {
                x = std::move(y);
                lambda = std::move(alpha);
                break;
            }
            // Step from lambda toward alpha until a coefficient hits zero.
            Rational theta = 1;
            for (std::size_t i = 0; i < corral.size(); ++i) {
                if (alpha[i] < 0) {
                    Rational t = lambda[i] / (lambda[i] - alpha[i]);
                    if (t < theta) theta = t;
                }
            }
            std::vector<std::size_t> next_idx;
            RVec next_lambda;
            for (std::size_t i = 0; i < corral.size(); ++i) {
                Rational v = lambda[i] + theta * (alpha[i] - lambda[i]);
                if (v > 0) {
                    next_idx.push_back(corral[i]);
                    next_lambda.push_back(v);
                }
            }
            corral = std::move(next_idx);
            lambda = std::move(next_lambda);
            x = zero_vec(d);
            for (std::size_t i = 0; i < corral.size(); ++i)
                x = add(x, scale(lambda[i], pts[corral[i]]));
        }
    }

    MinNormV res;
    res.coeffs = RVec(pts.size(), Rational(0));
    for (std::size_t i = 0; i < corral.size(); ++i) res.coeffs[corral[i]] += lambda[i];
    res.point = std::move(x);
    res.dist_sq = norm_sq(res.point);
#ifndef NDEBUG
    for (const auto& p : pts) assert(dot(res.point, sub(p, res.point)) >= 0);
#endif
    return res;
}

// ---------------------------------------------------------------------------
// H-representation projection.
// ---------------------------------------------------------------------------

struct MinNormH {
    bool feasible = false;
    RVec point;                    // projection of the origin (feasible only)
    Rational dist_sq = 0;          // squared distance (feasible only)
    RVec farkas_ineq, farkas_eq;   // infeasibility certificate otherwise
};

using HRows = std::vector<std::pair<RVec, Rational>>;

namespace detail {

// Projection of 0 onto the affine set {rows tight}; returns point and the
// row multipliers nu with point = sum nu_i * a_i, or nullopt if the rows are
// linearly dependent.
inline std::optional<std::pair<RVec, RVec>> project_affine(
    const std::vector<const std::pair<RVec, Rational>*>& rows, std::size_t d) {
    const std::size_t k = rows.size();
    if (k == 0) return std::make_pair(zero_vec(d), RVec());
    RMat sys(k, RVec(k));
    RVec rhs(k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) sys[i][j] = dot(rows[i]->first, rows[j]->first);
        rhs[i] = rows[i]->second;
    }
    auto nu = solve_square(std::move(sys), std::move(rhs));
    if (!nu) return std::nullopt;
    RVec s = zero_vec(d);
    for (std::size_t i = 0; i < k; ++i) s = add(s, scale((*nu)[i], rows[i]->first));
    return std::make_pair(std::move(s), std::move(*nu));
}

inline bool h_feasible_point(const HRows& ineqs, const HRows& eqs, const RVec& s) {
    for (const auto& [a, b] : ineqs)
        if (dot(a, s) > b) return false;
    for (const auto& [a, b] : eqs)
        if (dot(a, s) != b) return false;
    return true;
}

// Exhaustive KKT search over tight subsets of at most d inequality rows (all
// equalities always tight).  Correct for any feasible system by Caratheodory
// applied to the dual cone; only usable at small row counts.
inline std::optional<std::pair<RVec, Rational>> project_exhaustive(const HRows& ineqs,
                                                                   const HRows& eqs,
                                                                   std::size_t dim,
                                                                   std::size_t subset_cap) {
    std::vector<const std::pair<RVec, Rational>*> base;
    for (const auto& r : eqs) base.push_back(&r);

    std::optional<std::pair<RVec, Rational>> result;
    std::size_t visited = 0;
    std::vector<std::size_t> pick;
    auto consider = [&](const std::vector<std::size_t>& w) -> bool {
        auto rows = base;
        for (auto i : w) rows.push_back(&ineqs[i]);
        auto pr = project_affine(rows, dim);
        if (!pr) return false;
        const auto& [s, nu] = *pr;
        for (std::size_t i = 0; i < w.size(); ++i)
            if (nu[eqs.size() + i] > 0) return false;  // wrong multiplier sign
        if (!h_feasible_point(ineqs, eqs, s)) return false;
        result = std::make_pair(s, norm_sq(s));
        return true;
    };

    // Increasing subset size so the first KKT-valid point is the projection.
    std::vector<std::size_t> idx(ineqs.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    const std::size_t max_k = std::min(dim, ineqs.size());
    std::vector<std::size_t> comb;
    for (std::size_t k = 0; k <= max_k && !result; ++k) {
        comb.assign(k, 0);
        for (std::size_t i = 0; i < k; ++i) comb[i] = i;
        for (;;) {
            if (++visited > subset_cap) return std::nullopt;
            if (consider(comb)) break;
            // next combination
            std::size_t i = k;
            while (i > 0) {
                --i;
                if (comb[i] + (k - i) < ineqs.size()) {
                    ++comb[i];
                    for (std::size_t j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
                    i = k + 1;
                    break;
                }
            }
            if (i != k + 1) break;
            if (k == 0) break;
        }
    }
    return result;
}

}  // namespace detail

inline MinNormH min_norm_hrep(const HRows& ineqs, const HRows& eqs, std::size_t dim) {
    for (const auto& [a, b] : ineqs)
        if (a.size() != dim) throw input_error("min_norm_hrep: row dimension mismatch");
    for (const auto& [a, b] : eqs)
        if (a.size() != dim) throw input_error("min_norm_hrep: row dimension mismatch");

    MinNormH res;
    const RVec origin = zero_vec(dim);
    if (detail::h_feasible_point(ineqs, eqs, origin)) {
        res.feasible = true;
        res.point = origin;
        res.dist_sq = 0;
        return res;
    }

    LpProblem feas;
    feas.dim = dim;
    feas.objective = zero_vec(dim);
    feas.ineqs = ineqs;
    feas.eqs = eqs;
    const auto lp = lp_solve(feas);
    if (lp.status == LpStatus::Infeasible) {
        res.feasible = false;
        res.farkas_ineq = *lp.farkas_ineq;
        res.farkas_eq = *lp.farkas_eq;
        return res;
    }
    res.feasible = true;

    // The system is consistent, so dependent equality rows are implied by an
    // independent subset; the KKT solves need independence.
    HRows eqs_indep;
    {
        RMat m;
        for (const auto& r : eqs) {
            m.push_back(r.first);
            if (rank(m) < m.size())
                m.pop_back();
            else
                eqs_indep.push_back(r);
        }
    }

    if (ineqs.size() + eqs_indep.size() <= 18) {
        auto pr = detail::project_exhaustive(ineqs, eqs_indep, dim, 4000000);
        if (!pr) throw std::logic_error("min_norm_hrep: subset search found no KKT point");
        res.point = pr->first;
        res.dist_sq = pr->second;
        return res;
    }

    // Primal active set from the LP's feasible point.
    RVec s = *lp.point;
    std::vector<const std::pair<RVec, Rational>*> work;
    std::vector<std::size_t> work_ineq;  // indices into ineqs; eqs occupy a prefix
    for (const auto& r : eqs_indep) work.push_back(&r);
    const std::size_t eq_count = work.size();

    std::size_t stall = 0;
    const std::size_t stall_cap = 3 * (ineqs.size() + dim) + 20;
    for (;;) {
        if (stall > stall_cap) {
            auto pr = detail::project_exhaustive(ineqs, eqs_indep, dim, 4000000);
            if (!pr) throw std::logic_error("min_norm_hrep: degenerate stall and subset cap hit");
            res.point = pr->first;
            res.dist_sq = pr->second;
            return res;
        }
        auto pr = detail::project_affine(work, dim);
        if (!pr) throw std::logic_error("min_norm_hrep: dependent working set");
        RVec& p = pr->first;
        RVec& nu = pr->second;
        if (p == s) {
            std::size_t drop = work.size();
            for (std::size_t i = eq_count; i < work.size(); ++i) {
                if (nu[i] > 0) {
                    drop = i;
                    break;
                }
            }
            if (drop == work.size()) {
                res.point = s;
                res.dist_sq = norm_sq(s);
                return res;
            }
            work.erase(work.begin() + static_cast<std::ptrdiff_t>(drop));
            work_ineq.erase(work_ineq.begin() + static_cast<std::ptrdiff_t>(drop - eq_count));
            ++stall;
            continue;
        }
        const RVec dir = sub(p, s);
        Rational alpha = 1;
        std::size_t blocker = ineqs.size();
        for (std::size_t i = 0; i < ineqs.size(); ++i) {
            if (std::find(work_ineq.begin(), work_ineq.end(), i) != work_ineq.end()) continue;
            const Rational adv = dot(ineqs[i].first, dir);
            if (adv <= 0) continue;
            const Rational room = ineqs[i].second - dot(ineqs[i].first, s);
            const Rational step = room / adv;
            if (step < alpha) {
                alpha = step;
                blocker = i;
            }
        }
        if (alpha > 0) {
            s = add(s, scale(alpha, dir));
            stall = 0;
        } else {
            ++stall;
        }
        if (blocker < ineqs.size()) {
            work.push_back(&ineqs[blocker]);
            work_ineq.push_back(blocker);
        }
    }
}

}  // namespace pastat
