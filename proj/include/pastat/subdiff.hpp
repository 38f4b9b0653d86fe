// The stationarity engine.
//
// Max-min route: refine the local model's selection fan into full-dimensional
// linearity cones; membership of a slope vector in the regular subdifferential
// becomes one inequality per cone generator, and the essentially active
// slopes are the per-cone gradients.  DC route: build the convex
// subdifferential polytopes of both components bottom-up (leaf, Minkowski
// sum, hull of active children), then decide the regular test by translate
// containment and the Clarke test through simultaneously exposed vertex
// pairs.  Containment distances are computed by lazy cut generation: a
// candidate translate is verified vertex by vertex, and each failed
// membership yields a separating facet row that is added to the projection.

#pragma once

#include "pastat/cone.hpp"
#include "pastat/formula.hpp"
#include "pastat/lp.hpp"
#include "pastat/min_norm.hpp"
#include "pastat/polytope.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace pastat {

enum class Notion { Frechet, Clarke };
enum class Polarity { Yes, No };

struct Verdict {
    Notion notion = Notion::Frechet;
    bool dist_finite = true;      // false encodes dist = +inf (empty set)
    Rational dist_sq = 0;         // meaningful when finite
    Rational epsilon = 0;
    bool yes = false;             // dist <= epsilon, exactly
    std::optional<RVec> witness;  // minimizing translate / convex combination point

    // checkable certificate data
    std::string cert_kind;
    HRows cert_rows;              // constraint rows behind the distance
    RVec cert_farkas;             // infeasibility multipliers over cert_rows
    std::vector<RVec> cert_support;  // essentially active slopes (Clarke)
    RVec cert_coeffs;                // convex coefficients over cert_support
    std::size_t cone_count = 0;
    std::size_t vcount_x = 0, vcount_y = 0;
};

// ---------------------------------------------------------------------------
// Subdifferential polytopes of max/sum trees.
// ---------------------------------------------------------------------------

/// Cross-call memo for subdifferential polytopes keyed by subtree structure
/// and query point.  One cache per thread; entries are immutable.
struct SubdiffCache {
    std::map<std::string, std::pair<Rational, Polytope>> map;
};

namespace detail {

inline void tree_key(const McTree& t, std::string& out) {
    switch (t.kind) {
        case McTree::Kind::Leaf:
            out += "L";
            for (const auto& v : t.x) {
                out += v.str();
                out += ',';
            }
            out += ';';
            out += t.a.str();
            return;
        case McTree::Kind::Sum:
            out += "S(";
            break;
        case McTree::Kind::Max:
            out += "M(";
            break;
    }
    for (const auto& c : t.children) {
        tree_key(c, out);
        out += '|';
    }
    out += ')';
}

inline std::pair<Rational, Polytope> subdiff_rec(const McTree& t, const RVec& w,
                                                 SubdiffCache* cache, std::size_t* cones) {
    std::string key;
    if (cache) {
        tree_key(t, key);
        key += '@';
        for (const auto& v : w) {
            key += v.str();
            key += ',';
        }
        auto it = cache->map.find(key);
        if (it != cache->map.end()) return it->second;
    }
    std::pair<Rational, Polytope> res;
    switch (t.kind) {
        case McTree::Kind::Leaf: {
            res.first = dot(t.x, w) + t.a;
            res.second.dim = t.x.size();
            res.second.vertices = {t.x};
            break;
        }
        case McTree::Kind::Sum: {
            Rational val = 0;
            std::vector<Polytope> parts;
            parts.reserve(t.children.size());
            for (const auto& c : t.children) {
                auto sub = subdiff_rec(c, w, cache, cones);
                val += sub.first;
                parts.push_back(std::move(sub.second));
            }
            res.first = std::move(val);
            if (parts.size() == 1) {
                res.second = std::move(parts[0]);
            } else {
                std::size_t cc = 0;
                res.second = minkowski_sum(parts, &cc);
                if (cones) *cones += cc;
            }
            break;
        }
        case McTree::Kind::Max: {
            std::vector<Rational> vals;
            std::vector<Polytope> polys;
            vals.reserve(t.children.size());
            for (const auto& c : t.children) {
                auto sub = subdiff_rec(c, w, cache, cones);
                vals.push_back(std::move(sub.first));
                polys.push_back(std::move(sub.second));
            }
            Rational best = vals[0];
            for (const auto& v : vals) best = std::max(best, v);
            std::vector<Polytope> active;
            for (std::size_t i = 0; i < vals.size(); ++i)
                if (vals[i] == best) active.push_back(std::move(polys[i]));
            res.first = std::move(best);
            res.second = active.size() == 1 ? std::move(active[0]) : hull_of_union(active);
            break;
        }
    }
    if (cache) cache->map.emplace(std::move(key), res);
    return res;
}

}  // namespace detail

/// Reduced vertex list of the convex subdifferential of a max/sum tree at w.
inline Polytope subdiff_mc(const McTree& t, const RVec& w, SubdiffCache* cache = nullptr) {
    if (t.dim() != w.size()) throw input_error("subdiff_mc: dimension mismatch");
    return detail::subdiff_rec(t, w, cache, nullptr).second;
}

// ---------------------------------------------------------------------------
// Linearity fan of a homogeneous max-min local model.
// ---------------------------------------------------------------------------

struct FanCell {
    Cone cone;
    std::size_t slope = 0;  // index into LocalModel::slopes
};

/// Stream the full-dimensional cones covering direction space on which the
/// local model is linear, discovered by on-demand refinement of the
/// selection structure; visit(cone, slope_id) per cell.
template <class Visitor>
void for_each_local_cell(const LocalModel& m, Visitor&& visit) {
    const std::size_t ns = m.slopes.size();

    // probing runs on an integer copy of the slope set: one common positive
    // scaling preserves every comparison and keeps the inner loop in mpz
    std::vector<ZVec> zslopes(ns);
    {
        Int l = 1;
        for (const auto& s : m.slopes)
            for (const auto& v : s) l = lcm(l, denominator(v));
        for (std::size_t s = 0; s < ns; ++s) {
            zslopes[s].resize(m.dim);
            for (std::size_t j = 0; j < m.dim; ++j)
                zslopes[s][j] = numerator(m.slopes[s][j]) * (l / denominator(m.slopes[s][j]));
        }
    }
    std::vector<Int> vals(ns);
    // difference vectors repeat across cells; build each one once
    std::map<std::pair<std::size_t, std::size_t>, ZVec> diff_cache;
    auto diff_row = [&](std::size_t hi, std::size_t lo) -> const ZVec& {
        auto it = diff_cache.find({hi, lo});
        if (it == diff_cache.end())
            it = diff_cache.emplace(std::make_pair(hi, lo),
                                    primitive(sub(zslopes[hi], zslopes[lo]))).first;
        return it->second;
    };
    std::vector<std::pair<std::size_t, std::size_t>> pair_buf;
    auto eval = [&](const ZVec& u) -> FanStep {
        for (std::size_t s = 0; s < ns; ++s) vals[s] = dot(zslopes[s], u);
        std::vector<std::size_t> group_sel(m.groups.size());
        for (std::size_t i = 0; i < m.groups.size(); ++i) {
            std::size_t sel = m.groups[i][0];
            for (auto j : m.groups[i]) {
                if (vals[j] < vals[sel]) {
                    sel = j;
                } else if (j != sel && vals[j] == vals[sel]) {
                    return FanSplit{hyperplane_canonical(sub(zslopes[j], zslopes[sel]))};
                }
            }
            group_sel[i] = sel;
        }
        std::size_t winner = group_sel[0];
        for (auto sel : group_sel)
            if (vals[sel] > vals[winner]) winner = sel;
        for (auto sel : group_sel)  // ties at the top must carry one slope
            if (sel != winner && vals[sel] == vals[winner])
                return FanSplit{hyperplane_canonical(sub(zslopes[sel], zslopes[winner]))};
        FanRegion region;
        region.key = winner;
        pair_buf.clear();
        for (std::size_t i = 0; i < m.groups.size(); ++i) {
            for (auto j : m.groups[i])
                if (vals[j] > vals[group_sel[i]]) pair_buf.push_back({j, group_sel[i]});
            if (vals[group_sel[i]] < vals[winner]) pair_buf.push_back({winner, group_sel[i]});
        }
        std::sort(pair_buf.begin(), pair_buf.end());
        pair_buf.erase(std::unique(pair_buf.begin(), pair_buf.end()), pair_buf.end());
        region.rows.reserve(pair_buf.size());
        for (const auto& [hi, lo] : pair_buf) region.rows.push_back(diff_row(hi, lo));
        return region;
    };
    refine_fan(m.dim, eval, [&](Cone&& k, std::size_t key) { visit(std::move(k), key); });
}

/// Materialized fan (small models and tests; large consumers stream).
inline std::vector<FanCell> local_fan(const LocalModel& m) {
    std::vector<FanCell> cells;
    for_each_local_cell(m, [&](Cone&& k, std::size_t key) { cells.push_back({std::move(k), key}); });
    return cells;
}

/// Deduplicated essentially active slopes (the per-cone gradients).
inline std::vector<RVec> active_slopes(const LocalModel& m, std::vector<FanCell>* cells_out = nullptr,
                                       std::size_t* cone_count = nullptr) {
    std::vector<bool> seen(m.slopes.size(), false);
    std::vector<RVec> out;
    std::size_t count = 0;
    if (cells_out) {
        std::vector<FanCell> cells = local_fan(m);
        count = cells.size();
        for (const auto& c : cells)
            if (!seen[c.slope]) {
                seen[c.slope] = true;
                out.push_back(m.slopes[c.slope]);
            }
        *cells_out = std::move(cells);
    } else {
        for_each_local_cell(m, [&](Cone&&, std::size_t key) {
            ++count;
            if (!seen[key]) {
                seen[key] = true;
                out.push_back(m.slopes[key]);
            }
        });
    }
    std::sort(out.begin(), out.end(), [](const RVec& a, const RVec& b) { return lex_less(a, b); });
    if (cone_count) *cone_count = count;
    return out;
}

// ---------------------------------------------------------------------------
// Distances.
// ---------------------------------------------------------------------------

struct FrechetResult {
    bool finite = false;
    Rational dist_sq = 0;
    RVec witness;
    HRows rows;                   // constraint rows actually used
    RVec farkas;                  // over rows, when infinite
    std::optional<RVec> descent;  // direction with negative model value, if any
    std::size_t cone_count = 0;
    std::size_t vx = 0, vy = 0;
};

struct ClarkeResult {
    Rational dist_sq = 0;
    RVec witness;
    std::vector<RVec> support;  // essentially active slopes
    RVec coeffs;                // convex combination over support
    std::size_t cone_count = 0;
    std::size_t vx = 0, vy = 0;
};

namespace detail {

/// Projection of the origin onto {rows} with lazy activation: project onto a
/// growing subset until no row of the full system is violated.
inline MinNormH project_rows_lazy(const HRows& rows, std::size_t dim) {
    if (rows.size() <= 32) return min_norm_hrep(rows, {}, dim);
    std::vector<bool> used(rows.size(), false);
    HRows subset;
    std::vector<std::size_t> order(rows.size());
    for (;;) {
        MinNormH r = min_norm_hrep(subset, {}, dim);
        if (!r.feasible) {
            // map the farkas certificate back onto the full row list
            MinNormH full = std::move(r);
            RVec lifted(rows.size(), Rational(0));
            std::size_t k = 0;
            for (std::size_t i = 0; i < rows.size(); ++i)
                if (used[i]) lifted[i] = full.farkas_ineq[k++];
            full.farkas_ineq = std::move(lifted);
            return full;
        }
        int added = 0;
        for (std::size_t i = 0; i < rows.size() && added < 8; ++i) {
            if (used[i]) continue;
            if (dot(rows[i].first, r.point) > rows[i].second) {
                used[i] = true;
                subset.push_back(rows[i]);
                ++added;
            }
        }
        if (added == 0) return r;
    }
}

}  // namespace detail

/// Distance of the origin to the regular subdifferential, max-min input.
inline FrechetResult frechet_dist_maxmin(const MaxMinFormula& f, const RVec& w) {
    const LocalModel m = local_model(f, w);

    FrechetResult res;
    std::map<ZVec, Rational, bool (*)(const ZVec&, const ZVec&)> row_rhs(lex_less);
    for_each_local_cell(m, [&](Cone&& cone, std::size_t key) {
        ++res.cone_count;
        const RVec& a = m.slopes[key];
        for (const auto& gen : cone.generators()) {
            Rational rhs = dot(gen, a);
            if (!res.descent && rhs < 0) res.descent = to_rvec(gen);
            auto it = row_rhs.find(gen);
            if (it == row_rhs.end())
                row_rhs.emplace(gen, std::move(rhs));
            else if (rhs < it->second)
                it->second = std::move(rhs);
        }
    });
    HRows rows;
    rows.reserve(row_rhs.size());
    for (const auto& [gen, rhs] : row_rhs) rows.push_back({to_rvec(gen), rhs});

    MinNormH pr = detail::project_rows_lazy(rows, m.dim);
    res.rows = std::move(rows);
    if (!pr.feasible) {
        res.finite = false;
        res.farkas = std::move(pr.farkas_ineq);
        return res;
    }
    res.finite = true;
    res.dist_sq = std::move(pr.dist_sq);
    res.witness = std::move(pr.point);
    return res;
}

/// Distance of the origin to the regular subdifferential of h - g via
/// translate containment, with facet rows generated lazily from failed
/// vertex memberships.
inline FrechetResult frechet_dist_dc(const DcFunction& f, const RVec& w,
                                     SubdiffCache* cache = nullptr) {
    f.check();
    if (f.dim() != w.size()) throw input_error("frechet_dist_dc: dimension mismatch");
    Polytope x = subdiff_mc(f.h, w, cache);
    Polytope y = subdiff_mc(f.g, w, cache);

    FrechetResult res;
    res.vx = x.vertices.size();
    res.vy = y.vertices.size();

    // verify a candidate translate; a failing vertex yields a separating cut
    auto violated = [&](const RVec& s,
                        bool at_origin) -> std::optional<std::pair<RVec, Rational>> {
        for (const auto& v : y.vertices) {
            HullMembership mem = in_hull(add(s, v), x.vertices);
            if (mem.inside) continue;
            const RVec& n = mem.separator;
            Rational rhs = support(x, n) - support(y, n);
            // at s = 0 the failure shows sigma_X(n) < sigma_Y(n): the local
            // model sigma_X - sigma_Y is negative along n
            if (at_origin && !res.descent) res.descent = n;
            return std::make_pair(n, std::move(rhs));
        }
        return std::nullopt;
    };

    HRows rows;
    RVec s = zero_vec(x.dim);
    for (std::size_t round = 0;; ++round) {
        if (round > 500 + 4 * y.vertices.size()) {
            // cut generation stalled; fall back to the full erosion system
            HPolyhedron e = erosion(x, y);
            MinNormH pr = min_norm_hrep(e.ineqs, e.eqs, e.dim);
            res.rows = e.ineqs;
            for (const auto& q : e.eqs) res.rows.push_back(q);
            if (!pr.feasible) {
                res.finite = false;
                res.farkas = pr.farkas_ineq;
                for (const auto& v : pr.farkas_eq) res.farkas.push_back(v);
            } else {
                res.finite = true;
                res.dist_sq = std::move(pr.dist_sq);
                res.witness = std::move(pr.point);
            }
            return res;
        }
        auto cut = violated(s, round == 0);
        if (!cut) {
            res.finite = true;
            res.dist_sq = norm_sq(s);
            res.witness = std::move(s);
            res.rows = std::move(rows);
            return res;
        }
        rows.push_back(std::move(*cut));
        MinNormH pr = min_norm_hrep(rows, {}, x.dim);
        if (!pr.feasible) {
            res.finite = false;
            res.farkas = std::move(pr.farkas_ineq);
            res.rows = std::move(rows);
            return res;
        }
        s = std::move(pr.point);
    }
}

/// Distance of the origin to the Clarke subdifferential, max-min input.
inline ClarkeResult clarke_dist_maxmin(const MaxMinFormula& f, const RVec& w) {
    const LocalModel m = local_model(f, w);
    ClarkeResult res;
    res.support = active_slopes(m, nullptr, &res.cone_count);
    if (res.support.empty()) throw std::logic_error("clarke: empty essentially active set");
    MinNormV mn = min_norm_vrep(res.support);
    res.dist_sq = std::move(mn.dist_sq);
    res.witness = std::move(mn.point);
    res.coeffs = std::move(mn.coeffs);
    return res;
}

/// Simultaneously exposed vertex pairs of (X, Y): the cells of the common
/// refinement of both normal fans, enumerated by on-demand splitting with
/// normal cones described through vertex adjacency.
inline std::vector<std::pair<std::size_t, std::size_t>> exposed_pairs(Polytope& x, Polytope& y,
                                                                      std::size_t* cone_count = nullptr) {
    const auto adj_x = vertex_adjacency(x);
    const auto adj_y = vertex_adjacency(y);
    const std::size_t ny = y.vertices.size();

    // probe on integer copies: a common positive scaling per polytope keeps
    // every argmax comparison and difference direction intact
    auto scaled = [](const Polytope& p) {
        Int l = 1;
        for (const auto& v : p.vertices)
            for (const auto& c : v) l = lcm(l, denominator(c));
        std::vector<ZVec> out(p.vertices.size());
        for (std::size_t i = 0; i < p.vertices.size(); ++i) {
            out[i].resize(p.dim);
            for (std::size_t j = 0; j < p.dim; ++j)
                out[i][j] = numerator(p.vertices[i][j]) * (l / denominator(p.vertices[i][j]));
        }
        return out;
    };
    const std::vector<ZVec> zx = scaled(x), zy = scaled(y);

    auto argmax = [](const std::vector<ZVec>& verts, const ZVec& u,
                     std::size_t& best) -> std::optional<FanSplit> {
        best = 0;
        Int bv = dot(verts[0], u);
        for (std::size_t i = 1; i < verts.size(); ++i) {
            Int v = dot(verts[i], u);
            if (v > bv) {
                bv = std::move(v);
                best = i;
            } else if (v == bv) {
                return FanSplit{hyperplane_canonical(sub(verts[best], verts[i]))};
            }
        }
        return std::nullopt;
    };

    // normal-cone rows per vertex, built once on first use
    std::vector<std::vector<ZVec>> rows_x(zx.size()), rows_y(zy.size());
    std::vector<bool> have_x(zx.size(), false), have_y(zy.size(), false);
    auto cone_rows = [](const std::vector<ZVec>& verts,
                        const std::vector<std::vector<std::size_t>>& adj, std::size_t v,
                        std::vector<ZVec>& out) {
        out.reserve(adj[v].size());
        for (auto i : adj[v]) out.push_back(primitive(sub(verts[v], verts[i])));
    };

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<bool> seen;
    auto eval = [&](const ZVec& u) -> FanStep {
        std::size_t bx = 0, by = 0;
        if (auto split = argmax(zx, u, bx)) return *split;
        if (auto split = argmax(zy, u, by)) return *split;
        if (!have_x[bx]) {
            cone_rows(zx, adj_x, bx, rows_x[bx]);
            have_x[bx] = true;
        }
        if (!have_y[by]) {
            cone_rows(zy, adj_y, by, rows_y[by]);
            have_y[by] = true;
        }
        FanRegion region;
        region.key = bx * ny + by;
        region.rows.reserve(rows_x[bx].size() + rows_y[by].size());
        region.rows.insert(region.rows.end(), rows_x[bx].begin(), rows_x[bx].end());
        region.rows.insert(region.rows.end(), rows_y[by].begin(), rows_y[by].end());
        return region;
    };
    seen.assign(zx.size() * ny, false);
    std::size_t cells = 0;
    refine_fan(x.dim, eval, [&](Cone&&, std::size_t key) {
        ++cells;
        if (!seen[key]) {
            seen[key] = true;
            pairs.emplace_back(key / ny, key % ny);
        }
    });
    if (cone_count) *cone_count = cells;
    std::sort(pairs.begin(), pairs.end());
    return pairs;
}

/// Distance of the origin to the Clarke subdifferential of h - g.
inline ClarkeResult clarke_dist_dc(const DcFunction& f, const RVec& w,
                                   SubdiffCache* cache = nullptr) {
    f.check();
    if (f.dim() != w.size()) throw input_error("clarke_dist_dc: dimension mismatch");
    Polytope x = subdiff_mc(f.h, w, cache);
    Polytope y = subdiff_mc(f.g, w, cache);
    ClarkeResult res;
    res.vx = x.vertices.size();
    res.vy = y.vertices.size();
    const auto pairs = exposed_pairs(x, y, &res.cone_count);
    std::vector<RVec> diffs;
    diffs.reserve(pairs.size());
    for (const auto& [i, j] : pairs) diffs.push_back(sub(x.vertices[i], y.vertices[j]));
    res.support = dedupe_points(std::move(diffs));
    if (res.support.empty()) throw std::logic_error("clarke: empty essentially active set");
    MinNormV mn = min_norm_vrep(res.support);
    res.dist_sq = std::move(mn.dist_sq);
    res.witness = std::move(mn.point);
    res.coeffs = std::move(mn.coeffs);
    return res;
}

// ---------------------------------------------------------------------------
// Verdicts.
// ---------------------------------------------------------------------------

namespace detail {

inline Verdict frechet_verdict(FrechetResult&& r, const Rational& eps) {
    Verdict v;
    v.notion = Notion::Frechet;
    v.epsilon = eps;
    v.dist_finite = r.finite;
    v.cone_count = r.cone_count;
    v.vcount_x = r.vx;
    v.vcount_y = r.vy;
    v.cert_rows = std::move(r.rows);
    if (!r.finite) {
        v.yes = false;
        v.cert_kind = "farkas";
        v.cert_farkas = std::move(r.farkas);
        return v;
    }
    v.dist_sq = std::move(r.dist_sq);
    v.yes = v.dist_sq <= eps * eps;
    v.witness = std::move(r.witness);
    v.cert_kind = "translate";
    return v;
}

inline Verdict clarke_verdict(ClarkeResult&& r, const Rational& eps) {
    Verdict v;
    v.notion = Notion::Clarke;
    v.epsilon = eps;
    v.dist_finite = true;
    v.dist_sq = std::move(r.dist_sq);
    v.yes = v.dist_sq <= eps * eps;
    v.witness = std::move(r.witness);
    v.cert_kind = "convex-combination";
    v.cert_support = std::move(r.support);
    v.cert_coeffs = std::move(r.coeffs);
    v.cone_count = r.cone_count;
    v.vcount_x = r.vx;
    v.vcount_y = r.vy;
    return v;
}

}  // namespace detail

inline Verdict stationarity_test(const MaxMinFormula& f, const RVec& w, const Rational& eps,
                                 Notion notion) {
    if (eps < 0) throw input_error("stationarity test: epsilon must be nonnegative");
    if (notion == Notion::Frechet)
        return detail::frechet_verdict(frechet_dist_maxmin(f, w), eps);
    return detail::clarke_verdict(clarke_dist_maxmin(f, w), eps);
}

inline Verdict stationarity_test(const DcFunction& f, const RVec& w, const Rational& eps,
                                 Notion notion, SubdiffCache* cache = nullptr) {
    if (eps < 0) throw input_error("stationarity test: epsilon must be nonnegative");
    if (notion == Notion::Frechet)
        return detail::frechet_verdict(frechet_dist_dc(f, w, cache), eps);
    return detail::clarke_verdict(clarke_dist_dc(f, w, cache), eps);
}

/// Does the verdict's polarity hold?
inline bool polarity_holds(const Verdict& v, Polarity p) {
    return p == Polarity::Yes ? v.yes : !v.yes;
}

/// Local minimality is the exact regular test at the query point.
inline bool is_local_min(const MaxMinFormula& f, const RVec& w, RVec* descent = nullptr) {
    FrechetResult r = frechet_dist_maxmin(f, w);
    const bool min = r.finite && r.dist_sq == 0;
    if (!min && descent && r.descent) *descent = *r.descent;
    return min;
}

inline bool is_local_min(const DcFunction& f, const RVec& w, RVec* descent = nullptr,
                         SubdiffCache* cache = nullptr) {
    FrechetResult r = frechet_dist_dc(f, w, cache);
    const bool min = r.finite && r.dist_sq == 0;
    if (!min && descent && r.descent) *descent = *r.descent;
    return min;
}

// ---------------------------------------------------------------------------
// Flat single-max DC baseline.
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<RVec> flat_active_slopes(const McTree& t, const RVec& w) {
    std::vector<const McTree*> leaves;
    if (t.kind == McTree::Kind::Leaf) {
        leaves.push_back(&t);
    } else if (t.kind == McTree::Kind::Max) {
        for (const auto& c : t.children) {
            if (c.kind != McTree::Kind::Leaf)
                throw input_error("single_max_dc_test: component is not a flat max of affines");
            leaves.push_back(&c);
        }
    } else {
        throw input_error("single_max_dc_test: component is not a flat max of affines");
    }
    Rational best;
    bool first = true;
    for (const auto* l : leaves) {
        Rational v = dot(l->x, w) + l->a;
        if (first || v > best) {
            best = std::move(v);
            first = false;
        }
    }
    std::vector<RVec> act;
    for (const auto* l : leaves)
        if (dot(l->x, w) + l->a == best) act.push_back(l->x);
    return dedupe_points(std::move(act));
}

}  // namespace detail

/// Polynomial baseline for flat DC input: active slope sets by direct value
/// comparison, translate containment for the regular notion, pairwise
/// exposure tests for Clarke.  No tree recursion, no fan construction.
inline Verdict single_max_dc_test(const McTree& h, const McTree& g, const RVec& w,
                                  const Rational& eps, Notion notion) {
    if (eps < 0) throw input_error("single_max_dc_test: epsilon must be nonnegative");
    Polytope a;
    a.dim = w.size();
    a.vertices = detail::flat_active_slopes(h, w);
    Polytope b;
    b.dim = w.size();
    b.vertices = detail::flat_active_slopes(g, w);

    if (notion == Notion::Frechet) {
        HPolyhedron e = erosion(a, b);
        MinNormH pr = min_norm_hrep(e.ineqs, e.eqs, e.dim);
        FrechetResult r;
        r.vx = a.vertices.size();
        r.vy = b.vertices.size();
        r.rows = e.ineqs;
        for (const auto& q : e.eqs) r.rows.push_back(q);
        if (!pr.feasible) {
            r.finite = false;
            r.farkas = pr.farkas_ineq;
            for (const auto& v : pr.farkas_eq) r.farkas.push_back(v);
        } else {
            r.finite = true;
            r.dist_sq = std::move(pr.dist_sq);
            r.witness = std::move(pr.point);
        }
        return detail::frechet_verdict(std::move(r), eps);
    }

    ClarkeResult r;
    r.vx = a.vertices.size();
    r.vy = b.vertices.size();
    std::vector<RVec> diffs;
    for (const auto& va : a.vertices)
        for (const auto& vb : b.vertices)
            if (simultaneously_exposed(va, a, vb, b)) diffs.push_back(sub(va, vb));
    r.support = dedupe_points(std::move(diffs));
    if (r.support.empty()) throw std::logic_error("single_max_dc_test: empty exposed set");
    MinNormV mn = min_norm_vrep(r.support);
    r.dist_sq = std::move(mn.dist_sq);
    r.witness = std::move(mn.point);
    r.coeffs = std::move(mn.coeffs);
    return detail::clarke_verdict(std::move(r), eps);
}

}  // namespace pastat
