// Exact polytope machinery in fixed dimension, V-representation first.
//
// Vertex reduction and membership run through the rational simplex; facet
// enumeration homogenizes a polar description and runs the double
// description cone (polytopes here may be lower-dimensional, so the affine
// hull is split off first and facets live inside it).  Minkowski sums follow
// the normal-fan refinement: enumerate the cells of the arrangement spanned
// by same-summand vertex differences and sum the per-summand maximizers.

#pragma once

#include "pastat/cone.hpp"
#include "pastat/lp.hpp"
#include "pastat/rational.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace pastat {

struct FacetSystem {
    // <normal, x> <= offset, tight on at least aff-dim many vertices
    std::vector<std::pair<RVec, Rational>> ineqs;
    // affine hull equalities <normal, x> == offset
    std::vector<std::pair<RVec, Rational>> eqs;
    // incidence[f] = vertices tight on facet f (indices into the vertex list)
    std::vector<std::vector<std::size_t>> incidence;
};

struct Polytope {
    std::size_t dim = 0;
    std::vector<RVec> vertices;                      // reduced, lex-sorted
    std::optional<FacetSystem> facets;               // cached by ensure_facets
    std::optional<std::pair<RVec, std::vector<RVec>>> affine_hull;  // base, directions

    bool operator==(const Polytope& o) const {
        return dim == o.dim && vertices == o.vertices;
    }
};

struct HPolyhedron {
    std::size_t dim = 0;
    std::vector<std::pair<RVec, Rational>> ineqs;
    std::vector<std::pair<RVec, Rational>> eqs;
};

// ---------------------------------------------------------------------------
// Membership.
// ---------------------------------------------------------------------------

struct HullMembership {
    bool inside = false;
    RVec coeffs;      // convex combination over pts when inside
    RVec separator;   // direction n with <n,p> > max_i <n,pts[i]> otherwise
    Rational sep_gap = 0;  // <n,p> - max_i <n,pts[i]> > 0
};

/// Decide p in conv(pts) exactly; returns a combination certificate or a
/// strictly separating direction.
inline HullMembership in_hull(const RVec& p, const std::vector<RVec>& pts) {
    HullMembership res;
    const std::size_t d = p.size();
    if (pts.empty()) {
        res.inside = false;
        res.separator = zero_vec(d);
        return res;
    }
    const std::size_t n = pts.size();
    RMat a(d + 1, RVec(n));
    RVec b(d + 1);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < n; ++i) a[j][i] = pts[i][j];
        b[j] = p[j];
    }
    for (std::size_t i = 0; i < n; ++i) a[d][i] = 1;
    b[d] = 1;
    const auto core = detail::simplex_std(std::move(a), std::move(b), RVec(n, Rational(0)));
    if (core.status == LpStatus::Optimal) {
        res.inside = true;
        res.coeffs = core.x;
        return res;
    }
    // Farkas dual w: <w, col_i> <= 0 for all i and <w, (p,1)> > 0, i.e.
    // n = w[0..d) separates p from the hull with gap at least -w[d] - max.
    res.inside = false;
    res.separator.assign(core.infeas_dual.begin(),
                         core.infeas_dual.begin() + static_cast<std::ptrdiff_t>(d));
    Rational mx = dot(res.separator, pts[0]);
    for (std::size_t i = 1; i < n; ++i) mx = std::max(mx, dot(res.separator, pts[i]));
    res.sep_gap = dot(res.separator, p) - mx;
    assert(res.sep_gap > 0);
    return res;
}

// ---------------------------------------------------------------------------
// Vertex reduction.
// ---------------------------------------------------------------------------

inline std::vector<RVec> dedupe_points(std::vector<RVec> pts) {
    std::sort(pts.begin(), pts.end(), [](const RVec& a, const RVec& b) { return lex_less(a, b); });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

/// Extreme points of conv(points); every removal is certified by a convex
/// combination of the remaining candidates.
inline Polytope reduce_vertices(const std::vector<RVec>& points) {
    if (points.empty()) throw input_error("reduce_vertices: empty point list");
    const std::size_t d = points[0].size();
    for (const auto& p : points)
        if (p.size() != d) throw input_error("reduce_vertices: dimension mismatch");
    std::vector<RVec> pts = dedupe_points(points);

    std::vector<bool> alive(pts.size(), true);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        std::vector<RVec> others;
        for (std::size_t j = 0; j < pts.size(); ++j)
            if (j != i && alive[j]) others.push_back(pts[j]);
        if (others.empty()) break;
        if (in_hull(pts[i], others).inside) alive[i] = false;
    }
    Polytope p;
    p.dim = d;
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (alive[i]) p.vertices.push_back(pts[i]);
    return p;
}

// ---------------------------------------------------------------------------
// Affine hull and facet enumeration.
// ---------------------------------------------------------------------------

namespace detail {

struct Chart {
    RVec base;
    std::vector<RVec> basis;           // rref rows spanning the hull directions
    std::vector<std::size_t> pivots;   // chart coordinate = entry at pivot column
    std::vector<RVec> eq_normals;      // kernel basis of the direction space

    std::size_t m() const { return basis.size(); }

    RVec to_chart(const RVec& x) const {
        RVec t(m());
        for (std::size_t j = 0; j < m(); ++j) t[j] = x[pivots[j]] - base[pivots[j]];
        return t;
    }
};

inline Chart make_chart(const std::vector<RVec>& verts) {
    Chart c;
    c.base = verts[0];
    const std::size_t d = c.base.size();
    RMat dirs;
    for (std::size_t i = 1; i < verts.size(); ++i) dirs.push_back(sub(verts[i], c.base));
    if (dirs.empty()) dirs.push_back(zero_vec(d));
    RMat red = dirs;
    c.pivots = rref(red);
    c.basis = red;
    RMat dirmat = c.basis;
    c.eq_normals = kernel_basis(std::move(dirmat), d);
    return c;
}

// Facets of conv(q) for full-dimensional q in chart coordinates: vertices of
// the polar dual about the centroid, enumerated by double description.
// Returns (alpha, beta) pairs meaning <alpha, t> <= beta, plus per-facet
// tight sets over the input points.
struct ChartFacets {
    std::vector<std::pair<RVec, Rational>> rows;
    std::vector<std::vector<std::size_t>> tight;
};

inline ChartFacets polar_facets(const std::vector<RVec>& q) {
    const std::size_t m = q[0].size();
    RVec c = zero_vec(m);
    for (const auto& t : q) c = add(c, t);
    c = scale(Rational(1, static_cast<long>(q.size())), c);

    Cone cone = Cone::full(m + 1);
    for (const auto& t : q) {
        RVec row(m + 1);  // (-(q_i - c), 1) . (y, s) >= 0
        for (std::size_t j = 0; j < m; ++j) row[j] = c[j] - t[j];
        row[m] = 1;
        cone.add_row(primitive(row));
    }
    {
        ZVec last(m + 1, Int(0));
        last[m] = 1;
        cone.add_row(last);
    }
    if (!cone.lineality().empty())
        throw std::logic_error("polar_facets: unexpected lineality (hull not full-dimensional?)");

    ChartFacets out;
    for (std::size_t r = 0; r < cone.ray_count(); ++r) {
        const ZVec& ray = cone.ray(r);
        if (ray[m] == 0)
            throw std::logic_error("polar_facets: polar dual is unbounded");
        // polar vertex y = ray/s gives the valid inequality <y, t - c> <= 1
        RVec alpha(m);
        for (std::size_t j = 0; j < m; ++j) alpha[j] = Rational(ray[j], ray[m]);
        Rational beta = Rational(1) + dot(alpha, c);
        std::vector<std::size_t> tight;
        for (std::size_t i = 0; i < q.size(); ++i)
            if (dot(alpha, q[i]) == beta) tight.push_back(i);
        out.rows.push_back({std::move(alpha), std::move(beta)});
        out.tight.push_back(std::move(tight));
    }
    return out;
}

// Lift a chart inequality <alpha, t> <= beta to ambient coordinates.
inline std::pair<RVec, Rational> lift_row(const Chart& ch, const RVec& alpha,
                                          const Rational& beta) {
    const std::size_t m = ch.m();
    RMat gram(m, RVec(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) gram[i][j] = dot(ch.basis[i], ch.basis[j]);
    auto gamma = solve_square(std::move(gram), alpha);
    if (!gamma) throw std::logic_error("lift_row: singular Gram matrix");
    RVec n = zero_vec(ch.base.size());
    for (std::size_t i = 0; i < m; ++i) n = add(n, scale((*gamma)[i], ch.basis[i]));
    Rational off = beta + dot(n, ch.base);
    // joint primitive scaling keeps facet data small
    RVec joint = n;
    joint.push_back(off);
    ZVec zj = primitive(joint);
    RVec n2(n.size());
    for (std::size_t j = 0; j < n.size(); ++j) n2[j] = Rational(zj[j]);
    return {std::move(n2), Rational(zj[n.size()])};
}

}  // namespace detail

/// Facet system of a reduced polytope: inequalities tight on at least
/// aff-dim many vertices plus the affine-hull equalities.
inline FacetSystem facet_system(const std::vector<RVec>& verts,
                                std::pair<RVec, std::vector<RVec>>* hull_out = nullptr) {
    if (verts.empty()) throw input_error("facet_system: empty polytope");
    detail::Chart ch = detail::make_chart(verts);
    FacetSystem fs;
    for (const auto& n : ch.eq_normals) {
        RVec joint = n;
        joint.push_back(dot(n, ch.base));
        ZVec zj = primitive(joint);
        RVec n2(n.size());
        for (std::size_t j = 0; j < n.size(); ++j) n2[j] = Rational(zj[j]);
        fs.eqs.push_back({std::move(n2), Rational(zj[n.size()])});
    }
    if (ch.m() == 0) return fs;  // single point: equalities only

    std::vector<RVec> q(verts.size());
    for (std::size_t i = 0; i < verts.size(); ++i) q[i] = ch.to_chart(verts[i]);
    detail::ChartFacets cf = detail::polar_facets(q);
    for (std::size_t f = 0; f < cf.rows.size(); ++f) {
        auto [n, off] = detail::lift_row(ch, cf.rows[f].first, cf.rows[f].second);
        fs.ineqs.push_back({std::move(n), std::move(off)});
        fs.incidence.push_back(cf.tight[f]);
    }
    if (hull_out) *hull_out = {ch.base, ch.basis};
    return fs;
}

inline void ensure_facets(Polytope& p) {
    if (p.facets) return;
    std::pair<RVec, std::vector<RVec>> hull;
    p.facets = facet_system(p.vertices, &hull);
    p.affine_hull = std::move(hull);
}

/// Vertex adjacency from facet incidence: v and w share an edge iff no other
/// vertex lies on every facet containing both.
inline std::vector<std::vector<std::size_t>> vertex_adjacency(Polytope& p) {
    ensure_facets(p);
    const std::size_t n = p.vertices.size();
    std::vector<std::vector<std::size_t>> adj(n);
    if (n <= 1) return adj;
    if (n == 2) {  // segment: one edge, no facet bookkeeping needed
        adj[0].push_back(1);
        adj[1].push_back(0);
        return adj;
    }
    const std::size_t nf = p.facets->ineqs.size();
    const std::size_t words = (nf + 63) / 64;
    std::vector<std::uint64_t> on(n * words, 0);
    for (std::size_t f = 0; f < p.facets->incidence.size(); ++f)
        for (auto v : p.facets->incidence[f]) on[v * words + f / 64] |= std::uint64_t(1) << (f % 64);
    std::vector<std::uint64_t> common(words);
    for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t w = v + 1; w < n; ++w) {
            for (std::size_t t = 0; t < words; ++t) common[t] = on[v * words + t] & on[w * words + t];
            bool blocked = false;
            for (std::size_t z = 0; z < n && !blocked; ++z) {
                if (z == v || z == w) continue;
                bool covers = true;
                for (std::size_t t = 0; t < words; ++t) {
                    if (common[t] & ~on[z * words + t]) {
                        covers = false;
                        break;
                    }
                }
                blocked = covers;
            }
            if (!blocked) {
                adj[v].push_back(w);
                adj[w].push_back(v);
            }
        }
    }
    return adj;
}

// ---------------------------------------------------------------------------
// Hulls and Minkowski sums.
// ---------------------------------------------------------------------------

/// Batch extreme-point filter: one facet enumeration of the candidate hull,
/// then a tight-normal rank test per candidate.  Same output as
/// reduce_vertices, preferable once candidate lists get large.
inline Polytope reduce_batch(std::vector<RVec> pts, std::size_t dim) {
    pts = dedupe_points(std::move(pts));
    if (pts.size() <= 48) {
        Polytope p = reduce_vertices(pts);
        return p;
    }
    detail::Chart ch = detail::make_chart(pts);
    const std::size_t m = ch.m();
    Polytope out;
    out.dim = dim;
    if (m == 0) {
        out.vertices = {pts[0]};
        return out;
    }
    std::vector<RVec> q(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) q[i] = ch.to_chart(pts[i]);
    detail::ChartFacets cf = detail::polar_facets(q);
    std::vector<RMat> tight_normals(pts.size());
    for (std::size_t f = 0; f < cf.rows.size(); ++f)
        for (auto i : cf.tight[f]) tight_normals[i].push_back(cf.rows[f].first);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (tight_normals[i].size() < m) continue;
        if (rank(tight_normals[i]) == m) out.vertices.push_back(pts[i]);
    }
    return out;
}

inline Polytope hull_of_union(const std::vector<Polytope>& parts) {
    if (parts.empty()) throw input_error("hull_of_union: empty list");
    const std::size_t d = parts[0].dim;
    std::vector<RVec> pts;
    for (const auto& p : parts) {
        if (p.dim != d) throw input_error("hull_of_union: dimension mismatch");
        pts.insert(pts.end(), p.vertices.begin(), p.vertices.end());
    }
    Polytope out = reduce_batch(std::move(pts), d);
    out.dim = d;
    return out;
}

/// Vertex list of parts[0] + ... + parts[R-1] through the arrangement of
/// same-summand vertex-difference hyperplanes; on each full-dimensional cone
/// every summand has a unique maximizer and the sums are the candidates.
inline Polytope minkowski_sum(const std::vector<Polytope>& parts,
                              std::size_t* cone_count = nullptr) {
    if (parts.empty()) throw input_error("minkowski_sum: empty list");
    const std::size_t d = parts[0].dim;
    for (const auto& p : parts)
        if (p.dim != d) throw input_error("minkowski_sum: dimension mismatch");

    std::vector<RVec> normals;
    for (const auto& p : parts)
        for (std::size_t i = 0; i < p.vertices.size(); ++i)
            for (std::size_t j = i + 1; j < p.vertices.size(); ++j)
                normals.push_back(sub(p.vertices[i], p.vertices[j]));

    const auto cells = enumerate_cones(normals, d);
    if (cone_count) *cone_count = cells.size();
    std::vector<RVec> candidates;
    candidates.reserve(cells.size());
    for (const auto& cell : cells) {
        const RVec u = to_rvec(cell.rep_dir);
        RVec sum = zero_vec(d);
        for (const auto& p : parts) {
            std::size_t best = 0;
            Rational bv = dot(p.vertices[0], u);
            for (std::size_t i = 1; i < p.vertices.size(); ++i) {
                const Rational v = dot(p.vertices[i], u);
                if (v > bv) {
                    bv = v;
                    best = i;
                } else if (v == bv) {
                    throw std::logic_error("minkowski_sum: non-unique maximizer inside a cell");
                }
            }
            sum = add(sum, p.vertices[best]);
        }
        candidates.push_back(std::move(sum));
    }
    Polytope out = reduce_batch(std::move(candidates), d);
    out.dim = d;
    return out;
}

// ---------------------------------------------------------------------------
// Support, erosion, exposure.
// ---------------------------------------------------------------------------

inline Rational support(const Polytope& p, const RVec& n) {
    Rational best = dot(n, p.vertices[0]);
    for (std::size_t i = 1; i < p.vertices.size(); ++i)
        best = std::max(best, dot(n, p.vertices[i]));
    return best;
}

/// H-description of {s : s + Y is contained in X}; may be empty.  Facet rows
/// of X shift by the support of Y; affine-hull equalities of X must pin the
/// corresponding support of Y from both sides.
inline HPolyhedron erosion(Polytope& x, const Polytope& y) {
    if (x.dim != y.dim) throw input_error("erosion: dimension mismatch");
    ensure_facets(x);
    HPolyhedron e;
    e.dim = x.dim;
    for (const auto& [n, b] : x.facets->ineqs) e.ineqs.push_back({n, b - support(y, n)});
    for (const auto& [n, b] : x.facets->eqs) {
        e.eqs.push_back({n, b - support(y, n)});
        RVec neg = scale(Rational(-1), n);
        e.eqs.push_back({neg, -b - support(y, neg)});
    }
    return e;
}

/// Do the relative interiors of the normal cones of X at x and of Y at y
/// intersect?  Decided by the margin-1 linear system over both vertex
/// neighborhoods; a system with no rows is feasible by convention.
inline bool simultaneously_exposed(const RVec& x, const Polytope& X, const RVec& y,
                                   const Polytope& Y) {
    auto find = [](const RVec& v, const Polytope& p) {
        return std::find(p.vertices.begin(), p.vertices.end(), v) != p.vertices.end();
    };
    if (!find(x, X)) throw input_error("simultaneously_exposed: x is not a vertex of X");
    if (!find(y, Y)) throw input_error("simultaneously_exposed: y is not a vertex of Y");

    std::vector<RVec> rows;
    for (const auto& v : X.vertices)
        if (v != x) rows.push_back(sub(x, v));
    for (const auto& v : Y.vertices)
        if (v != y) rows.push_back(sub(y, v));
    if (rows.empty()) return true;

    const std::size_t d = X.dim;
    const std::size_t m = rows.size();
    RMat a(m, RVec(2 * d + m, Rational(0)));
    RVec b(m, Rational(1));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            a[i][j] = rows[i][j];
            a[i][d + j] = -rows[i][j];
        }
        a[i][2 * d + i] = -1;  // surplus
    }
    const auto core = detail::simplex_std(std::move(a), std::move(b),
                                          RVec(2 * d + m, Rational(0)));
    return core.status == LpStatus::Optimal;
}

/// Vertices of {A x <= b, E x = e} via homogenization; input must be bounded.
inline std::vector<RVec> vertices_from_hrep(const HPolyhedron& h) {
    const std::size_t d = h.dim;
    Cone cone = Cone::full(d + 1);
    for (const auto& [a, b] : h.ineqs) {
        RVec row(d + 1);
        for (std::size_t j = 0; j < d; ++j) row[j] = -a[j];
        row[d] = b;
        cone.add_row(primitive(row));
    }
    for (const auto& [a, b] : h.eqs) {
        RVec row(d + 1);
        for (std::size_t j = 0; j < d; ++j) row[j] = -a[j];
        row[d] = b;
        ZVec zr = primitive(row);
        cone.add_row(zr);
        for (auto& v : zr) v = -v;
        cone.add_row(zr);
    }
    {
        ZVec last(d + 1, Int(0));
        last[d] = 1;
        cone.add_row(last);
    }
    if (!cone.lineality().empty())
        throw input_error("vertices_from_hrep: input has a lineality space");
    std::vector<RVec> verts;
    for (std::size_t r = 0; r < cone.ray_count(); ++r) {
        const ZVec& ray = cone.ray(r);
        if (ray[d] == 0) throw input_error("vertices_from_hrep: input is unbounded");
        RVec v(d);
        for (std::size_t j = 0; j < d; ++j) v[j] = Rational(ray[j], ray[d]);
        verts.push_back(std::move(v));
    }
    std::sort(verts.begin(), verts.end(), [](const RVec& a, const RVec& b) { return lex_less(a, b); });
    return verts;
}

}  // namespace pastat
