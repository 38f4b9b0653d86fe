// The two piecewise-affine input models and their exact evaluation.
//
// A max-min formula is a max over groups of mins of affine pieces; the
// nested max/sum trees describe convex PA functions (ragged arity is
// accepted, alternation is not enforced).  local_model() extracts the
// positively homogeneous model at a query point from the active indices:
// only pieces attaining the group minima inside the active groups survive,
// and constant terms drop out.

#pragma once

#include "pastat/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

namespace pastat {

struct AffinePiece {
    RVec slope;
    Rational offset;
};

struct MaxMinFormula {
    std::size_t dim = 0;
    std::vector<AffinePiece> affine;
    std::vector<std::vector<std::size_t>> groups;

    void check() const {
        if (groups.empty()) throw input_error("maxmin: no groups");
        for (const auto& p : affine)
            if (p.slope.size() != dim) throw input_error("maxmin: piece dimension mismatch");
        for (const auto& g : groups) {
            if (g.empty()) throw input_error("maxmin: empty group");
            for (auto j : g)
                if (j >= affine.size()) throw input_error("maxmin: piece index out of range");
        }
    }
};

struct McTree {
    enum class Kind { Leaf, Sum, Max };
    Kind kind = Kind::Leaf;
    RVec x;
    Rational a = 0;
    std::vector<McTree> children;

    static McTree leaf(RVec slope, Rational offset) {
        McTree t;
        t.kind = Kind::Leaf;
        t.x = std::move(slope);
        t.a = std::move(offset);
        return t;
    }
    static McTree sum(std::vector<McTree> cs) {
        McTree t;
        t.kind = Kind::Sum;
        t.children = std::move(cs);
        return t;
    }
    static McTree max(std::vector<McTree> cs) {
        McTree t;
        t.kind = Kind::Max;
        t.children = std::move(cs);
        return t;
    }

    std::size_t dim() const {
        const McTree* t = this;
        while (t->kind != Kind::Leaf) {
            if (t->children.empty()) throw input_error("mc tree: internal node without children");
            t = &t->children.front();
        }
        return t->x.size();
    }

    std::size_t depth() const {
        if (kind == Kind::Leaf) return 0;
        std::size_t d = 0;
        for (const auto& c : children) d = std::max(d, c.depth());
        return d + 1;
    }

    void check(std::size_t want_dim) const {
        if (kind == Kind::Leaf) {
            if (x.size() != want_dim) throw input_error("mc tree: leaf dimension mismatch");
            return;
        }
        if (children.empty()) throw input_error("mc tree: internal node without children");
        for (const auto& c : children) c.check(want_dim);
    }
};

struct DcFunction {
    McTree h;
    McTree g;

    std::size_t dim() const {
        const std::size_t d = h.dim();
        if (g.dim() != d) throw input_error("dc: component dimension mismatch");
        return d;
    }
    void check() const {
        const std::size_t d = h.dim();
        h.check(d);
        g.check(d);
    }
};

// ---------------------------------------------------------------------------
// Evaluation.
// ---------------------------------------------------------------------------

inline Rational eval_maxmin(const MaxMinFormula& f, const RVec& w) {
    if (w.size() != f.dim) throw input_error("eval_maxmin: dimension mismatch");
    bool first_group = true;
    Rational best = 0;
    for (const auto& g : f.groups) {
        bool first = true;
        Rational m = 0;
        for (auto j : g) {
            Rational v = dot(f.affine[j].slope, w) + f.affine[j].offset;
            if (first || v < m) {
                m = std::move(v);
                first = false;
            }
        }
        if (first_group || m > best) {
            best = std::move(m);
            first_group = false;
        }
    }
    return best;
}

inline Rational eval_mc(const McTree& t, const RVec& w) {
    switch (t.kind) {
        case McTree::Kind::Leaf:
            if (t.x.size() != w.size()) throw input_error("eval_mc: dimension mismatch");
            return dot(t.x, w) + t.a;
        case McTree::Kind::Sum: {
            Rational s = 0;
            for (const auto& c : t.children) s += eval_mc(c, w);
            return s;
        }
        case McTree::Kind::Max: {
            bool first = true;
            Rational best = 0;
            for (const auto& c : t.children) {
                Rational v = eval_mc(c, w);
                if (first || v > best) {
                    best = std::move(v);
                    first = false;
                }
            }
            return best;
        }
    }
    throw std::logic_error("eval_mc: bad node kind");
}

inline Rational eval_dc(const DcFunction& f, const RVec& w) {
    return eval_mc(f.h, w) - eval_mc(f.g, w);
}

// ---------------------------------------------------------------------------
// Exact local model at a query point.
// ---------------------------------------------------------------------------

struct LocalModel {
    std::size_t dim = 0;
    std::vector<RVec> slopes;                      // deduplicated slope set A
    std::vector<std::vector<std::size_t>> groups;  // argmin slope ids per active group
};

inline Rational eval_local(const LocalModel& m, const RVec& u) {
    if (u.size() != m.dim) throw input_error("eval_local: dimension mismatch");
    bool first_group = true;
    Rational best = 0;
    for (const auto& g : m.groups) {
        bool first = true;
        Rational mn = 0;
        for (auto j : g) {
            Rational v = dot(m.slopes[j], u);
            if (first || v < mn) {
                mn = std::move(v);
                first = false;
            }
        }
        if (first_group || mn > best) {
            best = std::move(mn);
            first_group = false;
        }
    }
    return best;
}

/// Active-index local model: keep the groups attaining the outer max at w
/// and within each the pieces attaining the inner min; offsets vanish.
inline LocalModel local_model(const MaxMinFormula& f, const RVec& w) {
    f.check();
    if (w.size() != f.dim) throw input_error("local_model: dimension mismatch");

    std::vector<Rational> group_val(f.groups.size());
    for (std::size_t i = 0; i < f.groups.size(); ++i) {
        bool first = true;
        for (auto j : f.groups[i]) {
            Rational v = dot(f.affine[j].slope, w) + f.affine[j].offset;
            if (first || v < group_val[i]) {
                group_val[i] = std::move(v);
                first = false;
            }
        }
    }
    Rational fval = group_val[0];
    for (const auto& v : group_val) fval = std::max(fval, v);

    LocalModel m;
    m.dim = f.dim;
    std::map<RVec, std::size_t, bool (*)(const RVec&, const RVec&)> slope_id(lex_less);
    auto intern = [&](const RVec& s) {
        auto it = slope_id.find(s);
        if (it != slope_id.end()) return it->second;
        const std::size_t id = m.slopes.size();
        m.slopes.push_back(s);
        slope_id.emplace(s, id);
        return id;
    };
    std::vector<std::vector<std::size_t>> seen_groups;
    for (std::size_t i = 0; i < f.groups.size(); ++i) {
        if (group_val[i] != fval) continue;
        std::vector<std::size_t> ids;
        for (auto j : f.groups[i]) {
            Rational v = dot(f.affine[j].slope, w) + f.affine[j].offset;
            if (v == group_val[i]) ids.push_back(intern(f.affine[j].slope));
        }
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        if (std::find(seen_groups.begin(), seen_groups.end(), ids) == seen_groups.end())
            seen_groups.push_back(ids);
    }
    m.groups = std::move(seen_groups);
    return m;
}

}  // namespace pastat
