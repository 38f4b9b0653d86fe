// Polyhedral cones by the double description method, exact over integers.
//
// A cone is {u : <row_i, u> >= 0} and is maintained as a lineality basis plus
// the extreme rays of its pointed part, each ray carrying the bitset of rows
// it is tight on (the Motzkin adjacency test).  Inserted rows are not stored;
// only their count matters for the bitsets, which keeps cells of large
// arrangements cheap to copy.  All vectors are primitive integer vectors.
//
// On top of the incremental cone sit the enumeration services used by the
// stationarity engine: streaming cell enumeration of a central hyperplane
// arrangement, and an output-sensitive refinement traversal that discovers
// separating hyperplanes on demand instead of materializing the whole
// arrangement.

#pragma once

#include "pastat/rational.hpp"

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace pastat {

class BitSet {
public:
    void append(bool bit) {
        const std::size_t i = n_++;
        if (i / 64 >= w_.size()) w_.push_back(0);
        if (bit) w_[i / 64] |= (std::uint64_t(1) << (i % 64));
    }
    bool test(std::size_t i) const { return (w_[i / 64] >> (i % 64)) & 1; }
    std::size_t size() const { return n_; }

    static BitSet intersect(const BitSet& a, const BitSet& b) {
        BitSet r;
        r.n_ = std::min(a.n_, b.n_);
        r.w_.resize((r.n_ + 63) / 64, 0);
        for (std::size_t i = 0; i < r.w_.size(); ++i) r.w_[i] = a.w_[i] & b.w_[i];
        return r;
    }
    static bool subset(const BitSet& a, const BitSet& b) {  // a included in b
        for (std::size_t i = 0; i < a.w_.size(); ++i) {
            const std::uint64_t bw = i < b.w_.size() ? b.w_[i] : 0;
            if (a.w_[i] & ~bw) return false;
        }
        return true;
    }

private:
    std::vector<std::uint64_t> w_;
    std::size_t n_ = 0;
};

/// Where a hyperplane sits relative to a cone.
enum class ConeSide {
    Cuts,    // both open sides meet the cone's interior
    Plus,    // cone within {h >= 0}, not within the hyperplane
    Minus,   // cone within {h <= 0}, not within the hyperplane
    Within,  // cone contained in {h == 0}
};

class Cone {
public:
    static Cone full(std::size_t dim) {
        Cone c;
        c.dim_ = dim;
        for (std::size_t i = 0; i < dim; ++i) {
            ZVec e(dim, Int(0));
            e[i] = 1;
            c.lin_.push_back(std::move(e));
        }
        return c;
    }

    std::size_t dim() const { return dim_; }
    std::size_t row_count() const { return row_count_; }
    const std::vector<ZVec>& lineality() const { return lin_; }
    std::size_t ray_count() const { return rays_.size(); }
    const ZVec& ray(std::size_t i) const { return rays_[i].v; }

    ConeSide side(const ZVec& h) const {
        for (const auto& l : lin_)
            if (dot(h, l) != 0) return ConeSide::Cuts;
        bool pos = false, neg = false;
        for (const auto& r : rays_) {
            const int s = dot(h, r.v).sign();
            pos = pos || s > 0;
            neg = neg || s < 0;
            if (pos && neg) return ConeSide::Cuts;
        }
        if (pos) return ConeSide::Plus;
        if (neg) return ConeSide::Minus;
        return ConeSide::Within;
    }

    /// Intersect with {u : <h, u> >= 0}.
    void add_row(const ZVec& h) {
        // A lineality direction not orthogonal to h turns into a ray.
        std::size_t cut = lin_.size();
        for (std::size_t i = 0; i < lin_.size(); ++i) {
            if (dot(h, lin_[i]) != 0) {
                cut = i;
                break;
            }
        }
        if (cut < lin_.size()) {
            ZVec l0 = std::move(lin_[cut]);
            lin_.erase(lin_.begin() + static_cast<std::ptrdiff_t>(cut));
            Int h_l0 = dot(h, l0);
            if (h_l0 < 0) {
                for (auto& x : l0) x = -x;
                h_l0 = -h_l0;
            }
            for (auto& l : lin_) {
                const Int hl = dot(h, l);
                if (hl == 0) continue;
                for (std::size_t j = 0; j < dim_; ++j) l[j] = h_l0 * l[j] - hl * l0[j];
                l = primitive(l);
            }
            for (auto& r : rays_) {
                const Int hr = dot(h, r.v);
                if (hr == 0) continue;
                for (std::size_t j = 0; j < dim_; ++j) r.v[j] = h_l0 * r.v[j] - hr * l0[j];
                r.v = primitive(r.v);
            }
            Ray nr;
            nr.v = primitive(l0);
            for (std::size_t i = 0; i < row_count_; ++i) nr.tight.append(true);
            for (auto& r : rays_) r.tight.append(true);
            nr.tight.append(false);
            rays_.push_back(std::move(nr));
            ++row_count_;
            return;
        }

        std::vector<Int> s(rays_.size());
        bool pos = false, neg = false;
        for (std::size_t i = 0; i < rays_.size(); ++i) {
            s[i] = dot(h, rays_[i].v);
            pos = pos || s[i] > 0;
            neg = neg || s[i] < 0;
        }
        if (!neg) {
            for (std::size_t i = 0; i < rays_.size(); ++i) rays_[i].tight.append(s[i] == 0);
            ++row_count_;
            return;
        }
        if (!pos) {  // cone collapses onto the hyperplane
            std::vector<Ray> keep;
            for (std::size_t i = 0; i < rays_.size(); ++i) {
                if (s[i] == 0) {
                    rays_[i].tight.append(true);
                    keep.push_back(std::move(rays_[i]));
                }
            }
            rays_ = std::move(keep);
            ++row_count_;
            return;
        }

        std::vector<Ray> next;
        for (std::size_t i = 0; i < rays_.size(); ++i) {
            if (s[i] >= 0) {
                Ray r = rays_[i];
                r.tight.append(s[i] == 0);
                next.push_back(std::move(r));
            }
        }
        for (std::size_t i = 0; i < rays_.size(); ++i) {
            if (s[i] <= 0) continue;
            for (std::size_t j = 0; j < rays_.size(); ++j) {
                if (s[j] >= 0) continue;
                if (!adjacent(i, j)) continue;
                Ray nr;
                nr.v.resize(dim_);
                for (std::size_t t = 0; t < dim_; ++t)
                    nr.v[t] = s[i] * rays_[j].v[t] - s[j] * rays_[i].v[t];
                nr.v = primitive(nr.v);
                assert(!is_zero(nr.v));
                nr.tight = BitSet::intersect(rays_[i].tight, rays_[j].tight);
                nr.tight.append(true);
                next.push_back(std::move(nr));
            }
        }
        rays_ = std::move(next);
        ++row_count_;
    }

    /// Sum of the extreme rays: strictly interior for full-dimensional cones.
    ZVec interior_point() const {
        ZVec u(dim_, Int(0));
        for (const auto& r : rays_)
            for (std::size_t j = 0; j < dim_; ++j) u[j] += r.v[j];
        return u;
    }

    /// Generators: extreme rays plus both orientations of each lineality
    /// basis vector, lexicographically sorted.
    std::vector<ZVec> generators() const {
        std::vector<ZVec> g;
        for (const auto& r : rays_) g.push_back(primitive(r.v));
        for (const auto& l : lin_) {
            ZVec p = primitive(l);
            ZVec m(p.size());
            for (std::size_t j = 0; j < p.size(); ++j) m[j] = -p[j];
            g.push_back(std::move(p));
            g.push_back(std::move(m));
        }
        std::sort(g.begin(), g.end(), [](const ZVec& a, const ZVec& b) { return lex_less(a, b); });
        return g;
    }

private:
    struct Ray {
        ZVec v;
        BitSet tight;
    };

    bool adjacent(std::size_t i, std::size_t j) const {
        const BitSet t = BitSet::intersect(rays_[i].tight, rays_[j].tight);
        for (std::size_t k = 0; k < rays_.size(); ++k) {
            if (k == i || k == j) continue;
            if (BitSet::subset(t, rays_[k].tight)) return false;
        }
        return true;
    }

    std::size_t dim_ = 0;
    std::size_t row_count_ = 0;
    std::vector<ZVec> lin_;
    std::vector<Ray> rays_;
};

// ---------------------------------------------------------------------------
// Arrangement cell enumeration.
// ---------------------------------------------------------------------------

struct ConeCell {
    std::string sign_vector;     // one char per arrangement hyperplane
    std::vector<ZVec> b_rows;    // K = {u : <row, u> >= 0 for all rows}
    ZVec rep_dir;                // strictly interior direction
    std::optional<RVec> slope;   // selected gradient, filled by the engine
    std::vector<ZVec> rays;      // generators incl. +-lineality
};

/// Deduplicate hyperplane normals up to scaling and orientation; zero
/// normals are dropped.  Order of first appearance is kept.
inline std::vector<ZVec> dedupe_hyperplanes(const std::vector<RVec>& normals) {
    std::vector<ZVec> out;
    for (const auto& n : normals) {
        ZVec c = hyperplane_canonical(n);
        if (is_zero(c)) continue;
        if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(std::move(c));
    }
    return out;
}

/// Depth-first walk over the full-dimensional cells of the central
/// arrangement of (deduplicated) hyperplanes; memory stays proportional to
/// the number of hyperplanes, not the number of cells.
template <class Visitor>
void for_each_arrangement_cell(const std::vector<ZVec>& hs, std::size_t dim, Visitor&& visit) {
    struct Item {
        Cone cone;
        std::string signs;
    };
    std::vector<Item> stack;
    stack.push_back({Cone::full(dim), ""});
    while (!stack.empty()) {
        Item it = std::move(stack.back());
        stack.pop_back();
        for (std::size_t t = it.signs.size(); t < hs.size(); ++t) {
            const ZVec& h = hs[t];
            switch (it.cone.side(h)) {
                case ConeSide::Cuts: {
                    ZVec hneg(h.size());
                    for (std::size_t j = 0; j < h.size(); ++j) hneg[j] = -h[j];
                    Item minus{it.cone, it.signs + '-'};
                    minus.cone.add_row(hneg);
                    stack.push_back(std::move(minus));
                    it.cone.add_row(h);
                    it.signs += '+';
                    break;
                }
                case ConeSide::Plus:
                    it.cone.add_row(h);
                    it.signs += '+';
                    break;
                case ConeSide::Minus: {
                    ZVec hneg(h.size());
                    for (std::size_t j = 0; j < h.size(); ++j) hneg[j] = -h[j];
                    it.cone.add_row(hneg);
                    it.signs += '-';
                    break;
                }
                case ConeSide::Within:
                    throw std::logic_error(
                        "arrangement: full-dimensional cell inside a hyperplane");
            }
        }
        visit(std::move(it.cone), std::move(it.signs));
    }
}

/// Full-dimensional cells of the central arrangement of the given normals,
/// ordered by sign vector.
inline std::vector<ConeCell> enumerate_cones(const std::vector<RVec>& normals, std::size_t dim) {
    for (const auto& n : normals)
        if (n.size() != dim) throw input_error("enumerate_cones: normal dimension mismatch");
    const std::vector<ZVec> hs = dedupe_hyperplanes(normals);

    std::vector<ConeCell> out;
    for_each_arrangement_cell(hs, dim, [&](Cone&& cone, std::string&& signs) {
        ConeCell cc;
        cc.b_rows.reserve(hs.size());
        for (std::size_t t = 0; t < hs.size(); ++t) {
            ZVec row = hs[t];
            if (signs[t] == '-')
                for (auto& v : row) v = -v;
            cc.b_rows.push_back(std::move(row));
        }
        cc.sign_vector = std::move(signs);
        cc.rep_dir = cone.interior_point();
        cc.rays = cone.generators();
        out.push_back(std::move(cc));
    });
    std::sort(out.begin(), out.end(),
              [](const ConeCell& a, const ConeCell& b) { return a.sign_vector < b.sign_vector; });
    return out;
}

/// Extreme generators of {u : <row, u> >= 0 for all rows}, lineality split
/// into opposite pairs.
inline std::vector<ZVec> extreme_rays_of(const std::vector<ZVec>& b_rows, std::size_t dim) {
    Cone c = Cone::full(dim);
    for (const auto& r : b_rows) c.add_row(primitive(r));
    return c.generators();
}

// ---------------------------------------------------------------------------
// Output-sensitive fan refinement.
// ---------------------------------------------------------------------------

/// The evaluator saw a tie at the probe direction: split along `h`.
struct FanSplit {
    ZVec h;
};

/// Tie-free selection at the probe: `rows` (all strictly positive at the
/// probe) cut out the region on which the selection is constant.
struct FanRegion {
    std::size_t key = 0;
    std::vector<ZVec> rows;
};

using FanStep = std::variant<FanSplit, FanRegion>;

/// Partition direction space into full-dimensional cones on which a
/// caller-defined selection is constant.  `eval` probes one direction;
/// `emit(cone, key)` receives each final cell.  Hyperplanes are discovered
/// on demand, so the work scales with the number of emitted cells rather
/// than with the full arrangement.
template <class Eval, class Emit>
void refine_fan(std::size_t dim, Eval&& eval, Emit&& emit, std::size_t node_cap = 2000000) {
    std::vector<Cone> stack;
    stack.push_back(Cone::full(dim));
    std::size_t visited = 0;
    while (!stack.empty()) {
        if (++visited > node_cap) throw std::logic_error("refine_fan: node cap exceeded");
        Cone k = std::move(stack.back());
        stack.pop_back();
        const ZVec u = k.interior_point();
        FanStep step = eval(u);
        if (auto* split = std::get_if<FanSplit>(&step)) {
            assert(dot(split->h, u) == 0);
            ZVec hneg(split->h.size());
            for (std::size_t j = 0; j < split->h.size(); ++j) hneg[j] = -split->h[j];
            Cone plus = k;
            plus.add_row(split->h);
            k.add_row(hneg);
            stack.push_back(std::move(plus));
            stack.push_back(std::move(k));
            continue;
        }
        auto& region = std::get<FanRegion>(step);
        for (const auto& h : region.rows) {
            assert(dot(h, u) > 0);
            const ConeSide s = k.side(h);
            if (s == ConeSide::Cuts) {
                ZVec hneg(h.size());
                for (std::size_t j = 0; j < h.size(); ++j) hneg[j] = -h[j];
                Cone beyond = k;
                beyond.add_row(hneg);
                stack.push_back(std::move(beyond));
                k.add_row(h);
            }
            // ConeSide::Plus: already inside, row redundant for this cell.
        }
        emit(std::move(k), region.key);
    }
}

}  // namespace pastat
