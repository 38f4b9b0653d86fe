// Instance generators: the clique-driven hard families and the shallow CNN
// losses, each in explicit max-min form and (for the clique family) as a
// depth-two DC pair of max/sum trees.
//
// Moment points p_v = (v, v^2) make every selection tuple an exposed vertex
// of the product hull; forbidden ordered pairs (equal or non-adjacent) index
// the branches.  The seesaw variant appends one scalar coordinate t and the
// branch -|t|/2 so that the zero slope becomes essentially active exactly on
// clique instances.

#pragma once

#include "pastat/formula.hpp"
#include "pastat/rational.hpp"

#include <algorithm>
#include <set>
#include <tuple>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace pastat {

struct Graph {
    std::size_t n = 0;
    std::vector<std::pair<std::size_t, std::size_t>> edges;  // 1-based, u < v

    void check() const {
        std::set<std::pair<std::size_t, std::size_t>> seen;
        for (auto [u, v] : edges) {
            if (u == v) throw input_error("graph: self-loop");
            if (u < 1 || v < 1 || u > n || v > n) throw input_error("graph: vertex out of range");
            if (u > v) throw input_error("graph: edges must be stored as u < v");
            if (!seen.insert({u, v}).second) throw input_error("graph: duplicate edge");
        }
    }

    bool has_edge(std::size_t u, std::size_t v) const {
        if (u > v) std::swap(u, v);
        return std::find(edges.begin(), edges.end(), std::make_pair(u, v)) != edges.end();
    }

    /// First line "N M", then M lines "u v".
    static Graph parse(const std::string& text) {
        std::istringstream in(text);
        Graph g;
        std::size_t m = 0;
        if (!(in >> g.n >> m)) throw input_error("graph: missing 'N M' header");
        for (std::size_t i = 0; i < m; ++i) {
            std::size_t u = 0, v = 0;
            if (!(in >> u >> v)) throw input_error("graph: truncated edge list");
            if (u == v) throw input_error("graph: self-loop");
            if (u > v) std::swap(u, v);
            g.edges.push_back({u, v});
        }
        std::sort(g.edges.begin(), g.edges.end());
        g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
        g.check();
        return g;
    }

    std::string to_edge_list() const {
        std::ostringstream out;
        out << n << ' ' << edges.size() << '\n';
        for (auto [u, v] : edges) out << u << ' ' << v << '\n';
        return out.str();
    }

    static Graph empty(std::size_t n) { return Graph{n, {}}; }
    static Graph complete(std::size_t n) {
        Graph g{n, {}};
        for (std::size_t u = 1; u <= n; ++u)
            for (std::size_t v = u + 1; v <= n; ++v) g.edges.push_back({u, v});
        return g;
    }
    static Graph path(std::size_t n) {
        Graph g{n, {}};
        for (std::size_t u = 1; u + 1 <= n - 1 + 1 && u < n; ++u) g.edges.push_back({u, u + 1});
        return g;
    }
    static Graph cycle(std::size_t n) {
        Graph g = path(n);
        if (n >= 3) g.edges.push_back({1, n});
        std::sort(g.edges.begin(), g.edges.end());
        return g;
    }
    /// Graph on n labeled vertices from an edge bitmask in the fixed order
    /// (1,2),(1,3),...,(1,n),(2,3),...,(n-1,n).
    static Graph from_mask(std::size_t n, unsigned long mask) {
        Graph g{n, {}};
        std::size_t bit = 0;
        for (std::size_t u = 1; u <= n; ++u)
            for (std::size_t v = u + 1; v <= n; ++v, ++bit)
                if ((mask >> bit) & 1) g.edges.push_back({u, v});
        return g;
    }
};

inline std::vector<RVec> moment_points(std::size_t n) {
    if (n < 2) throw input_error("moment_points: need at least two vertices");
    std::vector<RVec> pts;
    pts.reserve(n);
    for (std::size_t v = 1; v <= n; ++v)
        pts.push_back({Rational(static_cast<long>(v)), Rational(static_cast<long>(v * v))});
    return pts;
}

/// Ordered pairs (u, v) in [N]^2 that cannot occur as two distinct clique
/// positions: equal or non-adjacent.  Padded vertices beyond g.n are
/// isolated, so every pair touching them is forbidden.
inline std::vector<std::pair<std::size_t, std::size_t>> forb_pairs(const Graph& g, std::size_t n) {
    g.check();
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t u = 1; u <= n; ++u)
        for (std::size_t v = 1; v <= n; ++v)
            if (u == v || !(u <= g.n && v <= g.n && g.has_edge(u, v))) out.push_back({u, v});
    return out;
}

struct GadgetInstance {
    MaxMinFormula maxmin;
    DcFunction dc;
    std::size_t n = 0;  // padded vertex count
    std::size_t k = 0;
    std::size_t dim = 0;
};

namespace detail {

inline RVec block_vec(std::size_t dim, std::size_t block, const RVec& p) {
    RVec v = zero_vec(dim);
    v[2 * block] = p[0];
    v[2 * block + 1] = p[1];
    return v;
}

inline McTree block_support_max(std::size_t dim, std::size_t block, const std::vector<RVec>& pts) {
    std::vector<McTree> leaves;
    leaves.reserve(pts.size());
    for (const auto& p : pts) leaves.push_back(McTree::leaf(block_vec(dim, block, p), 0));
    return McTree::max(std::move(leaves));
}

}  // namespace detail

/// Containment gadget: in dimension 2k, one max branch per block pair and
/// forbidden ordered pair, each a min over all N^2 reanchorings.
inline GadgetInstance gen_frechet_gadget(const Graph& g, std::size_t k) {
    if (k < 2) throw input_error("gen_frechet_gadget: k must be at least 2");
    GadgetInstance inst;
    inst.n = std::max<std::size_t>(g.n, 3);  // isolated-vertex padding
    inst.k = k;
    inst.dim = 2 * k;
    const auto pts = moment_points(inst.n);
    const auto forb = forb_pairs(g, inst.n);

    MaxMinFormula& f = inst.maxmin;
    f.dim = inst.dim;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            for (const auto& [u, v] : forb) {
                std::vector<std::size_t> group;
                group.reserve(inst.n * inst.n);
                for (std::size_t a = 1; a <= inst.n; ++a) {
                    for (std::size_t b = 1; b <= inst.n; ++b) {
                        RVec slope = zero_vec(f.dim);
                        slope[2 * i] = pts[u - 1][0] - pts[a - 1][0];
                        slope[2 * i + 1] = pts[u - 1][1] - pts[a - 1][1];
                        slope[2 * j] = pts[v - 1][0] - pts[b - 1][0];
                        slope[2 * j + 1] = pts[v - 1][1] - pts[b - 1][1];
                        group.push_back(f.affine.size());
                        f.affine.push_back({std::move(slope), 0});
                    }
                }
                f.groups.push_back(std::move(group));
            }
        }
    }
    f.check();

    std::vector<McTree> branches;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            for (const auto& [u, v] : forb) {
                std::vector<McTree> blocks;
                for (std::size_t r = 0; r < k; ++r) {
                    if (r == i)
                        blocks.push_back(McTree::leaf(detail::block_vec(f.dim, r, pts[u - 1]), 0));
                    else if (r == j)
                        blocks.push_back(McTree::leaf(detail::block_vec(f.dim, r, pts[v - 1]), 0));
                    else
                        blocks.push_back(detail::block_support_max(f.dim, r, pts));
                }
                branches.push_back(McTree::sum(std::move(blocks)));
            }
        }
    }
    inst.dc.h = McTree::max(std::move(branches));
    std::vector<McTree> gblocks;
    for (std::size_t r = 0; r < k; ++r) gblocks.push_back(detail::block_support_max(f.dim, r, pts));
    inst.dc.g = McTree::sum(std::move(gblocks));
    return inst;
}

/// Seesaw gadget in dimension 2k + 1: the containment gadget plus t/2, held
/// against the branch min{t, 0}.
inline GadgetInstance gen_clarke_gadget(const Graph& g, std::size_t k) {
    if (k < 2) throw input_error("gen_clarke_gadget: k must be at least 2");
    GadgetInstance flat = gen_frechet_gadget(g, k);
    GadgetInstance inst;
    inst.n = flat.n;
    inst.k = k;
    inst.dim = 2 * k + 1;
    const std::size_t t = inst.dim - 1;

    MaxMinFormula& f = inst.maxmin;
    f.dim = inst.dim;
    for (const auto& group : flat.maxmin.groups) {
        std::vector<std::size_t> lifted;
        for (auto j : group) {
            RVec slope = flat.maxmin.affine[j].slope;
            slope.push_back(Rational(1, 2));
            lifted.push_back(f.affine.size());
            f.affine.push_back({std::move(slope), 0});
        }
        f.groups.push_back(std::move(lifted));
    }
    {
        RVec et = zero_vec(f.dim);
        et[t] = 1;
        const std::size_t id_t = f.affine.size();
        f.affine.push_back({std::move(et), 0});
        const std::size_t id_0 = f.affine.size();
        f.affine.push_back({zero_vec(f.dim), 0});
        f.groups.push_back({id_t, id_0});
    }
    f.check();

    const auto pts = moment_points(inst.n);
    const auto forb = forb_pairs(g, inst.n);
    auto lift_leafless = [&](std::size_t block, const RVec& p) {
        return McTree::leaf(detail::block_vec(f.dim, block, p), 0);
    };
    auto lifted_support = [&](std::size_t block) {
        std::vector<McTree> leaves;
        for (const auto& p : pts) leaves.push_back(lift_leafless(block, p));
        return McTree::max(std::move(leaves));
    };
    auto t_leaf = [&](const Rational& coef) {
        RVec v = zero_vec(f.dim);
        v[t] = coef;
        return McTree::leaf(std::move(v), 0);
    };

    // H_C = max over (branch, eta) of [branch blocks + eta t] and [g + t/2]
    std::vector<McTree> branches;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            for (const auto& [u, v] : forb) {
                for (int eta = 0; eta <= 1; ++eta) {
                    std::vector<McTree> blocks;
                    for (std::size_t r = 0; r < k; ++r) {
                        if (r == i)
                            blocks.push_back(lift_leafless(r, pts[u - 1]));
                        else if (r == j)
                            blocks.push_back(lift_leafless(r, pts[v - 1]));
                        else
                            blocks.push_back(lifted_support(r));
                    }
                    blocks.push_back(t_leaf(Rational(eta)));
                    branches.push_back(McTree::sum(std::move(blocks)));
                }
            }
        }
    }
    {
        std::vector<McTree> blocks;
        for (std::size_t r = 0; r < k; ++r) blocks.push_back(lifted_support(r));
        blocks.push_back(t_leaf(Rational(1, 2)));
        branches.push_back(McTree::sum(std::move(blocks)));
    }
    inst.dc.h = McTree::max(std::move(branches));

    // G_C = g + |t|/2
    std::vector<McTree> gblocks;
    for (std::size_t r = 0; r < k; ++r) gblocks.push_back(lifted_support(r));
    gblocks.push_back(McTree::max({t_leaf(Rational(1, 2)), t_leaf(Rational(-1, 2))}));
    inst.dc.g = McTree::sum(std::move(gblocks));
    return inst;
}

// ---------------------------------------------------------------------------
// Shallow CNN losses.
// ---------------------------------------------------------------------------

inline std::vector<std::size_t> unit_neighbors(std::size_t u, std::size_t n) {
    std::vector<std::size_t> out;
    if (u > 1) out.push_back(u - 1);
    if (u < n) out.push_back(u + 1);
    return out;
}

/// Local ReLU penalty over the unit neighborhood of u on the moment curve.
inline Rational relu_penalty(std::size_t u, const RVec& s, std::size_t n) {
    if (u < 1 || u > n) throw input_error("relu_penalty: vertex out of range");
    if (s.size() != 2) throw input_error("relu_penalty: s must be planar");
    const auto pts = moment_points(n);
    Rational total = 0;
    for (auto a : unit_neighbors(u, n)) {
        Rational v = dot(sub(pts[a - 1], pts[u - 1]), s);
        if (v > 0) total += v;
    }
    return total;
}

/// Flat description of a shallow ReLU/max-pooling network with one trainable
/// 1x1 filter: fixed channel vectors per site, fixed rational readouts per
/// branch, max-pooling over branch groups, and a fixed affine head.
struct CnnNet {
    std::size_t dim = 0;
    std::vector<RVec> site_channels;
    std::vector<std::vector<std::pair<std::size_t, Rational>>> readouts;  // per branch
    std::vector<std::vector<std::size_t>> pooling;                        // branch groups
    RVec affine_head;
};

inline Rational cnn_forward(const CnnNet& net, const RVec& theta) {
    if (theta.size() != net.dim) throw input_error("cnn_forward: dimension mismatch");
    std::vector<Rational> site(net.site_channels.size());
    for (std::size_t i = 0; i < site.size(); ++i) {
        Rational v = dot(net.site_channels[i], theta);
        site[i] = v > 0 ? v : Rational(0);
    }
    std::vector<Rational> branch(net.readouts.size(), Rational(0));
    for (std::size_t b = 0; b < branch.size(); ++b)
        for (const auto& [s, c] : net.readouts[b]) branch[b] += c * site[s];
    Rational out = dot(net.affine_head, theta);
    for (const auto& group : net.pooling) {
        Rational best = branch[group[0]];
        for (auto b : group) best = std::max(best, branch[b]);
        out += best;
    }
    return out;
}

struct CnnInstance {
    std::size_t n = 0, k = 0;
    std::vector<std::pair<std::size_t, std::size_t>> forb;
    std::vector<std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>> branches;  // (i,j,u,v)
    MaxMinFormula lf_maxmin;  // dimension 2k
    MaxMinFormula lc_maxmin;  // dimension 2k + 1
    CnnNet net_f;
    CnnNet net_c;

    /// Closed-form branch score -P_u(z_i) - P_v(z_j).
    Rational branch_value(std::size_t idx, const RVec& z) const {
        const auto& [i, j, u, v] = branches[idx];
        RVec zi = {z[2 * i], z[2 * i + 1]};
        RVec zj = {z[2 * j], z[2 * j + 1]};
        return -relu_penalty(u, zi, n) - relu_penalty(v, zj, n);
    }

    Rational lf_closed(const RVec& z) const {
        if (z.size() != 2 * k) throw input_error("lf_closed: dimension mismatch");
        Rational best = branch_value(0, z);
        for (std::size_t idx = 1; idx < branches.size(); ++idx)
            best = std::max(best, branch_value(idx, z));
        return best;
    }

    Rational lc_closed(const RVec& zt) const {
        if (zt.size() != 2 * k + 1) throw input_error("lc_closed: dimension mismatch");
        RVec z(zt.begin(), zt.end() - 1);
        const Rational& t = zt.back();
        const Rational neg_half_abs = (t >= 0 ? -t : t) / 2;
        return t / 2 + std::max(lf_closed(z), neg_half_abs);
    }
};

/// Both CNN losses for a graph: closed forms, explicit max-min expansions
/// (each branch splits into at most 2^4 affine pieces over the ReLU on/off
/// patterns), and the site/readout/pool realizations.
inline CnnInstance gen_cnn_losses(const Graph& g, std::size_t k) {
    if (k < 2) throw input_error("gen_cnn_losses: k must be at least 2");
    CnnInstance inst;
    inst.n = std::max<std::size_t>(g.n, 2);
    inst.k = k;
    const std::size_t df = 2 * k;
    const auto pts = moment_points(inst.n);
    inst.forb = forb_pairs(g, inst.n);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            for (const auto& [u, v] : inst.forb) inst.branches.push_back({i, j, u, v});

    // max-min expansion: one group per branch, pieces over subset patterns
    inst.lf_maxmin.dim = df;
    inst.lc_maxmin.dim = df + 1;
    auto subset_slopes = [&](std::size_t block, std::size_t u) {
        const auto nb = unit_neighbors(u, inst.n);
        std::vector<RVec> out;
        for (std::size_t mask = 0; mask < (std::size_t(1) << nb.size()); ++mask) {
            RVec s = zero_vec(df);
            for (std::size_t b = 0; b < nb.size(); ++b) {
                if ((mask >> b) & 1) {
                    s[2 * block] -= pts[nb[b] - 1][0] - pts[u - 1][0];
                    s[2 * block + 1] -= pts[nb[b] - 1][1] - pts[u - 1][1];
                }
            }
            out.push_back(std::move(s));
        }
        return out;
    };
    for (const auto& [i, j, u, v] : inst.branches) {
        std::vector<std::size_t> gf, gc;
        for (const auto& si : subset_slopes(i, u)) {
            for (const auto& sj : subset_slopes(j, v)) {
                RVec s = add(si, sj);
                gf.push_back(inst.lf_maxmin.affine.size());
                inst.lf_maxmin.affine.push_back({s, 0});
                s.push_back(Rational(1, 2));
                gc.push_back(inst.lc_maxmin.affine.size());
                inst.lc_maxmin.affine.push_back({std::move(s), 0});
            }
        }
        inst.lf_maxmin.groups.push_back(std::move(gf));
        inst.lc_maxmin.groups.push_back(std::move(gc));
    }
    {
        RVec et = zero_vec(df + 1);
        et[df] = 1;
        const std::size_t id_t = inst.lc_maxmin.affine.size();
        inst.lc_maxmin.affine.push_back({std::move(et), 0});
        const std::size_t id_0 = inst.lc_maxmin.affine.size();
        inst.lc_maxmin.affine.push_back({zero_vec(df + 1), 0});
        inst.lc_maxmin.groups.push_back({id_t, id_0});
    }
    inst.lf_maxmin.check();
    inst.lc_maxmin.check();

    // network realizations
    auto build_net = [&](std::size_t dim, bool seesaw) {
        CnnNet net;
        net.dim = dim;
        net.affine_head = zero_vec(dim);
        std::vector<std::size_t> all_branches;
        for (const auto& [i, j, u, v] : inst.branches) {
            std::vector<std::pair<std::size_t, Rational>> readout;
            for (auto a : unit_neighbors(u, inst.n)) {
                RVec ch = zero_vec(dim);
                ch[2 * i] = pts[a - 1][0] - pts[u - 1][0];
                ch[2 * i + 1] = pts[a - 1][1] - pts[u - 1][1];
                readout.push_back({net.site_channels.size(), Rational(-1)});
                net.site_channels.push_back(std::move(ch));
            }
            for (auto b : unit_neighbors(v, inst.n)) {
                RVec ch = zero_vec(dim);
                ch[2 * j] = pts[b - 1][0] - pts[v - 1][0];
                ch[2 * j + 1] = pts[b - 1][1] - pts[v - 1][1];
                readout.push_back({net.site_channels.size(), Rational(-1)});
                net.site_channels.push_back(std::move(ch));
            }
            all_branches.push_back(net.readouts.size());
            net.readouts.push_back(std::move(readout));
        }
        if (seesaw) {
            const std::size_t t = dim - 1;
            RVec plus = zero_vec(dim), minus = zero_vec(dim);
            plus[t] = 1;
            minus[t] = -1;
            const std::size_t sp = net.site_channels.size();
            net.site_channels.push_back(std::move(plus));
            const std::size_t sm = net.site_channels.size();
            net.site_channels.push_back(std::move(minus));
            all_branches.push_back(net.readouts.size());
            net.readouts.push_back({{sp, Rational(-1, 2)}, {sm, Rational(-1, 2)}});
            net.affine_head[t] = Rational(1, 2);
        }
        net.pooling.push_back(std::move(all_branches));
        return net;
    };
    inst.net_f = build_net(df, false);
    inst.net_c = build_net(df + 1, true);
    return inst;
}

}  // namespace pastat
