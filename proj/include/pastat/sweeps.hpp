// Batch runs shared by the audit command and the acceptance suite: the
// labeled-graph dichotomy sweeps and randomized polytope cross-checks.
// Instances are independent, so sweeps shard across threads; each thread
// keeps its own subdifferential cache and results land in input order.

#pragma once

#include "pastat/gadgets.hpp"
#include "pastat/oracle.hpp"
#include "pastat/rng.hpp"
#include "pastat/subdiff.hpp"

#include <chrono>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace pastat {

inline void parallel_for(std::size_t count, std::size_t jobs,
                         const std::function<void(std::size_t, std::size_t)>& fn) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i, 0);
        return;
    }
    std::vector<std::thread> pool;
    std::size_t workers = std::min(jobs, count);
    for (std::size_t t = 0; t < workers; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < count; i += workers) fn(i, t);
        });
    }
    for (auto& th : pool) th.join();
}

inline double elapsed_ms(std::chrono::steady_clock::time_point from) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - from)
        .count();
}

// ---------------------------------------------------------------------------
// Graph dichotomy.
// ---------------------------------------------------------------------------

struct DichotomyRecord {
    std::size_t n = 0;
    unsigned long mask = 0;  // edge bitmask of the graph
    std::size_t k = 0;
    bool has_clique = false;       // oracle ground truth
    bool frechet_infinite = false; // engine: empty regular subdifferential
    bool frechet_zero = false;     // engine: distance exactly 0
    Rational clarke_dist_sq = 0;   // engine: seesaw distance squared
    bool match = false;
    double ms = 0;
};

/// One graph, one k: containment verdict and seesaw distance at the origin
/// against the exhaustive clique oracle.
inline DichotomyRecord run_graph_dichotomy(const Graph& g, unsigned long mask, std::size_t k,
                                           SubdiffCache* cache) {
    DichotomyRecord rec;
    rec.n = g.n;
    rec.mask = mask;
    rec.k = k;
    const auto t0 = std::chrono::steady_clock::now();
    rec.has_clique = oracle::has_k_clique(g, k);

    auto fre = gen_frechet_gadget(g, k);
    FrechetResult fr = frechet_dist_dc(fre.dc, zero_vec(fre.dim), cache);
    rec.frechet_infinite = !fr.finite;
    rec.frechet_zero = fr.finite && fr.dist_sq == 0;

    auto see = gen_clarke_gadget(g, k);
    ClarkeResult cl = clarke_dist_dc(see.dc, zero_vec(see.dim), cache);
    rec.clarke_dist_sq = cl.dist_sq;

    rec.match = rec.has_clique
                    ? (rec.frechet_infinite && rec.clarke_dist_sq == 0)
                    : (rec.frechet_zero && rec.clarke_dist_sq == Rational(1, 4));
    rec.ms = elapsed_ms(t0);
    return rec;
}

/// All graphs on n labeled vertices for each k in ks.
inline std::vector<DichotomyRecord> graph_dichotomy_sweep(std::size_t n,
                                                          const std::vector<std::size_t>& ks,
                                                          std::size_t jobs) {
    const unsigned long masks = 1ul << (n * (n - 1) / 2);
    std::vector<DichotomyRecord> out(masks * ks.size());
    std::vector<SubdiffCache> caches(std::max<std::size_t>(jobs, 1));
    parallel_for(out.size(), jobs, [&](std::size_t idx, std::size_t worker) {
        const unsigned long mask = static_cast<unsigned long>(idx / ks.size());
        const std::size_t k = ks[idx % ks.size()];
        out[idx] = run_graph_dichotomy(Graph::from_mask(n, mask), mask, k, &caches[worker]);
    });
    return out;
}

// ---------------------------------------------------------------------------
// Randomized polytope cross-checks.
// ---------------------------------------------------------------------------

struct PolytopeAuditRecord {
    std::size_t index = 0;
    bool minkowski_ok = false;
    bool facet_roundtrip_ok = false;
    double ms = 0;
};

/// Arrangement-based Minkowski sum against the all-sums oracle, and the
/// facet system recovered back into the vertex list.
inline PolytopeAuditRecord run_polytope_audit(std::size_t index, std::uint64_t seed) {
    PolytopeAuditRecord rec;
    rec.index = index;
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(seed + 1000003 * index);
    const std::size_t d = static_cast<std::size_t>(rng.integer(2, 4));
    std::vector<Polytope> parts;
    const int nparts = static_cast<int>(rng.integer(2, 3));
    for (int r = 0; r < nparts; ++r) {
        std::vector<RVec> pts;
        for (int i = static_cast<int>(rng.integer(1, 6)); i-- > 0;)
            pts.push_back(rng.vec(d, 3, 1));
        parts.push_back(reduce_vertices(pts));
    }
    rec.minkowski_ok = minkowski_sum(parts) == oracle::naive_minkowski(parts);

    Polytope p = parts[0];
    auto fs = facet_system(p.vertices);
    if (fs.eqs.empty()) {
        HPolyhedron h;
        h.dim = d;
        h.ineqs = fs.ineqs;
        rec.facet_roundtrip_ok = vertices_from_hrep(h) == p.vertices;
    } else {
        // lower-dimensional: check every vertex is tight on the equalities
        // and satisfies the inequalities, and the system cuts nothing extra
        rec.facet_roundtrip_ok = true;
        for (const auto& v : p.vertices) {
            for (const auto& [n, b] : fs.eqs)
                if (dot(n, v) != b) rec.facet_roundtrip_ok = false;
            for (const auto& [n, b] : fs.ineqs)
                if (dot(n, v) > b) rec.facet_roundtrip_ok = false;
        }
        HPolyhedron h;
        h.dim = d;
        h.ineqs = fs.ineqs;
        for (const auto& [n, b] : fs.eqs) h.eqs.push_back({n, b});
        if (vertices_from_hrep(h) != p.vertices) rec.facet_roundtrip_ok = false;
    }
    rec.ms = elapsed_ms(t0);
    return rec;
}

inline std::vector<PolytopeAuditRecord> polytope_audit_sweep(std::size_t count, std::uint64_t seed,
                                                             std::size_t jobs) {
    std::vector<PolytopeAuditRecord> out(count);
    parallel_for(count, jobs, [&](std::size_t i, std::size_t) {
        out[i] = run_polytope_audit(i, seed);
    });
    return out;
}

}  // namespace pastat
