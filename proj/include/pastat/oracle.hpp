// Brute-force verifiers, kept independent of the engine's subdifferential
// code: only raw evaluation, exhaustive enumeration, and LP membership.

#pragma once

#include "pastat/formula.hpp"
#include "pastat/gadgets.hpp"
#include "pastat/lp.hpp"
#include "pastat/polytope.hpp"
#include "pastat/rng.hpp"

#include <optional>
#include <vector>

namespace pastat::oracle {

/// Exhaustive k-subset search.
inline bool has_k_clique(const Graph& g, std::size_t k) {
    g.check();
    if (k < 1) throw input_error("has_k_clique: k must be positive");
    if (k > g.n) return false;
    std::vector<std::size_t> pick(k);
    for (std::size_t i = 0; i < k; ++i) pick[i] = i + 1;
    for (;;) {
        bool clique = true;
        for (std::size_t a = 0; a < k && clique; ++a)
            for (std::size_t b = a + 1; b < k; ++b)
                if (!g.has_edge(pick[a], pick[b])) {
                    clique = false;
                    break;
                }
        if (clique) return true;
        std::size_t i = k;
        while (i > 0) {
            --i;
            if (pick[i] + (k - i) <= g.n) {
                ++pick[i];
                for (std::size_t j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
                i = k + 1;
                break;
            }
        }
        if (i != k + 1) return false;
    }
}

/// All combinations of one vertex per summand, then vertex reduction.
inline Polytope naive_minkowski(const std::vector<Polytope>& parts) {
    if (parts.empty()) throw input_error("naive_minkowski: empty list");
    const std::size_t d = parts[0].dim;
    std::vector<RVec> sums = {zero_vec(d)};
    for (const auto& p : parts) {
        if (p.dim != d) throw input_error("naive_minkowski: dimension mismatch");
        std::vector<RVec> next;
        next.reserve(sums.size() * p.vertices.size());
        for (const auto& s : sums)
            for (const auto& v : p.vertices) next.push_back(add(s, v));
        sums = std::move(next);
    }
    return reduce_vertices(sums);
}

struct ContainmentAudit {
    bool ok = false;
    std::optional<RVec> escaped;  // a vertex y with s + y outside X
};

/// Check s + Y inside X vertex by vertex through LP membership.
inline ContainmentAudit containment_audit(const RVec& s, const Polytope& x, const Polytope& y) {
    if (x.dim != y.dim || s.size() != x.dim)
        throw input_error("containment_audit: dimension mismatch");
    for (const auto& v : y.vertices) {
        if (!in_hull(add(s, v), x.vertices).inside) return {false, v};
    }
    return {true, std::nullopt};
}

/// Necessary check for membership of xi in the regular subdifferential of
/// the local model: <xi, u> <= phi(u) on coordinate axes, slope differences,
/// and seeded random directions.
inline bool directional_audit(const LocalModel& m, const RVec& xi, int trials,
                              std::uint64_t seed = default_seed()) {
    if (xi.size() != m.dim) throw input_error("directional_audit: dimension mismatch");
    auto check = [&](const RVec& u) { return dot(xi, u) <= eval_local(m, u); };
    for (std::size_t j = 0; j < m.dim; ++j) {
        RVec e = zero_vec(m.dim);
        e[j] = 1;
        if (!check(e)) return false;
        e[j] = -1;
        if (!check(e)) return false;
    }
    for (std::size_t a = 0; a < m.slopes.size(); ++a)
        for (std::size_t b = 0; b < m.slopes.size(); ++b)
            if (a != b && !check(sub(m.slopes[a], m.slopes[b]))) return false;
    Rng rng(seed);
    for (int i = 0; i < trials; ++i)
        if (!check(rng.vec(m.dim, 9, 4))) return false;
    return true;
}

}  // namespace pastat::oracle
