#include "pastat/subdiff.hpp"
#include "pastat/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace pastat;

namespace {

RVec rv(std::initializer_list<int> xs) {
    RVec v;
    for (int x : xs) v.push_back(Rational(x));
    return v;
}

// f(t) = |t| = max{ min{t}, min{-t} }
MaxMinFormula abs_formula() {
    MaxMinFormula f;
    f.dim = 1;
    f.affine = {{rv({1}), 0}, {rv({-1}), 0}};
    f.groups = {{0}, {1}};
    return f;
}

// f(t) = -|t| = min{t, -t}
MaxMinFormula neg_abs_formula() {
    MaxMinFormula f;
    f.dim = 1;
    f.affine = {{rv({1}), 0}, {rv({-1}), 0}};
    f.groups = {{0, 1}};
    return f;
}

// f(x1,x2) = max{0, min{x1, x2}}
MaxMinFormula zero_min_formula() {
    MaxMinFormula f;
    f.dim = 2;
    f.affine = {{rv({0, 0}), 0}, {rv({1, 0}), 0}, {rv({0, 1}), 0}};
    f.groups = {{0}, {1, 2}};
    return f;
}

// sigma over the moment points (v, v^2), v in [n], on block `block` of `k`
McTree moment_support_tree(int n, std::size_t block, std::size_t k) {
    std::vector<McTree> leaves;
    for (int v = 1; v <= n; ++v) {
        RVec x = zero_vec(2 * k);
        x[2 * block] = v;
        x[2 * block + 1] = v * v;
        leaves.push_back(McTree::leaf(std::move(x), 0));
    }
    return McTree::max(std::move(leaves));
}

bool contains_vertex(const Polytope& p, const RVec& v) {
    return std::find(p.vertices.begin(), p.vertices.end(), v) != p.vertices.end();
}

}  // namespace

TEST_CASE("eval_maxmin on the worked one- and two-dimensional examples") {
    CHECK(eval_maxmin(abs_formula(), rv({-3})) == 3);
    CHECK(eval_maxmin(zero_min_formula(), rv({2, 5})) == 2);
    CHECK_THROWS_AS(eval_maxmin(abs_formula(), rv({1, 2})), input_error);
}

TEST_CASE("eval_mc and eval_dc") {
    McTree two_abs = McTree::sum(
        {McTree::max({McTree::leaf(rv({1}), 0), McTree::leaf(rv({-1}), 0)}),
         McTree::max({McTree::leaf(rv({1}), 0), McTree::leaf(rv({-1}), 0)})});
    CHECK(eval_mc(two_abs, rv({2})) == 4);
    CHECK(eval_mc(McTree::leaf(rv({1, 1}), 0), rv({3, 4})) == 7);
    DcFunction f{two_abs, McTree::leaf(rv({0}), 0)};
    CHECK(eval_dc(f, rv({-2})) == 4);
}

TEST_CASE("local_model keeps active groups and pieces") {
    MaxMinFormula f;  // max{ w, 2w - 1 }
    f.dim = 1;
    f.affine = {{rv({1}), 0}, {rv({2}), Rational(-1)}};
    f.groups = {{0}, {1}};

    LocalModel at1 = local_model(f, rv({1}));  // both branches active
    CHECK(at1.slopes.size() == 2);
    CHECK(at1.groups.size() == 2);
    CHECK(eval_local(at1, rv({-1})) == -1);  // max{-u, -2u} at u = -1 -> ... max(-1,-2)= -1? no: u=-1: max{u,2u} = max{-1,-2} = -1
    CHECK(eval_local(at1, rv({1})) == 2);

    LocalModel at0 = local_model(f, rv({0}));  // only the first branch
    CHECK(at0.slopes.size() == 1);
    CHECK(eval_local(at0, rv({5})) == 5);

    LocalModel abs0 = local_model(abs_formula(), rv({0}));
    CHECK(abs0.slopes.size() == 2);
    CHECK(eval_local(abs0, rv({-7})) == 7);
}

TEST_CASE("local model exactness near the base point and homogeneity") {
    Rng rng(61);
    for (int trial = 0; trial < 12; ++trial) {
        MaxMinFormula f;
        f.dim = static_cast<std::size_t>(rng.integer(1, 3));
        const int pieces = static_cast<int>(rng.integer(2, 5));
        for (int j = 0; j < pieces; ++j) f.affine.push_back({rng.vec(f.dim, 3, 2), rng.rational(2, 2)});
        for (int i = rng.integer(1, 3); i-- > 0;) {
            std::vector<std::size_t> g;
            for (int j = 0; j < pieces; ++j)
                if (rng.coin()) g.push_back(static_cast<std::size_t>(j));
            if (g.empty()) g.push_back(static_cast<std::size_t>(rng.integer(0, pieces - 1)));
            f.groups.push_back(std::move(g));
        }
        RVec w = rng.vec(f.dim, 2, 2);
        LocalModel m = local_model(f, w);
        const Rational fw = eval_maxmin(f, w);

        Rational r{1};
        for (int halving = 0; halving < 200; ++halving) {
            bool exact = true;
            Rng probe(101 + static_cast<std::uint64_t>(trial));
            for (int s = 0; s < 8; ++s) {
                RVec u = probe.vec(f.dim, 3, 3);
                u = scale(r, u);
                if (eval_maxmin(f, add(w, u)) - fw != eval_local(m, u)) {
                    exact = false;
                    break;
                }
            }
            if (exact) break;
            r /= 2;
        }
        // after shrinking, the identity holds on a fresh sample
        Rng probe2(919 + static_cast<std::uint64_t>(trial));
        for (int s = 0; s < 10; ++s) {
            RVec u = scale(r / 2, probe2.vec(f.dim, 3, 3));
            CHECK(eval_maxmin(f, add(w, u)) - fw == eval_local(m, u));
        }
        // positive homogeneity in exact arithmetic
        for (int s = 0; s < 6; ++s) {
            RVec u = probe2.vec(f.dim, 4, 2);
            Rational t = probe2.positive_rational(5, 3);
            CHECK(eval_local(m, scale(t, u)) == t * eval_local(m, u));
        }
    }
}

TEST_CASE("subdiff_mc: interval, double interval, product of moment hulls") {
    McTree absx = McTree::max({McTree::leaf(rv({1}), 0), McTree::leaf(rv({-1}), 0)});
    auto p = subdiff_mc(absx, rv({0}));
    CHECK(p.vertices == std::vector<RVec>{rv({-1}), rv({1})});

    McTree twice = McTree::sum({absx, absx});
    auto q = subdiff_mc(twice, rv({0}));
    CHECK(q.vertices == std::vector<RVec>{rv({-2}), rv({2})});

    // sum of two block-supported moment hulls at the origin: all 9 tuples
    McTree g = McTree::sum({moment_support_tree(3, 0, 2), moment_support_tree(3, 1, 2)});
    auto y = subdiff_mc(g, rv({0, 0, 0, 0}));
    CHECK(y.vertices.size() == 9);
    CHECK(contains_vertex(y, rv({1, 1, 3, 9})));
    CHECK(contains_vertex(y, rv({2, 4, 2, 4})));

    // away from the origin only the maximizing leaves stay active
    auto y1 = subdiff_mc(moment_support_tree(3, 0, 1), rv({1, 0}));
    CHECK(y1.vertices == std::vector<RVec>{rv({3, 9})});

    // structural memoization changes nothing
    SubdiffCache cache;
    auto y2 = subdiff_mc(g, rv({0, 0, 0, 0}), &cache);
    CHECK(y2.vertices == y.vertices);
    auto y3 = subdiff_mc(g, rv({0, 0, 0, 0}), &cache);
    CHECK(y3.vertices == y.vertices);
}

TEST_CASE("active_slopes on the three canonical local models") {
    LocalModel abs0 = local_model(abs_formula(), rv({0}));
    auto s1 = active_slopes(abs0);
    CHECK(s1 == std::vector<RVec>{rv({-1}), rv({1})});

    LocalModel zm = local_model(zero_min_formula(), rv({0, 0}));
    auto s2 = active_slopes(zm);
    CHECK(s2 == std::vector<RVec>{rv({0, 0}), rv({0, 1}), rv({1, 0})});

    MaxMinFormula single;
    single.dim = 3;
    single.affine = {{rv({1, 2, 3}), 7}};
    single.groups = {{0}};
    LocalModel sm = local_model(single, rv({0, 0, 0}));
    std::vector<FanCell> cells;
    auto s3 = active_slopes(sm, &cells);
    CHECK(s3 == std::vector<RVec>{rv({1, 2, 3})});
    CHECK(cells.size() == 1);  // no fan construction for a single slope
}

TEST_CASE("frechet distance, max-min route: the worked examples") {
    auto r1 = frechet_dist_maxmin(abs_formula(), rv({0}));
    REQUIRE(r1.finite);
    CHECK(r1.dist_sq == 0);
    CHECK(r1.witness == rv({0}));

    auto r2 = frechet_dist_maxmin(neg_abs_formula(), rv({0}));
    CHECK_FALSE(r2.finite);
    CHECK_FALSE(r2.farkas.empty());
    REQUIRE(r2.descent.has_value());
    // the emitted direction really is a descent direction of -|t|
    CHECK(eval_local(local_model(neg_abs_formula(), rv({0})), *r2.descent) < 0);

    auto r3 = frechet_dist_maxmin(zero_min_formula(), rv({0, 0}));
    REQUIRE(r3.finite);
    CHECK(r3.dist_sq == 0);
    CHECK(r3.witness == rv({0, 0}));
    // the regular subdifferential is exactly the origin: its support in the
    // row system vanishes in every coordinate direction
    for (std::size_t j = 0; j < 2; ++j) {
        for (int sgn : {1, -1}) {
            LpProblem p;
            p.dim = 2;
            p.objective = zero_vec(2);
            p.objective[j] = sgn;
            p.ineqs = r3.rows;
            auto lr = lp_solve(p);
            REQUIRE(lr.status == LpStatus::Optimal);
            CHECK(*lr.value == 0);
        }
    }
}

TEST_CASE("frechet distance, dc route") {
    McTree absx = McTree::max({McTree::leaf(rv({1}), 0), McTree::leaf(rv({-1}), 0)});

    DcFunction same{absx, absx};
    auto r1 = frechet_dist_dc(same, rv({0}));
    REQUIRE(r1.finite);
    CHECK(r1.dist_sq == 0);
    CHECK(r1.witness == rv({0}));

    // f = x - |x| has empty regular subdifferential at 0; its max-min twin
    // min{0, 2x} is the independent route
    DcFunction f{McTree::leaf(rv({1}), 0), absx};
    auto r2 = frechet_dist_dc(f, rv({0}));
    CHECK_FALSE(r2.finite);
    MaxMinFormula twin;
    twin.dim = 1;
    twin.affine = {{rv({0}), 0}, {rv({2}), 0}};
    twin.groups = {{0, 1}};
    auto r2m = frechet_dist_maxmin(twin, rv({0}));
    CHECK_FALSE(r2m.finite);
    REQUIRE(r2.descent.has_value());
    CHECK(eval_local(local_model(twin, rv({0})), *r2.descent) < 0);
}

TEST_CASE("clarke distance on the worked examples") {
    auto r1 = clarke_dist_maxmin(neg_abs_formula(), rv({0}));
    CHECK(r1.dist_sq == 0);
    CHECK(r1.support == std::vector<RVec>{rv({-1}), rv({1})});

    auto r2 = clarke_dist_maxmin(zero_min_formula(), rv({0, 0}));
    CHECK(r2.dist_sq == 0);
    CHECK(r2.support.size() == 3);

    // dc route on f = x - |x|: exposed differences are {0, 2}
    McTree absx = McTree::max({McTree::leaf(rv({1}), 0), McTree::leaf(rv({-1}), 0)});
    DcFunction f{McTree::leaf(rv({1}), 0), absx};
    auto r3 = clarke_dist_dc(f, rv({0}));
    CHECK(r3.support == std::vector<RVec>{rv({0}), rv({2})});
    CHECK(r3.dist_sq == 0);
}

TEST_CASE("stationarity_test polarities and verdict invariants") {
    Verdict v1 = stationarity_test(abs_formula(), rv({0}), 0, Notion::Frechet);
    CHECK(v1.yes);
    CHECK(polarity_holds(v1, Polarity::Yes));

    Verdict v2 = stationarity_test(neg_abs_formula(), rv({0}), 1000, Notion::Frechet);
    CHECK_FALSE(v2.yes);  // empty set stays at infinite distance
    CHECK_FALSE(v2.dist_finite);
    CHECK(polarity_holds(v2, Polarity::No));

    Verdict v3 = stationarity_test(neg_abs_formula(), rv({0}), Rational(1, 3), Notion::Clarke);
    CHECK(v3.yes);

    CHECK_THROWS_AS(stationarity_test(abs_formula(), rv({0}), Rational(-1), Notion::Frechet),
                    input_error);
}

TEST_CASE("is_local_min with a usable descent direction") {
    CHECK(is_local_min(abs_formula(), rv({0})));
    RVec descent;
    CHECK_FALSE(is_local_min(neg_abs_formula(), rv({0}), &descent));
    // walking along the descent direction strictly decreases the function
    const Rational step(1, 8);
    CHECK(eval_maxmin(neg_abs_formula(), scale(step, descent)) <
          eval_maxmin(neg_abs_formula(), rv({0})));
}

TEST_CASE("frechet dominates clarke on random max-min instances") {
    Rng rng(67);
    for (int trial = 0; trial < 25; ++trial) {
        MaxMinFormula f;
        f.dim = static_cast<std::size_t>(rng.integer(1, 3));
        const int pieces = static_cast<int>(rng.integer(2, 5));
        for (int j = 0; j < pieces; ++j) f.affine.push_back({rng.vec(f.dim, 3, 1), rng.rational(1, 1)});
        for (int i = rng.integer(1, 3); i-- > 0;) {
            std::vector<std::size_t> g;
            for (int j = 0; j < pieces; ++j)
                if (rng.coin()) g.push_back(static_cast<std::size_t>(j));
            if (g.empty()) g.push_back(0);
            f.groups.push_back(std::move(g));
        }
        RVec w = rng.vec(f.dim, 1, 1);
        auto fr = frechet_dist_maxmin(f, w);
        auto cl = clarke_dist_maxmin(f, w);
        if (fr.finite) {
            CHECK(fr.dist_sq >= cl.dist_sq);
            // witness soundness: <s, a - s> >= 0 would be Wolfe's condition on
            // the Clarke side; on the regular side check the row system
            for (const auto& [n, b] : fr.rows) CHECK(dot(n, fr.witness) <= b);
        }
        // Clarke witness is an exact convex combination of the support
        RVec combo = zero_vec(f.dim);
        Rational tot = 0;
        for (std::size_t i = 0; i < cl.support.size(); ++i) {
            CHECK(cl.coeffs[i] >= 0);
            combo = add(combo, scale(cl.coeffs[i], cl.support[i]));
            tot += cl.coeffs[i];
        }
        CHECK(tot == 1);
        CHECK(combo == cl.witness);
        CHECK(norm_sq(cl.witness) == cl.dist_sq);
    }
}

TEST_CASE("local-min consistency on random instances") {
    Rng rng(71);
    for (int trial = 0; trial < 15; ++trial) {
        MaxMinFormula f;
        f.dim = static_cast<std::size_t>(rng.integer(1, 2));
        const int pieces = static_cast<int>(rng.integer(2, 4));
        for (int j = 0; j < pieces; ++j) f.affine.push_back({rng.vec(f.dim, 2, 1), 0});
        f.groups.push_back({});
        for (int j = 0; j < pieces; ++j) f.groups.back().push_back(static_cast<std::size_t>(j));
        if (pieces > 1) f.groups.push_back({0});
        RVec w = zero_vec(f.dim);
        RVec descent;
        if (is_local_min(f, w, &descent)) {
            for (int s = 0; s < 12; ++s) {
                RVec u = scale(Rational(1, 64), rng.vec(f.dim, 3, 2));
                CHECK(eval_maxmin(f, add(w, u)) >= eval_maxmin(f, w));
            }
        } else {
            REQUIRE(!descent.empty());
            const Rational t(1, 1024);
            CHECK(eval_maxmin(f, add(w, scale(t, descent))) < eval_maxmin(f, w));
        }
    }
}

TEST_CASE("single_max_dc_test equals the general routes") {
    McTree habs = McTree::max({McTree::leaf(rv({1}), 0), McTree::leaf(rv({-1}), 0)});
    McTree ghalf = McTree::max(
        {McTree::leaf({Rational(1, 2)}, 0), McTree::leaf({Rational(-1, 2)}, 0)});

    Verdict v1 = single_max_dc_test(habs, ghalf, rv({0}), 0, Notion::Frechet);
    CHECK(v1.yes);
    CHECK(v1.dist_sq == 0);
    auto general = frechet_dist_dc(DcFunction{habs, ghalf}, rv({0}));
    REQUIRE(general.finite);
    CHECK(general.dist_sq == 0);

    Verdict v2 = single_max_dc_test(habs, habs, rv({7}), 0, Notion::Frechet);
    CHECK(v2.dist_sq == 0);

    McTree hx = McTree::leaf(rv({1}), 0);
    Verdict v3 = single_max_dc_test(hx, habs, rv({0}), 0, Notion::Clarke);
    CHECK(v3.dist_sq == 0);
    CHECK(v3.cert_support == std::vector<RVec>{rv({0}), rv({2})});
    MaxMinFormula twin;  // min{0, 2x}
    twin.dim = 1;
    twin.affine = {{rv({0}), 0}, {rv({2}), 0}};
    twin.groups = {{0, 1}};
    CHECK(clarke_dist_maxmin(twin, rv({0})).dist_sq == v3.dist_sq);

    McTree deep = McTree::sum({habs, habs});
    CHECK_THROWS_AS(single_max_dc_test(deep, habs, rv({0}), 0, Notion::Frechet), input_error);
}

TEST_CASE("baseline agreement on random flat dc instances") {
    Rng rng(73);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t d = static_cast<std::size_t>(rng.integer(1, 3));
        auto flat = [&](int n) {
            std::vector<McTree> leaves;
            for (int i = 0; i < n; ++i) leaves.push_back(McTree::leaf(rng.vec(d, 3, 1), rng.rational(1, 1)));
            return McTree::max(std::move(leaves));
        };
        McTree h = flat(static_cast<int>(rng.integer(1, 4)));
        McTree g = flat(static_cast<int>(rng.integer(1, 4)));
        RVec w = rng.vec(d, 1, 1);
        const Rational eps(rng.integer(0, 2), 3);
        for (Notion notion : {Notion::Frechet, Notion::Clarke}) {
            Verdict base = single_max_dc_test(h, g, w, eps, notion);
            Verdict full = stationarity_test(DcFunction{h, g}, w, eps, notion);
            CHECK(base.yes == full.yes);
            CHECK(base.dist_finite == full.dist_finite);
            if (base.dist_finite) CHECK(base.dist_sq == full.dist_sq);
        }
    }
}
