#include "pastat/lp.hpp"
#include "pastat/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace pastat;

namespace {

LpProblem make_1d(Rational c) {
    LpProblem p;
    p.dim = 1;
    p.objective = {c};
    return p;
}

bool satisfies(const LpProblem& p, const RVec& x) {
    for (const auto& [a, b] : p.ineqs)
        if (dot(a, x) > b) return false;
    for (const auto& [a, b] : p.eqs)
        if (dot(a, x) != b) return false;
    return true;
}

bool farkas_valid(const LpProblem& p, const LpResult& r) {
    REQUIRE(r.farkas_ineq.has_value());
    REQUIRE(r.farkas_eq.has_value());
    const RVec& y = *r.farkas_ineq;
    const RVec& z = *r.farkas_eq;
    for (const auto& v : y)
        if (v < 0) return false;
    RVec combo = zero_vec(p.dim);
    Rational rhs = 0;
    for (std::size_t i = 0; i < p.ineqs.size(); ++i) {
        combo = add(combo, scale(y[i], p.ineqs[i].first));
        rhs += y[i] * p.ineqs[i].second;
    }
    for (std::size_t i = 0; i < p.eqs.size(); ++i) {
        combo = add(combo, scale(z[i], p.eqs[i].first));
        rhs += z[i] * p.eqs[i].second;
    }
    return is_zero(combo) && rhs < 0;
}

}  // namespace

TEST_CASE("lp: one-constraint optimum") {
    LpProblem p = make_1d(1);
    p.ineqs.push_back({{Rational(1)}, Rational(3)});
    p.ineqs.push_back({{Rational(-1)}, Rational(0)});
    auto r = lp_solve(p);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK((*r.point)[0] == 3);
    CHECK(*r.value == 3);
}

TEST_CASE("lp: contradictory bounds are infeasible with a Farkas certificate") {
    LpProblem p = make_1d(0);
    p.ineqs.push_back({{Rational(1)}, Rational(-1)});   // x <= -1
    p.ineqs.push_back({{Rational(-1)}, Rational(-1)});  // -x <= -1
    auto r = lp_solve(p);
    REQUIRE(r.status == LpStatus::Infeasible);
    CHECK(farkas_valid(p, r));
}

TEST_CASE("lp: open ray is unbounded") {
    LpProblem p = make_1d(1);
    p.ineqs.push_back({{Rational(-1)}, Rational(0)});  // x >= 0
    auto r = lp_solve(p);
    CHECK(r.status == LpStatus::Unbounded);
}

TEST_CASE("lp: equality rows and mixed systems") {
    LpProblem p;
    p.dim = 2;
    p.objective = {Rational(1), Rational(1)};
    p.eqs.push_back({{Rational(1), Rational(-1)}, Rational(1)});   // x - y = 1
    p.ineqs.push_back({{Rational(1), Rational(0)}, Rational(4)});  // x <= 4
    p.ineqs.push_back({{Rational(0), Rational(-1)}, Rational(0)});
    auto r = lp_solve(p);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(*r.value == 7);
    CHECK(satisfies(p, *r.point));
}

TEST_CASE("lp: dimension mismatch is an input error") {
    LpProblem p = make_1d(1);
    p.ineqs.push_back({{Rational(1), Rational(2)}, Rational(3)});
    CHECK_THROWS_AS(lp_solve(p), input_error);
}

TEST_CASE("lp: random boxes with cuts, exact feasibility of the optimum") {
    Rng rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t d = static_cast<std::size_t>(rng.integer(1, 3));
        LpProblem p;
        p.dim = d;
        p.objective = rng.vec(d);
        for (std::size_t j = 0; j < d; ++j) {
            RVec e = zero_vec(d), me = zero_vec(d);
            e[j] = 1;
            me[j] = -1;
            p.ineqs.push_back({e, Rational(rng.integer(0, 5))});
            p.ineqs.push_back({me, Rational(rng.integer(0, 5))});
        }
        for (int extra = rng.integer(0, 3); extra-- > 0;)
            p.ineqs.push_back({rng.vec(d), rng.rational(6, 3)});
        auto r = lp_solve(p);
        if (r.status == LpStatus::Optimal) {
            CHECK(satisfies(p, *r.point));
            CHECK(*r.value == dot(p.objective, *r.point));
        } else if (r.status == LpStatus::Infeasible) {
            CHECK(farkas_valid(p, r));
        } else {
            FAIL("bounded box reported unbounded");
        }
    }
}

TEST_CASE("lp: determinism") {
    LpProblem p;
    p.dim = 2;
    p.objective = {Rational(2), Rational(3)};
    p.ineqs.push_back({{Rational(1), Rational(1)}, Rational(4)});
    p.ineqs.push_back({{Rational(1), Rational(-1)}, Rational(2)});
    p.ineqs.push_back({{Rational(-1), Rational(0)}, Rational(0)});
    p.ineqs.push_back({{Rational(0), Rational(-1)}, Rational(0)});
    auto r1 = lp_solve(p);
    auto r2 = lp_solve(p);
    REQUIRE(r1.status == LpStatus::Optimal);
    CHECK(*r1.point == *r2.point);
    CHECK(*r1.value == *r2.value);
}
