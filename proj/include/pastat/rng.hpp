// Deterministic randomness for property checks and sweep generators.  All
// random draws in the project flow through one named, seeded generator; the
// PASTAT_SEED environment variable overrides the default seed.

#pragma once

#include "pastat/rational.hpp"

#include <cstdint>
#include <cstdlib>
#include <random>

namespace pastat {

inline std::uint64_t default_seed() {
    if (const char* s = std::getenv("PASTAT_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(s, &end, 10);
        if (end == s || *end != '\0')
            throw input_error("PASTAT_SEED must be an unsigned integer");
        return v;
    }
    return 20250810ull;
}

class Rng {
public:
    Rng() : gen_(default_seed()) {}
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    long integer(long lo, long hi) {
        return std::uniform_int_distribution<long>(lo, hi)(gen_);
    }

    Rational rational(long max_num = 9, long max_den = 4) {
        return Rational(integer(-max_num, max_num), integer(1, max_den));
    }

    Rational positive_rational(long max_num = 9, long max_den = 4) {
        return Rational(integer(1, max_num), integer(1, max_den));
    }

    RVec vec(std::size_t d, long max_num = 9, long max_den = 4) {
        RVec v(d);
        for (auto& x : v) x = rational(max_num, max_den);
        return v;
    }

    RVec nonzero_vec(std::size_t d, long max_num = 9, long max_den = 4) {
        for (;;) {
            RVec v = vec(d, max_num, max_den);
            if (!is_zero(v)) return v;
        }
    }

    bool coin() { return integer(0, 1) == 1; }

private:
    std::mt19937_64 gen_;
};

}  // namespace pastat
