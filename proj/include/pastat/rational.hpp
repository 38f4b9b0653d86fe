// Exact rational scalars, vectors and small dense linear algebra.
//
// Every quantity in this library is an arbitrary-precision rational (GMP via
// Boost.Multiprecision); nothing is ever rounded.  Vectors are plain
// std::vector so they compose with the standard library; the handful of
// operations the solvers need live here as free functions.

#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pastat {

using Int = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

using RVec = std::vector<Rational>;
using RMat = std::vector<RVec>;
using ZVec = std::vector<Int>;

/// Error in user-supplied data (files, CLI arguments, malformed problems).
class input_error : public std::runtime_error {
public:
    explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Parsing and formatting.  The wire format is "p" or "p/q" with q > 0 and no
// decimal points; parsing is strict so corrupt files fail loudly.
// ---------------------------------------------------------------------------

inline bool is_integer_token(const std::string& s, std::size_t begin, std::size_t end) {
    if (begin >= end) return false;
    std::size_t i = begin;
    if (s[i] == '-') ++i;
    if (i >= end) return false;
    for (; i < end; ++i)
        if (s[i] < '0' || s[i] > '9') return false;
    return true;
}

inline Rational parse_rational(const std::string& s) {
    const std::size_t slash = s.find('/');
    if (slash == std::string::npos) {
        if (!is_integer_token(s, 0, s.size()))
            throw input_error("not a rational literal: '" + s + "'");
        return Rational(Int(s));
    }
    if (!is_integer_token(s, 0, slash) || !is_integer_token(s, slash + 1, s.size()))
        throw input_error("not a rational literal: '" + s + "'");
    Int num(s.substr(0, slash));
    Int den(s.substr(slash + 1));
    if (den <= 0)
        throw input_error("denominator must be positive in '" + s + "'");
    return Rational(num, den);  // canonicalizes to lowest terms
}

inline std::string format_rational(const Rational& q) {
    return q.str();  // GMP canonical form prints "p" or "p/q"
}

/// Bit length of the larger of numerator/denominator; 0 for zero.
inline unsigned bit_length(const Rational& q) {
    if (q == 0) return 0;
    Int n = abs(numerator(q));
    Int d = denominator(q);
    unsigned bn = static_cast<unsigned>(msb(n)) + 1;
    unsigned bd = static_cast<unsigned>(msb(d)) + 1;
    return bn > bd ? bn : bd;
}

// ---------------------------------------------------------------------------
// Vector helpers.
// ---------------------------------------------------------------------------

inline RVec zero_vec(std::size_t d) { return RVec(d, Rational(0)); }

inline bool is_zero(const RVec& v) {
    for (const auto& x : v)
        if (x != 0) return false;
    return true;
}

inline bool is_zero(const ZVec& v) {
    for (const auto& x : v)
        if (x != 0) return false;
    return true;
}

inline Rational dot(const RVec& a, const RVec& b) {
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Int dot(const ZVec& a, const ZVec& b) {
    Int s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Rational dot(const ZVec& a, const RVec& b) {
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0) s += Rational(a[i]) * b[i];
    return s;
}

inline RVec add(const RVec& a, const RVec& b) {
    RVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline RVec sub(const RVec& a, const RVec& b) {
    RVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline ZVec sub(const ZVec& a, const ZVec& b) {
    ZVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline RVec scale(const Rational& t, const RVec& a) {
    RVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = t * a[i];
    return r;
}

inline Rational norm_sq(const RVec& a) { return dot(a, a); }

inline bool lex_less(const RVec& a, const RVec& b) {
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (a[i] > b[i]) return false;
    }
    return a.size() < b.size();
}

inline bool lex_less(const ZVec& a, const ZVec& b) {
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (a[i] > b[i]) return false;
    }
    return a.size() < b.size();
}

inline RVec to_rvec(const ZVec& v) {
    RVec r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = Rational(v[i]);
    return r;
}

/// Scale a rational vector by a positive factor to a primitive integer vector
/// (entries coprime).  Zero vectors map to zero.
inline ZVec primitive(const RVec& v) {
    Int l = 1;
    for (const auto& x : v) l = lcm(l, denominator(x));
    ZVec z(v.size());
    Int g = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        z[i] = numerator(v[i]) * (l / denominator(v[i]));
        g = gcd(g, z[i]);
    }
    if (g > 1)
        for (auto& x : z) x /= g;
    return z;
}

inline ZVec primitive(const ZVec& v) {
    Int g = 0;
    for (const auto& x : v) g = gcd(g, x);
    ZVec z = v;
    if (g > 1)
        for (auto& x : z) x /= g;
    return z;
}

/// Primitive vector with the first nonzero entry positive.  Identifies the
/// hyperplane {u : <v,u> = 0} regardless of orientation or scale.
inline ZVec hyperplane_canonical(const RVec& v) {
    ZVec z = primitive(v);
    for (const auto& x : z) {
        if (x > 0) break;
        if (x < 0) {
            for (auto& y : z) y = -y;
            break;
        }
    }
    return z;
}

inline ZVec hyperplane_canonical(const ZVec& v) {
    ZVec z = primitive(v);
    for (const auto& x : z) {
        if (x > 0) break;
        if (x < 0) {
            for (auto& y : z) y = -y;
            break;
        }
    }
    return z;
}

// ---------------------------------------------------------------------------
// Dense exact linear algebra (sizes here are tiny: dimension <= ~10).
// ---------------------------------------------------------------------------

/// Reduced row echelon form in place; returns pivot column per row.
inline std::vector<std::size_t> rref(RMat& m) {
    std::vector<std::size_t> pivots;
    if (m.empty()) return pivots;
    const std::size_t rows = m.size(), cols = m[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && m[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[r]);
        const Rational inv = Rational(1) / m[r][c];
        for (std::size_t j = c; j < cols; ++j) m[r][j] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            const Rational f = m[i][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    m.resize(r);
    return pivots;
}

/// Solve the square system A x = b exactly; empty optional if singular.
inline std::optional<RVec> solve_square(RMat a, RVec b) {
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i) a[i].push_back(b[i]);
    const auto pivots = rref(a);
    if (pivots.size() != n) return std::nullopt;
    for (std::size_t i = 0; i < n; ++i)
        if (pivots[i] != i) return std::nullopt;  // rank deficiency in A itself
    RVec x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = a[i][n];
    return x;
}

/// Basis of the null space {x : A x = 0}.
inline std::vector<RVec> kernel_basis(RMat a, std::size_t cols) {
    const auto pivots = rref(a);
    std::vector<bool> is_pivot(cols, false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<RVec> basis;
    for (std::size_t c = 0; c < cols; ++c) {
        if (is_pivot[c]) continue;
        RVec v = zero_vec(cols);
        v[c] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -a[r][c];
        basis.push_back(std::move(v));
    }
    return basis;
}

inline std::size_t rank(RMat a) { return rref(a).size(); }

}  // namespace pastat
