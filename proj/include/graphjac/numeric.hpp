#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace graphjac {

// Arbitrary-precision integers and rationals. All linear algebra in this
// library is exact; there is no floating point anywhere.
using Int = mpz_class;
using Rat = mpq_class;
using Vec = std::vector<Int>;

inline Int int_abs(const Int& a) { return a < 0 ? Int(-a) : a; }

inline Int int_gcd(const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Int int_lcm(const Int& a, const Int& b) {
    Int l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

// Quotient rounded to nearest integer. Keeps entries small during
// normal-form eliminations; the remainder a - q*b always satisfies
// 2|a - q*b| <= |b|.
inline Int div_round_nearest(const Int& a, const Int& b) {
    Int q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    // floor division: r ∈ [0,b) for b > 0, (b,0] for b < 0
    if (b > 0 && 2 * r > b) q += 1;
    else if (b < 0 && 2 * r < b) q += 1;
    return q;
}

// Exact division; caller guarantees divisibility.
inline Int div_exact(const Int& a, const Int& b) {
    Int q;
    mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

// Reduce a rational to its representative in [0,1).
inline Rat mod_one(const Rat& q) {
    Rat r = q;
    r.canonicalize();
    Int num = r.get_num(), den = r.get_den();
    Int m;
    mpz_fdiv_r(m.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    Rat out(m, den);
    out.canonicalize();
    return out;
}

inline std::string to_string(const Int& a) { return a.get_str(); }
inline std::string to_string(const Rat& q) { return q.get_str(); }

inline std::string to_string(const Vec& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += v[i].get_str();
    }
    return s + ")";
}

}  // namespace graphjac
