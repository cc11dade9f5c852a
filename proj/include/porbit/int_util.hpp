#pragma once

#include <porbit/error.hpp>

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace porbit {

using Int = mpz_class;
using Rat = mpq_class;

inline std::size_t bit_size(const Int& a) {
    return mpz_sizeinbase(a.get_mpz_t(), 2);
}

inline Int abs_int(const Int& a) { return a >= 0 ? a : Int(-a); }

inline Int gcd_int(const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Int lcm_int(const Int& a, const Int& b) {
    Int l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

// a^e mod m, e >= 0
inline Int pow_mod(const Int& a, const Int& e, const Int& m) {
    Int r;
    mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline Int pow_int(const Int& a, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), a.get_mpz_t(), e);
    return r;
}

// Inverse of a mod m; throws DivisionByZero when gcd(a,m) != 1.
inline Int inv_mod(const Int& a, const Int& m) {
    Int r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw Error(ErrorCode::DivisionByZero, "no inverse mod m");
    return r;
}

inline Int mod_reduce(const Int& a, const Int& m) {
    Int r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline bool is_probable_prime(const Int& n) {
    return mpz_probab_prime_p(n.get_mpz_t(), 32) != 0;
}

inline Int next_prime(const Int& n) {
    Int r;
    mpz_nextprime(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

// p-adic valuation of a nonzero integer; also returns the cofactor a / p^v.
inline long valuation_int(const Int& a, const Int& p, Int* cofactor = nullptr) {
    if (a == 0) throw Error(ErrorCode::Internal, "valuation of zero");
    Int c;
    unsigned long v = mpz_remove(c.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t());
    if (cofactor) *cofactor = c;
    return static_cast<long>(v);
}

inline long valuation_rat(const Rat& a, const Int& p) {
    if (a == 0) throw Error(ErrorCode::Internal, "valuation of zero");
    return valuation_int(a.get_num(), p) - valuation_int(a.get_den(), p);
}

inline Int exact_div(const Int& a, const Int& b) {
    Int q, r;
    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    if (r != 0) throw Error(ErrorCode::Internal, "exact_div: not divisible");
    return q;
}

namespace detail {

inline Int pollard_rho(const Int& n) {
    // n odd composite, not a prime power of interest; returns a proper factor.
    if (n % 2 == 0) return 2;
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(0xB5297A4D);
    for (;;) {
        Int x = rng.get_z_range(n - 2) + 2;
        Int y = x;
        Int c = rng.get_z_range(n - 1) + 1;
        Int d = 1;
        while (d == 1) {
            x = mod_reduce(x * x + c, n);
            y = mod_reduce(y * y + c, n);
            y = mod_reduce(y * y + c, n);
            d = gcd_int(abs_int(x - y), n);
        }
        if (d != n) return d;
    }
}

inline void factor_rec(Int n, std::map<Int, int>& out) {
    if (n == 1) return;
    if (is_probable_prime(n)) {
        out[n] += 1;
        return;
    }
    // strip small primes first
    for (unsigned long p : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul, 17ul, 19ul, 23ul,
                            29ul, 31ul, 37ul, 41ul, 43ul, 47ul}) {
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            out[Int(p)] += 1;
            n = exact_div(n, Int(p));
        }
        if (n == 1) return;
    }
    if (is_probable_prime(n)) {
        out[n] += 1;
        return;
    }
    // perfect power check keeps rho off squares
    if (mpz_perfect_power_p(n.get_mpz_t())) {
        for (unsigned long k = 2; k <= bit_size(n); ++k) {
            Int root;
            if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), k) != 0) {
                std::map<Int, int> sub;
                factor_rec(root, sub);
                for (auto& [q, e] : sub) out[q] += e * static_cast<int>(k);
                return;
            }
        }
    }
    Int d = pollard_rho(n);
    factor_rec(d, out);
    factor_rec(exact_div(n, d), out);
}

} // namespace detail

// Full factorization of |n| (n != 0) into prime -> exponent.
inline std::map<Int, int> factorize(const Int& n) {
    if (n == 0) throw Error(ErrorCode::Internal, "factorize(0)");
    std::map<Int, int> out;
    detail::factor_rec(abs_int(n), out);
    out.erase(Int(1));
    return out;
}

// Multiplicative order of a modulo prime p (a not divisible by p).
inline Int multiplicative_order(const Int& a, const Int& p) {
    Int am = mod_reduce(a, p);
    if (am == 0) throw Error(ErrorCode::DivisionByZero, "order of 0 mod p");
    Int order = p - 1;
    for (const auto& [q, e] : factorize(p - 1)) {
        for (int i = 0; i < e; ++i) {
            Int cand = exact_div(order, q);
            if (pow_mod(am, cand, p) == 1)
                order = cand;
            else
                break;
        }
    }
    return order;
}

inline Int binomial(const Int& n, unsigned long k) {
    Int r;
    mpz_bin_ui(r.get_mpz_t(), n.get_mpz_t(), k);
    return r;
}

// v_p(k!) by Legendre's formula.
inline long factorial_valuation(unsigned long k, const Int& p) {
    long v = 0;
    Int q = p;
    while (q <= static_cast<long>(k)) {
        v += static_cast<long>(Int(Int(k) / q).get_ui());
        q *= p;
    }
    return v;
}

inline Rat make_rat(const Int& num, const Int& den) {
    if (den == 0) throw Error(ErrorCode::DivisionByZero, "rational with zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

} // namespace porbit
