#pragma once

#include <porbit/error.hpp>
#include <porbit/int_util.hpp>
#include <porbit/poly.hpp>

#include <string>
#include <utility>
#include <vector>

namespace porbit {

// A point of the projective line over Q in homogeneous coordinates [a : b],
// stored with gcd(a, b) = 1 and b >= 0 (b = 0 forces a = 1, the point at
// infinity).
struct ProjPoint {
    Int a = 0;
    Int b = 1;

    ProjPoint() = default;

    ProjPoint(Int a_, Int b_) : a(std::move(a_)), b(std::move(b_)) {
        if (a == 0 && b == 0)
            throw Error(ErrorCode::IndeterminatePoint, "[0:0] is not a point");
        Int g = gcd_int(a, b);
        a = exact_div(a, g);
        b = exact_div(b, g);
        if (b < 0) {
            a = -a;
            b = -b;
        }
        if (b == 0) a = 1;
    }

    static ProjPoint infinity() { return ProjPoint(1, 0); }
    static ProjPoint from_rat(const Rat& r) { return ProjPoint(r.get_num(), r.get_den()); }

    bool is_infinity() const { return b == 0; }

    Rat to_rat() const {
        if (is_infinity()) throw Error(ErrorCode::Internal, "to_rat at infinity");
        return make_rat(a, b);
    }

    std::size_t height_bits() const { return std::max(bit_size(a), bit_size(b)); }

    friend bool operator==(const ProjPoint& x, const ProjPoint& y) {
        return x.a == y.a && x.b == y.b;
    }
    friend bool operator!=(const ProjPoint& x, const ProjPoint& y) { return !(x == y); }
    friend bool operator<(const ProjPoint& x, const ProjPoint& y) {
        return x.a < y.a || (x.a == y.a && x.b < y.b);
    }

    std::string to_string() const { return a.get_str() + "/" + b.get_str(); }
};

// A rational self-map of P^1 over Q as a coprime primitive integer pair
// p(x)/q(x). The `normalized` flag records deg p = deg q + 1, i.e. infinity
// is a fixed point and not superattracting.
struct RationalMap {
    IntPoly p;
    IntPoly q;
    bool normalized = false;

    int degree() const {
        return std::max(poly::degree(p), poly::degree(q));
    }

    bool is_identity() const {
        return p == IntPoly{Int(0), Int(1)} && q == IntPoly{Int(1)};
    }

    friend bool operator==(const RationalMap& f, const RationalMap& g) {
        return f.p == g.p && f.q == g.q;
    }

    std::string to_string() const {
        return "(" + poly::to_string(p) + ") / (" + poly::to_string(q) + ")";
    }
};

struct FixedPointData {
    IntPoly fp_poly;   // p(x) - x q(x); roots are the finite fixed points
    IntPoly wronskian; // p'q - q'p; roots are the finite critical points
    Int lc_p;
    Int lc_fp;
    Int lc_w;
    int deg_fp = -1;
    int deg_w = -1;
};

struct BadPrimeSet {
    std::vector<Int> primes; // sorted, deduplicated
    std::vector<std::pair<std::string, Int>> generators;

    // Membership by divisibility of a generator. Independent of the factored
    // `primes` list, so prime-search filtering does not rely on factoring.
    bool contains(const Int& p) const {
        for (const auto& [label, g] : generators)
            if (g != 0 && mpz_divisible_p(g.get_mpz_t(), p.get_mpz_t())) return true;
        return false;
    }

    // Strips every prime of the set out of n; what survives is the part of n
    // supported outside the bad primes.
    Int cofactor_outside(Int n) const {
        n = abs_int(n);
        if (n == 0) return 0;
        for (const auto& p : primes) {
            Int c;
            mpz_remove(c.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
            n = c;
        }
        return n;
    }
};

struct Mobius {
    Int a, b, c, d; // x -> (a x + b) / (c x + d)

    Int det() const { return a * d - b * c; }

    static Mobius identity() { return {1, 0, 0, 1}; }
    static Mobius inversion() { return {0, 1, 1, 0}; }
    // sends the affine point u/v to infinity
    static Mobius send_to_infinity(const ProjPoint& r) {
        return {0, 1, r.b, Int(-r.a)};
    }

    Mobius inverse() const { return {d, Int(-b), Int(-c), a}; }

    ProjPoint apply(const ProjPoint& x) const {
        return ProjPoint(a * x.a + b * x.b, c * x.a + d * x.b);
    }
};

struct SizeCaps {
    std::size_t max_coeff_bits = std::size_t(1) << 20;
};

namespace detail {

inline std::size_t max_coeff_bits(const IntPoly& f) {
    std::size_t m = 0;
    for (const Int& c : f)
        if (c != 0) m = std::max(m, bit_size(c));
    return m;
}

// Builds a map from a pair already known to be coprime up to content.
inline RationalMap make_map_unchecked(IntPoly p, IntPoly q) {
    poly::trim(p);
    poly::trim(q);
    if (q.empty()) throw Error(ErrorCode::Internal, "map with zero denominator");
    Int joint = gcd_int(poly::content(p), poly::content(q));
    if (poly::lc(q) < 0) joint = -joint;
    if (joint != 1) {
        p = poly::divexact_scalar(p, joint);
        q = poly::divexact_scalar(q, joint);
    }
    RationalMap h;
    h.normalized = (poly::degree(p) == poly::degree(q) + 1);
    h.p = std::move(p);
    h.q = std::move(q);
    return h;
}

} // namespace detail

// Reduce p_raw/q_raw to the canonical coprime primitive integer form.
inline RationalMap normalize_map(const std::vector<Rat>& p_raw, const std::vector<Rat>& q_raw) {
    auto [p, q] = poly::clear_denominators(p_raw, q_raw);
    if (q.empty())
        throw Error(ErrorCode::DegenerateMap, "denominator is identically zero");
    if (!p.empty()) {
        IntPoly g = poly::gcd(p, q);
        if (poly::degree(g) > 0) {
            p = poly::divexact(p, g);
            q = poly::divexact(q, g);
        }
    }
    if (poly::degree(p) < 1 && poly::degree(q) < 1)
        throw Error(ErrorCode::DegenerateMap, "map is constant");
    RationalMap h = detail::make_map_unchecked(std::move(p), std::move(q));
    if (poly::resultant(h.p, h.q) == 0)
        throw Error(ErrorCode::SharedFactor, "reduced pair still shares a factor");
    return h;
}

inline RationalMap map_from_int(IntPoly p, IntPoly q) {
    std::vector<Rat> pr, qr;
    for (const Int& c : p) pr.emplace_back(c);
    for (const Int& c : q) qr.emplace_back(c);
    return normalize_map(pr, qr);
}

// Projective evaluation through the degree-max homogenization.
inline ProjPoint evaluate(const RationalMap& h, const ProjPoint& x) {
    int d = h.degree();
    Int P = poly::eval_hom(h.p, x.a, x.b, d);
    Int Q = poly::eval_hom(h.q, x.a, x.b, d);
    if (P == 0 && Q == 0)
        throw Error(ErrorCode::IndeterminatePoint,
                    "homogenized pair vanished at " + x.to_string());
    return ProjPoint(std::move(P), std::move(Q));
}

// h2 after h1. Coprimality of the result (up to content) follows from
// coprimality of the inputs, so no polynomial gcd is taken here.
inline RationalMap compose(const RationalMap& h2, const RationalMap& h1,
                           const SizeCaps& caps = {}) {
    int d2 = h2.degree();
    std::vector<IntPoly> ppow(static_cast<std::size_t>(d2) + 1), qpow(static_cast<std::size_t>(d2) + 1);
    ppow[0] = {Int(1)};
    qpow[0] = {Int(1)};
    for (int i = 1; i <= d2; ++i) {
        ppow[i] = poly::mul(ppow[i - 1], h1.p);
        qpow[i] = poly::mul(qpow[i - 1], h1.q);
    }
    IntPoly num, den;
    for (int i = 0; i <= poly::degree(h2.p); ++i) {
        if (h2.p[i] == 0) continue;
        num = poly::add(num, poly::scale(poly::mul(ppow[i], qpow[d2 - i]), h2.p[i]));
    }
    for (int j = 0; j <= poly::degree(h2.q); ++j) {
        if (h2.q[j] == 0) continue;
        den = poly::add(den, poly::scale(poly::mul(ppow[j], qpow[d2 - j]), h2.q[j]));
    }
    RationalMap r = detail::make_map_unchecked(std::move(num), std::move(den));
    if (detail::max_coeff_bits(r.p) > caps.max_coeff_bits ||
        detail::max_coeff_bits(r.q) > caps.max_coeff_bits)
        throw Error(ErrorCode::SizeLimit, "composition exceeded the coefficient bit cap");
    return r;
}

inline RationalMap iterate(const RationalMap& h, long k, const SizeCaps& caps = {}) {
    if (k < 1) throw Error(ErrorCode::ParseError, "iterate needs k >= 1");
    RationalMap r = h;
    for (long i = 1; i < k; ++i) r = compose(h, r, caps);
    return r;
}

inline RationalMap mobius_as_map(const Mobius& phi) {
    return detail::make_map_unchecked({phi.b, phi.a}, {phi.d, phi.c});
}

// phi o h o phi^{-1}
inline RationalMap conjugate(const RationalMap& h, const Mobius& phi, const SizeCaps& caps = {}) {
    if (phi.det() == 0)
        throw Error(ErrorCode::SingularMobius, "conjugation matrix has det 0");
    RationalMap r = compose(mobius_as_map(phi), compose(h, mobius_as_map(phi.inverse()), caps), caps);
    if (r.degree() != h.degree())
        throw Error(ErrorCode::Internal, "conjugation changed the degree");
    return r;
}

// p'q - q'p for any map (not only normalized ones).
inline IntPoly wronskian_poly(const RationalMap& h) {
    return poly::sub(poly::mul(poly::derivative(h.p), h.q),
                     poly::mul(poly::derivative(h.q), h.p));
}

inline FixedPointData fixed_point_data(const RationalMap& h) {
    if (!h.normalized)
        throw Error(ErrorCode::NotNormalized, "fixed-point data needs deg p = deg q + 1");
    FixedPointData d;
    d.fp_poly = poly::sub(h.p, poly::shift_up(h.q, 1));
    if (d.fp_poly.empty())
        throw Error(ErrorCode::DegenerateMap, "identity map has no fixed-point polynomial");
    d.wronskian = wronskian_poly(h);
    if (d.wronskian.empty())
        throw Error(ErrorCode::DegenerateMap, "constant map has zero wronskian");
    d.lc_p = poly::lc(h.p);
    d.lc_fp = poly::lc(d.fp_poly);
    d.lc_w = poly::lc(d.wronskian);
    d.deg_fp = poly::degree(d.fp_poly);
    d.deg_w = poly::degree(d.wronskian);
    return d;
}

// Exact multiplier h'(x0) at a fixed point. Infinity is handled through the
// u = 1/x chart.
inline Rat multiplier(const RationalMap& h, const ProjPoint& x0) {
    if (evaluate(h, x0) != x0)
        throw Error(ErrorCode::NotFixed, x0.to_string() + " is not fixed");
    if (x0.is_infinity()) {
        RationalMap hc = conjugate(h, Mobius::inversion());
        ProjPoint zero(0, 1);
        // 1/x swaps infinity and 0; the multiplier is conjugation invariant.
        if (evaluate(hc, zero) != zero)
            throw Error(ErrorCode::Internal, "chart swap lost the fixed point");
        return multiplier(hc, zero);
    }
    Rat x = x0.to_rat();
    Rat qv = poly::eval_rat(h.q, x);
    if (qv == 0)
        throw Error(ErrorCode::Internal, "fixed affine point on the polar divisor");
    return poly::eval_rat(wronskian_poly(h), x) / (qv * qv);
}

enum class FixedPointClass { Indifferent, Attracting, Superattracting };

inline const char* fixed_point_class_name(FixedPointClass c) {
    switch (c) {
        case FixedPointClass::Indifferent: return "Indifferent";
        case FixedPointClass::Attracting: return "Attracting";
        case FixedPointClass::Superattracting: return "Superattracting";
    }
    return "Unknown";
}

inline FixedPointClass classify_fixed_point(const RationalMap& h, const ProjPoint& x0,
                                            const Int& prime) {
    Rat lambda = multiplier(h, x0);
    if (lambda == 0) return FixedPointClass::Superattracting;
    long v = valuation_rat(lambda, prime);
    if (v < 0)
        throw Error(ErrorCode::MultiplierNotIntegral,
                    "multiplier has negative valuation at " + prime.get_str());
    return v == 0 ? FixedPointClass::Indifferent : FixedPointClass::Attracting;
}

namespace detail {

inline void push_generator(std::vector<std::pair<std::string, Int>>& gens,
                           const std::string& label, const Int& value) {
    if (value != 0) gens.emplace_back(label, value);
}

inline void push_disc_generators(std::vector<std::pair<std::string, Int>>& gens,
                                 const std::string& label, const IntPoly& f) {
    if (poly::degree(f) <= 1) return;
    Int d = poly::discriminant(f);
    if (d != 0) {
        gens.emplace_back("disc_" + label, d);
        return;
    }
    // squareful: fall back to the squarefree part, keep the repeated-factor
    // content visible as its own generator
    IntPoly sf = poly::squarefree_part(f);
    gens.emplace_back("disc_sqfree_" + label, poly::discriminant(sf));
    IntPoly g = poly::gcd(f, poly::derivative(f));
    Int cg = poly::content(g);
    if (cg > 1) gens.emplace_back("content_gcd_" + label, cg);
}

} // namespace detail

inline BadPrimeSet bad_primes_from_generators(
    std::vector<std::pair<std::string, Int>> gens) {
    BadPrimeSet out;
    std::map<Int, int> all;
    for (auto& [label, g] : gens) {
        if (g == 0) continue;
        Int a = abs_int(g);
        if (a == 1) continue;
        for (auto& [pr, e] : factorize(a)) all[pr] += e;
    }
    for (auto& [pr, e] : all) out.primes.push_back(pr);
    out.generators = std::move(gens);
    return out;
}

// The finite prime set outside of which the orbit machinery is clean: primes
// dividing 6, a leading or trailing coefficient, a pairwise resultant, or a
// discriminant of p, q, the fixed-point polynomial, or the wronskian, plus
// the coordinates of c and the denominator value at c.
inline BadPrimeSet bad_primes(const RationalMap& h, const ProjPoint& c) {
    if (!h.normalized)
        throw Error(ErrorCode::NotNormalized, "bad_primes needs a normalized map");
    FixedPointData fd = fixed_point_data(h);
    std::vector<std::pair<std::string, Int>> gens;
    gens.emplace_back("six", Int(6));
    detail::push_generator(gens, "lc_p", poly::lc(h.p));
    detail::push_generator(gens, "lc_q", poly::lc(h.q));
    detail::push_generator(gens, "lc_fp", fd.lc_fp);
    detail::push_generator(gens, "lc_w", fd.lc_w);
    detail::push_generator(gens, "low_p", poly::low_coeff(h.p));
    detail::push_generator(gens, "low_q", poly::low_coeff(h.q));
    detail::push_generator(gens, "low_fp", poly::low_coeff(fd.fp_poly));
    detail::push_generator(gens, "low_w", poly::low_coeff(fd.wronskian));

    const IntPoly* polys[4] = {&h.p, &h.q, &fd.fp_poly, &fd.wronskian};
    const char* names[4] = {"p", "q", "fp", "w"};
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            Int r = poly::resultant(*polys[i], *polys[j]);
            // zero resultants (shared factors) carry no prime information;
            // the product discriminant below covers their cross differences
            detail::push_generator(gens, std::string("res_") + names[i] + "_" + names[j], r);
        }
    for (int i = 0; i < 4; ++i) detail::push_disc_generators(gens, names[i], *polys[i]);

    // all pairwise root differences across the four polynomials in one shot
    IntPoly prod = poly::mul(poly::mul(h.p, h.q), poly::mul(fd.fp_poly, fd.wronskian));
    IntPoly prod_sf = poly::squarefree_part(prod);
    if (poly::degree(prod_sf) >= 2)
        detail::push_generator(gens, "disc_sqfree_pqfw", poly::discriminant(prod_sf));

    detail::push_generator(gens, "c_num", c.a);
    detail::push_generator(gens, "c_den", c.b);
    detail::push_generator(gens, "q_at_c",
                           poly::eval_hom(h.q, c.a, c.b, poly::degree(h.q)));
    return bad_primes_from_generators(std::move(gens));
}

} // namespace porbit
