#pragma once

#include <porbit/error.hpp>
#include <porbit/int_util.hpp>

#include <algorithm>
#include <string>
#include <vector>

namespace porbit {

// Dense univariate polynomials over Z, coefficients in ascending degree.
// The zero polynomial is the empty vector; nonzero polynomials carry no
// trailing zero coefficients.
using IntPoly = std::vector<Int>;

namespace poly {

inline void trim(IntPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline IntPoly trimmed(IntPoly f) {
    trim(f);
    return f;
}

inline int degree(const IntPoly& f) {
    return static_cast<int>(f.size()) - 1;
}

inline bool is_zero(const IntPoly& f) { return f.empty(); }

inline const Int& lc(const IntPoly& f) {
    if (f.empty()) throw Error(ErrorCode::Internal, "lc of zero polynomial");
    return f.back();
}

// Lowest-index nonzero coefficient.
inline const Int& low_coeff(const IntPoly& f) {
    for (const Int& c : f)
        if (c != 0) return c;
    throw Error(ErrorCode::Internal, "low_coeff of zero polynomial");
}

inline Int content(const IntPoly& f) {
    Int g = 0;
    for (const Int& c : f) {
        g = gcd_int(g, c);
        if (g == 1) break;
    }
    return g;
}

inline IntPoly scale(const IntPoly& f, const Int& k) {
    if (k == 0) return {};
    IntPoly r = f;
    for (Int& c : r) c *= k;
    return r;
}

inline IntPoly divexact_scalar(const IntPoly& f, const Int& k) {
    IntPoly r = f;
    for (Int& c : r) c = exact_div(c, k);
    return r;
}

// Content removed and leading coefficient made positive.
inline IntPoly primitive_part(const IntPoly& f) {
    if (f.empty()) return {};
    Int c = content(f);
    if (lc(f) < 0) c = -c;
    return divexact_scalar(f, c);
}

inline IntPoly neg(const IntPoly& f) {
    IntPoly r = f;
    for (Int& c : r) c = -c;
    return r;
}

inline IntPoly add(const IntPoly& a, const IntPoly& b) {
    IntPoly r(std::max(a.size(), b.size()), Int(0));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    trim(r);
    return r;
}

inline IntPoly sub(const IntPoly& a, const IntPoly& b) {
    IntPoly r(std::max(a.size(), b.size()), Int(0));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    trim(r);
    return r;
}

inline IntPoly mul(const IntPoly& a, const IntPoly& b) {
    if (a.empty() || b.empty()) return {};
    IntPoly r(a.size() + b.size() - 1, Int(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (b[j] == 0) continue;
            r[i + j] += a[i] * b[j];
        }
    }
    trim(r);
    return r;
}

// Multiply by x^k.
inline IntPoly shift_up(const IntPoly& f, std::size_t k) {
    if (f.empty()) return {};
    IntPoly r(f.size() + k, Int(0));
    for (std::size_t i = 0; i < f.size(); ++i) r[i + k] = f[i];
    return r;
}

inline IntPoly derivative(const IntPoly& f) {
    if (f.size() <= 1) return {};
    IntPoly r(f.size() - 1);
    for (std::size_t i = 1; i < f.size(); ++i) r[i - 1] = f[i] * Int(i);
    trim(r);
    return r;
}

inline Int eval_int(const IntPoly& f, const Int& x) {
    Int acc = 0;
    for (std::size_t i = f.size(); i-- > 0;) acc = acc * x + f[i];
    return acc;
}

inline Rat eval_rat(const IntPoly& f, const Rat& x) {
    Rat acc = 0;
    for (std::size_t i = f.size(); i-- > 0;) acc = acc * x + f[i];
    return acc;
}

inline Int eval_mod(const IntPoly& f, const Int& x, const Int& m) {
    Int acc = 0;
    for (std::size_t i = f.size(); i-- > 0;) acc = mod_reduce(acc * x + f[i], m);
    return acc;
}

// Degree-d homogenization evaluated at (a, b): sum f_i a^i b^{d-i}.
// Requires d >= deg(f).
inline Int eval_hom(const IntPoly& f, const Int& a, const Int& b, int d) {
    if (d < degree(f)) throw Error(ErrorCode::Internal, "eval_hom: d below degree");
    if (f.empty()) return 0;
    std::vector<Int> bpow(static_cast<std::size_t>(d) + 1);
    bpow[0] = 1;
    for (int i = 1; i <= d; ++i) bpow[i] = bpow[i - 1] * b;
    Int acc = 0;
    for (std::size_t i = f.size(); i-- > 0;)
        acc = acc * a + f[i] * bpow[d - static_cast<int>(i)];
    return acc;
}

inline Int eval_hom_mod(const IntPoly& f, const Int& a, const Int& b, int d, const Int& m) {
    if (d < degree(f)) throw Error(ErrorCode::Internal, "eval_hom: d below degree");
    if (f.empty()) return 0;
    std::vector<Int> bpow(static_cast<std::size_t>(d) + 1);
    bpow[0] = 1;
    for (int i = 1; i <= d; ++i) bpow[i] = mod_reduce(bpow[i - 1] * b, m);
    Int acc = 0;
    for (std::size_t i = f.size(); i-- > 0;)
        acc = mod_reduce(acc * a + f[i] * bpow[d - static_cast<int>(i)], m);
    return acc;
}

// Pseudo-remainder: lc(g)^(deg f - deg g + 1) * f = q*g + r with deg r < deg g.
inline IntPoly pseudo_rem(IntPoly f, const IntPoly& g) {
    if (g.empty()) throw Error(ErrorCode::DivisionByZero, "pseudo_rem by zero");
    int dg = degree(g);
    const Int& gl = lc(g);
    while (degree(f) >= dg) {
        int df = degree(f);
        Int c = f.back();
        for (Int& fc : f) fc *= gl;
        for (int i = 0; i <= dg; ++i) f[df - dg + i] -= c * g[i];
        trim(f);
        if (degree(f) == df) throw Error(ErrorCode::Internal, "pseudo_rem: no degree drop");
    }
    return f;
}

// Primitive polynomial gcd over Z (primitive PRS). Result is primitive with
// positive leading coefficient; gcd with zero returns the other argument's
// primitive part.
inline IntPoly gcd(IntPoly a, IntPoly b) {
    trim(a);
    trim(b);
    if (a.empty()) return b.empty() ? IntPoly{} : primitive_part(b);
    if (b.empty()) return primitive_part(a);
    Int cont = gcd_int(content(a), content(b));
    a = primitive_part(a);
    b = primitive_part(b);
    if (degree(a) < degree(b)) std::swap(a, b);
    while (!b.empty()) {
        IntPoly r = pseudo_rem(a, b);
        a = std::move(b);
        b = r.empty() ? IntPoly{} : primitive_part(r);
    }
    return cont == 1 ? a : scale(a, cont);
}

// Exact polynomial division; throws if g does not divide f over Z up to
// content (i.e. f = q*g with q over Q having integer primitive scaling).
// Used only where divisibility is a theorem.
inline IntPoly divexact(const IntPoly& f, const IntPoly& g) {
    if (g.empty()) throw Error(ErrorCode::DivisionByZero, "divexact by zero");
    if (f.empty()) return {};
    int df = degree(f), dg = degree(g);
    if (df < dg) throw Error(ErrorCode::Internal, "divexact: degree underflow");
    IntPoly r = f;
    IntPoly q(static_cast<std::size_t>(df - dg) + 1, Int(0));
    for (int k = df - dg; k >= 0; --k) {
        if (degree(r) != k + dg) {
            q[k] = 0;
            continue;
        }
        Int qc = r.back() / lc(g);
        if (qc * lc(g) != r.back())
            throw Error(ErrorCode::Internal, "divexact: not divisible");
        q[k] = qc;
        if (qc != 0)
            for (int i = 0; i <= dg; ++i) r[k + i] -= qc * g[i];
        trim(r);
    }
    if (!r.empty()) throw Error(ErrorCode::Internal, "divexact: nonzero remainder");
    trim(q);
    return q;
}

// Resultant via fraction-free (Bareiss) elimination of the Sylvester matrix.
inline Int resultant(const IntPoly& f, const IntPoly& g) {
    int m = degree(f), n = degree(g);
    if (m < 0 || n < 0) return 0;
    if (m == 0) return pow_int(f[0], n);
    if (n == 0) return pow_int(g[0], m);
    int size = m + n;
    std::vector<std::vector<Int>> a(size, std::vector<Int>(size, Int(0)));
    for (int r = 0; r < n; ++r)
        for (int i = 0; i <= m; ++i) a[r][r + (m - i)] = f[i];
    for (int r = 0; r < m; ++r)
        for (int i = 0; i <= n; ++i) a[n + r][r + (n - i)] = g[i];
    Int prev = 1;
    int sign = 1;
    for (int k = 0; k < size - 1; ++k) {
        if (a[k][k] == 0) {
            int piv = -1;
            for (int r = k + 1; r < size; ++r)
                if (a[r][k] != 0) {
                    piv = r;
                    break;
                }
            if (piv < 0) return 0;
            std::swap(a[k], a[piv]);
            sign = -sign;
        }
        for (int i = k + 1; i < size; ++i) {
            for (int j = k + 1; j < size; ++j)
                a[i][j] = exact_div(a[i][j] * a[k][k] - a[i][k] * a[k][j], prev);
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    return sign > 0 ? a[size - 1][size - 1] : Int(-a[size - 1][size - 1]);
}

// Squarefree part f / gcd(f, f'), primitive with positive lc. The quotient of
// primitive polynomials is integral by Gauss's lemma.
inline IntPoly squarefree_part(const IntPoly& f) {
    if (f.empty()) return {};
    IntPoly fp = primitive_part(f);
    if (degree(fp) <= 0) return {Int(1)};
    IntPoly g = gcd(fp, derivative(fp));
    if (degree(g) == 0) return fp;
    return primitive_part(divexact(fp, primitive_part(g)));
}

// disc(f) = (-1)^{d(d-1)/2} Res(f, f') / lc(f); 1 for degree <= 1.
inline Int discriminant(const IntPoly& f) {
    int d = degree(f);
    if (d <= 1) return 1;
    Int res = resultant(f, derivative(f));
    Int disc = exact_div(res, lc(f));
    long s = static_cast<long>(d) * (d - 1) / 2;
    return (s % 2 == 0) ? disc : Int(-disc);
}

inline std::string to_string(const IntPoly& f) {
    if (f.empty()) return "0";
    std::string s;
    bool first = true;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] == 0) continue;
        if (!first) s += " + ";
        first = false;
        s += f[i].get_str();
        if (i >= 1) s += "*x";
        if (i >= 2) s += "^" + std::to_string(i);
    }
    return s.empty() ? "0" : s;
}

// Clear denominators of two rational coefficient lists jointly, then remove
// the joint content. The pair keeps its ratio: (p/q) is unchanged.
inline std::pair<IntPoly, IntPoly> clear_denominators(const std::vector<Rat>& p_raw,
                                                      const std::vector<Rat>& q_raw) {
    Int L = 1;
    for (const Rat& c : p_raw) L = lcm_int(L, c.get_den());
    for (const Rat& c : q_raw) L = lcm_int(L, c.get_den());
    IntPoly p, q;
    p.reserve(p_raw.size());
    q.reserve(q_raw.size());
    for (const Rat& c : p_raw) p.push_back(Int(c.get_num() * exact_div(L, c.get_den())));
    for (const Rat& c : q_raw) q.push_back(Int(c.get_num() * exact_div(L, c.get_den())));
    trim(p);
    trim(q);
    Int cp = content(p), cq = content(q);
    Int joint = gcd_int(cp, cq);
    if (joint > 1) {
        p = divexact_scalar(p, joint);
        q = divexact_scalar(q, joint);
    }
    return {p, q};
}

} // namespace poly
} // namespace porbit
