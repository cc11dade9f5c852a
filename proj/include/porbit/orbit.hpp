#pragma once

#include <porbit/error.hpp>
#include <porbit/int_util.hpp>
#include <porbit/poly.hpp>
#include <porbit/ratmap.hpp>

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace porbit {

enum class OrbitMode { Raw, Reduced };

// Exact integer bookkeeping of an orbit. In raw mode the pairs follow the
// homogenized recurrence
//   A_{n+1} = P(A_n, B_n),   B_{n+1} = Q(A_n, B_n) * B_n^{deg p - deg q}
// with P, Q the homogenizations of p, q to their own degrees; no reduction is
// performed, so A_n, B_n are the exact recurrence values. In reduced mode
// each pair is kept in lowest terms with canonical sign.
struct OrbitPairs {
    RationalMap map;
    ProjPoint start;
    std::vector<std::pair<Int, Int>> pairs;
    OrbitMode mode = OrbitMode::Raw;

    ProjPoint point_at(std::size_t n) const {
        const auto& [A, B] = pairs.at(n);
        return ProjPoint(A, B);
    }
};

struct OrbitCaps {
    std::size_t max_coeff_bits = std::size_t(1) << 20;
    long raw_step_cap = 24;
    long reduced_step_cap = 10000;
};

inline OrbitPairs orbit_pairs(const RationalMap& h, const ProjPoint& c, long n_max,
                              OrbitMode mode, const OrbitCaps& caps = {}) {
    if (!h.normalized)
        throw Error(ErrorCode::NotNormalized, "orbit recurrence needs a normalized map");
    if (n_max < 0) throw Error(ErrorCode::ParseError, "n_max must be >= 0");
    long cap = (mode == OrbitMode::Raw) ? caps.raw_step_cap : caps.reduced_step_cap;
    if (n_max > cap)
        throw Error(ErrorCode::SizeLimit, "n_max exceeds the per-mode step cap");

    OrbitPairs orb;
    orb.map = h;
    orb.start = c;
    orb.mode = mode;
    orb.pairs.reserve(static_cast<std::size_t>(n_max) + 1);
    orb.pairs.emplace_back(c.a, c.b);

    const int dp = poly::degree(h.p);
    const int dq = poly::degree(h.q);
    Int A = c.a, B = c.b;
    for (long n = 0; n < n_max; ++n) {
        Int A1 = poly::eval_hom(h.p, A, B, dp);
        Int B1 = poly::eval_hom(h.q, A, B, dq);
        for (int e = 0; e < dp - dq; ++e) B1 *= B;
        if (A1 == 0 && B1 == 0)
            throw Error(ErrorCode::IndeterminateOrbit, "orbit pair vanished");
        if (mode == OrbitMode::Reduced) {
            ProjPoint pt(A1, B1);
            A1 = pt.a;
            B1 = pt.b;
        }
        if (std::max(bit_size(A1), bit_size(B1)) > caps.max_coeff_bits)
            throw Error(ErrorCode::SizeLimit, "orbit value exceeded the bit cap");
        orb.pairs.emplace_back(A1, B1);
        A = std::move(A1);
        B = std::move(B1);
    }
    return orb;
}

struct CrossTerm {
    Int lhs;   // B_n A_{n+1} - A_n B_{n+1}
    Int rhs;   // B_n^{ell} * F(A_n, B_n), F the homogenized fixed-point polynomial
    long ell;  // 1 + deg p - deg fp_poly
};

// The one-step cross term identity: both sides must agree exactly for every
// orbit; a mismatch is a bug, not a data condition.
inline CrossTerm cross_term(const OrbitPairs& orbit, std::size_t n) {
    if (orbit.mode != OrbitMode::Raw)
        throw Error(ErrorCode::ParseError, "cross_term needs a raw orbit");
    if (n + 1 >= orbit.pairs.size())
        throw Error(ErrorCode::ParseError, "cross_term: n+1 beyond computed orbit");
    const RationalMap& h = orbit.map;
    FixedPointData fd = fixed_point_data(h);
    const auto& [An, Bn] = orbit.pairs[n];
    const auto& [An1, Bn1] = orbit.pairs[n + 1];

    CrossTerm t;
    t.ell = 1 + poly::degree(h.p) - fd.deg_fp;
    t.lhs = Bn * An1 - An * Bn1;
    t.rhs = poly::eval_hom(fd.fp_poly, An, Bn, fd.deg_fp);
    for (long e = 0; e < t.ell; ++e) t.rhs *= Bn;
    if (t.lhs != t.rhs)
        throw Error(ErrorCode::IdentityViolation,
                    "cross-term identity failed at n = " + std::to_string(n));
    return t;
}

struct UnitIdealEntry {
    std::size_t n;
    Int gcd_value;
    Int cofactor; // gcd with all bad primes stripped; 1 means clean
};

struct UnitIdealReport {
    bool ok = true;
    std::vector<UnitIdealEntry> entries;
    std::vector<std::size_t> violations;
};

// gcd(A_n, B_n) must be supported entirely on the bad primes. A violation
// falsifies the bad-prime computation, not the orbit.
inline UnitIdealReport check_unit_ideal(const OrbitPairs& orbit, const BadPrimeSet& bad) {
    if (orbit.mode != OrbitMode::Raw)
        throw Error(ErrorCode::ParseError, "check_unit_ideal needs a raw orbit");
    UnitIdealReport rep;
    for (std::size_t n = 0; n < orbit.pairs.size(); ++n) {
        const auto& [A, B] = orbit.pairs[n];
        Int g = gcd_int(A, B);
        Int cof = bad.cofactor_outside(g);
        rep.entries.push_back({n, g, cof});
        if (cof != 1) {
            rep.ok = false;
            rep.violations.push_back(n);
        }
    }
    return rep;
}

struct Preperiodicity {
    long preperiod = 0; // first index of the cycle
    long period = 0;    // cycle length
};

// Exact cycle detection on reduced points up to `cap` steps. Detection only:
// NotDetected (nullopt) is not a proof of an infinite orbit.
inline std::optional<Preperiodicity> detect_preperiodicity(const RationalMap& h,
                                                           const ProjPoint& c, long cap,
                                                           const OrbitCaps& caps = {}) {
    if (cap < 1) throw Error(ErrorCode::ParseError, "cap must be >= 1");
    std::map<ProjPoint, long> seen;
    ProjPoint x = c;
    for (long n = 0; n <= cap; ++n) {
        auto it = seen.find(x);
        if (it != seen.end())
            return Preperiodicity{it->second, n - it->second};
        seen.emplace(x, n);
        if (x.height_bits() > caps.max_coeff_bits)
            throw Error(ErrorCode::SizeLimit, "orbit height exceeded the bit cap");
        x = evaluate(h, x);
    }
    return std::nullopt;
}

// Convenience guard used by the interpolation pipeline: preperiodic starts
// are routed to exact cycle arithmetic, never to the p-adic machinery.
inline std::optional<Preperiodicity> preperiodicity_guard(const RationalMap& h,
                                                          const ProjPoint& c,
                                                          long cap = 64) {
    OrbitCaps caps;
    caps.max_coeff_bits = 4096; // a growing orbit is abandoned quickly
    try {
        return detect_preperiodicity(h, c, cap, caps);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::SizeLimit) return std::nullopt;
        throw;
    }
}

} // namespace porbit
