#pragma once

#include <porbit/error.hpp>
#include <porbit/int_util.hpp>

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace porbit {

/*
 * Fixed-modulus p-adic arithmetic.
 *
 * A context fixes a prime p >= 5 and a digit count N >= 4; the working
 * modulus is p^N. A nonzero number is stored as unit * p^v with the unit a
 * residue in [1, p^N) coprime to p, so the value is known modulo p^{v+N}.
 * Additive cancellation can silently promote low digits that are only
 * representative artifacts; this is the usual fixed-modulus trade-off, and
 * every consumer in this library budgets for it with an explicit slack.
 * Total cancellation yields the zero flag, which reads as "0 at working
 * precision".
 */
class PadicContext {
public:
    PadicContext() = default;

    PadicContext(Int p, int digits) {
        if (!is_probable_prime(p) || p < 5)
            throw Error(ErrorCode::ParseError, "context needs a prime p >= 5");
        if (digits < 4)
            throw Error(ErrorCode::ParseError, "context needs precision >= 4");
        Int mod;
        mpz_pow_ui(mod.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(digits));
        d_ = std::make_shared<const Data>(Data{std::move(p), digits, std::move(mod)});
    }

    const Int& prime() const { return d_->p; }
    int digits() const { return d_->digits; }
    const Int& modulus() const { return d_->modulus; }
    bool valid() const { return static_cast<bool>(d_); }

    // p^k for 0 <= k <= N
    Int prime_power(long k) const {
        if (k < 0) throw Error(ErrorCode::Internal, "negative prime power");
        Int r;
        mpz_pow_ui(r.get_mpz_t(), d_->p.get_mpz_t(), static_cast<unsigned long>(k));
        return r;
    }

    PadicContext with_digits(int digits) const { return PadicContext(d_->p, digits); }

    friend bool operator==(const PadicContext& a, const PadicContext& b) {
        if (!a.d_ || !b.d_) return a.d_ == b.d_;
        return a.d_->p == b.d_->p && a.d_->digits == b.d_->digits;
    }

private:
    struct Data {
        Int p;
        int digits;
        Int modulus;
    };
    std::shared_ptr<const Data> d_;
};

class PadicNumber {
public:
    PadicNumber() = default;

    static PadicNumber zero(const PadicContext& ctx) {
        PadicNumber x;
        x.ctx_ = ctx;
        x.zero_ = true;
        return x;
    }

    static PadicNumber from_int(const PadicContext& ctx, const Int& value) {
        Int r = mod_reduce(value, ctx.modulus());
        // the representative decides the valuation: fixed-modulus semantics
        if (r == 0) return zero(ctx);
        Int cof;
        long v = valuation_int(r, ctx.prime(), &cof);
        PadicNumber x;
        x.ctx_ = ctx;
        x.zero_ = false;
        x.v_ = v;
        x.unit_ = mod_reduce(cof, ctx.modulus());
        return x;
    }

    static PadicNumber from_rat(const PadicContext& ctx, const Rat& value) {
        if (value == 0) return zero(ctx);
        Int num = value.get_num(), den = value.get_den();
        Int ncof, dcof;
        long v = valuation_int(num, ctx.prime(), &ncof) -
                 valuation_int(den, ctx.prime(), &dcof);
        PadicNumber x;
        x.ctx_ = ctx;
        x.zero_ = false;
        x.v_ = v;
        x.unit_ = mod_reduce(ncof * inv_mod(dcof, ctx.modulus()), ctx.modulus());
        return x;
    }

    static PadicNumber from_unit_val(const PadicContext& ctx, long v, const Int& unit) {
        Int u = mod_reduce(unit, ctx.modulus());
        if (u == 0) return zero(ctx);
        if (mpz_divisible_p(u.get_mpz_t(), ctx.prime().get_mpz_t()))
            throw Error(ErrorCode::ParseError, "unit part divisible by p");
        PadicNumber x;
        x.ctx_ = ctx;
        x.zero_ = false;
        x.v_ = v;
        x.unit_ = std::move(u);
        return x;
    }

    const PadicContext& ctx() const { return ctx_; }
    bool is_zero() const { return zero_; }
    bool is_integral() const { return zero_ || v_ >= 0; }

    long valuation() const {
        if (zero_) throw Error(ErrorCode::Internal, "valuation of zero at precision");
        return v_;
    }

    // valuation with zero mapped to the precision floor N
    long valuation_or_floor() const { return zero_ ? ctx_.digits() : v_; }

    const Int& unit() const {
        if (zero_) throw Error(ErrorCode::Internal, "unit of zero");
        return unit_;
    }

    // representative in [0, p^N); requires integrality
    Int residue() const {
        if (zero_) return 0;
        if (v_ < 0) throw Error(ErrorCode::NonIntegralArgument, "negative valuation residue");
        if (v_ >= ctx_.digits()) return 0;
        return mod_reduce(unit_ * ctx_.prime_power(v_), ctx_.modulus());
    }

    PadicNumber neg() const {
        if (zero_) return *this;
        return from_unit_val(ctx_, v_, ctx_.modulus() - unit_);
    }

    friend PadicNumber operator+(const PadicNumber& x, const PadicNumber& y) {
        x.require_same_ctx(y);
        if (x.zero_) return y;
        if (y.zero_) return x;
        long v = std::min(x.v_, y.v_);
        const Int& m = x.ctx_.modulus();
        Int s = mod_reduce(x.unit_ * x.ctx_.prime_power(x.v_ - v) +
                               y.unit_ * y.ctx_.prime_power(y.v_ - v),
                           m);
        if (s == 0) return zero(x.ctx_);
        Int cof;
        long k = valuation_int(s, x.ctx_.prime(), &cof);
        PadicNumber r;
        r.ctx_ = x.ctx_;
        r.zero_ = false;
        r.v_ = v + k;
        r.unit_ = std::move(cof);
        return r;
    }

    friend PadicNumber operator-(const PadicNumber& x, const PadicNumber& y) {
        return x + y.neg();
    }

    friend PadicNumber operator*(const PadicNumber& x, const PadicNumber& y) {
        x.require_same_ctx(y);
        if (x.zero_ || y.zero_) return zero(x.ctx_);
        PadicNumber r;
        r.ctx_ = x.ctx_;
        r.zero_ = false;
        r.v_ = x.v_ + y.v_;
        r.unit_ = mod_reduce(x.unit_ * y.unit_, x.ctx_.modulus());
        return r;
    }

    PadicNumber inv() const {
        if (zero_) throw Error(ErrorCode::DivisionByZero, "inverse of zero at precision");
        PadicNumber r;
        r.ctx_ = ctx_;
        r.zero_ = false;
        r.v_ = -v_;
        r.unit_ = inv_mod(unit_, ctx_.modulus());
        return r;
    }

    friend PadicNumber operator/(const PadicNumber& x, const PadicNumber& y) {
        return x * y.inv();
    }

    // equality of representatives at working precision
    friend bool operator==(const PadicNumber& x, const PadicNumber& y) {
        x.require_same_ctx(y);
        if (x.zero_ || y.zero_) return x.zero_ == y.zero_;
        return x.v_ == y.v_ && x.unit_ == y.unit_;
    }
    friend bool operator!=(const PadicNumber& x, const PadicNumber& y) { return !(x == y); }

    std::string to_string() const {
        if (zero_) return "0";
        return unit_.get_str() + "*" + ctx_.prime().get_str() + "^" + std::to_string(v_);
    }

private:
    void require_same_ctx(const PadicNumber& o) const {
        if (!(ctx_ == o.ctx_))
            throw Error(ErrorCode::Internal, "mixed p-adic contexts");
    }

    PadicContext ctx_;
    bool zero_ = true;
    long v_ = 0;
    Int unit_ = 0;
};

// Truncated one-variable power series with integral coefficients, the working
// stand-in for elements of the Tate algebra on the closed unit disc. The
// truncation degree is coeffs.size() - 1.
class TateSeries {
public:
    TateSeries() = default;

    TateSeries(PadicContext ctx, std::vector<PadicNumber> coeffs, bool declared_integral = true)
        : ctx_(std::move(ctx)), coeffs_(std::move(coeffs)), integral_(declared_integral) {
        if (integral_) {
            for (const auto& c : coeffs_)
                if (!c.is_integral())
                    throw Error(ErrorCode::NonIntegralArgument,
                                "series coefficient with negative valuation");
        }
        trim();
    }

    static TateSeries zero(const PadicContext& ctx) { return TateSeries(ctx, {}); }

    static TateSeries from_int_coeffs(const PadicContext& ctx, const std::vector<Int>& cs) {
        std::vector<PadicNumber> v;
        v.reserve(cs.size());
        for (const Int& c : cs) v.push_back(PadicNumber::from_int(ctx, c));
        return TateSeries(ctx, std::move(v));
    }

    static TateSeries identity(const PadicContext& ctx) {
        return from_int_coeffs(ctx, {Int(0), Int(1)});
    }

    const PadicContext& ctx() const { return ctx_; }
    const std::vector<PadicNumber>& coeffs() const { return coeffs_; }
    bool declared_integral() const { return integral_; }
    long trunc_degree() const { return static_cast<long>(coeffs_.size()) - 1; }

    PadicNumber coeff(std::size_t k) const {
        if (k < coeffs_.size()) return coeffs_[k];
        return PadicNumber::zero(ctx_);
    }

    bool is_zero_at_precision() const {
        for (const auto& c : coeffs_)
            if (!c.is_zero()) return false;
        return true;
    }

    TateSeries truncated(long K) const {
        std::vector<PadicNumber> v(coeffs_.begin(),
                                   coeffs_.begin() + std::min<std::size_t>(coeffs_.size(), K + 1));
        return TateSeries(ctx_, std::move(v), integral_);
    }

    TateSeries derivative() const {
        std::vector<PadicNumber> v;
        for (std::size_t k = 1; k < coeffs_.size(); ++k)
            v.push_back(coeffs_[k] * PadicNumber::from_int(ctx_, Int(k)));
        return TateSeries(ctx_, std::move(v), integral_);
    }

    PadicNumber eval(const PadicNumber& x) const {
        if (!x.is_integral())
            throw Error(ErrorCode::NonIntegralArgument, "evaluation outside the unit disc");
        PadicNumber acc = PadicNumber::zero(ctx_);
        for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
        return acc;
    }

    // residue-arithmetic fast path for integer arguments
    Int eval_residue(const Int& x) const {
        const Int& m = ctx_.modulus();
        Int acc = 0;
        for (std::size_t i = coeffs_.size(); i-- > 0;)
            acc = mod_reduce(acc * x + coeffs_[i].residue(), m);
        return acc;
    }

    friend TateSeries operator+(const TateSeries& a, const TateSeries& b) {
        a.require_same_ctx(b);
        std::vector<PadicNumber> v(std::max(a.coeffs_.size(), b.coeffs_.size()),
                                   PadicNumber::zero(a.ctx_));
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.coeff(i) + b.coeff(i);
        return TateSeries(a.ctx_, std::move(v), a.integral_ && b.integral_);
    }

    friend TateSeries operator-(const TateSeries& a, const TateSeries& b) {
        a.require_same_ctx(b);
        std::vector<PadicNumber> v(std::max(a.coeffs_.size(), b.coeffs_.size()),
                                   PadicNumber::zero(a.ctx_));
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.coeff(i) - b.coeff(i);
        return TateSeries(a.ctx_, std::move(v), a.integral_ && b.integral_);
    }

    static constexpr long kHardDegreeCap = 4096;

    // Full product by default; pass out_trunc to cut the tail.
    static TateSeries mul(const TateSeries& a, const TateSeries& b, long out_trunc = -1) {
        a.require_same_ctx(b);
        if (a.coeffs_.empty() || b.coeffs_.empty()) return zero(a.ctx_);
        long full = a.trunc_degree() + b.trunc_degree();
        long K = out_trunc < 0 ? full : std::min(full, out_trunc);
        if (K > kHardDegreeCap)
            throw Error(ErrorCode::TruncationOverflow, "series degree beyond the hard cap");
        std::vector<PadicNumber> v(static_cast<std::size_t>(K) + 1, PadicNumber::zero(a.ctx_));
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            if (a.coeffs_[i].is_zero()) continue;
            std::size_t jmax = std::min(b.coeffs_.size(), static_cast<std::size_t>(K) + 1 - i);
            for (std::size_t j = 0; j < jmax; ++j)
                v[i + j] = v[i + j] + a.coeffs_[i] * b.coeffs_[j];
        }
        return TateSeries(a.ctx_, std::move(v), a.integral_ && b.integral_);
    }

    TateSeries scaled(const PadicNumber& k) const {
        std::vector<PadicNumber> v(coeffs_.size(), PadicNumber::zero(ctx_));
        for (std::size_t i = 0; i < coeffs_.size(); ++i) v[i] = coeffs_[i] * k;
        return TateSeries(ctx_, std::move(v), integral_ && k.is_integral());
    }

    std::string to_string() const {
        std::string s = "[";
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            if (i) s += ", ";
            s += coeffs_[i].to_string();
        }
        return s + "]";
    }

private:
    void require_same_ctx(const TateSeries& o) const {
        if (!(ctx_ == o.ctx_))
            throw Error(ErrorCode::Internal, "mixed series contexts");
    }

    void trim() {
        while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
    }

    PadicContext ctx_;
    std::vector<PadicNumber> coeffs_;
    bool integral_ = true;
};

// f(g), truncated at out_trunc (default: max of the inputs' degrees).
inline TateSeries tate_compose(const TateSeries& f, const TateSeries& g, long out_trunc = -1) {
    if (!g.declared_integral() || !g.coeff(0).is_integral())
        throw Error(ErrorCode::NonIntegralArgument, "composition argument not integral");
    long K = out_trunc < 0 ? std::max(f.trunc_degree(), g.trunc_degree()) : out_trunc;
    if (K > TateSeries::kHardDegreeCap)
        throw Error(ErrorCode::TruncationOverflow, "composition degree beyond the hard cap");
    TateSeries acc = TateSeries::zero(f.ctx());
    for (std::size_t i = f.coeffs().size(); i-- > 0;) {
        acc = TateSeries::mul(acc, g, K);
        std::vector<PadicNumber> c0 = {f.coeffs()[i]};
        acc = acc + TateSeries(f.ctx(), std::move(c0), false);
    }
    return acc.truncated(K);
}

// Inverse of a series that is a unit of the Tate algebra: unit constant term
// and every higher coefficient of positive valuation. Newton iteration.
inline TateSeries tate_invert(const TateSeries& f, long out_trunc) {
    if (f.coeff(0).is_zero() || f.coeff(0).valuation() != 0)
        throw Error(ErrorCode::DivisionByZero, "series inverse needs a unit constant term");
    for (std::size_t k = 1; k < f.coeffs().size(); ++k)
        if (!f.coeff(k).is_zero() && f.coeff(k).valuation() < 1)
            throw Error(ErrorCode::NonIntegralArgument,
                        "series is not a unit of the integral Tate algebra");
    TateSeries g(f.ctx(), {f.coeff(0).inv()}, false);
    TateSeries two = TateSeries::from_int_coeffs(f.ctx(), {Int(2)});
    long correct = 1; // f*g == 1 mod x^correct
    while (correct <= out_trunc) {
        long next = std::min(correct * 2, out_trunc + 1);
        TateSeries t = TateSeries::mul(f.truncated(next - 1), g, next - 1);
        g = TateSeries::mul(g, two - t, next - 1);
        correct = next;
    }
    return TateSeries(f.ctx(), g.truncated(out_trunc).coeffs(), true);
}

struct StrassmanResult {
    bool zero_series = false;
    long k0 = -1;   // largest index attaining the maximal absolute value
    long vmin = 0;  // the attained minimal valuation
};

// Upper bound for the number of zeros on the p-adic integers: the largest
// index with coefficient of maximal absolute value. Valid for the truncation
// under the tail assumption reported by the caller.
inline StrassmanResult strassman_bound(const TateSeries& f) {
    if (!f.declared_integral())
        throw Error(ErrorCode::NonIntegralArgument, "strassman needs an integral series");
    StrassmanResult r;
    long best_v = -1;
    for (std::size_t k = 0; k < f.coeffs().size(); ++k) {
        const auto& c = f.coeffs()[k];
        if (c.is_zero()) continue;
        if (best_v < 0 || c.valuation() <= best_v) {
            if (best_v < 0 || c.valuation() < best_v) best_v = c.valuation();
            r.k0 = static_cast<long>(k);
        }
    }
    if (best_v < 0) {
        r.zero_series = true;
        return r;
    }
    // k0 must be the largest index attaining best_v
    for (std::size_t k = 0; k < f.coeffs().size(); ++k) {
        const auto& c = f.coeffs()[k];
        if (!c.is_zero() && c.valuation() == best_v) r.k0 = static_cast<long>(k);
    }
    r.vmin = best_v;
    return r;
}

struct ZpRoot {
    PadicNumber value;
    bool simple = true;       // derivative a unit at the root
    long known_digits = 0;    // root determined modulo p^{known_digits}
};

struct UnresolvedBranch {
    Int residue;
    long depth;
};

struct ZpRootsReport {
    std::vector<ZpRoot> roots;
    std::vector<UnresolvedBranch> unresolved;
};

struct ZpRootsOptions {
    int slack = 4;
    long max_nodes = 200000;
};

namespace detail {

struct ZpRootSearch {
    std::vector<Int> fres;   // residues of f's coefficients
    std::vector<Int> fpres;  // residues of f' coefficients
    const PadicContext& ctx;
    ZpRootsOptions opts;
    long depth_cap;
    long nodes = 0;
    ZpRootsReport report;

    ZpRootSearch(const TateSeries& f_, const ZpRootsOptions& o)
        : ctx(f_.ctx()), opts(o) {
        depth_cap = std::max<long>(1, ctx.digits() - opts.slack);
        for (const auto& c : f_.coeffs()) fres.push_back(c.residue());
        TateSeries fp = f_.derivative();
        for (const auto& c : fp.coeffs()) fpres.push_back(c.residue());
    }

    Int horner(const std::vector<Int>& cs, const Int& x) const {
        const Int& m = ctx.modulus();
        Int acc = 0;
        for (std::size_t i = cs.size(); i-- > 0;) acc = mod_reduce(acc * x + cs[i], m);
        return acc;
    }

    long val_of(const Int& r) const {
        if (r == 0) return ctx.digits();
        return valuation_int(r, ctx.prime(), nullptr);
    }

    // Newton from a; f(a) has valuation > 2 v(f'(a)), so the iteration
    // contracts and the root is determined modulo p^{N - v(f'(root))}.
    void newton(const Int& a, long vd) {
        Int x = mod_reduce(a, ctx.modulus());
        for (int it = 0; it < 200; ++it) {
            Int fx = horner(fres, x);
            if (fx == 0) break;
            Int dfx = horner(fpres, x);
            long vdf = val_of(dfx);
            if (vdf >= ctx.digits())
                throw Error(ErrorCode::PrecisionExhausted, "derivative vanished during lifting");
            // step = f(x)/f'(x); strip the common p power before inverting
            Int pv = ctx.prime_power(vdf);
            Int num = exact_div(fx, pv); // v(f(x)) >= v(f'(x)) along the contraction
            Int den = exact_div(dfx, pv);
            Int step = mod_reduce(num * inv_mod(den, ctx.modulus()), ctx.modulus());
            x = mod_reduce(x - step, ctx.modulus());
        }
        ZpRoot root;
        root.value = PadicNumber::from_int(ctx, x);
        root.simple = (vd == 0);
        root.known_digits = ctx.digits() - vd;
        report.roots.push_back(std::move(root));
    }

    void visit(const Int& a, long d) {
        if (++nodes > opts.max_nodes)
            throw Error(ErrorCode::PrecisionExhausted, "root search exceeded the node budget");
        Int fa = horner(fres, a);
        long va = val_of(fa);
        Int dfa = horner(fpres, a);
        long vd = val_of(dfa);
        if (va > 2 * vd) {
            newton(a, vd);
            return;
        }
        if (d >= depth_cap) {
            report.unresolved.push_back({a, d});
            return;
        }
        Int step = ctx.prime_power(d);
        Int nextmod = ctx.prime_power(std::min<long>(d + 1, ctx.digits()));
        for (Int t = 0; t < ctx.prime(); ++t) {
            Int b = a + t * step;
            if (mod_reduce(horner(fres, b), nextmod) == 0) visit(b, d + 1);
        }
    }
};

} // namespace detail

// Root isolation on the p-adic integers by residue subdivision with Newton
// lifting. Roots are reported to their certified precision; branches that
// cannot be separated at depth N - slack stay in `unresolved`.
inline ZpRootsReport zp_roots_report(const TateSeries& f, const ZpRootsOptions& opts = {}) {
    if (!f.declared_integral())
        throw Error(ErrorCode::NonIntegralArgument, "root search needs an integral series");
    if (f.is_zero_at_precision())
        throw Error(ErrorCode::ParseError, "root search on the zero series");
    detail::ZpRootSearch search(f, opts);
    const PadicContext& ctx = f.ctx();
    Int pmod = ctx.prime();
    for (Int t = 0; t < ctx.prime(); ++t)
        if (mod_reduce(f.eval_residue(t), pmod) == 0) search.visit(t, 1);
    // deduplicate roots found from overlapping tame branches
    auto& roots = search.report.roots;
    std::sort(roots.begin(), roots.end(), [](const ZpRoot& x, const ZpRoot& y) {
        return x.value.residue() < y.value.residue();
    });
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [&](const ZpRoot& x, const ZpRoot& y) {
                                long k = std::min(x.known_digits, y.known_digits);
                                Int m = ctx.prime_power(k);
                                return mod_reduce(x.value.residue() - y.value.residue(), m) == 0;
                            }),
                roots.end());
    return search.report;
}

inline std::vector<ZpRoot> zp_roots(const TateSeries& f, const ZpRootsOptions& opts = {}) {
    ZpRootsReport rep = zp_roots_report(f, opts);
    if (!rep.unresolved.empty())
        throw Error(ErrorCode::PrecisionExhausted,
                    "unresolved residue branch at depth " +
                        std::to_string(rep.unresolved.front().depth));
    return rep.roots;
}

// Finite-difference (Mahler) form of a function on the p-adic integers:
// value(n) = sum_k c_k * binomial(n, k).
class MahlerSeries {
public:
    MahlerSeries() = default;
    MahlerSeries(PadicContext ctx, std::vector<PadicNumber> coeffs)
        : ctx_(std::move(ctx)), coeffs_(std::move(coeffs)) {}

    const PadicContext& ctx() const { return ctx_; }
    const std::vector<PadicNumber>& coeffs() const { return coeffs_; }
    long degree() const { return static_cast<long>(coeffs_.size()) - 1; }

    PadicNumber coeff(std::size_t k) const {
        if (k < coeffs_.size()) return coeffs_[k];
        return PadicNumber::zero(ctx_);
    }

    // v_p(c_k) with zero coefficients reported at the precision floor
    std::vector<long> decay_profile() const {
        std::vector<long> v;
        v.reserve(coeffs_.size());
        for (const auto& c : coeffs_) v.push_back(c.valuation_or_floor());
        return v;
    }

    // exact integer binomials, reduced at the working modulus
    PadicNumber eval_at(const Int& n) const {
        const Int& m = ctx_.modulus();
        Int acc = 0;
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            if (coeffs_[k].is_zero()) continue;
            acc = mod_reduce(acc + coeffs_[k].residue() * mod_reduce(binomial(n, k), m), m);
        }
        return PadicNumber::from_int(ctx_, acc);
    }

    // binomial(n, k) for a genuine p-adic integer argument, by the running
    // product; division by k costs digits only at multiples of p, which the
    // fixed-modulus model absorbs
    PadicNumber eval_at(const PadicNumber& n) const {
        if (!n.is_integral())
            throw Error(ErrorCode::NonIntegralArgument, "Mahler evaluation off the disc");
        PadicNumber acc = PadicNumber::zero(ctx_);
        PadicNumber binom = PadicNumber::from_int(ctx_, 1);
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            if (k > 0) {
                PadicNumber factor =
                    (n - PadicNumber::from_int(ctx_, Int(k - 1))) / PadicNumber::from_int(ctx_, Int(k));
                binom = binom * factor;
            }
            acc = acc + coeffs_[k] * binom;
        }
        return acc;
    }

    // Mahler shift: value(n+1) has coefficients c_k + c_{k+1}.
    MahlerSeries shifted() const {
        std::vector<PadicNumber> v(coeffs_.size(), PadicNumber::zero(ctx_));
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            v[k] = coeffs_[k];
            if (k + 1 < coeffs_.size()) v[k] = v[k] + coeffs_[k + 1];
        }
        return MahlerSeries(ctx_, std::move(v));
    }

private:
    PadicContext ctx_;
    std::vector<PadicNumber> coeffs_;
};

// Iterated forward differences of the samples; c_k = (Delta^k u)(0).
inline MahlerSeries mahler_fit(const PadicContext& ctx, const std::vector<PadicNumber>& samples) {
    for (const auto& s : samples)
        if (!s.is_integral())
            throw Error(ErrorCode::NonIntegralArgument, "Mahler fit needs integral samples");
    std::vector<PadicNumber> row = samples;
    std::vector<PadicNumber> coeffs;
    coeffs.reserve(samples.size());
    while (!row.empty()) {
        coeffs.push_back(row.front());
        for (std::size_t i = 0; i + 1 < row.size(); ++i) row[i] = row[i + 1] - row[i];
        row.pop_back();
    }
    return MahlerSeries(ctx, std::move(coeffs));
}

// Decay heuristic for interpolability: the tail of the profile must sit
// strictly above the head. Non-decaying profiles flag sequences that do not
// extend to an analytic function of n.
inline bool mahler_decay_ok(const MahlerSeries& ms, int window = 6) {
    long J = ms.degree();
    if (J + 1 < 2 * window) return true; // too short to judge
    long head = ms.coeff(0).valuation_or_floor();
    for (int k = 1; k < window; ++k)
        head = std::min(head, ms.coeff(k).valuation_or_floor());
    long tail = ms.coeff(J).valuation_or_floor();
    for (int k = 1; k < window; ++k)
        tail = std::min(tail, ms.coeff(J - k).valuation_or_floor());
    return tail > head;
}

// Monomial-basis conversion. binomial(n,k) = (1/k!) sum_m s(k,m) n^m with
// integer Stirling numbers; everything is accumulated exactly and the single
// division by D! happens at the end, which costs v_p(D!) digits. The output
// context must not claim more digits than survive.
inline TateSeries mahler_to_tate(const MahlerSeries& ms, const PadicContext& out_ctx,
                                 long degree_cap = -1) {
    long D = ms.degree();
    if (degree_cap >= 0) D = std::min(D, degree_cap);
    if (D < 0) return TateSeries::zero(out_ctx);
    const PadicContext& in_ctx = ms.ctx();
    if (!(out_ctx.prime() == in_ctx.prime()))
        throw Error(ErrorCode::Internal, "conversion across different primes");
    long vD = factorial_valuation(static_cast<unsigned long>(D), in_ctx.prime());
    if (out_ctx.digits() > in_ctx.digits() - vD)
        throw Error(ErrorCode::PrecisionLoss,
                    "conversion cannot certify the requested precision");

    // D! and the cofactors D!/k!
    std::vector<Int> fact(static_cast<std::size_t>(D) + 1);
    fact[0] = 1;
    for (long k = 1; k <= D; ++k) fact[k] = fact[k - 1] * Int(k);
    Int Dfact = fact[D];

    // falling factorial polynomials, exact over Z
    std::vector<Int> falling = {Int(1)}; // coefficients of x(x-1)...(x-k+1)
    std::vector<Int> acc(static_cast<std::size_t>(D) + 1, Int(0));
    Int work_mod = in_ctx.modulus() * in_ctx.prime_power(vD);
    for (long k = 0; k <= D; ++k) {
        if (k > 0) {
            // falling *= (x - (k-1))
            std::vector<Int> next(falling.size() + 1, Int(0));
            for (std::size_t m = 0; m < falling.size(); ++m) {
                next[m + 1] += falling[m];
                next[m] -= falling[m] * Int(k - 1);
            }
            falling = std::move(next);
        }
        if (ms.coeff(k).is_zero()) continue;
        Int scale = mod_reduce(ms.coeff(k).residue() * exact_div(Dfact, fact[k]), work_mod);
        if (scale == 0) continue;
        for (std::size_t m = 0; m < falling.size(); ++m)
            acc[m] = mod_reduce(acc[m] + scale * falling[m], work_mod);
    }

    Int pvD = in_ctx.prime_power(vD);
    Int reduced_fact = exact_div(Dfact, pvD);
    Int inv_fact = inv_mod(reduced_fact, out_ctx.modulus());
    std::vector<PadicNumber> out(static_cast<std::size_t>(D) + 1, PadicNumber::zero(out_ctx));
    for (long m = 0; m <= D; ++m) {
        Int t = acc[m];
        if (mod_reduce(t, pvD) != 0)
            throw Error(ErrorCode::Internal, "conversion lost integrality");
        Int b = mod_reduce(exact_div(t, pvD) * inv_fact, out_ctx.modulus());
        out[m] = PadicNumber::from_int(out_ctx, b);
    }
    return TateSeries(out_ctx, std::move(out), true);
}

} // namespace porbit
