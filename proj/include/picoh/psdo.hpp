#ifndef PICOH_PSDO_HPP
#define PICOH_PSDO_HPP

#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

#include "picoh/coefficients.hpp"
#include "picoh/errors.hpp"
#include "picoh/series.hpp"

namespace picoh {

// C_i^k = i(i-1)...(i-k+1) / k!, any integer i, k >= 0. C_i^0 = 1.
inline Rational binomial(long i, long k) {
    if (k < 0) throw validation_error("binomial: negative k");
    Rational num(1);
    for (long s = 0; s < k; ++s) num *= Rational(i - s);
    return num / factorial(k);
}

// ---------------------------------------------------------------------------
// Differential-ring objects. Each ring instance supplies the element type,
// ring operations, a distinguished derivation satisfying the Leibniz rule,
// and the window predicates the operator layer needs.
// ---------------------------------------------------------------------------

template <class T>
concept DifferentialRing = requires(const T rg, typename T::Elem a, Rational q) {
    { rg.zero() } -> std::same_as<typename T::Elem>;
    { rg.one() } -> std::same_as<typename T::Elem>;
    { rg.add(a, a) } -> std::same_as<typename T::Elem>;
    { rg.neg(a) } -> std::same_as<typename T::Elem>;
    { rg.mul(a, a) } -> std::same_as<typename T::Elem>;
    { rg.scale(a, q) } -> std::same_as<typename T::Elem>;
    { rg.derive(a) } -> std::same_as<typename T::Elem>;
    { rg.is_exact_zero(a) } -> std::same_as<bool>;
    { rg.is_window_zero(a) } -> std::same_as<bool>;
    { rg.exhausted(a) } -> std::same_as<bool>;
};

// Plain rationals with the zero derivation.
struct RationalRing {
    using Elem = Rational;
    Elem zero() const { return Rational(0); }
    Elem one() const { return Rational(1); }
    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem neg(const Elem& a) const { return -a; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem scale(const Elem& a, const Rational& q) const { return a * q; }
    Elem derive(const Elem&) const { return Rational(0); }
    bool is_exact_zero(const Elem& a) const { return a.is_zero(); }
    bool is_window_zero(const Elem& a) const { return a.is_zero(); }
    bool exhausted(const Elem&) const { return false; }
    Elem invert(const Elem& a) const {
        if (a.is_zero()) throw not_invertible("zero rational");
        return a.inverse();
    }
    std::string str(const Elem& a) const { return a.str(); }
};

// Q[[x]] with d/dx.
struct XSeriesRing {
    using Elem = PowerSeries1<Rational>;
    long inv_prec = 16;

    Elem zero() const { return {}; }
    Elem one() const { return Elem::constant(Rational(1)); }
    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem neg(const Elem& a) const { return -a; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem scale(const Elem& a, const Rational& q) const {
        return a * Elem::constant(q);
    }
    Elem derive(const Elem& a) const { return a.derivative(); }
    bool is_exact_zero(const Elem& a) const { return a.exactly_zero(); }
    bool is_window_zero(const Elem& a) const { return a.c.empty(); }
    bool exhausted(const Elem& a) const { return a.exhausted(); }
    Elem invert(const Elem& a) const { return a.inverse(inv_prec); }
    std::string str(const Elem& a) const {
        std::ostringstream os;
        bool first = true;
        for (const auto& [e, k] : a.c) {
            if (!first) os << " + ";
            first = false;
            os << "(" << k << ")";
            if (e != 0) os << "*x^" << e;
        }
        if (first) os << "0";
        if (a.prec) os << " [x<" << *a.prec << "]";
        return os.str();
    }
};

// Q[[x1,x2]] with d/dx1 (the inner coefficient ring of the nested instance).
struct X1Ring {
    using Elem = PowerSeries2<Rational>;
    long inv_prec = 16;

    Elem zero() const { return {}; }
    Elem one() const { return Elem::constant(Rational(1)); }
    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem neg(const Elem& a) const { return -a; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem scale(const Elem& a, const Rational& q) const {
        return a * Elem::constant(q);
    }
    Elem derive(const Elem& a) const { return a.d1(); }
    bool is_exact_zero(const Elem& a) const { return a.exactly_zero(); }
    bool is_window_zero(const Elem& a) const { return a.c.empty(); }
    bool exhausted(const Elem& a) const { return a.exhausted(); }
    Elem invert(const Elem& a) const { return a.inverse(inv_prec); }
    std::string str(const Elem& a) const {
        std::ostringstream os;
        bool first = true;
        for (const auto& [e, k] : a.c) {
            if (!first) os << " + ";
            first = false;
            os << "(" << k << ")";
            if (e.first != 0) os << "*x1^" << e.first;
            if (e.second != 0) os << "*x2^" << e.second;
        }
        if (first) os << "0";
        return os.str();
    }
};

// ---------------------------------------------------------------------------
// Truncated pseudodifferential operator sum_{i<=N} a_i d^i over a ring.
// Exponents above the maximal stored one are exactly zero; exponents below
// floor_ are unknown (floor_ = nullopt: nothing is truncated).
// ---------------------------------------------------------------------------
template <class Ring>
struct Psdo {
    using C = typename Ring::Elem;
    std::map<long, C, std::greater<long>> c;
    std::optional<long> floor_;

    bool exactly_zero() const { return c.empty() && !floor_; }
    bool has_top() const { return !c.empty(); }
    long top() const { return c.begin()->first; }
    // Upper bound for where unknown content could reach.
    long top_bound() const {
        if (!c.empty()) return c.begin()->first;
        return floor_ ? *floor_ - 1 : -kNoCap;
    }

    C coeff(long e) const {
        auto it = c.find(e);
        return it == c.end() ? C() : it->second;
    }
};

template <class Ring>
void normalize(const Ring& rg, Psdo<Ring>& op) {
    for (auto it = op.c.begin(); it != op.c.end();) {
        if (rg.is_exact_zero(it->second) || (op.floor_ && it->first < *op.floor_))
            it = op.c.erase(it);
        else
            ++it;
    }
}

template <class Ring>
Psdo<Ring> op_zero(const Ring&) { return {}; }

template <class Ring>
Psdo<Ring> op_one(const Ring& rg) {
    Psdo<Ring> r;
    r.c.emplace(0, rg.one());
    return r;
}

template <class Ring>
Psdo<Ring> op_term(const Ring& rg, long e, typename Ring::Elem k) {
    Psdo<Ring> r;
    if (!rg.is_exact_zero(k)) r.c.emplace(e, std::move(k));
    return r;
}

template <class Ring>
Psdo<Ring> op_add(const Ring& rg, const Psdo<Ring>& a, const Psdo<Ring>& b) {
    Psdo<Ring> r = a;
    for (const auto& [e, k] : b.c) {
        auto it = r.c.find(e);
        if (it == r.c.end()) r.c.emplace(e, k);
        else it->second = rg.add(it->second, k);
    }
    if (b.floor_ && (!r.floor_ || *b.floor_ > *r.floor_)) r.floor_ = b.floor_;
    normalize(rg, r);
    return r;
}

template <class Ring>
Psdo<Ring> op_neg(const Ring& rg, const Psdo<Ring>& a) {
    Psdo<Ring> r = a;
    for (auto& [e, k] : r.c) k = rg.neg(k);
    return r;
}

template <class Ring>
Psdo<Ring> op_sub(const Ring& rg, const Psdo<Ring>& a, const Psdo<Ring>& b) {
    return op_add(rg, a, op_neg(rg, b));
}

template <class Ring>
Psdo<Ring> op_scale(const Ring& rg, const Psdo<Ring>& a, const Rational& q) {
    if (q.is_zero()) return {};
    Psdo<Ring> r = a;
    for (auto& [e, k] : r.c) k = rg.scale(k, q);
    normalize(rg, r);
    return r;
}

// Exact composition within the provable window:
//   (a d^i) o (b d^j) = sum_k C_i^k a d^k(b) d^{i-k+j}.
// The k-sum is cut when the derivative dies exactly, falls below the working
// floor, or exhausts its own coefficient precision (which raises the floor).
template <class Ring>
Psdo<Ring> compose(const Ring& rg, const Psdo<Ring>& A, const Psdo<Ring>& B,
                   std::optional<long> req_floor = std::nullopt) {
    if (A.exactly_zero() || B.exactly_zero()) return {};
    std::optional<long> provable;  // floor forced by the inputs' own windows
    auto raise = [](std::optional<long>& fl, long v) { fl = fl ? std::max(*fl, v) : v; };
    if (A.floor_) raise(provable, *A.floor_ + B.top_bound());
    if (B.floor_) raise(provable, A.top_bound() + *B.floor_);
    std::optional<long> wf = provable;  // working floor: cut bound for the k-sums
    if (req_floor) raise(wf, *req_floor);

    Psdo<Ring> r;
    long pollute = -kNoCap;
    bool cut = false;  // did the working floor discard live content?
    const long guard = 4096;
    for (const auto& [i, a] : A.c) {
        for (const auto& [j, b] : B.c) {
            typename Ring::Elem d = b;
            for (long k = 0;; ++k) {
                long e = i - k + j;
                if (rg.is_exact_zero(d)) break;
                if (wf && e < *wf) {
                    cut = true;
                    break;
                }
                if (e < pollute) break;
                if (rg.exhausted(d)) {
                    pollute = std::max(pollute, e + 1);
                    break;
                }
                typename Ring::Elem t = rg.mul(a, rg.scale(d, binomial(i, k)));
                auto it = r.c.find(e);
                if (it == r.c.end()) r.c.emplace(e, std::move(t));
                else it->second = rg.add(it->second, t);
                if (i >= 0 && k == i) break;
                if (!wf && k > guard)
                    throw precision_error("compose: infinite Leibniz tail needs a floor request");
                d = rg.derive(d);
            }
        }
    }
    std::optional<long> fl = cut ? wf : provable;
    if (pollute > -kNoCap) raise(fl, pollute);
    r.floor_ = fl;
    normalize(rg, r);
    return r;
}

// Exponent partition A = A_+ + A_-: plus carries i >= 0, minus i < 0.
template <class Ring>
std::pair<Psdo<Ring>, Psdo<Ring>> split(const Ring& rg, const Psdo<Ring>& A) {
    Psdo<Ring> plus, minus;
    for (const auto& [e, k] : A.c)
        (e >= 0 ? plus : minus).c.emplace(e, k);
    if (A.floor_) {
        if (*A.floor_ > 0) plus.floor_ = A.floor_;
        minus.floor_ = std::min(*A.floor_, 0L);
    }
    normalize(rg, plus);
    normalize(rg, minus);
    return {plus, minus};
}

template <class Ring>
Psdo<Ring> power(const Ring& rg, const Psdo<Ring>& L, long n,
                 std::optional<long> req_floor = std::nullopt) {
    if (n < 1) throw validation_error("power: exponent must be >= 1");
    Psdo<Ring> r = L;
    for (long s = 1; s < n; ++s) r = compose(rg, r, L, req_floor);
    return r;
}

template <class Ring>
Psdo<Ring> commutator(const Ring& rg, const Psdo<Ring>& A, const Psdo<Ring>& B,
                      std::optional<long> req_floor = std::nullopt) {
    return op_sub(rg, compose(rg, A, B, req_floor), compose(rg, B, A, req_floor));
}

// No stored coefficient carries information (all are zero within their own
// windows); used for "= 0 within window" checks.
template <class Ring>
bool op_window_zero(const Ring& rg, const Psdo<Ring>& A) {
    for (const auto& [e, k] : A.c)
        if (!rg.is_window_zero(k)) return false;
    return true;
}

// Inverse of an operator whose leading coefficient is a unit of the base
// ring. Factor A = a_N d^N (1 + T) and run the Neumann series on T.
template <class Ring>
Psdo<Ring> invert(const Ring& rg, const Psdo<Ring>& A, std::optional<long> req_floor) {
    Psdo<Ring> W = A;
    normalize(rg, W);
    if (W.c.empty()) throw not_invertible("operator has no known leading term");
    long N = W.top();
    typename Ring::Elem lead_inv_c = rg.invert(W.c.begin()->second);
    Psdo<Ring> lead_inv = compose(rg, op_term(rg, -N, rg.one()),
                                  op_term(rg, 0, lead_inv_c), req_floor);
    Psdo<Ring> T = op_sub(rg, compose(rg, lead_inv, W, req_floor), op_one(rg));
    Psdo<Ring> acc = op_one(rg);
    Psdo<Ring> term = op_one(rg);
    Psdo<Ring> negT = op_neg(rg, T);
    while (true) {
        term = compose(rg, term, negT, req_floor);
        acc = op_add(rg, acc, term);
        // remaining tail terms only touch exponents below the merged floor
        if (op_window_zero(rg, term)) break;
    }
    return compose(rg, acc, lead_inv, req_floor);
}

// Inverse of S in 1 + (strictly negative part); S^-1 lands there again.
template <class Ring>
Psdo<Ring> monic_inverse(const Ring& rg, const Psdo<Ring>& S, std::optional<long> req_floor) {
    Psdo<Ring> W = S;
    normalize(rg, W);
    if (W.c.empty() || W.top() != 0 ||
        !rg.is_exact_zero(rg.add(W.c.begin()->second, rg.neg(rg.one()))))
        throw not_invertible("operator is not of monic-unit form 1 + (negative part)");
    for (const auto& [e, k] : W.c)
        if (e > 0) throw not_invertible("operator is not of monic-unit form 1 + (negative part)");
    return invert(rg, W, req_floor);
}

template <class Ring>
std::string op_str(const Ring& rg, const Psdo<Ring>& A) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, k] : A.c) {
        if (!first) os << " + ";
        first = false;
        os << "[" << rg.str(k) << "]";
        if (e != 0) os << " d^" << e;
    }
    if (first) os << "0";
    if (A.floor_) os << "  (floor " << *A.floor_ << ")";
    return os.str();
}

// ---------------------------------------------------------------------------
// Nested instance: operators in d2 whose coefficients are operators in d1
// over Q[[x1,x2]]. d2 differentiates coefficients by x2.
// ---------------------------------------------------------------------------
struct ParshinCoeffRing {
    using Elem = Psdo<X1Ring>;
    X1Ring base;
    long inner_floor = -8;

    Elem zero() const { return {}; }
    Elem one() const { return op_one(base); }
    Elem add(const Elem& a, const Elem& b) const { return op_add(base, a, b); }
    Elem neg(const Elem& a) const { return op_neg(base, a); }
    Elem mul(const Elem& a, const Elem& b) const { return compose(base, a, b, inner_floor); }
    Elem scale(const Elem& a, const Rational& q) const { return op_scale(base, a, q); }
    Elem derive(const Elem& a) const {
        Elem r = a;
        for (auto& [e, k] : r.c) k = k.d2();
        normalize(base, r);
        return r;
    }
    bool is_exact_zero(const Elem& a) const { return a.exactly_zero(); }
    bool is_window_zero(const Elem& a) const { return op_window_zero(base, a); }
    bool exhausted(const Elem&) const { return false; }
    Elem invert(const Elem& a) const { return picoh::invert(base, a, inner_floor); }
    std::string str(const Elem& a) const { return op_str(base, a); }
};

using InnerOp = Psdo<X1Ring>;
using EOp = Psdo<ParshinCoeffRing>;  // elements of C[[x1,x2]]((d1^-1))((d2^-1))

} // namespace picoh

#endif
