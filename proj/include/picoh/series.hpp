#ifndef PICOH_SERIES_HPP
#define PICOH_SERIES_HPP

#include <algorithm>
#include <climits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "picoh/coefficients.hpp"
#include "picoh/errors.hpp"

namespace picoh {

constexpr long kNoCap = LONG_MAX / 4;

// ---------------------------------------------------------------------------
// One-variable truncated power series K[[x]].
// Coefficients with exponent < prec are exact; >= prec unknown. prec = nullopt
// means the element is an exact polynomial.
// ---------------------------------------------------------------------------
template <class K>
struct PowerSeries1 {
    std::map<long, K> c;       // exponent -> nonzero coefficient
    std::optional<long> prec;

    PowerSeries1() = default;

    static PowerSeries1 term(long e, K k) {
        PowerSeries1 s;
        if (!scalar_is_zero(k)) s.c.emplace(e, std::move(k));
        return s;
    }
    static PowerSeries1 constant(K k) { return term(0, std::move(k)); }

    void normalize() {
        for (auto it = c.begin(); it != c.end();) {
            if (scalar_is_zero(it->second) || (prec && it->first >= *prec))
                it = c.erase(it);
            else
                ++it;
        }
    }

    bool exactly_zero() const { return c.empty() && !prec; }
    // True when nothing at all is known about the element.
    bool exhausted() const { return prec && *prec <= 0 && c.empty(); }

    long low() const { return c.empty() ? (prec ? *prec : kNoCap) : c.begin()->first; }

    PowerSeries1 operator+(const PowerSeries1& o) const {
        PowerSeries1 r = *this;
        for (const auto& [e, k] : o.c) {
            auto it = r.c.find(e);
            if (it == r.c.end()) r.c.emplace(e, k);
            else it->second = it->second + k;
        }
        if (o.prec && (!r.prec || *o.prec < *r.prec)) r.prec = o.prec;
        r.normalize();
        return r;
    }
    PowerSeries1 operator-() const {
        PowerSeries1 r = *this;
        for (auto& [e, k] : r.c) k = -k;
        return r;
    }
    PowerSeries1 operator-(const PowerSeries1& o) const { return *this + (-o); }

    PowerSeries1 operator*(const PowerSeries1& o) const {
        if (exactly_zero() || o.exactly_zero()) return {};
        PowerSeries1 r;
        if (prec) r.prec = *prec + o.low();
        if (o.prec) {
            long cand = *o.prec + low();
            if (!r.prec || cand < *r.prec) r.prec = cand;
        }
        for (const auto& [e1, k1] : c)
            for (const auto& [e2, k2] : o.c) {
                if (r.prec && e1 + e2 >= *r.prec) continue;
                K prod = k1 * k2;
                auto it = r.c.find(e1 + e2);
                if (it == r.c.end()) r.c.emplace(e1 + e2, std::move(prod));
                else it->second = it->second + prod;
            }
        r.normalize();
        return r;
    }

    // Termwise d/dx; precision drops by one order.
    PowerSeries1 derivative() const {
        PowerSeries1 r;
        if (prec) r.prec = *prec - 1;
        for (const auto& [e, k] : c) {
            if (e == 0) continue;
            if (r.prec && e - 1 >= *r.prec) continue;
            r.c.emplace(e - 1, k * scalar_from_rational(Rational(e), k));
        }
        r.normalize();
        return r;
    }

    PowerSeries1 truncated(long p) const {
        PowerSeries1 r = *this;
        r.prec = prec ? std::min(*prec, p) : p;
        r.normalize();
        return r;
    }

    // Multiplicative inverse of a unit (nonzero constant term).
    PowerSeries1 inverse(long req_prec) const {
        if ((prec && *prec <= 0))
            throw precision_error("inverse: constant term lies outside the known window");
        auto it = c.find(0);
        if (it == c.end() || !scalar_is_unit(it->second))
            throw not_invertible("power series with non-unit constant term");
        K c0i = scalar_inverse(it->second);
        PowerSeries1 n;  // 1 - c0^-1 * this, away from the origin
        for (const auto& [e, k] : c) {
            if (e == 0) continue;
            n.c.emplace(e, -(c0i * k));
        }
        n.prec = prec;
        long p = prec ? std::min(*prec, req_prec) : req_prec;
        PowerSeries1 acc = constant(scalar_from_rational(Rational(1), it->second));
        PowerSeries1 term = acc;
        while (true) {
            term = (term * n).truncated(p);
            acc = acc + term;
            if (term.c.empty()) break;
        }
        PowerSeries1 r;
        for (const auto& [e, k] : acc.c) r.c.emplace(e, c0i * k);
        r.prec = acc.prec ? std::min(*acc.prec, p) : p;
        r.normalize();
        return r;
    }

    bool operator==(const PowerSeries1& o) const { return c == o.c && prec == o.prec; }
};

// ---------------------------------------------------------------------------
// Bivariate truncated power series K[[x1,x2]]; the unknown region is the union
// of the half-planes e1 >= prec1 and e2 >= prec2.
// ---------------------------------------------------------------------------
template <class K>
struct PowerSeries2 {
    std::map<std::pair<long, long>, K> c;  // (e1,e2) -> coefficient
    std::optional<long> prec1, prec2;

    PowerSeries2() = default;

    static PowerSeries2 term(long e1, long e2, K k) {
        PowerSeries2 s;
        if (!scalar_is_zero(k)) s.c.emplace(std::make_pair(e1, e2), std::move(k));
        return s;
    }
    static PowerSeries2 constant(K k) { return term(0, 0, std::move(k)); }

    void normalize() {
        for (auto it = c.begin(); it != c.end();) {
            bool dead = scalar_is_zero(it->second) ||
                        (prec1 && it->first.first >= *prec1) ||
                        (prec2 && it->first.second >= *prec2);
            if (dead) it = c.erase(it);
            else ++it;
        }
    }

    bool exactly_zero() const { return c.empty() && !prec1 && !prec2; }
    bool exhausted() const {
        return c.empty() && ((prec1 && *prec1 <= 0) || (prec2 && *prec2 <= 0));
    }

    long low1() const {
        if (!c.empty()) {
            long m = kNoCap;
            for (const auto& [e, k] : c) m = std::min(m, e.first);
            return m;
        }
        return prec1 ? *prec1 : kNoCap;
    }
    long low2() const {
        if (!c.empty()) {
            long m = kNoCap;
            for (const auto& [e, k] : c) m = std::min(m, e.second);
            return m;
        }
        return prec2 ? *prec2 : kNoCap;
    }

    PowerSeries2 operator+(const PowerSeries2& o) const {
        PowerSeries2 r = *this;
        for (const auto& [e, k] : o.c) {
            auto it = r.c.find(e);
            if (it == r.c.end()) r.c.emplace(e, k);
            else it->second = it->second + k;
        }
        if (o.prec1 && (!r.prec1 || *o.prec1 < *r.prec1)) r.prec1 = o.prec1;
        if (o.prec2 && (!r.prec2 || *o.prec2 < *r.prec2)) r.prec2 = o.prec2;
        r.normalize();
        return r;
    }
    PowerSeries2 operator-() const {
        PowerSeries2 r = *this;
        for (auto& [e, k] : r.c) k = -k;
        return r;
    }
    PowerSeries2 operator-(const PowerSeries2& o) const { return *this + (-o); }

    PowerSeries2 operator*(const PowerSeries2& o) const {
        if (exactly_zero() || o.exactly_zero()) return {};
        PowerSeries2 r;
        auto tighten = [](std::optional<long>& dst, long cand) {
            if (!dst || cand < *dst) dst = cand;
        };
        if (prec1) tighten(r.prec1, *prec1 + o.low1());
        if (o.prec1) tighten(r.prec1, *o.prec1 + low1());
        if (prec2) tighten(r.prec2, *prec2 + o.low2());
        if (o.prec2) tighten(r.prec2, *o.prec2 + low2());
        for (const auto& [e1, k1] : c)
            for (const auto& [e2, k2] : o.c) {
                std::pair<long, long> e{e1.first + e2.first, e1.second + e2.second};
                if (r.prec1 && e.first >= *r.prec1) continue;
                if (r.prec2 && e.second >= *r.prec2) continue;
                K prod = k1 * k2;
                auto it = r.c.find(e);
                if (it == r.c.end()) r.c.emplace(e, std::move(prod));
                else it->second = it->second + prod;
            }
        r.normalize();
        return r;
    }

    PowerSeries2 d1() const {  // d/dx1
        PowerSeries2 r;
        r.prec1 = prec1 ? std::optional<long>(*prec1 - 1) : std::nullopt;
        r.prec2 = prec2;
        for (const auto& [e, k] : c) {
            if (e.first == 0) continue;
            r.c.emplace(std::make_pair(e.first - 1, e.second),
                        k * scalar_from_rational(Rational(e.first), k));
        }
        r.normalize();
        return r;
    }
    PowerSeries2 d2() const {  // d/dx2
        PowerSeries2 r;
        r.prec1 = prec1;
        r.prec2 = prec2 ? std::optional<long>(*prec2 - 1) : std::nullopt;
        for (const auto& [e, k] : c) {
            if (e.second == 0) continue;
            r.c.emplace(std::make_pair(e.first, e.second - 1),
                        k * scalar_from_rational(Rational(e.second), k));
        }
        r.normalize();
        return r;
    }

    // Constant term; scalar zero if untouched by truncation, error if unknown.
    K constant_term() const {
        if ((prec1 && *prec1 <= 0) || (prec2 && *prec2 <= 0))
            throw precision_error("constant term lies outside the known window");
        auto it = c.find({0, 0});
        return it == c.end() ? K() : it->second;
    }

    // Multiplicative inverse of a unit (nonzero constant term), to the
    // precision the inputs afford or the requested one, whichever is tighter.
    PowerSeries2 inverse(long req_prec) const {
        K c0 = constant_term();
        if (!scalar_is_unit(c0)) throw not_invertible("power series with non-unit constant term");
        K c0i = scalar_inverse(c0);
        PowerSeries2 n;  // n = 1 - c0^-1 * this, supported away from (0,0)
        for (const auto& [e, k] : c) {
            if (e.first == 0 && e.second == 0) continue;
            n.c.emplace(e, -(c0i * k));
        }
        n.prec1 = prec1;
        n.prec2 = prec2;
        PowerSeries2 acc = constant(K(scalar_from_rational(Rational(1), c0)));
        PowerSeries2 term = acc;
        long p1 = prec1 ? std::min(*prec1, req_prec) : req_prec;
        long p2 = prec2 ? std::min(*prec2, req_prec) : req_prec;
        while (true) {
            term = term * n;
            term.prec1 = term.prec1 ? std::min(*term.prec1, p1) : p1;
            term.prec2 = term.prec2 ? std::min(*term.prec2, p2) : p2;
            term.normalize();
            if (term.c.empty()) { acc = acc + term; break; }
            acc = acc + term;
        }
        PowerSeries2 r;
        for (const auto& [e, k] : acc.c) r.c.emplace(e, c0i * k);
        r.prec1 = acc.prec1;
        r.prec2 = acc.prec2;
        r.normalize();
        return r;
    }

    bool operator==(const PowerSeries2& o) const {
        return c == o.c && prec1 == o.prec1 && prec2 == o.prec2;
    }
};

// ---------------------------------------------------------------------------
// One level of a bi-series: a Laurent window in u. Stored coefficients below
// `cap` are exact (absent = exactly zero); exponents >= cap are unknown.
// cap = nullopt means the whole level is known (finitely many terms).
// ---------------------------------------------------------------------------
template <class K>
struct LaurentWindow {
    std::map<long, K> c;
    std::optional<long> cap;

    void normalize() {
        for (auto it = c.begin(); it != c.end();) {
            if (scalar_is_zero(it->second) || (cap && it->first >= *cap)) it = c.erase(it);
            else ++it;
        }
    }
    bool exactly_zero() const { return c.empty() && !cap; }
    // Lower bound for where nonzero content can start.
    long low() const { return c.empty() ? (cap ? *cap : kNoCap) : c.begin()->first; }
};

// ---------------------------------------------------------------------------
// A window of k((u))((t)): Laurent in t outermost, coefficients Laurent in u.
// levels[n] holds the u-slice at t-exponent n; a level absent with n < t_cap
// is exactly zero. t-levels >= t_cap are unknown (t_cap = nullopt: none are).
// Monomial order: t-exponent primary ascending, u-exponent secondary.
// ---------------------------------------------------------------------------
template <class K>
struct BiSeries {
    using Level = LaurentWindow<K>;
    std::map<long, Level> levels;
    std::optional<long> t_cap;

    BiSeries() = default;

    static BiSeries monomial(long t, long u, K k) {
        BiSeries s;
        if (!scalar_is_zero(k)) s.levels[t].c.emplace(u, std::move(k));
        return s;
    }
    static BiSeries one() { return monomial(0, 0, scalar_from_rational(Rational(1), K())); }

    void normalize() {
        for (auto it = levels.begin(); it != levels.end();) {
            if (t_cap && it->first >= *t_cap) { it = levels.erase(it); continue; }
            it->second.normalize();
            if (it->second.exactly_zero()) it = levels.erase(it);
            else ++it;
        }
    }

    bool exactly_zero() const { return levels.empty() && !t_cap; }
    // No coefficient information at all inside the window.
    bool zero_in_window() const {
        for (const auto& [n, lv] : levels)
            if (!lv.c.empty()) return false;
        return true;
    }
    // Flag for pipelines: a window exists but nothing is representable in it.
    bool no_information() const { return zero_in_window() && !exactly_zero(); }

    // Lower bound on the t-level where nonzero content can start.
    long t_low_bound() const {
        if (!levels.empty()) return levels.begin()->first;
        return t_cap ? *t_cap : kNoCap;
    }

    // Cap of the known u-region at level n; kNoCap if fully known,
    // LONG_MIN-ish (we use -kNoCap) when the level is entirely unknown.
    long known_cap(long n) const {
        if (t_cap && n >= *t_cap) return -kNoCap;
        auto it = levels.find(n);
        if (it == levels.end()) return kNoCap;
        return it->second.cap ? *it->second.cap : kNoCap;
    }

    K coeff(long t, long u) const {
        auto it = levels.find(t);
        if (it == levels.end()) return K();
        auto jt = it->second.c.find(u);
        return jt == it->second.c.end() ? K() : jt->second;
    }

    BiSeries operator+(const BiSeries& o) const {
        BiSeries r = *this;
        if (o.t_cap && (!r.t_cap || *o.t_cap < *r.t_cap)) r.t_cap = o.t_cap;
        for (const auto& [n, lv] : o.levels) {
            Level& dst = r.levels[n];
            for (const auto& [u, k] : lv.c) {
                auto it = dst.c.find(u);
                if (it == dst.c.end()) dst.c.emplace(u, k);
                else it->second = it->second + k;
            }
            if (lv.cap && (!dst.cap || *lv.cap < *dst.cap)) dst.cap = lv.cap;
        }
        r.normalize();
        return r;
    }
    BiSeries operator-() const {
        BiSeries r = *this;
        for (auto& [n, lv] : r.levels)
            for (auto& [u, k] : lv.c) k = -k;
        return r;
    }
    BiSeries operator-(const BiSeries& o) const { return *this + (-o); }

    BiSeries scaled(const K& k) const {
        if (scalar_is_zero(k)) return {};
        BiSeries r = *this;
        for (auto& [n, lv] : r.levels)
            for (auto& [u, kk] : lv.c) kk = kk * k;
        r.normalize();
        return r;
    }

    // Exact product with the tightest window derivable from the inputs.
    BiSeries operator*(const BiSeries& o) const {
        if (exactly_zero() || o.exactly_zero()) return {};
        BiSeries r;
        if (t_cap) {
            long cand = *t_cap + o.t_low_bound();
            r.t_cap = r.t_cap ? std::min(*r.t_cap, cand) : cand;
        }
        if (o.t_cap) {
            long cand = *o.t_cap + t_low_bound();
            r.t_cap = r.t_cap ? std::min(*r.t_cap, cand) : cand;
        }
        for (const auto& [n1, l1] : levels)
            for (const auto& [n2, l2] : o.levels) {
                long n = n1 + n2;
                if (r.t_cap && n >= *r.t_cap) continue;
                Level& dst = r.levels[n];
                // pair window
                std::optional<long> pcap;
                if (l1.cap) pcap = *l1.cap + l2.low();
                if (l2.cap) {
                    long cand = *l2.cap + l1.low();
                    if (!pcap || cand < *pcap) pcap = cand;
                }
                if (pcap && (!dst.cap || *pcap < *dst.cap)) dst.cap = pcap;
                for (const auto& [u1, k1] : l1.c)
                    for (const auto& [u2, k2] : l2.c) {
                        K prod = k1 * k2;
                        auto it = dst.c.find(u1 + u2);
                        if (it == dst.c.end()) dst.c.emplace(u1 + u2, std::move(prod));
                        else it->second = it->second + prod;
                    }
            }
        r.normalize();
        return r;
    }

    // Intersect the window with {t < tq} and per-level {u < uq}. Sound: only
    // discards knowledge.
    BiSeries clipped(long tq, long uq) const {
        BiSeries r = *this;
        r.t_cap = r.t_cap ? std::min(*r.t_cap, tq) : tq;
        for (auto& [n, lv] : r.levels)
            lv.cap = lv.cap ? std::min(*lv.cap, uq) : uq;
        r.normalize();
        return r;
    }

    // Least t-exponent carrying a nonzero coefficient. Errors on zero input
    // or when the lowest level may hide below the window.
    long t_order() const {
        for (const auto& [n, lv] : levels) {
            if (!lv.c.empty()) return n;
            if (lv.cap) throw precision_error("t_order: lowest level truncated away");
        }
        if (exactly_zero()) throw precision_error("t_order of the zero element");
        throw precision_error("t_order: no nonzero coefficient inside the window");
    }

    // Leading (t,u,coefficient) under the monomial order.
    std::tuple<long, long, K> leading() const {
        long n = t_order();
        const Level& lv = levels.at(n);
        auto it = lv.c.begin();
        return {n, it->first, it->second};
    }

    // Multiplicative inverse. The leading bi-coefficient must be a unit scalar.
    // req_t_levels / req_u_breadth bound the computed window relative to the
    // normalized element.
    BiSeries inverse(long req_t_levels = 8, long req_u_breadth = 16) const {
        auto [n0, a0, c0] = leading();
        if (!scalar_is_unit(c0)) throw not_invertible("leading bi-coefficient is not a unit");
        BiSeries z = *this * monomial(-n0, -a0, scalar_inverse(c0));
        // z = 1 + rest, rest strictly after 1 in the monomial order
        BiSeries acc = one();
        BiSeries n = acc - z;
        if (n.exactly_zero()) return acc * monomial(-n0, -a0, scalar_inverse(c0));
        n = n.clipped(req_t_levels, req_u_breadth);
        BiSeries term = one();
        while (true) {
            term = (term * n).clipped(req_t_levels, req_u_breadth);
            acc = acc + term;
            if (term.zero_in_window()) break;
        }
        // the tail still carries unknown-window markers to higher levels;
        // their minimal caps are reached within req_t_levels more steps
        // (cap-minimal marker paths use only level-raising factors)
        for (long extra = 0; extra <= req_t_levels; ++extra) {
            term = (term * n).clipped(req_t_levels, req_u_breadth);
            if (term.exactly_zero()) break;
            acc = acc + term;
        }
        return acc * monomial(-n0, -a0, scalar_inverse(c0));
    }

    bool operator==(const BiSeries& o) const { return levels == o.levels && t_cap == o.t_cap; }

    std::string str() const {
        std::ostringstream os;
        bool first = true;
        for (const auto& [n, lv] : levels)
            for (const auto& [u, k] : lv.c) {
                if (!first) os << " + ";
                first = false;
                os << "(" << k << ")";
                if (u != 0) os << "*u^" << u;
                if (n != 0) os << "*t^" << n;
            }
        if (first) os << "0";
        if (t_cap) os << " [t<" << *t_cap << "]";
        return os.str();
    }
};

template <class K>
bool operator==(const LaurentWindow<K>& a, const LaurentWindow<K>& b) {
    return a.c == b.c && a.cap == b.cap;
}

// Coefficients agree wherever both windows claim knowledge.
template <class K>
bool equal_in_common_window(const BiSeries<K>& a, const BiSeries<K>& b) {
    auto keys = [](const BiSeries<K>& s, std::vector<long>& out) {
        for (const auto& [n, lv] : s.levels) out.push_back(n);
    };
    std::vector<long> ns;
    keys(a, ns);
    keys(b, ns);
    for (long n : ns) {
        long cap = std::min(a.known_cap(n), b.known_cap(n));
        auto check = [&](const BiSeries<K>& x, const BiSeries<K>& y) {
            auto it = x.levels.find(n);
            if (it == x.levels.end()) return true;
            for (const auto& [u, k] : it->second.c) {
                if (u >= cap) continue;
                if (!(y.coeff(n, u) == k)) return false;
            }
            return true;
        };
        if (!check(a, b) || !check(b, a)) return false;
    }
    return true;
}

// a == 1 everywhere both sides are known.
template <class K>
bool is_one_in_window(const BiSeries<K>& a) {
    return equal_in_common_window(a, BiSeries<K>::one());
}

} // namespace picoh

#endif
