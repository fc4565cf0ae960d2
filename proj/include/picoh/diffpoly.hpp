#ifndef PICOH_DIFFPOLY_HPP
#define PICOH_DIFFPOLY_HPP

#include <compare>
#include <map>
#include <sstream>
#include <string>

#include "picoh/coefficients.hpp"
#include "picoh/errors.hpp"

namespace picoh {

// The indeterminate a_idx^(der): coefficient index idx >= 1, derivative
// order der >= 0.
struct DiffVar {
    int idx;
    int der;
    auto operator<=>(const DiffVar&) const = default;
};

using DiffMonomial = std::map<DiffVar, int>;  // variable -> power > 0

// Element of the differential polynomial ring Q{a_1, a_2, ...} with the
// derivation a_i^(m) -> a_i^(m+1).
struct DiffPoly {
    std::map<DiffMonomial, Rational> t;

    static DiffPoly constant(const Rational& q) {
        DiffPoly p;
        if (!q.is_zero()) p.t.emplace(DiffMonomial{}, q);
        return p;
    }
    static DiffPoly var(int idx, int der = 0) {
        DiffPoly p;
        p.t.emplace(DiffMonomial{{{idx, der}, 1}}, Rational(1));
        return p;
    }

    bool is_zero() const { return t.empty(); }

    void normalize() {
        for (auto it = t.begin(); it != t.end();) {
            if (it->second.is_zero()) it = t.erase(it);
            else ++it;
        }
    }

    DiffPoly operator+(const DiffPoly& o) const {
        DiffPoly r = *this;
        for (const auto& [m, q] : o.t) {
            auto it = r.t.find(m);
            if (it == r.t.end()) r.t.emplace(m, q);
            else it->second += q;
        }
        r.normalize();
        return r;
    }
    DiffPoly operator-() const {
        DiffPoly r = *this;
        for (auto& [m, q] : r.t) q = -q;
        return r;
    }
    DiffPoly operator-(const DiffPoly& o) const { return *this + (-o); }

    DiffPoly operator*(const DiffPoly& o) const {
        DiffPoly r;
        for (const auto& [m1, q1] : t)
            for (const auto& [m2, q2] : o.t) {
                DiffMonomial m = m1;
                for (const auto& [v, p] : m2) m[v] += p;
                Rational q = q1 * q2;
                auto it = r.t.find(m);
                if (it == r.t.end()) r.t.emplace(std::move(m), q);
                else it->second += q;
            }
        r.normalize();
        return r;
    }

    DiffPoly scaled(const Rational& q) const {
        if (q.is_zero()) return {};
        DiffPoly r = *this;
        for (auto& [m, c] : r.t) c *= q;
        return r;
    }

    // The derivation: Leibniz over monomials, a_i^(m) -> a_i^(m+1).
    DiffPoly derived() const {
        DiffPoly r;
        for (const auto& [m, q] : t) {
            for (const auto& [v, p] : m) {
                DiffMonomial dm = m;
                if (--dm[v] == 0) dm.erase(v);
                DiffVar up{v.idx, v.der + 1};
                dm[up] += 1;
                Rational c = q * Rational(p);
                auto it = r.t.find(dm);
                if (it == r.t.end()) r.t.emplace(std::move(dm), c);
                else it->second += c;
            }
        }
        r.normalize();
        return r;
    }

    DiffPoly derived(int times) const {
        DiffPoly r = *this;
        for (int s = 0; s < times; ++s) r = r.derived();
        return r;
    }

    // d/d(a_idx^(der))
    DiffPoly partial(const DiffVar& v) const {
        DiffPoly r;
        for (const auto& [m, q] : t) {
            auto it = m.find(v);
            if (it == m.end()) continue;
            DiffMonomial dm = m;
            if (--dm[v] == 0) dm.erase(v);
            Rational c = q * Rational(it->second);
            auto jt = r.t.find(dm);
            if (jt == r.t.end()) r.t.emplace(std::move(dm), c);
            else jt->second += c;
        }
        r.normalize();
        return r;
    }

    // Replace a_i^(m) by the m-th derivative of images[i] for every i in the
    // map; other variables stay untouched.
    DiffPoly substituted(const std::map<int, DiffPoly>& images) const;

    bool operator==(const DiffPoly& o) const { return t == o.t; }

    std::string str() const {
        if (t.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [m, q] : t) {
            if (!first) os << " + ";
            first = false;
            os << "(" << q << ")";
            for (const auto& [v, p] : m) {
                os << "*a" << v.idx;
                if (v.der > 0) os << "^(" << v.der << ")";
                if (p > 1) os << "**" << p;
            }
        }
        return os.str();
    }
};

// Evolutionary derivation: determined images D(a_i) for 1 <= i <= depth,
// extended to all a_i^(m) by commuting with the derivation.
struct EvolutionaryDerivation {
    std::map<int, DiffPoly> image;
    int max_determined = 0;

    const DiffPoly& of(int idx) const {
        auto it = image.find(idx);
        if (it == image.end())
            throw precision_error("flow coefficient a_" + std::to_string(idx) +
                                  " is not determined at this depth");
        return it->second;
    }

    // D(P) = sum over variables (i,m) of dP/da_i^(m) * d^m(D(a_i)).
    DiffPoly apply(const DiffPoly& p) const {
        DiffPoly r;
        std::map<DiffVar, DiffPoly> seen;
        for (const auto& [m, q] : p.t)
            for (const auto& [v, pw] : m)
                if (!seen.count(v)) seen.emplace(v, of(v.idx).derived(v.der));
        for (const auto& [v, img] : seen) r = r + p.partial(v) * img;
        return r;
    }
};

} // namespace picoh

#endif
