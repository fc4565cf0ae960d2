#include <algorithm>
#include <sstream>
#include <vector>

#include "picoh/subspace.hpp"

namespace picoh {
namespace {

// Extended integer value for threshold arithmetic.
struct XVal {
    int kind;  // -1: -inf, 0: finite, +1: +inf
    long v;
    static XVal ninf() { return {-1, 0}; }
    static XVal pinf() { return {+1, 0}; }
    static XVal fin(long x) { return {0, x}; }
    bool neg() const { return kind < 0; }
    bool pos() const { return kind > 0; }
    bool finite() const { return kind == 0; }
    bool le(const XVal& o) const {
        if (neg() || o.pos()) return true;
        if (pos() || o.neg()) return false;
        return v <= o.v;
    }
    XVal add(const XVal& o) const {  // -inf absorbs (an empty tail kills the product)
        if (neg() || o.neg()) return ninf();
        if (pos() || o.pos()) return pinf();
        return fin(v + o.v);
    }
    void maximize(const XVal& o) {
        if (le(o)) *this = o;
    }
};

XVal xval(const Threshold& t) {
    switch (t.kind) {
        case Threshold::Kind::NegInf: return XVal::ninf();
        case Threshold::Kind::PosInf: return XVal::pinf();
        default: return XVal::fin(t.value);
    }
}

struct Closure {
    const WindowedSubspace& A;
    const WindowedSubspace& W;

    XVal thA(long m) const { return xval(A.threshold(0, m)); }
    XVal thW(int j, long n) const { return xval(W.threshold(j, n)); }

    // Is any W-tail present at some level >= (resp. <=) the bound?
    bool tail_at_or_above(int j, long bound) const {
        for (long n = std::max(bound, W.box().t_lo); n < W.box().t_hi; ++n)
            if (!thW(j, n).neg()) return true;
        if (W.tail().high[j].kind != BoundaryKind::Empty) return true;
        if (bound < W.box().t_lo && W.tail().low[j].kind != BoundaryKind::Empty) return true;
        return false;
    }
    bool tail_at_or_below(int j, long bound) const {
        for (long n = W.box().t_lo; n <= std::min(bound, W.box().t_hi - 1); ++n)
            if (!thW(j, n).neg()) return true;
        if (W.tail().low[j].kind != BoundaryKind::Empty) return true;
        if (bound >= W.box().t_hi && W.tail().high[j].kind != BoundaryKind::Empty) return true;
        return false;
    }

    // sup over nu >= nu0 of (thW(j, nu) - s * nu); XVal::ninf when empty.
    XVal sup_high(int j, long nu0, long s) const {
        XVal best = XVal::ninf();
        const auto& box = W.box();
        for (long nu = std::max(nu0, box.t_lo); nu < box.t_hi; ++nu) {
            XVal t = thW(j, nu);
            if (t.neg()) continue;
            if (t.pos()) return XVal::pinf();
            best.maximize(XVal::fin(t.v - s * nu));
        }
        if (nu0 < box.t_lo) {  // low-mode stretch [nu0, t_lo)
            const BoundaryMode& m = W.tail().low[j];
            if (m.kind == BoundaryKind::Full) return XVal::pinf();
            if (m.kind == BoundaryKind::Affine) {
                long sl = m.slope - s;
                long at_lo = (m.slope * nu0 + m.intercept) - s * nu0;
                long at_hi = (m.slope * (box.t_lo - 1) + m.intercept) - s * (box.t_lo - 1);
                best.maximize(XVal::fin(sl > 0 ? at_hi : at_lo));
            }
        }
        {  // high-mode stretch [max(nu0, t_hi), inf)
            const BoundaryMode& m = W.tail().high[j];
            if (m.kind == BoundaryKind::Affine) {
                long start = std::max(nu0, box.t_hi);
                long sl = m.slope - s;
                if (sl > 0) return XVal::pinf();
                best.maximize(XVal::fin((m.slope * start + m.intercept) - s * start));
            }
        }
        return best;
    }

    // sup over nu <= nu0 of (thW(j, nu) - s * nu).
    XVal sup_low(int j, long nu0, long s) const {
        XVal best = XVal::ninf();
        const auto& box = W.box();
        for (long nu = box.t_lo; nu <= std::min(nu0, box.t_hi - 1); ++nu) {
            XVal t = thW(j, nu);
            if (t.neg()) continue;
            if (t.pos()) return XVal::pinf();
            best.maximize(XVal::fin(t.v - s * nu));
        }
        {  // low-mode stretch (-inf, min(nu0, t_lo - 1)]
            const BoundaryMode& m = W.tail().low[j];
            long end = std::min(nu0, box.t_lo - 1);
            if (m.kind == BoundaryKind::Full) return XVal::pinf();
            if (m.kind == BoundaryKind::Affine) {
                long sl = m.slope - s;
                if (sl < 0) return XVal::pinf();  // grows toward -inf
                best.maximize(XVal::fin((m.slope * end + m.intercept) - s * end));
            }
        }
        if (nu0 >= box.t_hi) {  // high-mode stretch [t_hi, nu0]
            const BoundaryMode& m = W.tail().high[j];
            if (m.kind == BoundaryKind::Affine) {
                long sl = m.slope - s;
                long at_lo = (m.slope * box.t_hi + m.intercept) - s * box.t_hi;
                long at_hi = (m.slope * nu0 + m.intercept) - s * nu0;
                best.maximize(XVal::fin(sl > 0 ? at_hi : at_lo));
            }
        }
        return best;
    }

    // Largest reachable u-exponent of a tail-by-tail product at level sigma:
    // G(sigma) = sup { thA(m) + thW(j, n) : m + n = sigma }.
    XVal G(int j, long sigma) const {
        XVal best = XVal::ninf();
        const auto& abox = A.box();
        for (long m = abox.t_lo; m < abox.t_hi; ++m) {
            XVal a = thA(m);
            if (a.neg()) continue;
            XVal w = thW(j, sigma - m);
            if (w.neg()) continue;
            if (a.pos() || w.pos()) return XVal::pinf();
            best.maximize(XVal::fin(a.v + w.v));
        }
        {  // m in the low stretch: n = sigma - m >= sigma - t_lo + 1
            const BoundaryMode& m = A.tail().low[0];
            long nu0 = sigma - abox.t_lo + 1;
            if (m.kind == BoundaryKind::Full) {
                if (tail_at_or_above(j, nu0)) return XVal::pinf();
            } else if (m.kind == BoundaryKind::Affine) {
                XVal s = sup_high(j, nu0, m.slope);
                if (s.pos()) return XVal::pinf();
                if (s.finite()) best.maximize(XVal::fin(m.slope * sigma + m.intercept + s.v));
            }
        }
        {  // m in the high stretch: n <= sigma - t_hi
            const BoundaryMode& m = A.tail().high[0];
            long nu0 = sigma - abox.t_hi;
            if (m.kind == BoundaryKind::Affine) {
                XVal s = sup_low(j, nu0, m.slope);
                if (s.pos()) return XVal::pinf();
                if (s.finite()) best.maximize(XVal::fin(m.slope * sigma + m.intercept + s.v));
            }
        }
        return best;
    }

    // Single monomial u^s t^sigma e_j in W?
    bool monomial_in_W(long sigma, long s, int j) const {
        if (W.threshold(j, sigma).covers(s)) return true;
        if (!W.box().contains(sigma, s)) return false;
        SparseVec v;
        v.emplace(W.col(sigma, s, j), Rational(1));
        return W.echelon().reduce(std::move(v)).empty();
    }

    // Verify every excess product monomial at level sigma. Returns empty
    // string on success, a witness otherwise.
    std::string check_sigma(int j, long sigma) const {
        XVal g = G(j, sigma);
        if (g.neg()) return "";
        XVal t = thW(j, sigma);
        if (g.le(t)) return "";
        std::ostringstream os;
        if (g.pos()) {
            os << "tail product reaches unbounded u at level " << sigma << " (comp " << j << ")";
            return os.str();
        }
        if (t.neg()) {
            // products go down to u = -inf at this level but no tail covers them
            os << "tail products at level " << sigma << " (comp " << j
               << ") have no covering tail";
            return os.str();
        }
        for (long s = g.v; s > t.v; --s) {
            if (!monomial_in_W(sigma, s, j)) {
                os << "tail product monomial u^" << s << " t^" << sigma << " e_" << j
                   << " escapes W";
                return os.str();
            }
        }
        return "";
    }
};

// Decode the rank-1 subspace's reduced rows back into scalar bi-series.
std::vector<BiSeries<Rational>> scalar_generators(const WindowedSubspace& A) {
    std::vector<BiSeries<Rational>> out;
    for (const auto& row : A.gen_rows()) {
        BiSeries<Rational> s;
        for (const auto& [cc, q] : row) {
            long n, u;
            int j;
            A.decode(cc, n, u, j);
            s = s + BiSeries<Rational>::monomial(n, u, q);
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<FieldVec> vector_generators(const WindowedSubspace& W) {
    std::vector<FieldVec> out;
    for (const auto& row : W.gen_rows()) {
        FieldVec f(W.rank());
        for (const auto& [cc, q] : row) {
            long n, u;
            int j;
            W.decode(cc, n, u, j);
            f[j] = f[j] + BiSeries<Rational>::monomial(n, u, q);
        }
        out.push_back(std::move(f));
    }
    return out;
}

FieldVec scale_vec(const BiSeries<Rational>& a, const FieldVec& w) {
    FieldVec r;
    r.reserve(w.size());
    for (const auto& comp : w) r.push_back(a * comp);
    return r;
}

struct TermList {
    // (level, u, comp) with coefficient; comp fixed 0 for scalars
    std::vector<std::tuple<long, long, int, Rational>> terms;
};

TermList terms_of(const FieldVec& v) {
    TermList t;
    for (int j = 0; j < static_cast<int>(v.size()); ++j)
        for (const auto& [n, lv] : v[j].levels)
            for (const auto& [u, q] : lv.c) t.terms.emplace_back(n, u, j, q);
    return t;
}

// A*W closure; A rank 1.
SchurReport closure_check(const WindowedSubspace& A, const WindowedSubspace& W) {
    Closure cl{A, W};
    const MonomialBox& ab = A.box();
    const MonomialBox& wb = W.box();

    long maxabs = 8;
    auto feed = [&maxabs](long v) { maxabs = std::max(maxabs, std::abs(v)); };
    for (long v : {ab.t_lo, ab.t_hi, ab.u_lo, ab.u_hi, wb.t_lo, wb.t_hi, wb.u_lo, wb.u_hi})
        feed(v);
    auto feed_profile = [&](const TailProfile& t) {
        for (const auto& dj : t.d)
            for (const auto& [n, d] : dj) feed(d);
        for (const auto& m : t.high) { feed(m.slope); feed(m.intercept); }
        for (const auto& m : t.low) { feed(m.slope); feed(m.intercept); }
    };
    feed_profile(A.tail());
    feed_profile(W.tail());
    const long B = 16 * (maxabs + 4);
    const long D1 = B + (1L << 16), D2 = B + (1L << 17);

    auto gens_A = scalar_generators(A);
    auto gens_W = vector_generators(W);

    // (a) generator x generator; window-escaping products are undecidable
    // from the description and are skipped
    for (const auto& a : gens_A)
        for (const auto& w : gens_W) {
            MembershipResult r = W.membership(scale_vec(a, w));
            if (r.verdict == Tri::No)
                return {Tri::No, "generator product escapes: " + r.detail};
        }

    // (d) tail x tail via the threshold convolution
    for (int j = 0; j < wb.rank; ++j) {
        for (long sigma = -B; sigma <= B; ++sigma) {
            std::string w = cl.check_sigma(j, sigma);
            if (!w.empty()) return {Tri::No, w};
        }
        for (long sgn : {-1L, 1L}) {
            XVal g1 = cl.G(j, sgn * D1), t1 = cl.thW(j, sgn * D1);
            XVal g2 = cl.G(j, sgn * D2), t2 = cl.thW(j, sgn * D2);
            if (!g1.le(t1))
                return {Tri::No, "tail closure fails in the deep regime (sigma ~ " +
                                     std::to_string(sgn * D1) + ")"};
            if (!g2.le(t2))
                return {Tri::No, "tail closure fails in the deep regime (sigma ~ " +
                                     std::to_string(sgn * D2) + ")"};
            if (g1.kind != g2.kind || t1.kind != t2.kind)
                return {Tri::Indeterminate, "unstable asymptotic regime in tail closure"};
            if (g1.finite() && t1.finite()) {
                // margin must not grow outward
                long m1 = g1.v - t1.v, m2 = g2.v - t2.v;
                if (m2 > m1)
                    return {Tri::No, "tail closure margin grows toward sigma = " +
                                         std::string(sgn > 0 ? "+inf" : "-inf")};
            }
        }
    }

    // (b) A-generators x W-tail monomials
    long bg_lo = wb.u_lo - std::max(0L, ab.u_hi) - (wb.u_hi - wb.u_lo) - 4;
    long bg_hi = wb.u_hi + std::max(0L, -ab.u_lo) + 4;
    long n_lo = wb.t_lo - ab.t_width() - wb.t_width() - 4;
    long n_hi = wb.t_hi + ab.t_width() + wb.t_width() + 4;
    for (const auto& a : gens_A) {
        TermList tl = terms_of(FieldVec{a});
        auto per_term_ok_binding = [&](int j, long n, const XVal& beta) {
            for (const auto& [ms, as, c0, q] : tl.terms) {
                XVal lhs = XVal::fin(as).add(beta);
                if (!lhs.le(cl.thW(j, ms + n))) return false;
            }
            return true;
        };
        for (int j = 0; j < wb.rank; ++j) {
            for (long n = n_lo; n < n_hi; ++n) {
                XVal th = cl.thW(j, n);
                if (th.neg()) continue;
                long hi = th.finite() ? std::min(th.v, bg_hi) : bg_hi;
                for (long beta = bg_lo; beta <= hi; ++beta) {
                    FieldVec prod(wb.rank);
                    prod[j] = a * BiSeries<Rational>::monomial(n, beta, Rational(1));
                    MembershipResult r = W.membership(prod);
                    if (r.verdict == Tri::No) {
                        std::ostringstream os;
                        os << "generator x tail monomial u^" << beta << " t^" << n << " e_" << j
                           << ": " << r.detail;
                        return {Tri::No, os.str()};
                    }
                }
                // below the explicit range every product term is below the box
                XVal binding_low =
                    th.finite() ? XVal::fin(std::min(th.v, bg_lo - 1)) : XVal::fin(bg_lo - 1);
                if (!per_term_ok_binding(j, n, binding_low))
                    return {Tri::No, "generator x deep tail monomial escapes W (level " +
                                         std::to_string(n) + ")"};
                // above it (huge thresholds) every term is above the box
                if (th.pos() || (th.finite() && th.v > bg_hi)) {
                    XVal binding_high = th.pos() ? XVal::pinf() : XVal::fin(th.v);
                    if (!per_term_ok_binding(j, n, binding_high))
                        return {Tri::No, "generator x high tail monomial escapes W (level " +
                                             std::to_string(n) + ")"};
                }
            }
            for (long sgn : {-1L, 1L}) {  // deep levels: margins are constant there
                for (long probe : {sgn * D1, sgn * D2}) {
                    XVal th = cl.thW(j, probe);
                    if (th.neg()) continue;
                    if (!per_term_ok_binding(j, probe, th))
                        return {Tri::No, "generator x tail escapes W at deep level " +
                                             std::to_string(probe)};
                }
            }
        }
    }

    // (c) A-tail monomials x W-generators
    long ag_lo = wb.u_lo - (wb.u_hi - 1) - 4;
    long ag_hi = wb.u_hi - wb.u_lo + 4;
    long m_lo = ab.t_lo - ab.t_width() - wb.t_width() - 4;
    long m_hi = ab.t_hi + ab.t_width() + wb.t_width() + 4;
    for (const auto& w : gens_W) {
        TermList tl = terms_of(w);
        auto per_term_ok_binding = [&](long m, const XVal& alpha) {
            for (const auto& [ns, bs, js, q] : tl.terms) {
                XVal lhs = XVal::fin(bs).add(alpha);
                if (!lhs.le(cl.thW(js, m + ns))) return false;
            }
            return true;
        };
        for (long m = m_lo; m < m_hi; ++m) {
            XVal th = cl.thA(m);
            if (th.neg()) continue;
            long hi = th.finite() ? std::min(th.v, ag_hi) : ag_hi;
            for (long alpha = ag_lo; alpha <= hi; ++alpha) {
                FieldVec prod = scale_vec(BiSeries<Rational>::monomial(m, alpha, Rational(1)), w);
                MembershipResult r = W.membership(prod);
                if (r.verdict == Tri::No) {
                    std::ostringstream os;
                    os << "tail monomial u^" << alpha << " t^" << m << " x generator: "
                       << r.detail;
                    return {Tri::No, os.str()};
                }
            }
            XVal binding_low =
                th.finite() ? XVal::fin(std::min(th.v, ag_lo - 1)) : XVal::fin(ag_lo - 1);
            if (!per_term_ok_binding(m, binding_low))
                return {Tri::No, "deep tail monomial x generator escapes W (level " +
                                     std::to_string(m) + ")"};
            if (th.pos() || (th.finite() && th.v > ag_hi)) {
                XVal binding_high = th.pos() ? XVal::pinf() : XVal::fin(th.v);
                if (!per_term_ok_binding(m, binding_high))
                    return {Tri::No, "high tail monomial x generator escapes W (level " +
                                         std::to_string(m) + ")"};
            }
        }
        for (long sgn : {-1L, 1L}) {
            XVal th1 = cl.thA(sgn * D1), th2 = cl.thA(sgn * D2);
            bool ok1 = th1.neg() || per_term_ok_binding(sgn * D1, th1);
            bool ok2 = th2.neg() || per_term_ok_binding(sgn * D2, th2);
            if (!ok1 || !ok2)
                return {Tri::No, "tail x generator escapes W in the deep regime"};
            // margins along the ray: recompute per term and require monotony
            for (const auto& [ns, bs, js, q] : tl.terms) {
                XVal a1 = cl.thA(sgn * D1), a2 = cl.thA(sgn * D2);
                XVal t1 = cl.thW(js, sgn * D1 + ns), t2 = cl.thW(js, sgn * D2 + ns);
                if (a1.kind != a2.kind || t1.kind != t2.kind)
                    return {Tri::Indeterminate, "unstable asymptotic regime in tail x generator"};
                if (a1.finite() && t1.finite()) {
                    long mar1 = a1.v + bs - t1.v, mar2 = a2.v + bs - t2.v;
                    if (mar2 > mar1)
                        return {Tri::No, "tail x generator margin grows outward"};
                }
            }
        }
    }

    return {Tri::Yes, ""};
}

} // namespace

SchurReport schur_check(const WindowedSubspace& A, const WindowedSubspace& W) {
    if (A.rank() != 1) throw validation_error("schur_check: A must have rank 1");
    // the multiplicand must actually be an algebra window: validate A*A first
    SchurReport self = closure_check(A, A);
    if (self.verdict != Tri::Yes) {
        self.witness = "A is not closed under multiplication: " + self.witness;
        return self;
    }
    return closure_check(A, W);
}

} // namespace picoh
