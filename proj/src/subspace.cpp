#include "picoh/subspace.hpp"

#include <algorithm>
#include <sstream>

namespace picoh {

void MonomialBox::validate() const {
    if (rank < 1) throw validation_error("box: rank must be >= 1");
    if (t_lo > -1 || t_hi < 1 || u_lo > -1 || u_hi < 1)
        throw validation_error("box: must contain the origin region (t_lo<=-1<1<=t_hi, same for u)");
}

long WindowedSubspace::col(long n, long u, int comp) const {
    return ((n - box_.t_lo) * box_.u_width() + (u - box_.u_lo)) * box_.rank + comp;
}

void WindowedSubspace::decode(long c, long& n, long& u, int& comp) const {
    comp = static_cast<int>(c % box_.rank);
    long cell = c / box_.rank;
    u = box_.u_lo + cell % box_.u_width();
    n = box_.t_lo + cell / box_.u_width();
}

Threshold WindowedSubspace::threshold(int comp, long n) const {
    const auto& dj = tail_.d.at(comp);
    if (n >= box_.t_lo && n < box_.t_hi) {
        auto it = dj.find(n);
        if (it == dj.end()) return Threshold::neg_inf();
        return Threshold::finite(it->second);
    }
    const BoundaryMode& m = (n >= box_.t_hi) ? tail_.high.at(comp) : tail_.low.at(comp);
    switch (m.kind) {
        case BoundaryKind::Empty: return Threshold::neg_inf();
        case BoundaryKind::Full: return Threshold::pos_inf();
        case BoundaryKind::Affine: return Threshold::finite(m.slope * n + m.intercept);
    }
    return Threshold::neg_inf();
}

WindowedSubspace::WindowedSubspace(MonomialBox box, TailProfile tail,
                                   std::vector<FieldVec> generators)
    : box_(box), tail_(std::move(tail)), raw_generators_(std::move(generators)) {
    box_.validate();
    if (static_cast<int>(tail_.d.size()) != box_.rank ||
        static_cast<int>(tail_.high.size()) != box_.rank ||
        static_cast<int>(tail_.low.size()) != box_.rank)
        throw validation_error("tail profile: per-component data must match the rank");
    for (int j = 0; j < box_.rank; ++j) {
        for (const auto& [n, d] : tail_.d[j]) {
            if (n < box_.t_lo || n >= box_.t_hi)
                throw validation_error("tail profile: threshold level outside the box");
        }
        if (tail_.high[j].kind == BoundaryKind::Full)
            throw validation_error("tail profile: high mode cannot be Full");
    }
    // mark tail-covered box columns
    for (int j = 0; j < box_.rank; ++j)
        for (long n = box_.t_lo; n < box_.t_hi; ++n) {
            Threshold th = threshold(j, n);
            if (!th.is_finite()) continue;
            for (long u = box_.u_lo; u <= std::min(th.value, box_.u_hi - 1); ++u)
                tail_cols_.insert(col(n, u, j));
        }
    // generators: exact, supported in the box; reduce against the tail, echelonize
    for (const auto& g : raw_generators_) {
        if (static_cast<int>(g.size()) != box_.rank)
            throw validation_error("generator: component count must match the rank");
        SparseVec v;
        for (int j = 0; j < box_.rank; ++j) {
            const auto& s = g[j];
            if (s.t_cap) throw validation_error("generator: must be exact (no t window)");
            for (const auto& [n, lv] : s.levels) {
                if (lv.cap) throw validation_error("generator: must be exact (no u window)");
                for (const auto& [u, q] : lv.c) {
                    if (!box_.contains(n, u))
                        throw validation_error("generator: support escapes the box");
                    long cc = col(n, u, j);
                    if (tail_cols_.count(cc)) continue;  // reduced against the tail
                    v.emplace(cc, q);
                }
            }
        }
        ech_.add(std::move(v));
    }
}

std::vector<SparseVec> WindowedSubspace::gen_rows() const {
    std::vector<SparseVec> out;
    out.reserve(ech_.rows().size());
    for (const auto& [p, row] : ech_.rows()) out.push_back(row);
    return out;
}

MembershipResult WindowedSubspace::membership(const FieldVec& v) const {
    if (static_cast<int>(v.size()) != box_.rank)
        throw validation_error("membership: component count must match the rank");
    SparseVec inbox;
    bool escaped = false;
    std::string escape_note;
    for (int j = 0; j < box_.rank; ++j) {
        for (const auto& [n, lv] : v[j].levels) {
            for (const auto& [u, q] : lv.c) {
                Threshold th = threshold(j, n);
                if (th.covers(u)) continue;  // tail monomial
                if (!box_.contains(n, u)) {
                    // support escaping both the box and the tail rules is not
                    // decidable from the window description
                    if (!escaped) {
                        std::ostringstream os;
                        os << "support escapes box and tail at (t=" << n << ", u=" << u
                           << ", comp=" << j << ")";
                        escape_note = os.str();
                    }
                    escaped = true;
                    continue;
                }
                long cc = col(n, u, j);
                auto it = inbox.find(cc);
                if (it == inbox.end()) inbox.emplace(cc, q);
                else it->second += q;
            }
        }
    }
    SparseVec res = ech_.reduce(std::move(inbox));
    for (auto it = res.begin(); it != res.end();) {
        if (it->second.is_zero()) it = res.erase(it);
        else ++it;
    }
    if (!res.empty()) {
        long n, u;
        int jj;
        decode(res.begin()->first, n, u, jj);
        std::ostringstream os;
        os << "residual at (t=" << n << ", u=" << u << ", comp=" << jj << ")";
        return {Tri::No, os.str()};
    }
    if (escaped) return {Tri::Indeterminate, escape_note};
    // known part reduces to zero; certify that nothing can hide in the window
    for (int j = 0; j < box_.rank; ++j) {
        const auto& s = v[j];
        if (s.t_cap) {
            // every level from the cap upward must be fully tail-covered
            return {Tri::Indeterminate,
                    "t-window truncation: levels beyond the cap are not certifiable"};
        }
        for (const auto& [n, lv] : s.levels) {
            if (!lv.cap) continue;
            Threshold th = threshold(j, n);
            if (th.kind != Threshold::Kind::PosInf)
                return {Tri::Indeterminate, "u-window truncation at a level without full tail"};
        }
    }
    return {Tri::Yes, ""};
}

MembershipResult WindowedSubspace::membership1(const BiSeries<Rational>& v) const {
    return membership(FieldVec{v});
}

SliceReport WindowedSubspace::slice(long n) const {
    SliceReport rep;
    rep.level = n;
    rep.theta.resize(box_.rank);
    for (int j = 0; j < box_.rank; ++j) rep.theta[j] = threshold(j, n);
    if (n < box_.t_lo || n >= box_.t_hi) {
        rep.analytic = true;
        return rep;
    }
    for (int j = 0; j < box_.rank; ++j) {
        Threshold th = rep.theta[j];
        if (th.is_finite())
            rep.in_box_tail_count +=
                std::max(0L, std::min(th.value, box_.u_hi - 1) - box_.u_lo + 1);
    }
    // level-n parts of rows whose pivot sits at level n
    for (const auto& [pivot, row] : ech_.rows()) {
        long pn, pu;
        int pj;
        decode(pivot, pn, pu, pj);
        if (pn != n) continue;
        SparseVec urow;
        for (const auto& [cc, q] : row) {
            long rn, ru;
            int rj;
            decode(cc, rn, ru, rj);
            if (rn != n) continue;
            urow.emplace((ru - box_.u_lo) * box_.rank + rj, q);
        }
        rep.rows.push_back(std::move(urow));
    }
    return rep;
}

LevelReport WindowedSubspace::fredholm_level(long n) const {
    SliceReport sl = slice(n);
    LevelReport rep;
    rep.n = n;
    bool h0_inf = false, h1_inf = false;
    long h0 = 0, h1 = 0;
    // negative non-covered slots inside the box, as slice-space columns
    std::set<long> negcols;
    for (int j = 0; j < box_.rank; ++j) {
        Threshold th = sl.theta[j];
        if (th.kind == Threshold::Kind::PosInf) {
            h0_inf = true;  // whole k((u)) component
            continue;
        }
        if (th.kind == Threshold::Kind::NegInf) {
            h1_inf = true;  // infinitely many uncovered negative slots
            continue;
        }
        h0 += std::max(0L, th.value + 1);
        // uncovered negative slots below the box
        h1 += std::max(0L, std::min(box_.u_lo, 0L) - th.value - 1);
        for (long u = std::max(box_.u_lo, th.value + 1); u < std::min(0L, box_.u_hi); ++u)
            negcols.insert((u - box_.u_lo) * box_.rank + j);
    }
    h1 += static_cast<long>(negcols.size());
    // generator contributions
    std::vector<SparseVec> projected;
    for (const auto& row : sl.rows) {
        SparseVec p;
        for (const auto& [cc, q] : row)
            if (negcols.count(cc)) p.emplace(cc, q);
        projected.push_back(std::move(p));
    }
    int proj_rank = rank_of(projected);
    h0 += static_cast<long>(sl.rows.size()) - proj_rank;
    h1 -= proj_rank;
    rep.h0 = h0_inf ? std::nullopt : std::optional<long>(h0);
    rep.h1 = h1_inf ? std::nullopt : std::optional<long>(h1);
    rep.fredholm = rep.h0.has_value() && rep.h1.has_value();
    return rep;
}

FredholmReport WindowedSubspace::fredholm_check() const {
    FredholmReport rep;
    rep.verdict = true;
    for (long n = box_.t_lo; n < box_.t_hi; ++n) {
        rep.levels.push_back(fredholm_level(n));
        if (!rep.levels.back().fredholm) rep.verdict = false;
    }
    for (int j = 0; j < box_.rank; ++j) {
        auto assess = [&](const BoundaryMode& m, const std::string& region) {
            FredholmReport::Boundary b;
            b.region = region;
            switch (m.kind) {
                case BoundaryKind::Empty:
                    b.fredholm = false;
                    b.note = "no tail: infinite codimension at every level";
                    break;
                case BoundaryKind::Full:
                    b.fredholm = false;
                    b.note = "full levels: infinite intersection with the lattice";
                    break;
                case BoundaryKind::Affine:
                    b.fredholm = true;
                    b.note = "finite threshold at every level";
                    break;
            }
            if (!b.fredholm) rep.verdict = false;
            rep.boundaries.push_back(std::move(b));
        };
        assess(tail_.high[j], "comp " + std::to_string(j) + ", n >= t_hi");
        assess(tail_.low[j], "comp " + std::to_string(j) + ", n < t_lo");
    }
    return rep;
}

WindowedSubspace WindowedSubspace::enlarged(long margin) const {
    if (margin < 0) throw validation_error("enlarged: margin must be >= 0");
    // Full levels have no in-box representation (d is an integer or none),
    // so a Full low side keeps its box edge; those levels contribute nothing
    // that enlargement could reveal.
    bool full_low = false;
    for (int j = 0; j < box_.rank; ++j)
        if (tail_.low[j].kind == BoundaryKind::Full) full_low = true;
    MonomialBox nb = box_;
    nb.t_lo -= full_low ? 0 : margin;
    nb.t_hi += margin;
    nb.u_lo -= margin;
    nb.u_hi += margin;
    TailProfile nt = tail_;
    for (int j = 0; j < box_.rank; ++j) {
        for (long n = nb.t_lo; n < nb.t_hi; ++n) {
            if (n >= box_.t_lo && n < box_.t_hi) continue;
            Threshold th = threshold(j, n);  // mode-extrapolated
            if (th.is_finite()) nt.d[j][n] = th.value;
        }
    }
    return WindowedSubspace(nb, std::move(nt), raw_generators_);
}

WindowedSubspace WindowedSubspace::shifted(long p, long q) const {
    MonomialBox nb = box_;
    nb.t_lo += q;
    nb.t_hi += q;
    nb.u_lo += p;
    nb.u_hi += p;
    TailProfile nt = TailProfile::none(box_.rank);
    for (int j = 0; j < box_.rank; ++j) {
        for (const auto& [n, d] : tail_.d[j]) nt.d[j][n + q] = d + p;
        nt.high[j] = tail_.high[j];
        nt.low[j] = tail_.low[j];
        if (nt.high[j].kind == BoundaryKind::Affine)
            nt.high[j].intercept = tail_.high[j].intercept - tail_.high[j].slope * q + p;
        if (nt.low[j].kind == BoundaryKind::Affine)
            nt.low[j].intercept = tail_.low[j].intercept - tail_.low[j].slope * q + p;
    }
    std::vector<FieldVec> ng;
    for (const auto& g : raw_generators_) {
        FieldVec f;
        for (const auto& s : g) f.push_back(s * BiSeries<Rational>::monomial(q, p, Rational(1)));
        ng.push_back(std::move(f));
    }
    return WindowedSubspace(nb, std::move(nt), std::move(ng));
}

std::tuple<long, long, long> ord_unit(const BiSeries<Rational>& a, const BiSeries<Rational>& b) {
    auto unit_order = [](const BiSeries<Rational>& x) {
        auto [n, u, c] = x.leading();
        if (!scalar_is_unit(c)) throw not_invertible("ord: leading coefficient is not a unit");
        return n;
    };
    long oa = unit_order(a);
    long ob = unit_order(b);
    long oab = (a * b).t_order();
    return {oa, ob, oab};
}

Tri condition_star_star(const WindowedSubspace& A, const BiSeries<Rational>& a,
                        long inv_t_levels, long inv_u_breadth) {
    if (A.rank() != 1) throw validation_error("condition (**): A must have rank 1");
    if (a.exactly_zero()) return Tri::No;  // not a unit
    MembershipResult ma = A.membership1(a);
    if (ma.verdict != Tri::Yes) return ma.verdict;
    try {
        if (a.t_order() != 1) return Tri::No;
        BiSeries<Rational> inv = a.inverse(inv_t_levels, inv_u_breadth);
        return A.membership1(inv).verdict;
    } catch (const not_invertible&) {
        return Tri::No;
    } catch (const precision_error&) {
        return Tri::Indeterminate;
    }
}

} // namespace picoh
