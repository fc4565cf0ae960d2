#include "picoh/cohomology.hpp"

#include <algorithm>
#include <random>

#include "picoh/coefficients.hpp"

namespace picoh {
namespace {

constexpr long kLevelGuard = 100000;  // safety for mode-driven level loops

// Projection of the generator rows onto the columns selected by pred.
std::vector<SparseVec> project_rows(const WindowedSubspace& W,
                                    const std::vector<SparseVec>& rows,
                                    bool (*pred)(long n, long u, int j)) {
    std::vector<SparseVec> out;
    out.reserve(rows.size());
    for (const auto& r : rows) {
        SparseVec p;
        for (const auto& [cc, q] : r) {
            long n, u;
            int j;
            W.decode(cc, n, u, j);
            if (pred(n, u, j)) p.emplace(cc, q);
        }
        out.push_back(std::move(p));
    }
    return out;
}

bool pred_negneg(long n, long u, int) { return n < 0 && u < 0; }
bool pred_tneg(long n, long, int) { return n < 0; }
bool pred_uneg(long, long u, int) { return u < 0; }
bool pred_off_quadrant(long n, long u, int) { return n < 0 || u < 0; }

long dim_sum(const std::vector<SparseVec>& a, const std::vector<SparseVec>& b) {
    Echelon e;
    for (const auto& v : a) e.add(v);
    for (const auto& v : b) e.add(v);
    return e.rank();
}

// Count of tail monomials with u >= 0 at a single level (0 if none),
// nullopt for infinitely many (Full).
std::optional<long> q_count_at(const WindowedSubspace& W, int j, long n) {
    Threshold th = W.threshold(j, n);
    if (th.kind == Threshold::Kind::NegInf) return 0;
    if (th.kind == Threshold::Kind::PosInf) return std::nullopt;
    return std::max(0L, th.value + 1);
}

struct CountResult {
    bool unbounded = false;
    long total = 0;  // valid when !unbounded
};

// Sum q_count_at over all levels n >= start (high-mode side).
CountResult sum_q_high(const WindowedSubspace& W, int j, long start) {
    CountResult r;
    const BoundaryMode& m = W.tail().high[j];
    for (long n = std::max(start, W.box().t_lo); n < W.box().t_hi; ++n) {
        auto c = q_count_at(W, j, n);
        if (!c) { r.unbounded = true; return r; }
        r.total += *c;
    }
    if (m.kind == BoundaryKind::Empty) return r;
    // affine: positive contributions survive only while slope*n+c >= 0
    if (m.slope > 0 || (m.slope == 0 && m.intercept >= 0)) {
        r.unbounded = true;
        return r;
    }
    for (long n = std::max(start, W.box().t_hi);; ++n) {
        long d = m.slope * n + m.intercept;
        if (d < 0) break;
        r.total += d + 1;
        if (n - W.box().t_hi > kLevelGuard) { r.unbounded = true; break; }
    }
    return r;
}

// Sum gap_count_at over all levels n < start (low-mode side), for n < 0 only.
CountResult sum_gap_low(const WindowedSubspace& W, int j, long start) {
    CountResult r;
    const BoundaryMode& m = W.tail().low[j];
    for (long n = W.box().t_lo; n < std::min(start, 0L); ++n) {
        // in-box level: gap inside box u-range is counted by the caller via
        // cells; here we add the below-box stretch (u < u_lo)
        Threshold th = W.threshold(j, n);
        if (th.kind == Threshold::Kind::PosInf) continue;
        if (th.kind == Threshold::Kind::NegInf) { r.unbounded = true; return r; }
        r.total += std::max(0L, std::min(W.box().u_lo, 0L) - 1 - th.value);
    }
    switch (m.kind) {
        case BoundaryKind::Full: return r;
        case BoundaryKind::Empty: r.unbounded = true; return r;
        case BoundaryKind::Affine: break;
    }
    if (m.slope > 0 || (m.slope == 0 && m.intercept < -1)) {
        r.unbounded = true;
        return r;
    }
    for (long n = W.box().t_lo - 1;; --n) {
        long d = m.slope * n + m.intercept;
        long cnt = std::max(0L, -1 - d);
        if (cnt == 0) break;  // thresholds only rise further down (slope <= 0)
        r.total += cnt;
        if (W.box().t_lo - n > kLevelGuard) { r.unbounded = true; break; }
    }
    return r;
}

struct Route1Parts {
    long dimN = 0, dimC1 = 0, dimC2 = 0, dimCq = 0, dimC1plusC2 = 0;
    long tail_q_inbox = 0;       // tail monomials in the closed quadrant, in box
    long tail_q_overflow = 0;    // quadrant tail monomials above the box u-range
    CountResult tail_q_out;      // beyond the box (high side)
    long gaps_inbox = 0;         // uncovered (-,-) cells inside the box
    CountResult gaps_out;        // below the box / low side
    long h2_rank = 0;            // generators projected onto in-box (-,-) cells
};

Route1Parts route1_parts(const WindowedSubspace& W) {
    Route1Parts p;
    auto rows = W.gen_rows();
    const long g = static_cast<long>(rows.size());

    auto kern_dim = [&](bool (*pred)(long, long, int)) {
        return g - rank_of(project_rows(W, rows, pred));
    };
    p.dimN = kern_dim(pred_negneg);
    p.dimC1 = kern_dim(pred_tneg);
    p.dimC2 = kern_dim(pred_uneg);
    p.dimCq = kern_dim(pred_off_quadrant);
    {
        auto k1 = kernel_of(project_rows(W, rows, pred_tneg));
        auto k2 = kernel_of(project_rows(W, rows, pred_uneg));
        p.dimC1plusC2 = dim_sum(k1, k2);
    }

    const MonomialBox& box = W.box();
    for (int j = 0; j < box.rank; ++j) {
        for (long n = 0; n < box.t_hi; ++n) {
            auto c = q_count_at(W, j, n);
            if (!c) {
                p.tail_q_out.unbounded = true;  // Full inside: cannot happen
                continue;
            }
            long clamped = 0;
            Threshold th = W.threshold(j, n);
            if (th.is_finite())
                clamped = std::max(0L, std::min(th.value, box.u_hi - 1) + 1);
            p.tail_q_inbox += clamped;
            p.tail_q_overflow += *c - clamped;
        }
        CountResult high = sum_q_high(W, j, box.t_hi);
        p.tail_q_out.unbounded |= high.unbounded;
        p.tail_q_out.total += high.total;

        for (long n = box.t_lo; n < 0; ++n) {
            Threshold th = W.threshold(j, n);
            for (long u = box.u_lo; u < 0; ++u)
                if (!th.covers(u)) ++p.gaps_inbox;
        }
        CountResult low = sum_gap_low(W, j, box.t_lo);
        p.gaps_out.unbounded |= low.unbounded;
        p.gaps_out.total += low.total;
        // below-box stretch of in-box levels is part of sum_gap_low(start=t_lo)?
        // no: that loop starts below t_lo; add the in-box levels' below-box gap here
        for (long n = box.t_lo; n < 0; ++n) {
            Threshold th = W.threshold(j, n);
            if (th.kind == Threshold::Kind::PosInf) continue;
            if (th.kind == Threshold::Kind::NegInf) {
                p.gaps_out.unbounded = true;
                continue;
            }
            p.gaps_out.total += std::max(0L, std::min(box.u_lo, 0L) - 1 - th.value);
        }
    }
    p.h2_rank = rank_of(project_rows(W, rows, pred_negneg));
    return p;
}

} // namespace

CohomologyReport picture_cohomology(const WindowedSubspace& W) {
    Route1Parts p = route1_parts(W);
    CohomologyReport rep;

    rep.h0.in_window = p.tail_q_inbox + p.dimCq;
    rep.h0.unbounded = p.tail_q_out.unbounded;
    if (!p.tail_q_out.unbounded)
        rep.h0.global = p.tail_q_inbox + p.tail_q_overflow + p.tail_q_out.total + p.dimCq;

    rep.h1.in_window = p.dimN - p.dimC1plusC2;
    rep.h1.global = rep.h1.in_window;  // tail parts cancel exactly

    rep.h2.in_window = p.gaps_inbox - p.h2_rank;
    rep.h2.unbounded = p.gaps_out.unbounded;
    if (!p.gaps_out.unbounded)
        rep.h2.global = p.gaps_inbox + p.gaps_out.total - p.h2_rank;

    rep.finiteness_certified =
        rep.h0.certified() && rep.h1.certified() && rep.h2.certified();
    return rep;
}

CohomologyReport complex_cohomology(const WindowedSubspace& W) {
    const MonomialBox& box = W.box();
    const long cells = box.t_width() * box.u_width() * box.rank;

    // box bases
    std::vector<SparseVec> w_basis = W.gen_rows();
    for (long cc : W.tail_cols()) {
        SparseVec v;
        v.emplace(cc, Rational(1));
        w_basis.push_back(std::move(v));
    }
    auto col_pred = [&](long cc, bool (*pred)(long, long, int)) {
        long n, u;
        int j;
        W.decode(cc, n, u, j);
        return pred(n, u, j);
    };
    auto in_O1 = [&](long cc) { return !col_pred(cc, pred_tneg); };
    auto in_O2 = [&](long cc) { return !col_pred(cc, pred_uneg); };

    // bases of W n O1 and W n O2 over the box: tail monomials on the right
    // side of the quadrant plus generator combinations from kernels
    auto intersect_basis = [&](bool with_O1) {
        std::vector<SparseVec> out;
        auto rows = W.gen_rows();
        auto keep = with_O1 ? pred_tneg : pred_uneg;
        for (const auto& k : kernel_of(project_rows(W, rows, keep))) {
            SparseVec v;
            long idx = 0;
            for (const auto& r : rows) {
                auto it = k.find(idx);
                if (it != k.end()) vec_axpy(v, it->second, r);
                ++idx;
            }
            out.push_back(std::move(v));
        }
        for (long cc : W.tail_cols())
            if ((with_O1 && in_O1(cc)) || (!with_O1 && in_O2(cc))) {
                SparseVec v;
                v.emplace(cc, Rational(1));
                out.push_back(std::move(v));
            }
        return out;
    };
    std::vector<SparseVec> wo1 = intersect_basis(true);
    std::vector<SparseVec> wo2 = intersect_basis(false);

    std::vector<long> o1_cols, o2_cols, q_cols;
    for (long cc = 0; cc < cells; ++cc) {
        if (in_O1(cc)) o1_cols.push_back(cc);
        if (in_O2(cc)) o2_cols.push_back(cc);
        if (in_O1(cc) && in_O2(cc)) q_cols.push_back(cc);
    }

    // d0: (a0, a1, a2) -> (a1 - a0, a2 - a0, a2 - a1) in W + O2 + O1 blocks
    auto blocked = [&](const SparseVec& v, int block) {
        SparseVec out;
        for (const auto& [cc, q] : v) out.emplace(cc + block * cells, q);
        return out;
    };
    std::vector<SparseVec> d0_rows;
    for (const auto& a0 : wo2) {  // a0 in W n O2: image (-a0, -a0, 0)
        SparseVec im = blocked(a0, 0);
        for (auto& [cc, q] : im) q = -q;
        SparseVec b1 = blocked(a0, 1);
        for (auto& [cc, q] : b1) q = -q;
        for (auto& [cc, q] : b1) im.emplace(cc, q);
        d0_rows.push_back(std::move(im));
    }
    for (const auto& a1 : wo1) {  // image (a1, 0, -a1)
        SparseVec im = blocked(a1, 0);
        SparseVec b2 = blocked(a1, 2);
        for (auto& [cc, q] : b2) im.emplace(cc, -q);
        d0_rows.push_back(std::move(im));
    }
    for (long cc : q_cols) {  // a2 a lattice monomial: image (0, a2, a2)
        SparseVec im;
        im.emplace(cc + 1 * cells, Rational(1));
        im.emplace(cc + 2 * cells, Rational(1));
        d0_rows.push_back(std::move(im));
    }
    long rank_d0 = rank_of(d0_rows);
    long dim_c0 = static_cast<long>(wo2.size() + wo1.size() + q_cols.size());
    long h0_box = dim_c0 - rank_d0;

    // d1: (a01, a02, a12) -> a01 - a02 + a12; rank = dim(W + O2 + O1)
    std::vector<SparseVec> d1_rows = w_basis;
    for (long cc : o2_cols) {
        SparseVec v;
        v.emplace(cc, Rational(1));
        d1_rows.push_back(std::move(v));
    }
    for (long cc : o1_cols) {
        SparseVec v;
        v.emplace(cc, Rational(1));
        d1_rows.push_back(std::move(v));
    }
    long rank_d1 = rank_of(d1_rows);
    long dim_c1 =
        static_cast<long>(w_basis.size() + o2_cols.size() + o1_cols.size());
    long h1_box = dim_c1 - rank_d1 - rank_d0;
    long h2_box = cells - rank_d1;

    // boundary corrections, shared counting semantics with route 1
    CohomologyReport rep;
    CountResult q_out, gaps_out;
    long q_overflow = 0;  // quadrant tail monomials above the box u-range
    for (int j = 0; j < box.rank; ++j) {
        for (long n = 0; n < box.t_hi; ++n) {
            Threshold th = W.threshold(j, n);
            if (th.kind == Threshold::Kind::PosInf) {
                q_out.unbounded = true;
                continue;
            }
            if (!th.is_finite()) continue;
            long full = std::max(0L, th.value + 1);
            long clamped = std::max(0L, std::min(th.value, box.u_hi - 1) + 1);
            q_overflow += full - clamped;
        }
        CountResult high = sum_q_high(W, j, box.t_hi);
        q_out.unbounded |= high.unbounded;
        q_out.total += high.total;
        CountResult low = sum_gap_low(W, j, box.t_lo);
        gaps_out.unbounded |= low.unbounded;
        gaps_out.total += low.total;
        for (long n = box.t_lo; n < 0; ++n) {
            Threshold th = W.threshold(j, n);
            if (th.kind == Threshold::Kind::PosInf) continue;
            if (th.kind == Threshold::Kind::NegInf) {
                gaps_out.unbounded = true;
                continue;
            }
            gaps_out.total += std::max(0L, std::min(box.u_lo, 0L) - 1 - th.value);
        }
    }
    rep.h0.in_window = h0_box;
    rep.h0.unbounded = q_out.unbounded;
    if (!q_out.unbounded) rep.h0.global = h0_box + q_overflow + q_out.total;
    rep.h1.in_window = h1_box;
    rep.h1.global = h1_box;
    rep.h2.in_window = h2_box;
    rep.h2.unbounded = gaps_out.unbounded;
    if (!gaps_out.unbounded) rep.h2.global = h2_box + gaps_out.total;
    rep.finiteness_certified =
        rep.h0.certified() && rep.h1.certified() && rep.h2.certified();
    return rep;
}

bool pc_cross_identity(const WindowedSubspace& W) {
    Route1Parts p = route1_parts(W);
    long h1 = p.dimN - p.dimC1plusC2;

    // X = #tail monomials with u >= 0, n < 0, two independent enumerations
    const MonomialBox& box = W.box();
    bool x_unbounded = false;
    long x_lhs = 0;
    for (int j = 0; j < box.rank; ++j) {
        for (long n = box.t_lo; n < 0; ++n) {
            auto c = q_count_at(W, j, n);
            if (!c) { x_unbounded = true; continue; }
            x_lhs += *c;
        }
        const BoundaryMode& m = W.tail().low[j];
        if (m.kind == BoundaryKind::Full) x_unbounded = true;
        else if (m.kind == BoundaryKind::Affine) {
            if (m.slope < 0 || (m.slope == 0 && m.intercept >= 0)) x_unbounded = true;
            else
                for (long n = box.t_lo - 1;; --n) {
                    long d = m.slope * n + m.intercept;
                    if (d < 0) break;
                    x_lhs += d + 1;
                    if (box.t_lo - n > kLevelGuard) { x_unbounded = true; break; }
                }
        }
    }
    long x_rhs = 0;
    if (!x_unbounded) {
        // enumerate {u >= 0} minus {u >= 0 and n >= 0} by walking levels
        for (int j = 0; j < box.rank; ++j) {
            for (long n = box.t_lo; n < box.t_hi; ++n) {
                if (n >= 0) continue;
                Threshold th = W.threshold(j, n);
                if (!th.is_finite()) continue;
                for (long u = 0; u <= th.value; ++u) ++x_rhs;
            }
            const BoundaryMode& m = W.tail().low[j];
            if (m.kind == BoundaryKind::Affine)
                for (long n = box.t_lo - 1;; --n) {
                    long d = m.slope * n + m.intercept;
                    if (d < 0) break;
                    x_rhs += d + 1;
                    if (box.t_lo - n > kLevelGuard) break;
                }
        }
    }

    if (x_unbounded) {
        // graded in-window form: drop the (equal) X terms from both sides
        long lhs = p.dimN - p.dimC1;
        long rhs = p.dimC2 - p.dimCq;
        return h1 == lhs - rhs;
    }
    long lhs = (p.dimN - p.dimC1) + x_lhs;
    long rhs = (p.dimC2 - p.dimCq) + x_rhs;
    return h1 == lhs - rhs;
}

TangentReport tangent_report(const WindowedSubspace& A) {
    if (A.rank() != 1) throw validation_error("tangent_report: A must have rank 1");
    if (!A.fredholm_check().verdict)
        throw validation_error("tangent_report: A is not a generalized Fredholm subspace");
    SchurReport s = schur_check(A, A);
    if (s.verdict != Tri::Yes)
        throw validation_error("tangent_report: A is not multiplicatively closed: " + s.witness);
    CohomologyReport c = picture_cohomology(A);
    TangentReport rep;
    rep.pic_kernel = c.h1;
    rep.brauer = c.h2;
    if (c.h1.certified()) rep.representable = (*c.h1.global == 0);
    return rep;
}

bool dual_number_splitting(const WindowedSubspace& A, int samples, std::uint64_t seed) {
    if (A.rank() != 1) throw validation_error("dual_number_splitting: A must have rank 1");
    std::mt19937_64 rng(seed);
    auto rnd_small = [&rng]() {
        std::uniform_int_distribution<long> num(-5, 5);
        std::uniform_int_distribution<long> den(1, 4);
        return Rational(num(rng), den(rng));
    };

    // pool of window monomials: in-box tail cells plus generator supports
    std::vector<std::pair<long, long>> pool;
    for (long cc : A.tail_cols()) {
        long n, u;
        int j;
        A.decode(cc, n, u, j);
        pool.emplace_back(n, u);
    }
    for (const auto& row : A.gen_rows())
        for (const auto& [cc, q] : row) {
            long n, u;
            int j;
            A.decode(cc, n, u, j);
            pool.emplace_back(n, u);
        }
    if (pool.empty()) pool.emplace_back(0, 0);

    using DS = BiSeries<DualNumber>;
    using RS = BiSeries<Rational>;
    auto lift_val = [](const RS& x) {
        DS r;
        r.t_cap = x.t_cap;
        for (const auto& [n, lv] : x.levels) {
            auto& dst = r.levels[n];
            dst.cap = lv.cap;
            for (const auto& [u, q] : lv.c) dst.c.emplace(u, DualNumber(q));
        }
        return r;
    };
    auto lift_eps = [](const RS& x) {
        DS r;
        r.t_cap = x.t_cap;
        for (const auto& [n, lv] : x.levels) {
            auto& dst = r.levels[n];
            dst.cap = lv.cap;
            for (const auto& [u, q] : lv.c) dst.c.emplace(u, DualNumber(Rational(0), q));
        }
        return r;
    };

    for (int s = 0; s < samples; ++s) {
        // unit value part: nonzero constant plus lex-positive window terms,
        // held low in u so products stay representable
        RS v = RS::monomial(0, 0, Rational(1 + static_cast<long>(rng() % 3)));
        RS e;
        std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
        for (int t = 0; t < 3; ++t) {
            auto [n, u] = pool[pick(rng)];
            if (u <= 2 && (n > 0 || (n == 0 && u > 0)))
                v = v + RS::monomial(n, u, rnd_small());
            auto [n2, u2] = pool[pick(rng)];
            if (u2 <= 2) e = e + RS::monomial(n2, u2, rnd_small());
        }

        DS a = lift_val(v) + lift_eps(e);
        RS vinv = v.inverse(8, 12);
        RS b = e * vinv;

        // unique factorization a = a0 * (1 + eps b), a0 the k-unit value part
        DS rhs = lift_val(v) * (DS::one() + lift_eps(b));
        if (!equal_in_common_window(a, rhs)) return false;

        // b stays inside A's window (its known part reduces into W)
        if (A.membership1(b).verdict == Tri::No) return false;

        // exp(eps b) = 1 + eps b and log(1 + eps b) = eps b, exactly
        DS eb = lift_eps(b);
        DS expv = DS::one();
        DS term = DS::one();
        for (long k = 1; k <= 4; ++k) {
            term = term * eb;
            if (term.zero_in_window()) break;
            expv = expv + term.scaled(DualNumber(Rational(1) / factorial(k)));
        }
        if (!equal_in_common_window(expv, DS::one() + eb)) return false;
        DS logv;
        term = DS::one();
        for (long k = 1; k <= 4; ++k) {
            term = term * eb;
            if (term.zero_in_window()) break;
            Rational coef = Rational((k % 2 == 1) ? 1 : -1) / Rational(k);
            logv = logv + term.scaled(DualNumber(coef));
        }
        if (!equal_in_common_window(logv, eb)) return false;
    }
    return true;
}

bool stability_probe(const WindowedSubspace& W, long margin) {
    if (margin == 0) return true;
    WindowedSubspace big = W.enlarged(margin);
    CohomologyReport a1 = picture_cohomology(W);
    CohomologyReport a2 = complex_cohomology(W);
    CohomologyReport b1 = picture_cohomology(big);
    CohomologyReport b2 = complex_cohomology(big);
    auto same = [](const DimValue& x, const DimValue& y) {
        if (x.certified() != y.certified()) return false;
        if (x.certified()) return *x.global == *y.global;
        return x.in_window == y.in_window && x.unbounded == y.unbounded;
    };
    return same(a1.h0, b1.h0) && same(a1.h1, b1.h1) && same(a1.h2, b1.h2) &&
           same(a2.h0, b2.h0) && same(a2.h1, b2.h1) && same(a2.h2, b2.h2);
}

} // namespace picoh
