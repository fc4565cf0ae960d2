#include "picoh/sampling.hpp"

namespace picoh {

Rational random_rational(std::mt19937_64& rng, long num_range, long den_range) {
    std::uniform_int_distribution<long> num(-num_range, num_range);
    std::uniform_int_distribution<long> den(1, den_range);
    return Rational(num(rng), den(rng));
}

static Rational random_nonzero(std::mt19937_64& rng) {
    while (true) {
        Rational q = random_rational(rng);
        if (!q.is_zero()) return q;
    }
}

WindowedSubspace random_monomial_subspace(std::mt19937_64& rng, int rank) {
    std::uniform_int_distribution<long> lo(-3, -2), hi(2, 3);
    std::uniform_int_distribution<long> slope(-2, -1), icpt(-2, 1);
    MonomialBox box{lo(rng), hi(rng), lo(rng), hi(rng), rank};
    TailProfile tail = TailProfile::none(rank);
    for (int j = 0; j < rank; ++j) {
        long s = slope(rng), c = icpt(rng);
        tail.high[j] = {BoundaryKind::Affine, s, c};
        tail.low[j] = {BoundaryKind::Affine, s, c};
        for (long n = box.t_lo; n < box.t_hi; ++n)
            tail.d[j][n] = std::min(s * n + c, box.u_hi - 1);
    }
    return WindowedSubspace(box, std::move(tail), {});
}

WindowedSubspace random_subspace(std::mt19937_64& rng, int rank) {
    WindowedSubspace base = random_monomial_subspace(rng, rank);
    const MonomialBox& box = base.box();
    std::uniform_int_distribution<long> tpick(box.t_lo, box.t_hi - 1);
    std::uniform_int_distribution<long> upick(box.u_lo, box.u_hi - 1);
    std::uniform_int_distribution<int> cpick(0, rank - 1);
    std::uniform_int_distribution<int> ngen(0, 3), nterm(1, 3);
    std::vector<FieldVec> gens;
    int g = ngen(rng);
    for (int i = 0; i < g; ++i) {
        FieldVec v(rank);
        int terms = nterm(rng);
        for (int t = 0; t < terms; ++t) {
            int c = cpick(rng);
            v[c] = v[c] + BiSeries<Rational>::monomial(tpick(rng), upick(rng),
                                                       random_nonzero(rng));
        }
        gens.push_back(std::move(v));
    }
    return WindowedSubspace(box, base.tail(), std::move(gens));
}

BiSeries<Rational> random_unit(std::mt19937_64& rng) {
    std::uniform_int_distribution<long> e(-3, 3), bump(1, 3);
    long n0 = e(rng), u0 = e(rng);
    BiSeries<Rational> s = BiSeries<Rational>::monomial(n0, u0, random_nonzero(rng));
    std::uniform_int_distribution<int> extra(0, 2);
    int k = extra(rng);
    for (int i = 0; i < k; ++i) {
        long dn = bump(rng) - 1, du = bump(rng);
        // strictly later in the monomial order
        if (dn == 0) s = s + BiSeries<Rational>::monomial(n0, u0 + du, random_rational(rng));
        else s = s + BiSeries<Rational>::monomial(n0 + dn, e(rng), random_rational(rng));
    }
    return s;
}

Psdo<XSeriesRing> random_lax(std::mt19937_64& rng, int depth, long floor) {
    XSeriesRing xr;
    Psdo<XSeriesRing> L = op_term(xr, 1, xr.one());
    std::uniform_int_distribution<long> deg(0, 2);
    std::uniform_int_distribution<int> nt(1, 2);
    for (int i = 1; i <= depth; ++i) {
        PowerSeries1<Rational> c;
        int terms = nt(rng);
        for (int t = 0; t < terms; ++t)
            c = c + PowerSeries1<Rational>::term(deg(rng), random_rational(rng));
        L = op_add(xr, L, op_term(xr, -i, c));
    }
    L.floor_ = floor;
    normalize(xr, L);
    return L;
}

static PowerSeries2<Rational> random_poly2(std::mt19937_64& rng) {
    std::uniform_int_distribution<long> deg(0, 1);
    std::uniform_int_distribution<int> nt(1, 2);
    PowerSeries2<Rational> c;
    int terms = nt(rng);
    for (int t = 0; t < terms; ++t)
        c = c + PowerSeries2<Rational>::term(deg(rng), deg(rng), random_rational(rng, 4, 2));
    return c;
}

EOp random_monic_dressing(std::mt19937_64& rng, const ParshinCoeffRing& rg, int terms) {
    EOp S = op_one(rg);
    std::uniform_int_distribution<long> outer(-terms, -1), inner(-1, 1);
    for (int t = 0; t < terms; ++t) {
        InnerOp ip = op_term(rg.base, inner(rng), random_poly2(rng));
        S = op_add(rg, S, op_term(rg, outer(rng), ip));
    }
    return S;
}

EOp random_e_operator(std::mt19937_64& rng, const ParshinCoeffRing& rg) {
    std::uniform_int_distribution<long> outer(-2, 1), inner(-2, 1);
    std::uniform_int_distribution<int> nt(1, 2);
    EOp A;
    int terms = nt(rng);
    for (int t = 0; t < terms; ++t) {
        InnerOp ip = op_term(rg.base, inner(rng), random_poly2(rng));
        A = op_add(rg, A, op_term(rg, outer(rng), ip));
    }
    if (A.exactly_zero()) A = op_one(rg);
    return A;
}

BiSeries<Rational> random_field_element(std::mt19937_64& rng) {
    std::uniform_int_distribution<long> e(-2, 2);
    std::uniform_int_distribution<int> nt(1, 3);
    BiSeries<Rational> s;
    int terms = nt(rng);
    for (int t = 0; t < terms; ++t)
        s = s + BiSeries<Rational>::monomial(e(rng), e(rng), random_rational(rng));
    return s;
}

} // namespace picoh
