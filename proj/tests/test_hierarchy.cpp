#include <doctest.h>

#include <random>

#include "picoh/hierarchy.hpp"
#include "picoh/sampling.hpp"

using namespace picoh;
using BS = BiSeries<Rational>;

TEST_CASE("t_1 flow is d/dx on every coefficient") {
    EvolutionaryDerivation D = kp_flow(1, 6);
    for (int i = 1; i <= D.max_determined; ++i)
        CHECK(D.of(i) == DiffPoly::var(i, 1));
}

TEST_CASE("t_2 flow on a_1, frozen from the hand expansion") {
    // (L^2)_+ = d^2 + 2a_1; [(L^2)_+, L] at d^-1:
    //   [d^2, a_1 d^-1] -> 2a_1' d^0 + a_1'' d^-1 + ...
    //   [d^2, a_2 d^-2] -> 2a_2' d^-1 + ...
    //   [2a_1, d] -> -2a_1' d^0 cancels, leaving a_1'' + 2a_2'
    EvolutionaryDerivation D = kp_flow(2, 6);
    DiffPoly expected = DiffPoly::var(1, 2) + DiffPoly::var(2, 1).scaled(Rational(2));
    CHECK(D.of(1) == expected);
}

TEST_CASE("t_2 flow vanishes on zero initial data") {
    EvolutionaryDerivation D = kp_flow(2, 6);
    std::map<int, DiffPoly> zeros;
    for (int i = 1; i <= 8; ++i) zeros[i] = DiffPoly();
    for (int i = 1; i <= D.max_determined; ++i)
        CHECK(D.of(i).substituted(zeros).is_zero());
}

TEST_CASE("KP equation residual vanishes identically") {
    KpReport rep = derive_kp(12);
    CHECK(rep.residual.is_zero());
    CHECK(rep.depth_used >= 4);
}

TEST_CASE("perturbed identity cannot also vanish") {
    DiffPoly res = kp_residual_with_coefficient(Rational(4), 6);
    CHECK(!res.is_zero());
}

TEST_CASE("insufficient depth raises a precision error, never a wrong answer") {
    CHECK_THROWS_AS(kp_flow(5, 3), precision_error);
    CHECK_THROWS_AS(kp_residual_with_coefficient(Rational(3), 3), precision_error);
}

TEST_CASE("KdV reduction") {
    KdvReport rep = derive_kdv(5);
    CHECK(rep.consistent);
    CHECK(rep.evolution_exact);
    CHECK(rep.paper_constant == Rational(7));
    // the derived constant is what the reduction oracle produces; the report
    // records the comparison instead of asserting the printed value
    CHECK(rep.derived_constant == Rational(1));
    CHECK(rep.matches_paper == false);

    // zero initial data gives the zero evolution
    std::map<int, DiffPoly> zeros;
    zeros[1] = DiffPoly();
    CHECK(rep.reduced_flow.substituted(zeros).is_zero());
}

TEST_CASE("1-reduction solves the negative part exactly") {
    auto subst = kdv_reduction(6);
    CHECK(subst.at(2) == DiffPoly::var(1, 1).scaled(Rational(-1, 2)));
    // with the substitution, (L^2)_- vanishes on every determined coefficient
    DiffPolyRing rg;
    KPOp L2 = power(rg, generic_lax(6), 2);
    auto minus = split(rg, L2).second;
    for (const auto& [e, c] : minus.c) CHECK(c.substituted(subst).is_zero());
}

TEST_CASE("flow right-hand sides live in R[[d^-1]] d^-1") {
    XSeriesRing xr;
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 10; ++trial) {
        auto L = random_lax(rng, 1 + static_cast<int>(rng() % 6), -8);
        for (int n = 1; n <= 5; ++n) {
            auto plus = split(xr, power(xr, L, n, -8)).first;
            auto rhs = commutator(xr, plus, L, -8);
            CHECK(op_window_zero(xr, split(xr, rhs).first));
        }
    }
}

TEST_CASE("flows commute on a_1 at desk scale") {
    EvolutionaryDerivation D2 = kp_flow(2, 9);
    EvolutionaryDerivation D3 = kp_flow(3, 9);
    DiffPoly lhs = D2.apply(D3.of(1));
    DiffPoly rhs = D3.apply(D2.of(1));
    CHECK(lhs - rhs == DiffPoly());
}

TEST_CASE("evolutionary derivations commute with the derivation") {
    EvolutionaryDerivation D2 = kp_flow(2, 8);
    std::mt19937_64 rng(59);
    for (int i = 0; i < 10; ++i) {
        DiffPoly p = DiffPoly::var(1 + static_cast<int>(rng() % 3),
                                   static_cast<int>(rng() % 3)) *
                     DiffPoly::var(1 + static_cast<int>(rng() % 2), 0);
        CHECK(D2.apply(p.derived()) == D2.apply(p).derived());
    }
}

TEST_CASE("dressing the trivial pair") {
    EWindow ew{-6, -6, 12};
    auto rg = make_e_ring(ew);
    ParshinPair triv = dress(rg, op_one(rg), -6);
    CHECK(op_window_zero(rg, op_sub(rg, triv.L, e_delta1(rg))));
    CHECK(op_window_zero(rg, op_sub(rg, triv.M, e_delta2(rg))));

    std::mt19937_64 rng(61);
    for (int i = 0; i < 5; ++i) {
        EOp S = random_monic_dressing(rng, rg, 3);
        ParshinPair p = dress(rg, S, -6);
        CHECK(pair_admissible(rg, p, -6));
    }

    EOp bad = op_add(rg, e_delta2(rg), op_one(rg));
    CHECK_THROWS_AS(dress(rg, bad, -6), not_invertible);
}

TEST_CASE("two-dimensional flows") {
    EWindow ew{-5, -5, 10};
    auto rg = make_e_ring(ew);
    ParshinPair triv{e_delta1(rg), e_delta2(rg)};
    for (long i = -1; i <= 2; ++i)
        for (long j = 0; j <= 2; ++j) {
            auto [vl, vm] = parshin_flow(rg, triv, i, j, -5);
            CHECK(op_window_zero(rg, vl));
            CHECK(op_window_zero(rg, vm));
        }

    // (i,j) = (0,1): (L^0 M)_+ = M_+ and the flow is ([M_+, L], [M_+, M])
    std::mt19937_64 rng(67);
    EOp S = random_monic_dressing(rng, rg, 2);
    ParshinPair p = dress(rg, S, -5);
    auto [vl, vm] = parshin_flow(rg, p, 0, 1, -5);
    EOp mplus = split(rg, p.M).first;
    CHECK(op_window_zero(rg, op_sub(rg, vl, commutator(rg, mplus, p.L, -5))));
    CHECK(op_window_zero(rg, op_sub(rg, vm, commutator(rg, mplus, p.M, -5))));

    // negative i needs an invertible L
    ParshinPair degenerate{e_x1(rg), e_delta2(rg)};
    CHECK_THROWS_AS(parshin_flow(rg, degenerate, -1, 1, -5), not_invertible);

    // the admissible-cone validation is an option, not silently enforced
    CHECK_THROWS_AS(parshin_flow(rg, triv, 3, 1, -5, Rational(2)), validation_error);
    auto ok = parshin_flow(rg, triv, 2, 1, -5, Rational(2));
    CHECK(op_window_zero(rg, ok.first));
}

TEST_CASE("quotient action anchors") {
    EWindow ew;
    auto rg = make_e_ring(ew);
    BS one = BS::one();

    BS t_img = apply_to_field(rg, invert(rg, e_delta2(rg), -8), one);
    CHECK(t_img.coeff(1, 0) == Rational(1));
    CHECK(equal_in_common_window(t_img, BS::monomial(1, 0, Rational(1))));

    BS u_img = apply_to_field(rg, invert(rg, e_delta1(rg), -8), one);
    CHECK(u_img.coeff(0, 1) == Rational(1));
    CHECK(equal_in_common_window(u_img, BS::monomial(0, 1, Rational(1))));

    // x1 annihilates classes whose representatives commute with it
    // (pure t-powers); on u-powers it acts by a*u^{a+1} t^b
    CHECK(apply_to_field(rg, e_x1(rg), one).zero_in_window());
    CHECK(apply_to_field(rg, e_x2(rg), one).zero_in_window());
    BS tpows = BS::monomial(2, 0, Rational(3)) + BS::monomial(-1, 0, Rational(1));
    CHECK(apply_to_field(rg, e_x1(rg), tpows).zero_in_window());
    BS x1u = apply_to_field(rg, e_x1(rg), BS::monomial(0, 1, Rational(1)));
    CHECK(x1u.coeff(0, 2) == Rational(1));

    BS u = BS::monomial(0, 1, Rational(1));
    BS d1u = apply_to_field(rg, e_delta1(rg), u);
    CHECK(equal_in_common_window(d1u, one));
}

TEST_CASE("window requests never change claimed coefficients") {
    // composing with a stricter floor must agree with the looser result on
    // the stricter window, for operators and for the quotient action
    XSeriesRing xr;
    std::mt19937_64 rng(179);
    for (int i = 0; i < 10; ++i) {
        auto A = random_lax(rng, 3, -8), B = random_lax(rng, 3, -8);
        auto loose = compose(xr, A, B, -8);
        auto strict = compose(xr, A, B, -4);
        for (const auto& [e, k] : strict.c) {
            if (strict.floor_ && e < *strict.floor_) continue;
            CHECK(k == loose.coeff(e));
        }
    }
    EWindow w8{-8, -8, 16}, w4{-4, -4, 8};
    auto rg8 = make_e_ring(w8);
    auto rg4 = make_e_ring(w4);
    for (int i = 0; i < 6; ++i) {
        EOp A8 = random_e_operator(rng, rg8);
        BiSeries<Rational> f = random_field_element(rng);
        BiSeries<Rational> img8 = apply_to_field(rg8, A8, f);
        BiSeries<Rational> img4 = apply_to_field(rg4, A8, f);
        CHECK(equal_in_common_window(img8, img4));
    }
}

TEST_CASE("quotient action is linear and multiplicative") {
    EWindow ew;
    auto rg = make_e_ring(ew);
    std::mt19937_64 rng(73);
    for (int i = 0; i < 10; ++i) {
        EOp A = random_e_operator(rng, rg);
        EOp B = random_e_operator(rng, rg);
        BS f = random_field_element(rng);
        BS g = random_field_element(rng);
        // linear in f
        BS lhs = apply_to_field(rg, A, f + g);
        BS rhs = apply_to_field(rg, A, f) + apply_to_field(rg, A, g);
        CHECK(equal_in_common_window(lhs, rhs));
        // multiplicative in A
        BS m1 = apply_to_field(rg, compose(rg, A, B, -8), f);
        BS m2 = apply_to_field(rg, A, apply_to_field(rg, B, f));
        CHECK(equal_in_common_window(m1, m2));
    }
}
