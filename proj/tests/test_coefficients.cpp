#include <doctest.h>

#include <random>

#include "picoh/coefficients.hpp"
#include "picoh/sampling.hpp"

using namespace picoh;

TEST_CASE("rational field arithmetic") {
    CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
    CHECK(Rational(7, 3) * Rational(1) == Rational(7, 3));
    CHECK(Rational(-4, 8) == Rational(-1, 2));
    CHECK_THROWS_AS(Rational(1) / Rational(0), division_by_zero);
    CHECK_THROWS_AS(Rational(0).inverse(), division_by_zero);
}

TEST_CASE("rational string forms") {
    CHECK(Rational(5, 3).str() == "5/3");
    CHECK(Rational(-7).str() == "-7");
    CHECK(Rational::parse("5/3") == Rational(5, 3));
    CHECK(Rational::parse("-12") == Rational(-12));
    CHECK(Rational::parse("6/8") == Rational(3, 4));
    CHECK_THROWS_AS(Rational::parse("x/y"), validation_error);
}

TEST_CASE("dual number inversion") {
    DualNumber a(Rational(1), Rational(3));
    CHECK(a.inverse() == DualNumber(Rational(1), Rational(-3)));
    DualNumber b(Rational(2), Rational(0));
    CHECK(b.inverse() == DualNumber(Rational(1, 2), Rational(0)));
    DualNumber nil(Rational(0), Rational(5));
    CHECK_THROWS_AS(nil.inverse(), not_invertible);
}

TEST_CASE("field and dual ring laws on random samples") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        Rational x = random_rational(rng);
        if (!x.is_zero()) CHECK(x * x.inverse() == Rational(1));

        DualNumber a(random_rational(rng), random_rational(rng));
        DualNumber b(random_rational(rng), random_rational(rng));
        DualNumber c(random_rational(rng), random_rational(rng));
        CHECK(a * b == b * a);
        CHECK((a * b) * c == a * (b * c));
        if (a.is_unit()) CHECK(a * a.inverse() == DualNumber(Rational(1), Rational(0)));
    }
}
