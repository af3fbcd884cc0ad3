#include "doctest.h"

#include <random>

#include "mprt/errors.hpp"
#include "mprt/symbolic.hpp"
#include "support.hpp"

using namespace mprt;
using mprt::testing::random_field;
using mprt::testing::random_heisenberg_spec;
using mprt::testing::random_translation_spec;

namespace {

PolyVectorField field2(const char* a, const char* b) {
    return PolyVectorField({parse_polynomial(a, 2), parse_polynomial(b, 2)});
}

Polynomial poly(const char* text) { return parse_polynomial(text, 2); }

PolyVectorField xyt(Rational a, Rational b, Rational c) { return PolyVectorField::constant({a, b, c}); }

// Substitutes s -> eps*s at a fixed rational s: a polynomial in eps alone.
Polynomial along_ray(const Polynomial& p, const std::vector<Rational>& s) {
    Polynomial out(1);
    for (const auto& [alpha, c] : p.terms()) {
        Rational v = c;
        for (std::size_t i = 0; i < alpha.size(); ++i)
            for (int k = 0; k < alpha[i]; ++k) v *= s[i];
        out.add_term(MultiIndex{alpha.total()}, v);
    }
    return out;
}

}  // namespace

TEST_CASE("bracket examples") {
    CHECK(lie_bracket(field2("1", "0"), field2("0", "s1")) == field2("0", "1"));
    CHECK(lie_bracket(field2("s2", "0"), field2("0", "s1")) == field2("-s1", "s2"));
    CHECK_THROWS_AS(lie_bracket(field2("1", "0"), PolyVectorField::zero(3)), InputError);
}

TEST_CASE("bracket antisymmetry and Jacobi identity") {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 40; ++trial) {
        auto a = random_field(rng, 3, 2), b = random_field(rng, 3, 2), c = random_field(rng, 3, 2);
        CHECK(lie_bracket(a, a).is_zero());
        CHECK(lie_bracket(a, b) == Rational(-1) * lie_bracket(b, a));
        auto jacobi = lie_bracket(a, lie_bracket(b, c)) + lie_bracket(b, lie_bracket(c, a)) +
                      lie_bracket(c, lie_bracket(a, b));
        CHECK(jacobi.is_zero());
    }
}

TEST_CASE("W for translation families") {
    auto e = ExponentScheme::product(2);
    auto w = w_from_translation_gamma(GammaSpec::translation(poly("-s*t"), e));
    REQUIRE(w.entries().size() == 1);
    CHECK(w.field({1, 1}) == PolyVectorField({Polynomial::constant(1, Rational(2))}));
    CHECK(w.entries().at({1, 1}).degree == Degree{Rational(1), Rational(1)});

    CHECK(w_from_translation_gamma(GammaSpec::translation(Polynomial(2), e)).empty());

    auto w3 = w_from_translation_gamma(GammaSpec::translation(poly("s^3 + t^3 + s*t"), e));
    CHECK(w3.field({3, 0}) == PolyVectorField({Polynomial::constant(1, Rational(-3))}));
    CHECK(w3.field({0, 3}) == PolyVectorField({Polynomial::constant(1, Rational(-3))}));
    CHECK(w3.field({1, 1}) == PolyVectorField({Polynomial::constant(1, Rational(-2))}));
}

TEST_CASE("constant terms are rejected") {
    auto e = ExponentScheme::product(2);
    CHECK_THROWS_AS(GammaSpec::translation(poly("1 + s"), e), InputError);
    CHECK_THROWS_AS(GammaSpec::heisenberg(poly("s"), poly("t"), poly("s - 2"), e), InputError);
    CHECK_THROWS_AS(GammaSpec::translation(parse_polynomial("s1", 3), e), InputError);
}

TEST_CASE("W for Heisenberg families") {
    auto e = ExponentScheme::product(2);
    auto w1 = w_from_heisenberg_gamma(GammaSpec::heisenberg(poly("s1"), poly("s2"), Polynomial(2), e));
    CHECK(w1.entries().size() == 2);
    CHECK(w1.field({1, 0}) == xyt(1, 0, 0));
    CHECK(w1.field({0, 1}) == xyt(0, 1, 0));

    auto w2 = w_from_heisenberg_gamma(GammaSpec::heisenberg(Polynomial(2), Polynomial(2), poly("s1*s2"), e));
    CHECK(w2.entries().size() == 1);
    CHECK(w2.field({1, 1}) == xyt(0, 0, 2));

    // P1' P2 - P2' P1 = s1 s2 - s2 s1 vanishes, so only P3' = 2 s1 s2 survives.
    auto w3 = w_from_heisenberg_gamma(GammaSpec::heisenberg(poly("s1"), poly("s2"), poly("s1*s2"), e));
    CHECK(w3.field({1, 1}) == xyt(0, 0, 2));
}

TEST_CASE("Heisenberg W agrees with the group-law derivative") {
    // d/de [P(e s) . P(s)^{-1}] at e = 1 in exponential coordinates, using only
    // (x1,y1,t1)(x2,y2,t2) = (x1+x2, y1+y2, t1+t2+(x1 y2 - x2 y1)/2).
    std::mt19937 rng(99);
    std::uniform_int_distribution<int> num(-7, 7), den(1, 5);
    for (int trial = 0; trial < 60; ++trial) {
        GammaSpec spec = random_heisenberg_spec(rng, 4);
        std::vector<Rational> s{Rational(num(rng), den(rng)), Rational(num(rng), den(rng))};
        const auto& P = spec.polynomials();
        Polynomial x1 = along_ray(P[0], s), y1 = along_ray(P[1], s), t1 = along_ray(P[2], s);
        Rational x2 = -P[0].evaluate(std::span<const Rational>(s));
        Rational y2 = -P[1].evaluate(std::span<const Rational>(s));
        Rational t2 = -P[2].evaluate(std::span<const Rational>(s));
        Polynomial tt = t1 + Polynomial::constant(1, t2) + Rational(1, 2) * (x1 * Polynomial::constant(1, y2) -
                                                                          Polynomial::constant(1, x2) * y1);
        std::vector<Rational> one{Rational(1)};
        std::array<Rational, 3> expected{x1.derivative(0).evaluate(std::span<const Rational>(one)),
                                         y1.derivative(0).evaluate(std::span<const Rational>(one)),
                                         tt.derivative(0).evaluate(std::span<const Rational>(one))};

        std::array<Rational, 3> got{};
        WExpansion w = w_from_heisenberg_gamma(spec);
        for (const auto& [alpha, entry] : w.entries()) {
            Rational monomial = 1;
            for (std::size_t i = 0; i < 2; ++i)
                for (int k = 0; k < alpha[i]; ++k) monomial *= s[i];
            auto c = entry.field.constant_components();
            for (int i = 0; i < 3; ++i) got[i] += monomial * c[i];
        }
        CHECK(got == expected);
    }
}

TEST_CASE("X-hat read-off") {
    auto e = ExponentScheme::product(2);
    auto xh = xhat_expansion(GammaSpec::translation(poly("s*t"), e));
    CHECK(xh.field({1, 1}) == PolyVectorField({Polynomial::constant(1, Rational(-1))}));
    CHECK(xhat_expansion(GammaSpec::translation(Polynomial(2), e)).empty());

    auto xh3 = xhat_expansion(GammaSpec::heisenberg(poly("s1"), poly("s2"), poly("s1*s2"), e));
    CHECK(xh3.field({1, 0}) == xyt(1, 0, 0));
    CHECK(xh3.field({0, 1}) == xyt(0, 1, 0));
    CHECK(xh3.field({1, 1}) == xyt(0, 0, 1));
    CHECK(xh3.basis() == FieldBasis::HeisenbergXYT);
}

TEST_CASE("Taylor relation on the worked examples") {
    auto e = ExponentScheme::product(2);
    auto report = verify_taylor_relation(GammaSpec::heisenberg(poly("s1"), poly("s2"), poly("s1*s2"), e));
    CHECK(report.passed);
    CHECK(report.checked == 3);
    CHECK(verify_taylor_relation(GammaSpec::translation(poly("s^3 + s*t - 4*t^2"), e)).passed);
    CHECK(verify_taylor_relation(GammaSpec::heisenberg(poly("s1"), poly("s2"), Polynomial(2), e)).passed);
}

TEST_CASE("Taylor relation on random corpora") {
    std::mt19937 rng(2025);
    for (int trial = 0; trial < 100; ++trial) {
        CHECK(verify_taylor_relation(random_translation_spec(rng, 5)).passed);
        CHECK(verify_taylor_relation(random_heisenberg_spec(rng, 5)).passed);
    }
}

TEST_CASE("Heisenberg realization is a Lie algebra homomorphism") {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> num(-5, 5);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<Rational> a{Rational(num(rng)), Rational(num(rng)), Rational(num(rng))};
        std::vector<Rational> b{Rational(num(rng)), Rational(num(rng), 3), Rational(num(rng))};
        auto br = heisenberg_bracket(a, b);
        CHECK(realize_heisenberg(br) == lie_bracket(realize_heisenberg(a), realize_heisenberg(b)));
    }
}

TEST_CASE("W expansions never carry a zero index and cache degrees") {
    ExponentScheme e({{Rational(2), Rational(1)}, {Rational(0), Rational(3)}});
    std::mt19937 rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        GammaSpec spec = GammaSpec::translation(mprt::testing::random_polynomial(rng, 2, 4), e);
        WExpansion w = w_expansion(spec);
        for (const auto& [alpha, entry] : w.entries()) {
            CHECK_FALSE(alpha.is_zero());
            CHECK_FALSE(entry.field.is_zero());
            CHECK(entry.degree == degree(alpha, e));
        }
    }
    WExpansion empty(e, FieldBasis::Coordinate, 1);
    CHECK_THROWS_AS(empty.add(MultiIndex{0, 0}, PolyVectorField({Polynomial::constant(1, Rational(1))})), InputError);
}
