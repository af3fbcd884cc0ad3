#include "doctest.h"

#include <random>

#include "mprt/errors.hpp"
#include "mprt/polynomial.hpp"

using namespace mprt;

TEST_CASE("rational parsing and printing") {
    CHECK(parse_rational("-3/6") == Rational(-1, 2));
    CHECK(to_string(Rational(-1, 2)) == "-1/2");
    CHECK(to_string(Rational(4)) == "4");
    CHECK_THROWS_AS(parse_rational("1/0"), InputError);
    CHECK_THROWS_AS(parse_rational("abc"), InputError);
}

TEST_CASE("parse and print round trip") {
    Polynomial p = parse_polynomial("3*s^2*t - 1/2*s*t^3", 2);
    CHECK(p.coefficient({2, 1}) == Rational(3));
    CHECK(p.coefficient({1, 3}) == Rational(-1, 2));
    CHECK(parse_polynomial(to_string(p), 2) == p);
    CHECK(to_string(parse_polynomial("t + s", 2)) == "s + t");
}

TEST_CASE("graded-lex display order") {
    CHECK(to_string(parse_polynomial("t^2 + s*t + s^2 + t + s", 2)) == "s + t + s^2 + s*t + t^2");
}

TEST_CASE("parser accepts indexed names and whitespace") {
    Polynomial p = parse_polynomial(" s1 * s3 ^ 2 - 2 * t2 ", 3);
    CHECK(p.coefficient({1, 0, 2}) == Rational(1));
    CHECK(p.coefficient({0, 1, 0}) == Rational(-2));
    CHECK(parse_polynomial("x^3", 1).coefficient({3}) == Rational(1));
}

TEST_CASE("parser errors carry columns") {
    try {
        parse_polynomial("s + 2 t", 2);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(e.column() == 7);
    }
    CHECK_THROWS_AS(parse_polynomial("s + u", 2), ParseError);
    CHECK_THROWS_AS(parse_polynomial("s +", 2), ParseError);
    CHECK_THROWS_AS(parse_polynomial("s^", 2), ParseError);
    CHECK_THROWS_AS(parse_polynomial("s3", 2), ParseError);
    try {
        parse_polynomial("s*", 2, 4, 10);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 4);
        CHECK(e.column() > 10);
    }
}

TEST_CASE("arithmetic identities on random polynomials") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> deg(0, 3), coef(-5, 5), count(1, 5);
    auto random_poly = [&] {
        Polynomial p(2);
        for (int i = count(rng); i > 0; --i) p.add_term({deg(rng), deg(rng)}, Rational(coef(rng), 1 + deg(rng)));
        return p;
    };
    for (int trial = 0; trial < 50; ++trial) {
        Polynomial a = random_poly(), b = random_poly(), c = random_poly();
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a - a).is_zero());
        CHECK((a * b).derivative(0) == a.derivative(0) * b + a * b.derivative(0));
        std::vector<Rational> x{Rational(2, 3), Rational(-5, 7)};
        CHECK((a * b).evaluate(std::span<const Rational>(x)) ==
              a.evaluate(std::span<const Rational>(x)) * b.evaluate(std::span<const Rational>(x)));
        CHECK(parse_polynomial(to_string(a), 2) == a);
    }
}

TEST_CASE("euler derivative and variable scaling") {
    Polynomial p = parse_polynomial("s^3 + t^3 + s*t", 2);
    CHECK(p.euler_derivative() == parse_polynomial("3*s^3 + 3*t^3 + 2*s*t", 2));
    std::vector<Rational> lambda{Rational(2), Rational(-1, 3)};
    CHECK(p.scale_variables(lambda) == parse_polynomial("8*s^3 - 1/27*t^3 - 2/3*s*t", 2));
}
