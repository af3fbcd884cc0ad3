#include "doctest.h"

#include <cmath>
#include <cstring>
#include <random>

#include "mprt/bumps.hpp"
#include "mprt/errors.hpp"
#include "mprt/quadrature.hpp"

using namespace mprt;

namespace {

BumpCombination base() { return BumpCombination({{1.0, 0.0, 1.0}}); }

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("base mollifier normalization and moments") {
    const auto& psi = BaseMollifier::instance();
    CHECK(std::fabs(moment(base(), 0) - 1.0) < 1e-12);
    CHECK(psi.moment(0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(psi.moment(1) == doctest::Approx(0.5).epsilon(1e-14));
    for (int m = 1; m <= BaseMollifier::kMaxMoment; ++m) CHECK(psi.moment(m) < psi.moment(m - 1));
    for (double t : {-1.0, 0.0, 1.0, 2.0, 1e-300}) CHECK(psi(t) == 0.0);
    CHECK(psi(0.5) > 0);
}

TEST_CASE("translated and rescaled atoms keep unit mass") {
    for (auto [x, r] : {std::pair{0.3, 0.1}, std::pair{-4.0, 2.5}, std::pair{100.0, 1e-3}}) {
        BumpCombination f({{1.0, x, r}});
        CHECK(moment(f, 0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(analytic_moment(f, 3) == doctest::Approx(moment(f, 3)).epsilon(1e-10));
    }
}

TEST_CASE("closed-form derivatives match finite differences") {
    const auto& psi = BaseMollifier::instance();
    for (int n = 1; n <= 4; ++n) {
        for (double t : {0.1, 0.27, 0.5, 0.66, 0.9}) {
            double h = 1e-5;
            double fd = (psi.derivative(t + h, n - 1) - psi.derivative(t - h, n - 1)) / (2 * h);
            double exact = psi.derivative(t, n);
            CHECK(std::fabs(fd - exact) <= 1e-6 * std::max(1.0, std::fabs(exact)));
        }
    }
    for (double t : {1e-4, 1e-3, 0.9999}) CHECK(std::isfinite(psi.derivative(t, 8)));
}

TEST_CASE("two-atom bump") {
    auto mb = moment_bump(1.0, 1, {});
    REQUIRE(mb.bump.atoms().size() == 2);
    const auto& at = mb.bump.atoms();
    CHECK(at[0].coefficient + at[1].coefficient == doctest::Approx(0.0));
    CHECK(at[0].coefficient == doctest::Approx(8.0 / 3).epsilon(1e-12));
    CHECK(at[0].center == 0.5);
    CHECK(at[1].radius == 0.25);
    CHECK(std::fabs(mb.moments[0]) < 1e-10);
    CHECK(std::fabs(mb.moments[1]) > 1e-6);
    CHECK(mb.moments[1] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("three-atom bump with a vanishing second moment") {
    auto mb = moment_bump(1.0, 1, {2});
    CHECK(mb.bump.atoms().size() == 3);
    CHECK(std::fabs(moment(mb.bump, 0)) < 1e-10);
    CHECK(std::fabs(moment(mb.bump, 2)) < 1e-9);
    CHECK(std::fabs(moment(mb.bump, 1)) > 1e-4);
}

TEST_CASE("system determinant formula") {
    for (const auto& excluded : {std::set<int>{}, std::set<int>{2}, std::set<int>{1, 3}, std::set<int>{4, 5, 7}}) {
        int a1 = excluded.count(2) ? 1 : 2;
        auto mb = moment_bump(0.75, a1, excluded);
        CHECK(std::fabs(mb.determinant / mb.determinant_formula - 1) < 1e-8);
    }
}

TEST_CASE("moment bump postconditions over a sweep") {
    for (int a1 = 1; a1 <= 3; ++a1) {
        std::vector<int> pool;
        for (int e = 1; e <= 6; ++e)
            if (e != a1) pool.push_back(e);
        for (unsigned mask = 0; mask < (1u << pool.size()); ++mask) {
            std::set<int> excluded;
            for (std::size_t i = 0; i < pool.size(); ++i)
                if (mask & (1u << i)) excluded.insert(pool[i]);
            if (excluded.size() > 3) continue;
            auto mb = moment_bump(1.0, a1, excluded);
            CHECK(std::fabs(mb.moments[0]) < 1e-10);
            CHECK(std::fabs(mb.moments[1]) > 1e-6);
            for (std::size_t l = 2; l < mb.moments.size(); ++l) CHECK(std::fabs(mb.moments[l]) < 1e-9);
        }
    }
}

TEST_CASE("support containment and bounded finite differences") {
    for (double a : {1.0, 0.25}) {
        auto mb = moment_bump(a, 2, {1, 3});
        auto [lo, hi] = mb.bump.support();
        CHECK(lo > 0);
        CHECK(hi <= a);
        for (int i = 0; i <= 2000; ++i) {
            double t = -a + 3 * a * i / 2000.0;
            if (t <= 0 || t >= a) CHECK(mb.bump(t) == 0.0);
        }
        double h = a / 4000;
        for (int i = 0; i <= 4000; ++i) {
            double t = i * h;
            double d4 = mb.bump(t + 2 * h) - 4 * mb.bump(t + h) + 6 * mb.bump(t) - 4 * mb.bump(t - h) + mb.bump(t - 2 * h);
            CHECK(std::isfinite(d4 / std::pow(h, 4)));
        }
    }
}

TEST_CASE("moment bump rejects bad input") {
    CHECK_THROWS_AS(moment_bump(1.0, 2, {2}), InputError);
    CHECK_THROWS_AS(moment_bump(-1.0, 1, {}), InputError);
    CHECK_THROWS_AS(moment_bump(1.0, 1, {2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13}), InputError);
    CHECK_THROWS_AS(BumpCombination({{1.0, 0.0, 0.0}}), InputError);
}

TEST_CASE("tensor products") {
    auto phi = moment_bump(0.5, 1, {}).bump;
    TensorBump sigma({phi, phi});

    // Slice integrals vanish identically.
    for (double t : {0.05, 0.2, 0.37}) {
        double slice = integrate_adaptive([&](double s) {
            double p[2] = {s, t};
            return sigma(p);
        }, 0, 0.5, 1e-13);
        CHECK(std::fabs(slice) < 1e-12);
    }
    CHECK(std::fabs(sigma.moment({1, 1})) > 1e-6);

    auto direct = [&](const MultiIndex& alpha) {
        auto bps = phi.breakpoints();
        return integrate_composite([&](double s) {
            return integrate_composite([&](double t) {
                double p[2] = {s, t};
                return std::pow(s, alpha[0]) * std::pow(t, alpha[1]) * sigma(p);
            }, bps, 24, 4);
        }, bps, 24, 4);
    };
    for (MultiIndex alpha : {MultiIndex{1, 1}, MultiIndex{2, 1}, MultiIndex{0, 3}})
        CHECK(std::fabs(direct(alpha) - sigma.moment(alpha)) < 1e-10);
}

TEST_CASE("dilation is exact per atom") {
    auto phi = moment_bump(0.5, 1, {2}).bump;
    double lambda = 8.0;
    auto d = phi.dilated(lambda);
    for (double t : {0.001, 0.01, 0.02, 0.05}) CHECK(d(t) == doctest::Approx(lambda * phi(lambda * t)).epsilon(1e-13));
    CHECK(moment(d, 0) == doctest::Approx(moment(phi, 0)).scale(1.0).epsilon(1e-12));
}

TEST_CASE("serialization round trips bit-exactly") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1e3, 1e3), pos(1e-9, 10);
    std::vector<BumpAtom> atoms;
    for (int i = 0; i < 50; ++i) atoms.push_back({u(rng), u(rng), pos(rng)});
    atoms.push_back({0.1, 1.0 / 3, 5e-324});
    BumpCombination b(atoms);
    for (const auto& back : {read_bump_text(write_bump_text(b)), read_bump_json(write_bump_json(b))}) {
        REQUIRE(back.atoms().size() == atoms.size());
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            CHECK(same_bits(back.atoms()[i].coefficient, atoms[i].coefficient));
            CHECK(same_bits(back.atoms()[i].center, atoms[i].center));
            CHECK(same_bits(back.atoms()[i].radius, atoms[i].radius));
        }
    }
    CHECK_THROWS_AS(read_bump_text("1 2\n"), ParseError);
    CHECK_THROWS_AS(read_bump_text("1 2 x\n"), ParseError);
    CHECK_THROWS_AS(read_bump_json("{\"atoms\": [[1, 2]]}"), InputError);
}
