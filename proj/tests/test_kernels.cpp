#include "doctest.h"

#include <cmath>
#include <cstring>
#include <map>
#include <random>

#include "mprt/errors.hpp"
#include "mprt/kernels.hpp"

using namespace mprt;

namespace {

const BumpCombination& phi() {
    static const BumpCombination b = moment_bump(0.5, 1, {}).bump;
    return b;
}

BumpCombination positive() { return BumpCombination({{1.0, 0.1, 0.3}}); }

TensorSum product_atom() { return TensorSum(TensorBump({phi(), phi()})); }

// sigma_j with cancellation exactly in the coordinates where j_mu != 0.
DyadicKernelSeq graded_atoms(int max_order) {
    DyadicKernelSeq seq(ExponentScheme::product(2), 1.0);
    for (int a = 0; a <= max_order; ++a)
        for (int b = 0; a + b <= max_order; ++b) {
            BumpCombination s = a ? phi().scaled(1.0 + 0.1 * a) : positive();
            BumpCombination t = b ? phi().scaled(1.0 - 0.05 * b) : positive().scaled(0.5);
            seq.set({a, b}, TensorSum(TensorBump({s, t})));
        }
    return seq;
}

double max_abs_diff(const std::function<double(std::span<const double>)>& f,
                    const std::function<double(std::span<const double>)>& g,
                    const std::vector<std::pair<double, double>>& box, int count, double* scale) {
    std::mt19937 rng(4242);
    double worst = 0, peak = 0;
    for (int i = 0; i < count; ++i) {
        std::vector<double> p;
        for (auto [lo, hi] : box) {
            double w = hi - lo;
            p.push_back(std::uniform_real_distribution<double>(lo - 0.05 * w, hi + 0.05 * w)(rng));
        }
        double a = f(p), b = g(p);
        worst = std::max(worst, std::fabs(a - b));
        peak = std::max(peak, std::fabs(b));
    }
    if (scale) *scale = peak;
    return worst;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("factorized mean-zero kernels pass cancellation") {
    auto seq = uniform_sequence(ExponentScheme::product(2), product_atom(), 3, 1.0);
    auto report = verify_cancellation(seq);
    CHECK(report.passed);
    CHECK(report.checked > 0);
    CHECK(report.max_slice < 1e-12);
}

TEST_CASE("a non-cancelling entry is reported") {
    DyadicKernelSeq seq(ExponentScheme::product(2), 1.0);
    seq.set({0, 0}, TensorSum(TensorBump({positive(), positive()})));
    seq.set({1, 0}, TensorSum(TensorBump({positive(), phi()})));
    auto report = verify_cancellation(seq);
    CHECK_FALSE(report.passed);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].k == MultiIndex{1, 0});
    CHECK(report.violations[0].mu == 0);
}

TEST_CASE("support violations are reported") {
    DyadicKernelSeq seq(ExponentScheme::product(2), 0.25);
    seq.set({0, 0}, product_atom());
    auto report = verify_cancellation(seq);
    CHECK_FALSE(report.passed);
    CHECK(report.support_violations.size() == 1);
}

TEST_CASE("point masses are not representable") {
    std::string text = "dimension 1\nparameters 1\nrow 1\nsupport 1\nentry 0\nterm\nfactor 1 0 0\n";
    try {
        read_kernel_text(text);
        FAIL("expected rejection");
    } catch (const ParseError& e) {
        CHECK(e.line() == 7);
        CHECK(std::string(e.what()).find("delta_0") != std::string::npos);
    }
}

TEST_CASE("cancellation survives rescaling") {
    auto good = uniform_sequence(ExponentScheme::product(2), product_atom(), 2, 1.0);
    CHECK(verify_cancellation(good.scaled(7.5)).passed);
    DyadicKernelSeq bad(ExponentScheme::product(2), 1.0);
    bad.set({0, 1}, TensorSum(TensorBump({phi(), positive()})));
    CHECK_FALSE(verify_cancellation(bad.scaled(7.5)).passed);
}

TEST_CASE("single-entry product bound equals the weighted sup of the atom") {
    auto seq = uniform_sequence(ExponentScheme::product(2), product_atom(), 0, 1.0);
    auto samples = product_samples(40, 1e-3, 0.6);
    auto bound = sample_product_kernel_bounds(seq, 0, {0, 0}, samples);
    double direct = 0;
    for (const auto& p : samples) direct = std::max(direct, std::fabs(product_atom()(p) * p[0] * p[1]));
    CHECK(bound.constant == doctest::Approx(direct).epsilon(1e-15));
    CHECK(bound.constant > 0);
}

TEST_CASE("product bounds stabilize in M and scale linearly") {
    auto atom = product_atom();
    auto samples = product_samples(48, 1e-4, 0.6);
    auto seq10 = uniform_sequence(ExponentScheme::product(2), atom, 10, 1.0);
    double c6 = sample_product_kernel_bounds(seq10, 6, {0, 0}, samples).constant;
    double c10 = sample_product_kernel_bounds(seq10, 10, {0, 0}, samples).constant;
    CHECK(std::fabs(c10 - c6) <= 0.05 * c6);

    auto doubled = seq10.scaled(2.0);
    for (MultiIndex alpha : {MultiIndex{0, 0}, MultiIndex{1, 0}, MultiIndex{1, 1}}) {
        double a = sample_product_kernel_bounds(seq10, 4, alpha, samples).constant;
        double b = sample_product_kernel_bounds(doubled, 4, alpha, samples).constant;
        CHECK(b == doctest::Approx(2 * a).epsilon(1e-14));
    }
    std::array<double, 2> axis{{0.0, 0.1}};
    CHECK_THROWS_AS(sample_product_kernel_bounds(seq10, 1, {0, 0}, std::span(&axis, 1)), InputError);
}

TEST_CASE("regroup with M = 0") {
    std::vector<double> tau{std::ldexp(1.5, 6), 40.0};
    std::vector<double> n{1.0, -1.0};
    auto r = regroup_to_dyadic(product_atom(), tau, n, 0, ExponentScheme::product(2), 1.0);
    REQUIRE(r.sequence.entries().size() == 1);
    const auto& [i, entry] = *r.sequence.entries().begin();
    CHECK(i == MultiIndex{6, 5});
    // 1.5 * 2^6 / 2^6 = 1.5 and 40 / 2^5 = 1.25 per coordinate.
    const auto& s = entry.terms()[0].components()[0].atoms()[0];
    CHECK(s.center == phi().atoms()[0].center / 1.5);
}

TEST_CASE("regroup identity at exact dyadic scales") {
    std::vector<double> tau{512.0, 512.0};
    std::vector<double> n{1.0, -1.0};
    auto scheme = ExponentScheme::product(2);
    auto atom = product_atom();
    auto r = regroup_to_dyadic(atom, tau, n, 5, scheme, 1.0);
    CHECK(r.max_terms_per_entry == 1);
    auto source = [&](std::span<const double> t) {
        double v = 0;
        for (int k = 0; k <= 5; ++k) {
            double delta[2] = {std::ldexp(512.0, k), std::ldexp(512.0, -k)};
            v += atom.dilated(dilation_factors(delta, scheme))(t);
        }
        return v;
    };
    auto target = [&](std::span<const double> t) { return r.sequence.evaluate(t); };
    std::vector<std::pair<double, double>> box{{0, 0.5 / 512}, {0, 0.5 * 32 / 512}};
    double peak = 0;
    double err = max_abs_diff(target, source, box, 10000, &peak);
    CHECK(peak > 1e3);
    CHECK(err <= 1e-12 * peak);
}

TEST_CASE("regroup identity for random admissible parameters") {
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> logtau(7.0, 10.0), dir(-1.0, 1.0);
    auto scheme = ExponentScheme::product(2);
    auto atom = product_atom();
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> tau{std::exp2(logtau(rng)), std::exp2(logtau(rng))};
        std::vector<double> n{dir(rng), dir(rng)};
        int M = 5;
        auto r = regroup_to_dyadic(atom, tau, n, M, scheme, 1.0);
        auto source = [&](std::span<const double> t) {
            double v = 0;
            for (int k = 0; k <= M; ++k) {
                double delta[2] = {tau[0] * std::exp2(k * n[0]), tau[1] * std::exp2(k * n[1])};
                v += atom.dilated(dilation_factors(delta, scheme))(t);
            }
            return v;
        };
        auto target = [&](std::span<const double> t) { return r.sequence.evaluate(t); };
        double hi0 = 0.5 / std::min(tau[0], tau[0] * std::exp2(M * n[0]));
        double hi1 = 0.5 / std::min(tau[1], tau[1] * std::exp2(M * n[1]));
        double peak = 0;
        double err = max_abs_diff(target, source, {{0, hi0}, {0, hi1}}, 10000, &peak);
        CHECK(err <= 1e-12 * peak);
        // Distinct k share a unit cell only when |k - k'| max|n_mu| < 1.
        double reach = std::max(std::fabs(n[0]), std::fabs(n[1]));
        CHECK(r.max_terms_per_entry <= static_cast<std::size_t>(std::floor(1 / reach)) + 1);
    }
    std::vector<double> tau{1.0, 512.0}, n{-1.0, 0.0};
    CHECK_THROWS_AS(regroup_to_dyadic(atom, tau, n, 2, scheme, 1.0), InputError);
}

TEST_CASE("regrouped entries stay bounded as M grows") {
    std::vector<double> tau{std::ldexp(1.3, 9), std::ldexp(1.7, 9)};
    std::vector<double> n{0.6, -0.8};
    auto atom = product_atom();
    // Each entry holds at most two atoms dilated by factors in [1,2) per axis.
    const double ceiling = 2 * 4 * sampled_cm_norm(atom, 0, 61);
    for (int M = 1; M <= 8; ++M) {
        auto r = regroup_to_dyadic(atom, tau, n, M, ExponentScheme::product(2), 1.0);
        CHECK(r.max_terms_per_entry <= 2);
        for (const auto& [i, entry] : r.sequence.entries()) CHECK(sampled_cm_norm(entry, 0, 31) <= ceiling);
    }
}

TEST_CASE("one-parameter telescoping collapses interior scales") {
    ExponentScheme line({{Rational(1)}});
    DyadicKernelSeq atoms(line, 1.0);
    atoms.set({0}, TensorSum(TensorBump({positive()})));
    std::vector<double> scale{24.0};  // 2^4 <= 24 < 2^5
    auto result = telescope_decompose(atoms, {3}, scale, 0);
    std::map<double, int> net;  // effective dilation 2^l * 2^{-p-m} S -> coefficient
    for (const auto& t : result.terms) net[std::ldexp(t.scale[0], t.l[0])] += t.sign;
    int survivors = 0;
    for (auto [s, c] : net) {
        CHECK((c == 0 || c == 1));
        if (c == 1) {
            ++survivors;
            CHECK(s == 24.0);
        }
    }
    CHECK(survivors == 1);
    CHECK(net.size() == 4);
}

TEST_CASE("two-parameter telescoping identity and cancellation") {
    auto scheme = ExponentScheme::product(2);
    const int M = 3;
    auto atoms = graded_atoms(M);
    std::vector<double> scale{std::ldexp(1.4, 5), std::ldexp(1.9, 3)};
    MultiIndex m{4, 2};
    auto result = telescope_decompose(atoms, m, scale, M);

    auto source = [&](std::span<const double> t) {
        double v = 0;
        for (const auto& [j, atom] : atoms.entries()) {
            if (j.total() > M) continue;
            double delta[2] = {std::ldexp(scale[0], j[0]), std::ldexp(scale[1], j[1])};
            v += atom.dilated(dilation_factors(delta, scheme))(t);
        }
        return v;
    };
    auto target = [&](std::span<const double> t) { return result.phi.evaluate(t); };
    std::vector<std::pair<double, double>> box{{0, 0.4 / scale[0]}, {0, 0.4 / scale[1]}};
    double peak = 0;
    double err = max_abs_diff(target, source, box, 10000, &peak);
    CHECK(err <= 1e-12 * peak);

    auto report = verify_cancellation(result.phi);
    CHECK(report.violations.empty());
    CHECK(report.max_slice < 1e-9);
    CHECK(report.checked > 10);

    std::vector<double> bad{std::ldexp(1.0, 7), 10.0};
    CHECK_THROWS_AS(telescope_decompose(atoms, m, bad, M), InputError);
}

TEST_CASE("telescoped entries stay bounded as M grows") {
    std::vector<double> scale{std::ldexp(1.25, 3), std::ldexp(1.5, 2)};
    const int top = 6;
    // phi_l is a signed sum of at most four dilates with factors below 4 per
    // axis, so |phi_l|_{C^k} <= 4 * 4^{2+k} max_j |sigma_j|_{C^k}.
    double atom0 = 0, atom1 = 0;
    const auto all = graded_atoms(top);
    for (const auto& [j, atom] : all.entries()) {
        atom0 = std::max(atom0, sampled_cm_norm(atom, 0, 61));
        atom1 = std::max(atom1, sampled_cm_norm(atom, 1, 61));
    }
    for (int M = 1; M <= top; ++M) {
        auto result = telescope_decompose(graded_atoms(M), {2, 1}, scale, M);
        double c0 = 0, c1 = 0;
        for (const auto& [l, entry] : result.phi.entries()) {
            c0 = std::max(c0, sampled_cm_norm(entry, 0, 21));
            c1 = std::max(c1, sampled_cm_norm(entry, 1, 21));
        }
        CHECK(c0 <= 4 * 16 * atom0);
        CHECK(c1 <= 4 * 64 * atom1);
        CHECK(c0 > 0);
    }
}

TEST_CASE("kernel files round trip bit-exactly") {
    auto scheme = ExponentScheme({{Rational(1), Rational(0)}, {Rational(1, 2), Rational(3)}});
    DyadicKernelSeq seq(scheme, 0.7071067811865476);
    seq.set({0, 0}, product_atom());
    seq.set({2, 1}, TensorSum({TensorBump({phi(), positive()}), TensorBump({positive().scaled(1.0 / 3), phi()})}));
    auto back = read_kernel_text(write_kernel_text(seq));
    CHECK(back == seq);
    CHECK(same_bits(back.support_bound(), seq.support_bound()));
    CHECK(write_kernel_text(back) == write_kernel_text(seq));

    CHECK_THROWS_AS(read_kernel_text("dimension 2\nparameters 2\nrow 1 0\n"), ParseError);
    CHECK_THROWS_AS(read_kernel_text("dimension 1\nparameters 1\nrow 1\nsupport 1\nentry -1\n"), ParseError);
    CHECK_THROWS_AS(read_kernel_text("dimension 1\nparameters 1\nrow 1\nsupport 1\nentry 0\nterm\nfactor 1 0\n"), ParseError);
}
