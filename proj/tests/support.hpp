#pragma once

#include <random>

#include "mprt/polynomial.hpp"
#include "mprt/symbolic.hpp"

namespace mprt::testing {

/// Random polynomial in `vars` variables, total degree <= max_degree, no constant term.
inline Polynomial random_polynomial(std::mt19937& rng, std::size_t vars, int max_degree, int max_terms = 5) {
    std::uniform_int_distribution<int> coef(-6, 6), den(1, 4), count(0, max_terms);
    Polynomial p(vars);
    for (int i = count(rng); i > 0; --i) {
        MultiIndex alpha = MultiIndex::zeros(vars);
        int budget = max_degree;
        for (std::size_t v = 0; v < vars; ++v) {
            alpha[v] = std::uniform_int_distribution<int>(0, budget)(rng);
            budget -= alpha[v];
        }
        if (alpha.is_zero()) continue;
        p.add_term(alpha, Rational(coef(rng), den(rng)));
    }
    return p;
}

inline GammaSpec random_translation_spec(std::mt19937& rng, int max_degree) {
    return GammaSpec::translation(random_polynomial(rng, 2, max_degree), ExponentScheme::product(2));
}

inline GammaSpec random_heisenberg_spec(std::mt19937& rng, int max_degree) {
    return GammaSpec::heisenberg(random_polynomial(rng, 2, max_degree), random_polynomial(rng, 2, max_degree),
                                 random_polynomial(rng, 2, max_degree), ExponentScheme::product(2));
}

/// Random vector field on R^dim with polynomial coefficients of degree <= max_degree.
inline PolyVectorField random_field(std::mt19937& rng, std::size_t dim, int max_degree) {
    std::vector<Polynomial> comps;
    std::uniform_int_distribution<int> coef(-4, 4);
    for (std::size_t i = 0; i < dim; ++i) {
        Polynomial p = random_polynomial(rng, dim, max_degree, 3);
        p += Polynomial::constant(dim, Rational(coef(rng)));
        comps.push_back(p);
    }
    return PolyVectorField(std::move(comps));
}

}  // namespace mprt::testing
