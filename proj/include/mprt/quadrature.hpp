#pragma once

#include <functional>
#include <span>
#include <vector>

namespace mprt {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Cached rule of the given order (1 <= order <= 256); thread-safe.
const GaussRule& gauss_legendre(int order);

using Integrand = std::function<double(double)>;

/// Single-panel rule on [a, b].
double integrate_fixed(const Integrand& f, double a, double b, int order);

/// Sum of fixed rules over consecutive panels [x_0,x_1], ..., [x_{m-1},x_m],
/// each split into `panels` equal pieces.
double integrate_composite(const Integrand& f, std::span<const double> breakpoints, int order, int panels = 1);

/// Adaptive bisection with a 15-point rule, compared against the same rule on
/// the two halves. A panel is also accepted once the discrepancy is at the
/// roundoff level of the integral of |f|. Throws NumericalError if neither
/// holds within `max_depth` bisections or 2^20 panels.
double integrate_adaptive(const Integrand& f, double a, double b, double abs_tol = 1e-12, int max_depth = 40);

}  // namespace mprt
