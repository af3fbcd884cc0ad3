#include "mprt/quadrature.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "mprt/errors.hpp"

namespace mprt {

namespace {

GaussRule compute_rule(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        long double x = std::cos(std::numbers::pi_v<long double> * (i + 0.75L) / (n + 0.5L));
        long double dp = 0;
        for (int iter = 0; iter < 100; ++iter) {
            long double p0 = 1, p1 = x;
            for (int k = 2; k <= n; ++k) {
                long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1;
            dp = n * (x * p1 - p0) / (x * x - 1);
            long double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-19L) break;
        }
        long double w = 2 / ((1 - x * x) * dp * dp);
        rule.nodes[i] = static_cast<double>(-x);
        rule.nodes[n - 1 - i] = static_cast<double>(x);
        rule.weights[i] = rule.weights[n - 1 - i] = static_cast<double>(w);
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

struct Panel {
    double value;
    double magnitude;  // same rule applied to |f|
};

Panel panel(const Integrand& f, double a, double b) {
    const GaussRule& rule = gauss_legendre(15);
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double sum = 0, mag = 0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        double v = rule.weights[i] * f(c + h * rule.nodes[i]);
        sum += v;
        mag += std::fabs(v);
    }
    if (!std::isfinite(sum) || !std::isfinite(mag)) throw NumericalError("integrand is not finite on a quadrature panel", mag);
    return {h * sum, std::fabs(h) * mag};
}

struct AdaptiveState {
    const Integrand& f;
    int max_depth;
    long panels_left;
    double noise;  // roundoff floor derived from the whole-interval magnitude
};

// Accepts a panel when the halves agree to `tol` or to roundoff, whichever is
// looser; `tol` halves per level but the roundoff floor does not.
double adaptive_step(AdaptiveState& st, double a, double b, const Panel& whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    Panel left = panel(st.f, a, m);
    Panel right = panel(st.f, m, b);
    st.panels_left -= 2;
    double err = std::fabs(left.value + right.value - whole.value);
    if (err <= tol || err <= st.noise || err <= 1e-14 * (left.magnitude + right.magnitude)) return left.value + right.value;
    if (depth >= st.max_depth || st.panels_left <= 0)
        throw NumericalError("adaptive quadrature did not converge", err);
    return adaptive_step(st, a, m, left, 0.5 * tol, depth + 1) + adaptive_step(st, m, b, right, 0.5 * tol, depth + 1);
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
    if (order < 1 || order > 256) throw InputError("Gauss-Legendre order must be in [1, 256], got " + std::to_string(order));
    static std::mutex mutex;
    static std::map<int, GaussRule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, compute_rule(order)).first;
    return it->second;
}

double integrate_fixed(const Integrand& f, double a, double b, int order) {
    const GaussRule& rule = gauss_legendre(order);
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double sum = 0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(c + h * rule.nodes[i]);
    return h * sum;
}

double integrate_composite(const Integrand& f, std::span<const double> breakpoints, int order, int panels) {
    if (panels < 1) throw InputError("panel count must be positive");
    double sum = 0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        double step = (breakpoints[i + 1] - breakpoints[i]) / panels;
        for (int p = 0; p < panels; ++p) {
            double lo = breakpoints[i] + p * step;
            sum += integrate_fixed(f, lo, p + 1 == panels ? breakpoints[i + 1] : lo + step, order);
        }
    }
    return sum;
}

double integrate_adaptive(const Integrand& f, double a, double b, double abs_tol, int max_depth) {
    if (a == b) return 0.0;
    Panel whole = panel(f, a, b);
    AdaptiveState st{f, max_depth, 1L << 20, 64 * std::numeric_limits<double>::epsilon() * whole.magnitude};
    return adaptive_step(st, a, b, whole, abs_tol, 0);
}

}  // namespace mprt
