#pragma once

#include <cstddef>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mprt/dilations.hpp"

namespace mprt {

/// psi(t) = Z exp(-1/(t(1-t))) on (0,1), zero elsewhere, with Z chosen so that
/// the integral is 1. Moments and derivative polynomials are computed once.
class BaseMollifier {
public:
    static constexpr int kMaxMoment = 64;
    static constexpr int kMaxDerivative = 8;

    static const BaseMollifier& instance();

    double normalization() const noexcept { return z_; }
    double operator()(double t) const;
    /// psi^{(n)}(t) = Z Q_n(t) / D^{2n} exp(-1/D), D = t(1-t); 0 <= n <= kMaxDerivative.
    double derivative(double t, int n) const;
    /// b_m = int t^m psi(t) dt for 0 <= m <= kMaxMoment.
    double moment(int m) const;

private:
    BaseMollifier();

    double z_;
    std::vector<std::vector<double>> q_;  // coefficients of Q_n, ascending powers
    std::vector<double> moments_;
};

/// c psi_{x,r} with psi_{x,r}(t) = psi((t-x)/r)/r.
struct BumpAtom {
    double coefficient;
    double center;
    double radius;

    friend bool operator==(const BumpAtom&, const BumpAtom&) = default;
};

/// Finite combination sum_j c_j psi_{x_j, r_j}.
class BumpCombination {
public:
    BumpCombination() = default;
    explicit BumpCombination(std::vector<BumpAtom> atoms);

    const std::vector<BumpAtom>& atoms() const noexcept { return atoms_; }
    bool empty() const noexcept { return atoms_.empty(); }

    double operator()(double t) const;
    double derivative(double t, int order) const;

    /// Smallest interval [lo, hi] containing every atom support.
    std::pair<double, double> support() const;
    /// Sorted distinct atom endpoints; the function is smooth between them.
    std::vector<double> breakpoints() const;

    /// lambda f(lambda t), exact per atom: centers and radii divided by lambda.
    BumpCombination dilated(double lambda) const;
    BumpCombination scaled(double factor) const;

    friend bool operator==(const BumpCombination&, const BumpCombination&) = default;

private:
    std::vector<BumpAtom> atoms_;
};

/// int t^m f(t) dt by adaptive Gauss-Legendre between atom endpoints
/// (absolute tolerance 1e-12). Throws NumericalError on non-convergence.
double moment(const BumpCombination& f, int m, double abs_tol = 1e-12);

/// The same moment from the binomial expansion over the cached b_m.
double analytic_moment(const BumpCombination& f, int m);

struct MomentBump {
    BumpCombination bump;
    /// (a_0 = 0, a_1, excluded...) in system order.
    std::vector<int> exponents;
    /// A[l][j] = int t^{a_l} psi_{x_j, r_j}.
    std::vector<std::vector<long double>> matrix;
    long double determinant = 0;
    /// y_0 ... y_k prod_{l<l'} (c^{a_l'} - c^{a_l}).
    long double determinant_formula = 0;
    /// Quadrature values of every constrained moment, in system order.
    std::vector<double> moments;
};

/// Moment bump supported in (0, a): zero mean, int t^{a1} = 1 (before
/// quadrature), int t^{a_l} = 0 for every excluded a_l. Uses c = 1/2 and
/// x_1 = r_1 = a/2. At most 11 excluded exponents, each at most kMaxMoment.
MomentBump moment_bump(double a, int a1, const std::set<int>& excluded);

/// Pointwise product prod_i f_i(t_i).
class TensorBump {
public:
    TensorBump() = default;
    explicit TensorBump(std::vector<BumpCombination> components);

    std::size_t dimension() const noexcept { return components_.size(); }
    const std::vector<BumpCombination>& components() const noexcept { return components_; }

    double operator()(std::span<const double> t) const;
    /// d^alpha of the product.
    double derivative(std::span<const double> t, const MultiIndex& alpha) const;
    /// prod_i int t_i^{alpha_i} f_i.
    double moment(const MultiIndex& alpha) const;

    /// f^{(delta)} for per-coordinate factors lambda_i = delta^{e_i}.
    TensorBump dilated(std::span<const double> factors) const;
    TensorBump scaled(double factor) const;

    friend bool operator==(const TensorBump&, const TensorBump&) = default;

private:
    std::vector<BumpCombination> components_;
};

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);
/// Strict parse of a full token; throws InputError.
double parse_double(std::string_view text);

/// One "coefficient center radius" line per atom; '#' starts a comment.
std::string write_bump_text(const BumpCombination& bump);
BumpCombination read_bump_text(std::string_view text);

std::string write_bump_json(const BumpCombination& bump);
BumpCombination read_bump_json(std::string_view text);

}  // namespace mprt
