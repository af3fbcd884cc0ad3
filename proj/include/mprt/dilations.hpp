#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "mprt/rational.hpp"

namespace mprt {

/// Multi-index alpha in N^N.
struct MultiIndex {
    std::vector<int> components;

    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> c) : components(std::move(c)) {}
    MultiIndex(std::initializer_list<int> c) : components(c) {}
    static MultiIndex zeros(std::size_t n) { return MultiIndex(std::vector<int>(n, 0)); }

    std::size_t size() const noexcept { return components.size(); }
    int operator[](std::size_t i) const { return components[i]; }
    int& operator[](std::size_t i) { return components[i]; }

    /// |alpha| = alpha_1 + ... + alpha_N
    int total() const noexcept;
    bool is_zero() const noexcept;

    friend MultiIndex operator+(const MultiIndex& a, const MultiIndex& b);
    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
    friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
};

/// Graded lexicographic order: total degree first, then lexicographic with the
/// first variable most significant.
struct GradedLex {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const;
};

std::string to_string(const MultiIndex& alpha);

/// A nu-parameter degree with nonnegative rational components.
struct Degree {
    std::vector<Rational> components;

    Degree() = default;
    explicit Degree(std::vector<Rational> c) : components(std::move(c)) {}
    Degree(std::initializer_list<Rational> c) : components(c) {}

    std::size_t size() const noexcept { return components.size(); }
    const Rational& operator[](std::size_t i) const { return components[i]; }
    bool is_zero() const;

    friend Degree operator+(const Degree& a, const Degree& b);
    friend bool operator==(const Degree&, const Degree&) = default;
};

std::string to_string(const Degree& d);

/// The exponent matrix e = {e_i^mu} (N rows, nu columns) that defines the
/// multi-parameter dilation delta t = (delta^{e_1} t_1, ..., delta^{e_N} t_N).
///
/// Every row and every column must contain a nonzero entry; all entries are
/// nonnegative.
class ExponentScheme {
public:
    explicit ExponentScheme(std::vector<std::vector<Rational>> rows);

    /// e_i = i-th unit vector in Q^N (the product-kernel scheme with nu = N).
    static ExponentScheme product(std::size_t n);

    std::size_t dimension() const noexcept { return rows_.size(); }
    std::size_t parameters() const noexcept { return rows_.front().size(); }
    const std::vector<Rational>& row(std::size_t i) const { return rows_.at(i); }
    const Rational& exponent(std::size_t i, std::size_t mu) const { return rows_.at(i).at(mu); }
    const std::vector<std::vector<Rational>>& rows() const noexcept { return rows_; }

    /// Coordinates t_i with e_i^mu != 0 (the variables t^mu integrated in a
    /// mu-cancellation condition).
    std::vector<std::size_t> coordinates_of(std::size_t mu) const;

    /// True when every row has exactly one nonzero entry.
    bool is_product_type() const;

    friend bool operator==(const ExponentScheme&, const ExponentScheme&) = default;

private:
    std::vector<std::vector<Rational>> rows_;
};

/// deg(alpha) = sum_i alpha_i e_i, exact.
Degree degree(const MultiIndex& alpha, const ExponentScheme& scheme);

/// True iff exactly one component of d is nonzero. Throws on d = 0.
bool is_pure(const Degree& d);

/// Per-coordinate factors delta^{e_i} with the convention 0^0 = 1.
std::vector<double> dilation_factors(std::span<const double> delta, const ExponentScheme& scheme);

/// delta t, componentwise t_i -> delta^{e_i} t_i. Requires delta >= 0.
std::vector<double> dilate_point(std::span<const double> delta, std::span<const double> t,
                                 const ExponentScheme& scheme);

using ScalarFunction = std::function<double(std::span<const double>)>;

/// f^{(delta)}(t) = delta^{e_1 + ... + e_N} f(delta t). Requires delta > 0.
ScalarFunction scale_function(ScalarFunction f, std::span<const double> delta,
                              const ExponentScheme& scheme);

}  // namespace mprt
