#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mprt/dilations.hpp"
#include "mprt/rational.hpp"

namespace mprt {

/// Multivariate polynomial with exact rational coefficients.
///
/// Terms are stored in graded-lex order with no zero coefficients, so equality
/// is structural and printing is deterministic.
class Polynomial {
public:
    using TermMap = std::map<MultiIndex, Rational, GradedLex>;

    explicit Polynomial(std::size_t num_vars = 0) : num_vars_(num_vars) {}

    static Polynomial constant(std::size_t num_vars, const Rational& c);
    static Polynomial variable(std::size_t num_vars, std::size_t index);
    static Polynomial monomial(const MultiIndex& alpha, const Rational& c);

    std::size_t num_vars() const noexcept { return num_vars_; }
    const TermMap& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }

    Rational coefficient(const MultiIndex& alpha) const;
    /// Adds c * x^alpha, dropping the term if the result is zero.
    void add_term(const MultiIndex& alpha, const Rational& c);

    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_constant() const;
    Rational constant_term() const;
    int total_degree() const;

    Polynomial& operator+=(const Polynomial& other);
    Polynomial& operator-=(const Polynomial& other);
    Polynomial& operator*=(const Rational& c);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
    friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    Polynomial operator-() const;

    Polynomial derivative(std::size_t var) const;

    /// d/de p(e t) at e = 1, i.e. sum |alpha| c_alpha t^alpha.
    Polynomial euler_derivative() const;

    /// p(lambda_1 t_1, ..., lambda_n t_n).
    Polynomial scale_variables(std::span<const Rational> lambda) const;

    double evaluate(std::span<const double> x) const;
    Rational evaluate(std::span<const Rational> x) const;

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    void check_same_arity(const Polynomial& other) const;

    std::size_t num_vars_;
    TermMap terms_;
};

/// Variable names used for printing: "s","t" for two variables, "s1".."sN"
/// otherwise; "x" for a single variable.
std::vector<std::string> default_variable_names(std::size_t num_vars);

std::string to_string(const Polynomial& p);
std::string to_string(const Polynomial& p, std::span<const std::string> names);

/// Parses the grammar
///   poly   := ['+'|'-'] term (('+'|'-') term)*
///   term   := factor ('*' factor)*
///   factor := int ['/' int] | var ['^' int]
/// Whitespace is ignored. Accepted variable names for n variables are s1..sn
/// and t1..tn, plus s,t when n == 2. Throws ParseError with the column.
/// `line` and `column_offset` position `text` inside a larger document for error reports.
Polynomial parse_polynomial(std::string_view text, std::size_t num_vars, int line = 1, int column_offset = 0);

}  // namespace mprt
