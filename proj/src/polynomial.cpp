#include "mprt/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

#include "mprt/errors.hpp"

namespace mprt {

Polynomial Polynomial::constant(std::size_t num_vars, const Rational& c) {
    Polynomial p(num_vars);
    p.add_term(MultiIndex::zeros(num_vars), c);
    return p;
}

Polynomial Polynomial::variable(std::size_t num_vars, std::size_t index) {
    if (index >= num_vars) throw InputError("variable index out of range");
    MultiIndex alpha = MultiIndex::zeros(num_vars);
    alpha[index] = 1;
    return monomial(alpha, Rational(1));
}

Polynomial Polynomial::monomial(const MultiIndex& alpha, const Rational& c) {
    Polynomial p(alpha.size());
    p.add_term(alpha, c);
    return p;
}

Rational Polynomial::coefficient(const MultiIndex& alpha) const {
    auto it = terms_.find(alpha);
    return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::add_term(const MultiIndex& alpha, const Rational& c) {
    if (alpha.size() != num_vars_) throw InputError("monomial arity does not match polynomial");
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(alpha, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

bool Polynomial::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_zero());
}

Rational Polynomial::constant_term() const { return coefficient(MultiIndex::zeros(num_vars_)); }

int Polynomial::total_degree() const {
    return terms_.empty() ? -1 : terms_.rbegin()->first.total();
}

void Polynomial::check_same_arity(const Polynomial& other) const {
    if (num_vars_ != other.num_vars_) throw InputError("polynomials have different variable counts");
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
    check_same_arity(other);
    for (const auto& [alpha, c] : other.terms_) add_term(alpha, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
    check_same_arity(other);
    for (const auto& [alpha, c] : other.terms_) add_term(alpha, -c);
    return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [alpha, coeff] : terms_) coeff *= c;
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_same_arity(b);
    Polynomial out(a.num_vars_);
    for (const auto& [alpha, ca] : a.terms_)
        for (const auto& [beta, cb] : b.terms_) out.add_term(alpha + beta, ca * cb);
    return out;
}

Polynomial Polynomial::operator-() const {
    Polynomial out = *this;
    for (auto& [alpha, c] : out.terms_) c = -c;
    return out;
}

Polynomial Polynomial::derivative(std::size_t var) const {
    if (var >= num_vars_) throw InputError("derivative variable out of range");
    Polynomial out(num_vars_);
    for (const auto& [alpha, c] : terms_) {
        if (alpha[var] == 0) continue;
        MultiIndex beta = alpha;
        beta[var] -= 1;
        out.add_term(beta, c * alpha[var]);
    }
    return out;
}

Polynomial Polynomial::euler_derivative() const {
    Polynomial out(num_vars_);
    for (const auto& [alpha, c] : terms_) out.add_term(alpha, c * alpha.total());
    return out;
}

Polynomial Polynomial::scale_variables(std::span<const Rational> lambda) const {
    if (lambda.size() != num_vars_) throw InputError("scale vector length does not match polynomial");
    Polynomial out(num_vars_);
    for (const auto& [alpha, c] : terms_) {
        Rational factor = c;
        for (std::size_t i = 0; i < num_vars_; ++i)
            for (int k = 0; k < alpha[i]; ++k) factor *= lambda[i];
        out.add_term(alpha, factor);
    }
    return out;
}

double Polynomial::evaluate(std::span<const double> x) const {
    if (x.size() != num_vars_) throw InputError("evaluation point has the wrong dimension");
    double sum = 0.0;
    for (const auto& [alpha, c] : terms_) {
        double term = to_double(c);
        for (std::size_t i = 0; i < num_vars_; ++i)
            for (int k = 0; k < alpha[i]; ++k) term *= x[i];
        sum += term;
    }
    return sum;
}

Rational Polynomial::evaluate(std::span<const Rational> x) const {
    if (x.size() != num_vars_) throw InputError("evaluation point has the wrong dimension");
    Rational sum = 0;
    for (const auto& [alpha, c] : terms_) {
        Rational term = c;
        for (std::size_t i = 0; i < num_vars_; ++i)
            for (int k = 0; k < alpha[i]; ++k) term *= x[i];
        sum += term;
    }
    return sum;
}

std::vector<std::string> default_variable_names(std::size_t num_vars) {
    if (num_vars == 1) return {"x"};
    if (num_vars == 2) return {"s", "t"};
    std::vector<std::string> names;
    for (std::size_t i = 0; i < num_vars; ++i) names.push_back("s" + std::to_string(i + 1));
    return names;
}

std::string to_string(const Polynomial& p) {
    const auto names = default_variable_names(p.num_vars());
    return to_string(p, names);
}

std::string to_string(const Polynomial& p, std::span<const std::string> names) {
    if (names.size() != p.num_vars()) throw InputError("wrong number of variable names");
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [alpha, c] : p.terms()) {
        const bool negative = c < 0;
        const Rational magnitude = negative ? Rational(-c) : c;
        if (first)
            out += negative ? "-" : "";
        else
            out += negative ? " - " : " + ";
        first = false;
        std::string factors;
        for (std::size_t i = 0; i < alpha.size(); ++i) {
            if (alpha[i] == 0) continue;
            if (!factors.empty()) factors += "*";
            factors += names[i];
            if (alpha[i] > 1) factors += "^" + std::to_string(alpha[i]);
        }
        if (factors.empty())
            out += to_string(magnitude);
        else if (magnitude == 1)
            out += factors;
        else
            out += to_string(magnitude) + "*" + factors;
    }
    return out;
}

namespace {

class PolynomialParser {
public:
    PolynomialParser(std::string_view text, std::size_t num_vars, int line, int column_offset)
        : text_(text), num_vars_(num_vars), line_(line), column_offset_(column_offset) {}

    Polynomial parse() {
        Polynomial result(num_vars_);
        skip_space();
        if (at_end()) fail("empty polynomial");
        bool negative = false;
        if (peek() == '+' || peek() == '-') {
            negative = peek() == '-';
            advance();
        }
        while (true) {
            Polynomial term = parse_term();
            result += negative ? -term : term;
            skip_space();
            if (at_end()) break;
            if (peek() != '+' && peek() != '-') fail(std::string("unexpected '") + peek() + "'");
            negative = peek() == '-';
            advance();
        }
        return result;
    }

private:
    Polynomial parse_term() {
        Rational coeff = 1;
        MultiIndex alpha = MultiIndex::zeros(num_vars_);
        while (true) {
            skip_space();
            if (at_end()) fail("expected a number or variable");
            const char c = peek();
            if (std::isdigit(static_cast<unsigned char>(c))) {
                Rational value = parse_integer();
                skip_space();
                if (!at_end() && peek() == '/') {
                    advance();
                    skip_space();
                    if (at_end() || !std::isdigit(static_cast<unsigned char>(peek())))
                        fail("expected a denominator after '/'");
                    const std::size_t col = pos_;
                    Rational den = parse_integer();
                    if (den == 0) fail_at(col, "zero denominator");
                    value /= den;
                }
                coeff *= value;
            } else if (std::isalpha(static_cast<unsigned char>(c))) {
                const std::size_t col = pos_;
                std::string name;
                while (!at_end() && std::isalnum(static_cast<unsigned char>(peek()))) {
                    name += peek();
                    advance();
                }
                const auto index = variable_index(name);
                if (!index) fail_at(col, "unknown variable '" + name + "'");
                int power = 1;
                skip_space();
                if (!at_end() && peek() == '^') {
                    advance();
                    skip_space();
                    if (at_end() || !std::isdigit(static_cast<unsigned char>(peek())))
                        fail("expected an integer exponent after '^'");
                    const std::size_t exp_col = pos_;
                    Rational e = parse_integer();
                    if (e > 1000) fail_at(exp_col, "exponent too large");
                    power = static_cast<int>(boost::multiprecision::numerator(e));
                }
                alpha[*index] += power;
            } else {
                fail(std::string("unexpected '") + c + "'");
            }
            skip_space();
            if (at_end() || peek() == '+' || peek() == '-') break;
            if (peek() != '*') fail("expected '*' between factors");
            advance();
        }
        return Polynomial::monomial(alpha, coeff);
    }

    Rational parse_integer() {
        std::string digits;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
            digits += peek();
            advance();
        }
        return Rational(boost::multiprecision::cpp_int(digits));
    }

    std::optional<std::size_t> variable_index(const std::string& name) const {
        if (num_vars_ == 2 && name == "s") return 0;
        if (num_vars_ == 2 && name == "t") return 1;
        if (num_vars_ == 1 && name == "x") return 0;
        if (name.size() >= 2 && (name[0] == 's' || name[0] == 't')) {
            const std::string rest = name.substr(1);
            if (rest.empty() || rest.size() > 3 || rest[0] == '0' ||
                !std::all_of(rest.begin(), rest.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }))
                return std::nullopt;
            const std::size_t k = std::stoul(rest);
            if (k >= 1 && k <= num_vars_) return k - 1;
        }
        return std::nullopt;
    }

    void skip_space() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) advance();
    }
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }
    void advance() { ++pos_; }
    [[noreturn]] void fail(const std::string& message) const { fail_at(pos_, message); }
    [[noreturn]] void fail_at(std::size_t pos, const std::string& message) const {
        throw ParseError(message, line_, static_cast<int>(pos) + 1 + column_offset_);
    }

    std::string_view text_;
    std::size_t num_vars_;
    int line_;
    int column_offset_;
    std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(std::string_view text, std::size_t num_vars, int line, int column_offset) {
    if (num_vars == 0) throw InputError("polynomials need at least one variable");
    return PolynomialParser(text, num_vars, line, column_offset).parse();
}

}  // namespace mprt
