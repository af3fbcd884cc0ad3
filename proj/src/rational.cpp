#include "mprt/rational.hpp"

#include <cctype>

#include "mprt/errors.hpp"

namespace mprt {

std::string to_string(const Rational& value) {
    const auto num = boost::multiprecision::numerator(value);
    const auto den = boost::multiprecision::denominator(value);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    bool negative = false;
    if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    const auto slash = text.find('/');
    const std::string_view num = text.substr(0, slash);
    const std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
        throw InputError("malformed rational literal '" + std::string(text) + "'");
    boost::multiprecision::cpp_int n(std::string{num});
    boost::multiprecision::cpp_int d(std::string{den});
    if (d == 0) throw InputError("zero denominator in rational literal");
    Rational r(n, d);
    return negative ? Rational(-r) : r;
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

}  // namespace mprt
