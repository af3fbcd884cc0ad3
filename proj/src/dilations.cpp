#include "mprt/dilations.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mprt/errors.hpp"

namespace mprt {

int MultiIndex::total() const noexcept {
    return std::accumulate(components.begin(), components.end(), 0);
}

bool MultiIndex::is_zero() const noexcept {
    return std::all_of(components.begin(), components.end(), [](int c) { return c == 0; });
}

MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
    if (a.size() != b.size()) throw InputError("multi-index length mismatch");
    MultiIndex out = a;
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += b[i];
    return out;
}

bool GradedLex::operator()(const MultiIndex& a, const MultiIndex& b) const {
    const int ta = a.total();
    const int tb = b.total();
    if (ta != tb) return ta < tb;
    // Within a total degree, larger leading exponents come first: s^2 before s*t before t^2.
    return b.components < a.components;
}

std::string to_string(const MultiIndex& alpha) {
    std::string out = "(";
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(alpha[i]);
    }
    return out + ")";
}

bool Degree::is_zero() const {
    return std::all_of(components.begin(), components.end(), [](const Rational& r) { return r == 0; });
}

Degree operator+(const Degree& a, const Degree& b) {
    if (a.size() != b.size()) throw InputError("degree length mismatch");
    Degree out = a;
    for (std::size_t i = 0; i < a.size(); ++i) out.components[i] += b.components[i];
    return out;
}

std::string to_string(const Degree& d) {
    std::string out = "(";
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (i) out += ",";
        out += to_string(d[i]);
    }
    return out + ")";
}

ExponentScheme::ExponentScheme(std::vector<std::vector<Rational>> rows) : rows_(std::move(rows)) {
    if (rows_.empty()) throw InputError("exponent scheme needs at least one row");
    const std::size_t nu = rows_.front().size();
    if (nu == 0) throw InputError("exponent scheme needs at least one parameter");
    std::vector<bool> column_used(nu, false);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (rows_[i].size() != nu) throw InputError("exponent scheme rows have different lengths");
        bool row_used = false;
        for (std::size_t mu = 0; mu < nu; ++mu) {
            if (rows_[i][mu] < 0) throw InputError("exponent scheme entries must be nonnegative");
            if (rows_[i][mu] != 0) {
                row_used = true;
                column_used[mu] = true;
            }
        }
        if (!row_used) throw InputError("exponent scheme row " + std::to_string(i + 1) + " is zero");
    }
    for (std::size_t mu = 0; mu < nu; ++mu)
        if (!column_used[mu]) throw InputError("exponent scheme column " + std::to_string(mu + 1) + " is zero");
}

ExponentScheme ExponentScheme::product(std::size_t n) {
    std::vector<std::vector<Rational>> rows(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) rows[i][i] = 1;
    return ExponentScheme(std::move(rows));
}

std::vector<std::size_t> ExponentScheme::coordinates_of(std::size_t mu) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < rows_.size(); ++i)
        if (rows_[i].at(mu) != 0) out.push_back(i);
    return out;
}

bool ExponentScheme::is_product_type() const {
    return std::all_of(rows_.begin(), rows_.end(), [](const auto& row) {
        return std::count_if(row.begin(), row.end(), [](const Rational& r) { return r != 0; }) == 1;
    });
}

Degree degree(const MultiIndex& alpha, const ExponentScheme& scheme) {
    if (alpha.size() != scheme.dimension())
        throw InputError("multi-index has " + std::to_string(alpha.size()) + " components, scheme expects " +
                         std::to_string(scheme.dimension()));
    std::vector<Rational> d(scheme.parameters(), Rational(0));
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (alpha[i] < 0) throw InputError("multi-index components must be nonnegative");
        for (std::size_t mu = 0; mu < d.size(); ++mu) d[mu] += alpha[i] * scheme.exponent(i, mu);
    }
    return Degree(std::move(d));
}

bool is_pure(const Degree& d) {
    const auto nonzero = std::count_if(d.components.begin(), d.components.end(),
                                       [](const Rational& r) { return r != 0; });
    if (nonzero == 0) throw InputError("pure/nonpure classification is undefined for the zero degree");
    return nonzero == 1;
}

std::vector<double> dilation_factors(std::span<const double> delta, const ExponentScheme& scheme) {
    if (delta.size() != scheme.parameters())
        throw InputError("dilation has " + std::to_string(delta.size()) + " parameters, scheme expects " +
                         std::to_string(scheme.parameters()));
    for (double d : delta)
        if (!(d >= 0)) throw InputError("dilation parameters must be nonnegative");
    std::vector<double> factors(scheme.dimension(), 1.0);
    for (std::size_t i = 0; i < factors.size(); ++i) {
        for (std::size_t mu = 0; mu < delta.size(); ++mu) {
            const Rational& e = scheme.exponent(i, mu);
            if (e == 0) continue;  // 0^0 = 1
            factors[i] *= e == 1 ? delta[mu] : std::pow(delta[mu], to_double(e));
        }
    }
    return factors;
}

std::vector<double> dilate_point(std::span<const double> delta, std::span<const double> t,
                                 const ExponentScheme& scheme) {
    if (t.size() != scheme.dimension()) throw InputError("point dimension does not match the scheme");
    std::vector<double> out = dilation_factors(delta, scheme);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= t[i];
    return out;
}

ScalarFunction scale_function(ScalarFunction f, std::span<const double> delta, const ExponentScheme& scheme) {
    for (double d : delta)
        if (!(d > 0)) throw InputError("function dilation requires strictly positive parameters");
    std::vector<double> factors = dilation_factors(delta, scheme);
    double jacobian = 1.0;
    for (double c : factors) jacobian *= c;
    return [f = std::move(f), factors = std::move(factors), jacobian](std::span<const double> t) {
        if (t.size() != factors.size()) throw InputError("point dimension does not match the scheme");
        std::vector<double> scaled(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) scaled[i] = factors[i] * t[i];
        return jacobian * f(scaled);
    };
}

}  // namespace mprt
