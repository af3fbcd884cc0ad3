#include "mprt/symbolic.hpp"

#include <algorithm>

#include "mprt/errors.hpp"

namespace mprt {

PolyVectorField::PolyVectorField(std::vector<Polynomial> components) : components_(std::move(components)) {
    for (const auto& c : components_)
        if (c.num_vars() != components_.size())
            throw InputError("vector field coefficients must be polynomials in the field's own variables");
}

PolyVectorField PolyVectorField::zero(std::size_t dim) {
    return PolyVectorField(std::vector<Polynomial>(dim, Polynomial(dim)));
}

PolyVectorField PolyVectorField::constant(const std::vector<Rational>& components) {
    std::vector<Polynomial> polys;
    polys.reserve(components.size());
    for (const auto& c : components) polys.push_back(Polynomial::constant(components.size(), c));
    return PolyVectorField(std::move(polys));
}

bool PolyVectorField::is_zero() const {
    return std::all_of(components_.begin(), components_.end(), [](const Polynomial& p) { return p.is_zero(); });
}

bool PolyVectorField::is_constant() const {
    return std::all_of(components_.begin(), components_.end(), [](const Polynomial& p) { return p.is_constant(); });
}

std::vector<Rational> PolyVectorField::constant_components() const {
    if (!is_constant()) throw InputError("vector field is not constant");
    std::vector<Rational> out;
    out.reserve(components_.size());
    for (const auto& p : components_) out.push_back(p.constant_term());
    return out;
}

Polynomial PolyVectorField::apply(const Polynomial& f) const {
    if (f.num_vars() != dimension()) throw InputError("function arity does not match the vector field");
    Polynomial out(dimension());
    for (std::size_t i = 0; i < dimension(); ++i) {
        if (components_[i].is_zero()) continue;
        out += components_[i] * f.derivative(i);
    }
    return out;
}

PolyVectorField& PolyVectorField::operator+=(const PolyVectorField& other) {
    if (dimension() != other.dimension()) throw InputError("vector field dimension mismatch");
    for (std::size_t i = 0; i < dimension(); ++i) components_[i] += other.components_[i];
    return *this;
}

PolyVectorField& PolyVectorField::operator-=(const PolyVectorField& other) {
    if (dimension() != other.dimension()) throw InputError("vector field dimension mismatch");
    for (std::size_t i = 0; i < dimension(); ++i) components_[i] -= other.components_[i];
    return *this;
}

PolyVectorField& PolyVectorField::operator*=(const Rational& c) {
    for (auto& p : components_) p *= c;
    return *this;
}

PolyVectorField lie_bracket(const PolyVectorField& a, const PolyVectorField& b) {
    if (a.dimension() != b.dimension()) throw InputError("cannot bracket vector fields of different dimensions");
    std::vector<Polynomial> out;
    out.reserve(a.dimension());
    for (std::size_t i = 0; i < a.dimension(); ++i) out.push_back(a.apply(b[i]) - b.apply(a[i]));
    return PolyVectorField(std::move(out));
}

std::string to_string(const PolyVectorField& field) {
    const std::size_t n = field.dimension();
    const std::vector<std::string> names =
        n == 1 ? std::vector<std::string>{"x"} : [n] {
            std::vector<std::string> v;
            for (std::size_t i = 0; i < n; ++i) v.push_back("x" + std::to_string(i + 1));
            return v;
        }();
    std::string out;
    for (std::size_t i = 0; i < n; ++i) {
        if (field[i].is_zero()) continue;
        if (!out.empty()) out += " + ";
        const std::string coeff = to_string(field[i], names);
        const bool simple = field[i].size() == 1;
        out += (simple ? coeff : "(" + coeff + ")") + "*d/d" + names[i];
    }
    return out.empty() ? "0" : out;
}

std::string to_string(Family family) {
    return family == Family::TranslationLine ? "translation" : "heisenberg";
}

GammaSpec::GammaSpec(Family family, std::vector<Polynomial> polys, ExponentScheme scheme)
    : family_(family), polys_(std::move(polys)), scheme_(std::move(scheme)) {
    for (std::size_t i = 0; i < polys_.size(); ++i) {
        if (polys_[i].num_vars() != scheme_.dimension())
            throw InputError("polynomial " + std::to_string(i + 1) + " has " + std::to_string(polys_[i].num_vars()) +
                             " variables but the scheme has N = " + std::to_string(scheme_.dimension()));
        if (polys_[i].constant_term() != 0)
            throw InputError("polynomial " + std::to_string(i + 1) + " has a nonzero constant term (gamma_0 must be the identity)");
    }
}

GammaSpec GammaSpec::translation(Polynomial p, ExponentScheme scheme) {
    return GammaSpec(Family::TranslationLine, {std::move(p)}, std::move(scheme));
}

GammaSpec GammaSpec::heisenberg(Polynomial p1, Polynomial p2, Polynomial p3, ExponentScheme scheme) {
    return GammaSpec(Family::Heisenberg, {std::move(p1), std::move(p2), std::move(p3)}, std::move(scheme));
}

WExpansion::WExpansion(ExponentScheme scheme, FieldBasis basis, std::size_t field_dimension)
    : scheme_(std::move(scheme)), basis_(basis), field_dim_(field_dimension) {}

void WExpansion::add(const MultiIndex& alpha, const PolyVectorField& field) {
    if (field.dimension() != field_dim_) throw InputError("field dimension does not match the expansion");
    if (alpha.is_zero()) throw InputError("expansions have no t^0 term");
    if (field.is_zero()) return;
    auto it = entries_.find(alpha);
    if (it == entries_.end()) {
        entries_.emplace(alpha, Entry{field, degree(alpha, scheme_)});
        return;
    }
    it->second.field += field;
    if (it->second.field.is_zero()) entries_.erase(it);
}

PolyVectorField WExpansion::field(const MultiIndex& alpha) const {
    auto it = entries_.find(alpha);
    return it == entries_.end() ? PolyVectorField::zero(field_dim_) : it->second.field;
}

namespace {

void require_family(const GammaSpec& spec, Family family) {
    if (spec.family() != family) throw InputError("operation does not support the " + to_string(spec.family()) + " family");
}

// Splits sum_i Q_i(t) e_i into t^alpha -> constant vector (c_1, ..., c_n).
WExpansion expansion_from_components(const std::vector<Polynomial>& coeffs, const ExponentScheme& scheme,
                                     FieldBasis basis) {
    const std::size_t n = coeffs.size();
    WExpansion out(scheme, basis, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& [alpha, c] : coeffs[i].terms()) {
            std::vector<Rational> v(n, Rational(0));
            v[i] = c;
            out.add(alpha, PolyVectorField::constant(v));
        }
    }
    return out;
}

}  // namespace

WExpansion w_from_translation_gamma(const GammaSpec& spec) {
    require_family(spec, Family::TranslationLine);
    return expansion_from_components({-spec.polynomials()[0].euler_derivative()}, spec.scheme(), FieldBasis::Coordinate);
}

WExpansion w_from_heisenberg_gamma(const GammaSpec& spec) {
    require_family(spec, Family::Heisenberg);
    const auto& P = spec.polynomials();
    const Polynomial d1 = P[0].euler_derivative();
    const Polynomial d2 = P[1].euler_derivative();
    const Polynomial d3 = P[2].euler_derivative();
    const Polynomial central = d3 - Rational(1, 2) * (d1 * P[1] - d2 * P[0]);
    return expansion_from_components({d1, d2, central}, spec.scheme(), FieldBasis::HeisenbergXYT);
}

WExpansion w_expansion(const GammaSpec& spec) {
    return spec.family() == Family::TranslationLine ? w_from_translation_gamma(spec) : w_from_heisenberg_gamma(spec);
}

WExpansion xhat_expansion(const GammaSpec& spec) {
    if (spec.family() == Family::TranslationLine)
        return expansion_from_components({-spec.polynomials()[0]}, spec.scheme(), FieldBasis::Coordinate);
    return expansion_from_components(spec.polynomials(), spec.scheme(), FieldBasis::HeisenbergXYT);
}

std::array<Rational, 3> heisenberg_bracket(std::span<const Rational> a, std::span<const Rational> b) {
    if (a.size() != 3 || b.size() != 3) throw InputError("Heisenberg basis vectors have three components");
    return {Rational(0), Rational(0), a[0] * b[1] - a[1] * b[0]};
}

PolyVectorField realize_heisenberg(std::span<const Rational> coefficients) {
    if (coefficients.size() != 3) throw InputError("Heisenberg basis vectors have three components");
    // coordinates (x, y, t): X = d_x - y d_t, Y = d_y + x d_t, T = 2 d_t
    const Polynomial x = Polynomial::variable(3, 0);
    const Polynomial y = Polynomial::variable(3, 1);
    Polynomial cx = Polynomial::constant(3, coefficients[0]);
    Polynomial cy = Polynomial::constant(3, coefficients[1]);
    Polynomial ct = coefficients[1] * x - coefficients[0] * y + Polynomial::constant(3, 2 * coefficients[2]);
    return PolyVectorField({std::move(cx), std::move(cy), std::move(ct)});
}

TaylorRelationReport verify_taylor_relation(const GammaSpec& spec) {
    const WExpansion w = w_expansion(spec);
    const WExpansion xhat = xhat_expansion(spec);

    // predicted X_alpha = |alpha| X^_alpha + V_alpha
    WExpansion predicted(spec.scheme(), xhat.basis(), xhat.field_dimension());
    for (const auto& [alpha, entry] : xhat.entries()) predicted.add(alpha, Rational(alpha.total()) * entry.field);
    if (spec.family() == Family::Heisenberg) {
        for (const auto& [beta, eb] : xhat.entries()) {
            const auto vb = eb.field.constant_components();
            for (const auto& [gamma, eg] : xhat.entries()) {
                const auto vg = eg.field.constant_components();
                const auto br = heisenberg_bracket(vb, vg);
                if (br[2] == 0) continue;
                const Rational scale = Rational(-beta.total(), 2);
                predicted.add(beta + gamma, PolyVectorField::constant({Rational(0), Rational(0), scale * br[2]}));
            }
        }
    }

    TaylorRelationReport report;
    std::map<MultiIndex, bool, GradedLex> keys;
    for (const auto& [alpha, e] : w.entries()) keys[alpha] = true;
    for (const auto& [alpha, e] : predicted.entries()) keys[alpha] = true;
    for (const auto& [alpha, unused] : keys) {
        ++report.checked;
        PolyVectorField residual = w.field(alpha) - predicted.field(alpha);
        if (!residual.is_zero()) {
            report.passed = false;
            report.failures.push_back({alpha, std::move(residual)});
        }
    }
    return report;
}

}  // namespace mprt
