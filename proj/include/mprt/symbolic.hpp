#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "mprt/dilations.hpp"
#include "mprt/polynomial.hpp"

namespace mprt {

/// Vector field sum_i a_i(x) d/dx_i on R^n with polynomial coefficients.
class PolyVectorField {
public:
    PolyVectorField() = default;
    explicit PolyVectorField(std::vector<Polynomial> components);
    static PolyVectorField zero(std::size_t dim);
    /// The constant field with the given components.
    static PolyVectorField constant(const std::vector<Rational>& components);

    std::size_t dimension() const noexcept { return components_.size(); }
    const Polynomial& operator[](std::size_t i) const { return components_.at(i); }
    const std::vector<Polynomial>& components() const noexcept { return components_; }

    bool is_zero() const;
    bool is_constant() const;
    /// Constant coefficients; requires is_constant().
    std::vector<Rational> constant_components() const;

    /// Directional derivative A(f) = sum_i a_i df/dx_i.
    Polynomial apply(const Polynomial& f) const;

    PolyVectorField& operator+=(const PolyVectorField& other);
    PolyVectorField& operator-=(const PolyVectorField& other);
    PolyVectorField& operator*=(const Rational& c);
    friend PolyVectorField operator+(PolyVectorField a, const PolyVectorField& b) { return a += b; }
    friend PolyVectorField operator-(PolyVectorField a, const PolyVectorField& b) { return a -= b; }
    friend PolyVectorField operator*(const Rational& c, PolyVectorField a) { return a *= c; }
    friend bool operator==(const PolyVectorField&, const PolyVectorField&) = default;

private:
    std::vector<Polynomial> components_;
};

/// [A,B]_i = A(B_i) - B(A_i).
PolyVectorField lie_bracket(const PolyVectorField& a, const PolyVectorField& b);

std::string to_string(const PolyVectorField& field);

enum class Family { TranslationLine, Heisenberg };

std::string to_string(Family family);

/// A curve family in one of the two supported forms:
///   TranslationLine: gamma_t(x) = x - p(t)
///   Heisenberg:      gamma_s(xi) = exp(P1(s) X + P2(s) Y + P3(s) T) xi
/// Every polynomial lives in the scheme's N variables and has no constant term.
class GammaSpec {
public:
    static GammaSpec translation(Polynomial p, ExponentScheme scheme);
    static GammaSpec heisenberg(Polynomial p1, Polynomial p2, Polynomial p3, ExponentScheme scheme);

    Family family() const noexcept { return family_; }
    const std::vector<Polynomial>& polynomials() const noexcept { return polys_; }
    const ExponentScheme& scheme() const noexcept { return scheme_; }

    friend bool operator==(const GammaSpec&, const GammaSpec&) = default;

private:
    GammaSpec(Family family, std::vector<Polynomial> polys, ExponentScheme scheme);

    Family family_;
    std::vector<Polynomial> polys_;
    ExponentScheme scheme_;
};

/// Fields of an expansion are either coordinate fields on R^n or, for the
/// Heisenberg family, constant coefficient vectors in the basis {X, Y, T}.
enum class FieldBasis { Coordinate, HeisenbergXYT };

/// Finite expansion sum_alpha t^alpha X_alpha with cached degrees.
class WExpansion {
public:
    struct Entry {
        PolyVectorField field;
        Degree degree;
    };
    using EntryMap = std::map<MultiIndex, Entry, GradedLex>;

    WExpansion(ExponentScheme scheme, FieldBasis basis, std::size_t field_dimension);

    const ExponentScheme& scheme() const noexcept { return scheme_; }
    FieldBasis basis() const noexcept { return basis_; }
    std::size_t field_dimension() const noexcept { return field_dim_; }
    const EntryMap& entries() const noexcept { return entries_; }
    bool empty() const noexcept { return entries_.empty(); }

    /// Adds `field` to the coefficient of t^alpha; zero results are removed.
    void add(const MultiIndex& alpha, const PolyVectorField& field);
    /// Coefficient of t^alpha (zero field if absent).
    PolyVectorField field(const MultiIndex& alpha) const;

    friend bool operator==(const WExpansion& a, const WExpansion& b) {
        return a.basis_ == b.basis_ && a.field_dim_ == b.field_dim_ && a.scheme_ == b.scheme_ &&
               a.entries_.size() == b.entries_.size() &&
               std::equal(a.entries_.begin(), a.entries_.end(), b.entries_.begin(),
                          [](const auto& x, const auto& y) { return x.first == y.first && x.second.field == y.second.field; });
    }

private:
    ExponentScheme scheme_;
    FieldBasis basis_;
    std::size_t field_dim_;
    EntryMap entries_;
};

/// X_alpha = -|alpha| c_alpha d/dx for p = sum c_alpha t^alpha.
WExpansion w_from_translation_gamma(const GammaSpec& spec);

/// W = P1' X + P2' Y + (P3' - (P1' P2 - P2' P1)/2) T, with Pi' = euler_derivative(Pi).
WExpansion w_from_heisenberg_gamma(const GammaSpec& spec);

/// Dispatches on the family.
WExpansion w_expansion(const GammaSpec& spec);

/// Exponential-form coefficients X^_alpha (direct read-off for both families).
WExpansion xhat_expansion(const GammaSpec& spec);

/// The structure relation [aX+bY+cT, a'X+b'Y+c'T] = (ab' - a'b) T.
std::array<Rational, 3> heisenberg_bracket(std::span<const Rational> a, std::span<const Rational> b);

/// Realizes a basis vector (a,b,c) as the coordinate field
/// a(d_x - y d_t) + b(d_y + x d_t) + 2c d_t on R^3.
PolyVectorField realize_heisenberg(std::span<const Rational> coefficients);

struct TaylorRelationReport {
    struct Residual {
        MultiIndex alpha;
        PolyVectorField residual;
    };
    bool passed = true;
    std::size_t checked = 0;
    std::vector<Residual> failures;
};

/// Checks X_alpha = |alpha| X^_alpha + V_alpha for every alpha, where V_alpha is
/// zero on the line and -1/2 sum_{beta+gamma=alpha} |beta| [X^_beta, X^_gamma]
/// on the Heisenberg group.
TaylorRelationReport verify_taylor_relation(const GammaSpec& spec);

}  // namespace mprt
