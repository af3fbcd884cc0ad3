#include "mprt/criteria.hpp"

#include <algorithm>
#include <set>

#include "mprt/errors.hpp"

namespace mprt {

namespace {

using boost::multiprecision::cpp_int;

LineNormal primitive(const Rational& b1, const Rational& b2) {
    cpp_int l = boost::multiprecision::lcm(boost::multiprecision::denominator(b1), boost::multiprecision::denominator(b2));
    cpp_int n1 = boost::multiprecision::numerator(b1) * (l / boost::multiprecision::denominator(b1));
    cpp_int n2 = boost::multiprecision::numerator(b2) * (l / boost::multiprecision::denominator(b2));
    cpp_int g = boost::multiprecision::gcd(n1, n2);
    if (g == 0) return {Rational(0), Rational(0)};
    return {Rational(n1 / g), Rational(n2 / g)};
}

Rational dot(const LineNormal& b, const Degree& d) { return b[0] * d[0] + b[1] * d[1]; }

bool contains(const std::vector<PowerEntry>& set, const PolyVectorField& field, const Degree& degree) {
    return std::any_of(set.begin(), set.end(),
                       [&](const PowerEntry& e) { return e.degree == degree && e.field == field; });
}

PolyVectorField bracket(const PolyVectorField& a, const PolyVectorField& b, FieldBasis basis) {
    if (basis == FieldBasis::HeisenbergXYT) {
        auto va = a.constant_components();
        auto vb = b.constant_components();
        auto r = heisenberg_bracket(va, vb);
        return PolyVectorField::constant({r[0], r[1], r[2]});
    }
    return lie_bracket(a, b);
}

std::string print_field(const PolyVectorField& field, FieldBasis basis) {
    if (basis == FieldBasis::HeisenbergXYT) return to_string_xyt(field.constant_components());
    return to_string(field);
}

bool all_constant(const std::vector<PowerEntry>& set) {
    return std::all_of(set.begin(), set.end(), [](const PowerEntry& e) { return e.field.is_constant(); });
}

// Shared decision loop once the power sets are known and constant.
Verdict decide_constant(const PowerSets& sets, const ExponentScheme& scheme) {
    Verdict v;
    v.closure = sets.closure;
    if (sets.nonpure.empty()) {
        v.outcome = Outcome::Bounded;
        v.diagnostics = "no nonpure powers";
        return v;
    }
    if (scheme.parameters() != 2) {
        v.outcome = Outcome::Inconclusive;
        v.diagnostics = "supporting-line test is implemented for two-parameter schemes only";
        return v;
    }
    if (!all_constant(sets.closure) || !all_constant(sets.nonpure)) {
        v.outcome = Outcome::Inconclusive;
        v.diagnostics = "non-constant vector fields: control with variable coefficients is not decided";
        return v;
    }
    v.outcome = Outcome::Bounded;
    for (const auto& entry : sets.nonpure) {
        auto target = entry.field.constant_components();
        auto result = supporting_line_condition(entry.exponent, target, sets, scheme);
        if (!result.holds) {
            v.outcome = Outcome::Unbounded;
            v.witness = Witness{entry.exponent, *result.witness};
            v.certificates.clear();
            v.diagnostics = "X^" + to_string(entry.exponent) + " = " + print_field(entry.field, sets.basis) +
                            " is not spanned on the line with normal " + to_string(*result.witness);
            return v;
        }
        v.certificates.push_back(Certificate{entry.exponent, std::move(target), std::move(result.sectors)});
    }
    return v;
}

}  // namespace

std::string to_string(Outcome outcome) {
    switch (outcome) {
        case Outcome::Bounded: return "Bounded";
        case Outcome::Unbounded: return "Unbounded";
        case Outcome::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

std::string to_string(const LineNormal& normal) {
    return "(" + to_string(normal[0]) + "," + to_string(normal[1]) + ")";
}

std::string to_string_xyt(std::span<const Rational> coefficients) {
    static const char* names[] = {"X", "Y", "T"};
    std::string out;
    for (std::size_t i = 0; i < coefficients.size() && i < 3; ++i) {
        const Rational& c = coefficients[i];
        if (c == 0) continue;
        Rational mag = c < 0 ? Rational(-c) : c;
        if (out.empty()) {
            if (c < 0) out += "-";
        } else {
            out += c < 0 ? " - " : " + ";
        }
        if (mag != 1) out += to_string(mag) + "*";
        out += names[i];
    }
    return out.empty() ? "0" : out;
}

std::optional<std::vector<std::pair<std::size_t, Rational>>> express_in_span(
    const std::vector<std::vector<Rational>>& vectors, const std::vector<Rational>& target) {
    const std::size_t rows = target.size();
    const std::size_t cols = vectors.size();
    for (const auto& v : vectors)
        if (v.size() != rows) throw InputError("span test: vector dimensions differ");

    // Augmented matrix [v_1 ... v_k | target], row-reduced in place.
    std::vector<std::vector<Rational>> m(rows, std::vector<Rational>(cols + 1));
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) m[i][j] = vectors[j][i];
        m[i][cols] = target[i];
    }
    std::vector<std::size_t> pivot_cols;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && m[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[r]);
        Rational inv = 1 / m[r][c];
        for (auto& x : m[r]) x *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            Rational f = m[i][c];
            for (std::size_t j = c; j <= cols; ++j) m[i][j] -= f * m[r][j];
        }
        pivot_cols.push_back(c);
        ++r;
    }
    for (std::size_t i = r; i < rows; ++i)
        if (m[i][cols] != 0) return std::nullopt;

    std::vector<std::pair<std::size_t, Rational>> out;
    for (std::size_t i = 0; i < pivot_cols.size(); ++i)
        if (m[i][cols] != 0) out.emplace_back(pivot_cols[i], m[i][cols]);
    return out;
}

Verdict real_line_verdict(const Polynomial& p) {
    if (p.num_vars() != 2) throw InputError("real-line criterion needs a polynomial in (s,t)");
    if (p.constant_term() != 0) throw InputError("p must have zero constant term");

    std::optional<int> a, b;
    for (const auto& [alpha, c] : p.terms()) {
        if (alpha[1] == 0 && alpha[0] > 0 && (!a || alpha[0] < *a)) a = alpha[0];
        if (alpha[0] == 0 && alpha[1] > 0 && (!b || alpha[1] < *b)) b = alpha[1];
    }
    auto newton_value = [&](const MultiIndex& alpha) {
        Rational v = 0;
        if (a) v += Rational(alpha[0], *a);
        if (b) v += Rational(alpha[1], *b);
        return v;
    };

    std::optional<MultiIndex> worst;
    Rational worst_value = 1;
    for (const auto& [alpha, c] : p.terms()) {
        Rational v = newton_value(alpha);
        if (v < worst_value) {
            worst = alpha;
            worst_value = v;
        }
    }

    auto scheme = ExponentScheme::product(2);
    auto sets = pure_closure(xhat_expansion(GammaSpec::translation(p, scheme)));
    std::string ab = "a = " + (a ? std::to_string(*a) : std::string("inf")) +
                     ", b = " + (b ? std::to_string(*b) : std::string("inf"));

    if (worst) {
        Verdict v;
        v.outcome = Outcome::Unbounded;
        v.closure = sets.closure;
        LineNormal normal = !a && !b ? LineNormal{Rational(1), Rational(1)}
                            : !a     ? LineNormal{Rational(0), Rational(1)}
                            : !b     ? LineNormal{Rational(1), Rational(0)}
                                     : primitive(Rational(*b), Rational(*a));
        v.witness = Witness{*worst, normal};
        v.diagnostics = ab + "; exponent " + to_string(*worst) + " gives e/a + f/b = " + to_string(worst_value) + " < 1";
        return v;
    }

    Verdict v = decide_constant(sets, scheme);
    if (v.outcome != Outcome::Bounded) {
        v.outcome = Outcome::Inconclusive;
        v.diagnostics = ab + "; Newton test and supporting-line test disagree";
        return v;
    }
    v.diagnostics = ab + "; every exponent lies on or above the Newton line";
    return v;
}

PowerSets pure_closure(const WExpansion& expansion, int max_rounds) {
    PowerSets sets;
    sets.basis = expansion.basis();
    for (const auto& [alpha, entry] : expansion.entries()) {
        PowerEntry e{entry.field, entry.degree, alpha, "X^" + to_string(alpha)};
        (is_pure(entry.degree) ? sets.pure : sets.nonpure).push_back(std::move(e));
    }
    sets.closure = sets.pure;

    std::size_t old_size = 0;
    for (int round = 0; round < max_rounds; ++round) {
        const std::size_t size = sets.closure.size();
        std::vector<PowerEntry> added;
        for (std::size_t i = 0; i < size; ++i) {
            // Pairs among the old elements were bracketed in an earlier round.
            for (std::size_t j = std::max(i + 1, old_size); j < size; ++j) {
                if (sets.basis == FieldBasis::HeisenbergXYT &&
                    (!sets.closure[i].field.is_constant() || !sets.closure[j].field.is_constant()))
                    continue;
                PolyVectorField f = bracket(sets.closure[i].field, sets.closure[j].field, sets.basis);
                if (f.is_zero()) continue;
                Degree d = sets.closure[i].degree + sets.closure[j].degree;
                if (contains(sets.closure, f, d) || contains(added, f, d)) continue;
                added.push_back(PowerEntry{std::move(f), std::move(d),
                                           sets.closure[i].exponent + sets.closure[j].exponent,
                                           "[" + sets.closure[i].origin + ", " + sets.closure[j].origin + "]"});
            }
        }
        if (added.empty()) break;
        old_size = size;
        for (auto& e : added) sets.closure.push_back(std::move(e));
    }
    return sets;
}

PowerSets pure_closure_heisenberg(const WExpansion& xhat) {
    if (xhat.basis() != FieldBasis::HeisenbergXYT) throw InputError("expansion is not in the {X,Y,T} basis");
    return pure_closure(xhat);
}

LineConditionResult supporting_line_condition(const MultiIndex& alpha0, const std::vector<Rational>& target,
                                              const PowerSets& sets, const ExponentScheme& scheme) {
    if (scheme.parameters() != 2) throw InputError("supporting-line test needs a two-parameter scheme");
    Degree d0 = degree(alpha0, scheme);
    if (is_pure(d0)) throw InputError("alpha0 = " + to_string(alpha0) + " is a pure power");
    if (std::all_of(target.begin(), target.end(), [](const Rational& c) { return c == 0; }))
        throw InputError("target field is zero");
    if (!all_constant(sets.closure)) throw InputError("closure contains non-constant fields");

    // b = (1 - lambda, lambda); H_pi changes only where b.(d - d0) changes sign.
    std::set<Rational> critical{Rational(0), Rational(1)};
    for (const auto& e : sets.closure) {
        Rational d1 = e.degree[0] - d0[0];
        Rational d2 = e.degree[1] - d0[1];
        if (d1 == d2) continue;
        Rational lambda = d1 / (d1 - d2);
        if (lambda > 0 && lambda < 1) critical.insert(lambda);
    }

    std::vector<std::vector<Rational>> fields;
    fields.reserve(sets.closure.size());
    for (const auto& e : sets.closure) fields.push_back(e.field.constant_components());

    LineConditionResult result;
    for (auto it = critical.begin(); std::next(it) != critical.end(); ++it) {
        Rational mid = (*it + *std::next(it)) / 2;
        LineNormal normal = primitive(1 - mid, mid);
        Rational bound = dot(normal, d0);
        std::vector<std::size_t> members;
        std::vector<std::vector<Rational>> h;
        for (std::size_t i = 0; i < sets.closure.size(); ++i) {
            if (dot(normal, sets.closure[i].degree) <= bound) {
                members.push_back(i);
                h.push_back(fields[i]);
            }
        }
        SectorCheck sector{normal, false, {}};
        if (auto combo = express_in_span(h, target)) {
            sector.spanned = true;
            for (auto& [k, c] : *combo) sector.combination.emplace_back(members[k], c);
        } else if (result.holds) {
            result.holds = false;
            result.witness = normal;
        }
        result.sectors.push_back(std::move(sector));
    }
    return result;
}

Verdict heisenberg_verdict(const GammaSpec& spec) {
    if (spec.family() != Family::Heisenberg) throw InputError("heisenberg_verdict needs a Heisenberg family");
    return decide_constant(pure_closure_heisenberg(xhat_expansion(spec)), spec.scheme());
}

Verdict scalar_control_verdict(const WExpansion& w) {
    std::optional<std::vector<Rational>> direction;
    for (const auto& [alpha, entry] : w.entries()) {
        if (!entry.field.is_constant()) {
            Verdict v;
            v.outcome = Outcome::Inconclusive;
            v.diagnostics = "field at " + to_string(alpha) +
                            " has non-constant coefficients; control with variable coefficients is not decided";
            return v;
        }
        auto comps = entry.field.constant_components();
        if (!direction) {
            direction = comps;
            continue;
        }
        if (!express_in_span({*direction}, comps)) {
            Verdict v;
            v.outcome = Outcome::Inconclusive;
            v.diagnostics = "field at " + to_string(alpha) + " is not parallel to the leading field";
            return v;
        }
    }
    return decide_constant(pure_closure(w), w.scheme());
}

Verdict analyze(const GammaSpec& spec) {
    if (spec.family() == Family::Heisenberg) return heisenberg_verdict(spec);
    if (spec.scheme() == ExponentScheme::product(2)) return real_line_verdict(spec.polynomials()[0]);
    return scalar_control_verdict(w_expansion(spec));
}

}  // namespace mprt
