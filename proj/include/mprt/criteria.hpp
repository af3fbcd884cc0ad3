#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mprt/dilations.hpp"
#include "mprt/polynomial.hpp"
#include "mprt/symbolic.hpp"

namespace mprt {

enum class Outcome { Bounded, Unbounded, Inconclusive };

std::string to_string(Outcome outcome);

/// Normal direction (b1, b2) of a line in the degree plane, stored as a
/// primitive nonnegative integer vector.
using LineNormal = std::array<Rational, 2>;

std::string to_string(const LineNormal& normal);

/// One element of a power set: a field, its degree, the exponent it came from
/// (a sum of exponents for brackets) and a printable provenance such as
/// "[X^(1,0), X^(0,1)]".
struct PowerEntry {
    PolyVectorField field;
    Degree degree;
    MultiIndex exponent;
    std::string origin;
};

struct PowerSets {
    FieldBasis basis = FieldBasis::Coordinate;
    std::vector<PowerEntry> pure;
    std::vector<PowerEntry> nonpure;
    /// Bracket closure of `pure`, nonzero elements only; starts with `pure`.
    std::vector<PowerEntry> closure;
};

/// The supporting-line check for one sector of normals: either the target is
/// spanned by H_pi (indices into the closure plus coefficients) or it is not.
struct SectorCheck {
    LineNormal normal;
    bool spanned = false;
    std::vector<std::pair<std::size_t, Rational>> combination;
};

struct LineConditionResult {
    bool holds = true;
    /// First failing normal, if any.
    std::optional<LineNormal> witness;
    std::vector<SectorCheck> sectors;
};

struct Witness {
    MultiIndex alpha0;
    LineNormal normal;
};

struct Certificate {
    MultiIndex alpha0;
    std::vector<Rational> target;
    std::vector<SectorCheck> sectors;
};

struct Verdict {
    Outcome outcome = Outcome::Inconclusive;
    std::optional<Witness> witness;
    std::vector<Certificate> certificates;
    /// Closure used for the certificates (indices in SectorCheck refer here).
    std::vector<PowerEntry> closure;
    std::string diagnostics;
};

/// Newton test for gamma_{(s,t)}(x) = x - p(s,t): with a, b the smallest pure
/// exponents in s and t (infinite if absent), Bounded iff every exponent (e,f)
/// of p satisfies e/a + f/b >= 1 (x/inf = 0). The witness is the violating
/// exponent with the smallest e/a + f/b, ties broken by graded-lex order.
Verdict real_line_verdict(const Polynomial& p);

/// Splits an expansion into pure and nonpure powers and closes the pure part
/// under brackets. Heisenberg-basis fields use [v,w] = (v1 w2 - v2 w1) T;
/// coordinate fields use lie_bracket with at most `max_rounds` rounds.
PowerSets pure_closure(const WExpansion& expansion, int max_rounds = 4);

/// pure_closure for a Heisenberg-basis expansion; throws InputError otherwise.
PowerSets pure_closure_heisenberg(const WExpansion& xhat);

/// Supporting-line test in the two-parameter degree plane: for
/// every normal b in [0,inf)^2 \ {0}, `target` must lie in the span of the
/// closure fields whose degree d satisfies b.d <= b.deg(alpha0). All closure
/// fields must be constant. Throws InputError for pure alpha0, a zero target,
/// or a scheme with nu != 2.
LineConditionResult supporting_line_condition(const MultiIndex& alpha0, const std::vector<Rational>& target,
                                              const PowerSets& sets, const ExponentScheme& scheme);

/// Runs the supporting-line test for every nonpure X^_alpha0 != 0.
Verdict heisenberg_verdict(const GammaSpec& spec);

/// Abelian case: every field a rational multiple of one nonzero constant
/// field. Otherwise Inconclusive with a diagnostic.
Verdict scalar_control_verdict(const WExpansion& w);

/// Family dispatch used by the command line front end.
Verdict analyze(const GammaSpec& spec);

/// Solves target = sum c_j vectors[j] exactly. Returns the nonzero
/// coefficients (index, value) of one solution, or nullopt if target is not
/// in the span.
std::optional<std::vector<std::pair<std::size_t, Rational>>> express_in_span(
    const std::vector<std::vector<Rational>>& vectors, const std::vector<Rational>& target);

/// Printable form of a Heisenberg-basis coefficient vector, e.g. "X + 3/2*T".
std::string to_string_xyt(std::span<const Rational> coefficients);

}  // namespace mprt
