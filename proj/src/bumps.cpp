#include "mprt/bumps.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "mprt/errors.hpp"
#include "mprt/polynomial.hpp"
#include "mprt/quadrature.hpp"

namespace mprt {

namespace {

// Below this exponent exp() underflows to zero in double precision.
constexpr double kUnderflowExponent = -745.0;

std::vector<std::vector<double>> derivative_polynomials(int max_order) {
    // Q_0 = 1, Q_{n+1} = Q_n' D^2 - 2n D D' Q_n + D' Q_n with D = t - t^2.
    Polynomial t = Polynomial::variable(1, 0);
    Polynomial d = t - t * t;
    Polynomial dd = d.derivative(0);
    Polynomial q = Polynomial::constant(1, Rational(1));
    std::vector<std::vector<double>> out;
    for (int n = 0; n <= max_order; ++n) {
        std::vector<double> coeffs(static_cast<std::size_t>(q.total_degree() + 1), 0.0);
        for (const auto& [alpha, c] : q.terms()) coeffs[static_cast<std::size_t>(alpha[0])] = to_double(c);
        out.push_back(std::move(coeffs));
        q = q.derivative(0) * d * d - Rational(2 * n) * d * dd * q + dd * q;
    }
    return out;
}

double horner(const std::vector<double>& coeffs, double t) {
    double v = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * t + *it;
    return v;
}

long double binomial(int n, int k) {
    long double v = 1;
    for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
    return v;
}

double unnormalized(double t) {
    if (t <= 0 || t >= 1) return 0.0;
    double e = -1.0 / (t * (1 - t));
    return e < kUnderflowExponent ? 0.0 : std::exp(e);
}

// LU with partial pivoting; returns the determinant and leaves the factors in `a`.
long double lu_factor(std::vector<std::vector<long double>>& a, std::vector<std::size_t>& perm) {
    const std::size_t n = a.size();
    perm.resize(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    long double det = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::fabs(a[i][k]) > std::fabs(a[p][k])) p = i;
        if (a[p][k] == 0) return 0;
        if (p != k) {
            std::swap(a[p], a[k]);
            std::swap(perm[p], perm[k]);
            det = -det;
        }
        det *= a[k][k];
        for (std::size_t i = k + 1; i < n; ++i) {
            a[i][k] /= a[k][k];
            for (std::size_t j = k + 1; j < n; ++j) a[i][j] -= a[i][k] * a[k][j];
        }
    }
    return det;
}

std::vector<long double> lu_solve(const std::vector<std::vector<long double>>& lu, const std::vector<std::size_t>& perm,
                                  const std::vector<long double>& b) {
    const std::size_t n = lu.size();
    std::vector<long double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        long double s = b[perm[i]];
        for (std::size_t j = 0; j < i; ++j) s -= lu[i][j] * x[j];
        x[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
        long double s = x[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= lu[i][j] * x[j];
        x[i] = s / lu[i][i];
    }
    return x;
}

}  // namespace

BaseMollifier::BaseMollifier() : q_(derivative_polynomials(kMaxDerivative)) {
    const double bps[] = {0.0, 0.5, 1.0};
    double mass = integrate_composite(unnormalized, bps, 24, 32);
    z_ = 1.0 / mass;
    moments_.reserve(kMaxMoment + 1);
    for (int m = 0; m <= kMaxMoment; ++m)
        moments_.push_back(integrate_composite([&](double t) { return std::pow(t, m) * (*this)(t); }, bps, 24, 32));
}

const BaseMollifier& BaseMollifier::instance() {
    static const BaseMollifier psi;
    return psi;
}

double BaseMollifier::operator()(double t) const { return z_ * unnormalized(t); }

double BaseMollifier::derivative(double t, int n) const {
    if (n < 0 || n > kMaxDerivative) throw InputError("mollifier derivative order out of range");
    if (n == 0) return (*this)(t);
    if (t <= 0 || t >= 1) return 0.0;
    double d = t * (1 - t);
    double e = -1.0 / d - 2.0 * n * std::log(d);
    if (e < kUnderflowExponent) return 0.0;
    return z_ * horner(q_[static_cast<std::size_t>(n)], t) * std::exp(e);
}

double BaseMollifier::moment(int m) const {
    if (m < 0 || m > kMaxMoment) throw InputError("moment order out of range");
    return moments_[static_cast<std::size_t>(m)];
}

BumpCombination::BumpCombination(std::vector<BumpAtom> atoms) : atoms_(std::move(atoms)) {
    for (const auto& a : atoms_)
        if (!(a.radius > 0) || !std::isfinite(a.radius) || !std::isfinite(a.center) || !std::isfinite(a.coefficient))
            throw InputError("bump atoms need finite values and positive radii");
}

double BumpCombination::operator()(double t) const {
    const auto& psi = BaseMollifier::instance();
    double v = 0;
    for (const auto& a : atoms_) v += a.coefficient * psi((t - a.center) / a.radius) / a.radius;
    return v;
}

double BumpCombination::derivative(double t, int order) const {
    const auto& psi = BaseMollifier::instance();
    double v = 0;
    for (const auto& a : atoms_)
        v += a.coefficient * psi.derivative((t - a.center) / a.radius, order) / std::pow(a.radius, order + 1);
    return v;
}

std::pair<double, double> BumpCombination::support() const {
    if (atoms_.empty()) return {0.0, 0.0};
    double lo = atoms_.front().center, hi = atoms_.front().center + atoms_.front().radius;
    for (const auto& a : atoms_) {
        lo = std::min(lo, a.center);
        hi = std::max(hi, a.center + a.radius);
    }
    return {lo, hi};
}

std::vector<double> BumpCombination::breakpoints() const {
    std::vector<double> out;
    for (const auto& a : atoms_) {
        out.push_back(a.center);
        out.push_back(a.center + a.radius);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

BumpCombination BumpCombination::dilated(double lambda) const {
    if (!(lambda > 0)) throw InputError("dilation factor must be positive");
    std::vector<BumpAtom> out = atoms_;
    for (auto& a : out) {
        a.center /= lambda;
        a.radius /= lambda;
    }
    return BumpCombination(std::move(out));
}

BumpCombination BumpCombination::scaled(double factor) const {
    std::vector<BumpAtom> out = atoms_;
    for (auto& a : out) a.coefficient *= factor;
    return BumpCombination(std::move(out));
}

double moment(const BumpCombination& f, int m, double abs_tol) {
    if (m < 0 || m > BaseMollifier::kMaxMoment) throw InputError("moment order must lie in [0, 64]");
    auto bps = f.breakpoints();
    if (bps.size() < 2) return 0.0;
    double tol = abs_tol / static_cast<double>(bps.size() - 1);
    double sum = 0;
    for (std::size_t i = 0; i + 1 < bps.size(); ++i)
        sum += integrate_adaptive([&](double t) { return std::pow(t, m) * f(t); }, bps[i], bps[i + 1], tol);
    return sum;
}

double analytic_moment(const BumpCombination& f, int m) {
    const auto& psi = BaseMollifier::instance();
    long double sum = 0;
    for (const auto& a : f.atoms()) {
        long double s = 0;
        for (int k = 0; k <= m; ++k)
            s += binomial(m, k) * psi.moment(k) * std::pow(static_cast<long double>(a.radius), k) *
                 std::pow(static_cast<long double>(a.center), m - k);
        sum += a.coefficient * s;
    }
    return static_cast<double>(sum);
}

MomentBump moment_bump(double a, int a1, const std::set<int>& excluded) {
    if (!(a > 0) || !std::isfinite(a)) throw InputError("support bound a must be positive");
    if (a1 < 1) throw InputError("a1 must be a positive integer");
    if (excluded.count(a1)) throw InputError("a1 = " + std::to_string(a1) + " is also excluded");
    if (excluded.size() > 11) throw InputError("at most 11 excluded exponents are supported");
    for (int e : excluded)
        if (e < 1) throw InputError("excluded exponents must be positive integers");
    MomentBump out;
    out.exponents.push_back(0);
    out.exponents.push_back(a1);
    out.exponents.insert(out.exponents.end(), excluded.begin(), excluded.end());
    for (int e : out.exponents)
        if (e > BaseMollifier::kMaxMoment) throw InputError("exponents above 64 are not supported");

    const auto& psi = BaseMollifier::instance();
    const std::size_t n = out.exponents.size();
    const long double c = 0.5L;
    const long double x1 = a / 2.0L, r1 = a / 2.0L;
    std::vector<long double> x(n), r(n);
    for (std::size_t j = 0; j < n; ++j) {
        x[j] = x1 * std::pow(c, static_cast<long double>(j));
        r[j] = r1 * std::pow(c, static_cast<long double>(j));
    }

    out.matrix.assign(n, std::vector<long double>(n));
    for (std::size_t l = 0; l < n; ++l) {
        const int al = out.exponents[l];
        for (std::size_t j = 0; j < n; ++j) {
            long double s = 0;
            for (int m = 0; m <= al; ++m) s += binomial(al, m) * psi.moment(m) * std::pow(r[j], m) * std::pow(x[j], al - m);
            out.matrix[l][j] = s;
        }
    }

    long double formula = 1;
    for (std::size_t l = 0; l < n; ++l) formula *= out.matrix[l][0];
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t lp = l + 1; lp < n; ++lp)
            formula *= std::pow(c, static_cast<long double>(out.exponents[lp])) -
                       std::pow(c, static_cast<long double>(out.exponents[l]));
    out.determinant_formula = formula;

    auto lu = out.matrix;
    std::vector<std::size_t> perm;
    out.determinant = lu_factor(lu, perm);
    if (out.determinant == 0) throw NumericalError("moment system is singular", 0.0);

    std::vector<long double> rhs(n, 0.0L);
    rhs[1] = 1.0L;
    std::vector<long double> coeffs = lu_solve(lu, perm, rhs);
    for (int iter = 0; iter < 2; ++iter) {
        std::vector<long double> residual(n);
        for (std::size_t l = 0; l < n; ++l) {
            long double s = rhs[l];
            for (std::size_t j = 0; j < n; ++j) s -= out.matrix[l][j] * coeffs[j];
            residual[l] = s;
        }
        auto correction = lu_solve(lu, perm, residual);
        for (std::size_t j = 0; j < n; ++j) coeffs[j] += correction[j];
    }

    std::vector<BumpAtom> atoms;
    for (std::size_t j = 0; j < n; ++j)
        atoms.push_back({static_cast<double>(coeffs[j]), static_cast<double>(x[j]), static_cast<double>(r[j])});
    out.bump = BumpCombination(std::move(atoms));
    for (int e : out.exponents) out.moments.push_back(moment(out.bump, e));
    return out;
}

TensorBump::TensorBump(std::vector<BumpCombination> components) : components_(std::move(components)) {
    if (components_.empty()) throw InputError("tensor bump needs at least one component");
}

double TensorBump::operator()(std::span<const double> t) const {
    if (t.size() != components_.size()) throw InputError("tensor bump evaluated at a point of the wrong dimension");
    double v = 1;
    for (std::size_t i = 0; i < components_.size() && v != 0; ++i) v *= components_[i](t[i]);
    return v;
}

double TensorBump::derivative(std::span<const double> t, const MultiIndex& alpha) const {
    if (t.size() != components_.size() || alpha.size() != components_.size())
        throw InputError("tensor bump derivative: dimension mismatch");
    double v = 1;
    for (std::size_t i = 0; i < components_.size() && v != 0; ++i) v *= components_[i].derivative(t[i], alpha[i]);
    return v;
}

double TensorBump::moment(const MultiIndex& alpha) const {
    if (alpha.size() != components_.size()) throw InputError("tensor bump moment: dimension mismatch");
    double v = 1;
    for (std::size_t i = 0; i < components_.size(); ++i) v *= mprt::moment(components_[i], alpha[i]);
    return v;
}

TensorBump TensorBump::dilated(std::span<const double> factors) const {
    if (factors.size() != components_.size()) throw InputError("tensor bump dilation: dimension mismatch");
    std::vector<BumpCombination> out;
    for (std::size_t i = 0; i < components_.size(); ++i) out.push_back(components_[i].dilated(factors[i]));
    return TensorBump(std::move(out));
}

TensorBump TensorBump::scaled(double factor) const {
    std::vector<BumpCombination> out = components_;
    out.front() = out.front().scaled(factor);
    return TensorBump(std::move(out));
}

std::string format_double(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
    double v = 0;
    const char* begin = text.data();
    if (!text.empty() && text.front() == '+') ++begin;
    auto res = std::from_chars(begin, text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(v))
        throw InputError("invalid number '" + std::string(text) + "'");
    return v;
}

std::string write_bump_text(const BumpCombination& bump) {
    std::string out = "# coefficient center radius\n";
    for (const auto& a : bump.atoms())
        out += format_double(a.coefficient) + " " + format_double(a.center) + " " + format_double(a.radius) + "\n";
    return out;
}

BumpCombination read_bump_text(std::string_view text) {
    std::vector<BumpAtom> atoms;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::vector<std::string> tokens;
        for (std::string tok; fields >> tok;) tokens.push_back(tok);
        if (tokens.empty()) continue;
        if (tokens.size() != 3) throw ParseError("expected 'coefficient center radius'", lineno, 1);
        try {
            atoms.push_back({parse_double(tokens[0]), parse_double(tokens[1]), parse_double(tokens[2])});
        } catch (const InputError& e) {
            throw ParseError(e.what(), lineno, 1);
        }
    }
    return BumpCombination(std::move(atoms));
}

std::string write_bump_json(const BumpCombination& bump) {
    nlohmann::json atoms = nlohmann::json::array();
    for (const auto& a : bump.atoms()) atoms.push_back({a.coefficient, a.center, a.radius});
    return nlohmann::json{{"atoms", atoms}}.dump(2);
}

BumpCombination read_bump_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("bump JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("atoms") || !j["atoms"].is_array()) throw InputError("bump JSON needs an 'atoms' array");
    std::vector<BumpAtom> atoms;
    for (const auto& a : j["atoms"]) {
        if (!a.is_array() || a.size() != 3 || !a[0].is_number() || !a[1].is_number() || !a[2].is_number())
            throw InputError("each atom must be [coefficient, center, radius]");
        atoms.push_back({a[0].get<double>(), a[1].get<double>(), a[2].get<double>()});
    }
    return BumpCombination(std::move(atoms));
}

}  // namespace mprt
