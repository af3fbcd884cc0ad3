#include "mprt/report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <sstream>

#include <json.hpp>

#include "mprt/errors.hpp"

namespace mprt {

namespace {

using Json = nlohmann::ordered_json;

std::string utc_now() {
    std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

Json header(const ReportContext& ctx) {
    Json j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["command"] = ctx.command;
    if (ctx.timestamp) j["timestamp"] = utc_now();
    return j;
}

std::string text_header(const ReportContext& ctx) {
    std::string out = std::string(kToolName) + " " + kToolVersion + " " + ctx.command + "\n";
    if (ctx.timestamp) out += "timestamp: " + utc_now() + "\n";
    return out;
}

std::string text_input(const ReportContext& ctx, const char* prefix) {
    std::string out = std::string(prefix) + "input:\n";
    std::istringstream in(ctx.input_echo);
    for (std::string line; std::getline(in, line);) out += line.empty() ? "\n" : std::string(prefix) + "  " + line + "\n";
    return out;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void reject_csv(ReportFormat format, const std::string& command) {
    if (format == ReportFormat::Csv) throw InputError("csv output is not available for " + command);
}

std::string rational_list(std::span<const Rational> v) {
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + to_string(v[i]);
    return out + ")";
}

Json rational_array(std::span<const Rational> v) {
    Json a = Json::array();
    for (const auto& r : v) a.push_back(to_string(r));
    return a;
}

std::string field_string(const PolyVectorField& field, FieldBasis basis) {
    if (basis == FieldBasis::HeisenbergXYT && field.is_constant()) {
        auto c = field.constant_components();
        return to_string_xyt(c);
    }
    return to_string(field);
}

std::string scheme_string(const ExponentScheme& scheme) {
    std::string out;
    for (std::size_t i = 0; i < scheme.dimension(); ++i) {
        if (i) out += "; ";
        const auto& row = scheme.row(i);
        for (std::size_t mu = 0; mu < row.size(); ++mu) out += (mu ? " " : "") + to_string(row[mu]);
    }
    return out;
}

struct ExpansionLine {
    std::string alpha, degree, field;
    bool pure;
};

std::vector<ExpansionLine> expansion_lines(const WExpansion& w) {
    std::vector<ExpansionLine> out;
    for (const auto& [alpha, entry] : w.entries())
        out.push_back({to_string(alpha), to_string(entry.degree), field_string(entry.field, w.basis()), is_pure(entry.degree)});
    return out;
}

Json expansion_json(const WExpansion& w) {
    Json a = Json::array();
    for (const auto& [alpha, entry] : w.entries()) {
        Json e;
        e["alpha"] = alpha.components;
        e["degree"] = rational_array(entry.degree.components);
        e["field"] = field_string(entry.field, w.basis());
        e["pure"] = is_pure(entry.degree);
        a.push_back(e);
    }
    return a;
}

std::string entry_string(const PowerEntry& e, FieldBasis basis) {
    return e.origin + " = " + field_string(e.field, basis) + " deg " + to_string(e.degree);
}

Json entries_json(const std::vector<PowerEntry>& entries, FieldBasis basis) {
    Json a = Json::array();
    for (const auto& e : entries) a.push_back({{"origin", e.origin}, {"field", field_string(e.field, basis)}, {"degree", rational_array(e.degree.components)}});
    return a;
}

std::string combination_string(const SectorCheck& s, const std::vector<PowerEntry>& closure) {
    std::string out;
    for (const auto& [idx, coef] : s.combination) {
        if (!out.empty()) out += " + ";
        out += to_string(coef) + "*" + (idx < closure.size() ? closure[idx].origin : "?");
    }
    return out.empty() ? "0" : out;
}

std::string format_num(double v) { return format_double(v); }

}  // namespace

ReportFormat parse_report_format(const std::string& name) {
    if (name == "text") return ReportFormat::Text;
    if (name == "json") return ReportFormat::Json;
    if (name == "csv") return ReportFormat::Csv;
    throw InputError("unknown format '" + name + "' (expected text, json or csv)");
}

std::string render_analysis(const ReportContext& ctx, const GammaSpec& spec, const Verdict& verdict, ReportFormat format) {
    reject_csv(format, ctx.command);
    const WExpansion w = w_expansion(spec);
    const WExpansion xhat = xhat_expansion(spec);
    const PowerSets sets = spec.family() == Family::Heisenberg ? pure_closure_heisenberg(xhat) : pure_closure(xhat);
    auto names = spec.scheme().dimension() == 2 ? std::vector<std::string>{"s", "t"} : default_variable_names(spec.scheme().dimension());
    std::vector<std::string> polys;
    for (const auto& p : spec.polynomials()) polys.push_back(to_string(p, names));

    if (format == ReportFormat::Json) {
        Json j = header(ctx);
        j["family"] = to_string(spec.family());
        j["scheme"] = scheme_string(spec.scheme());
        j["polynomials"] = polys;
        j["verdict"] = to_string(verdict.outcome);
        if (verdict.witness)
            j["witness"] = {{"alpha0", verdict.witness->alpha0.components}, {"normal", rational_array(verdict.witness->normal)}};
        else
            j["witness"] = nullptr;
        Json certs = Json::array();
        for (const auto& c : verdict.certificates) {
            Json sectors = Json::array();
            for (const auto& s : c.sectors)
                sectors.push_back({{"normal", rational_array(s.normal)}, {"spanned", s.spanned}, {"combination", combination_string(s, verdict.closure)}});
            certs.push_back({{"alpha0", c.alpha0.components}, {"target", rational_array(c.target)}, {"sectors", sectors}});
        }
        j["certificates"] = certs;
        j["w_expansion"] = expansion_json(w);
        j["xhat_expansion"] = expansion_json(xhat);
        j["pure"] = entries_json(sets.pure, sets.basis);
        j["nonpure"] = entries_json(sets.nonpure, sets.basis);
        j["closure"] = entries_json(sets.closure, sets.basis);
        j["diagnostics"] = verdict.diagnostics;
        j["input"] = ctx.input_echo;
        return dump(j);
    }

    std::string out = text_header(ctx);
    out += "family: " + to_string(spec.family()) + "\n";
    out += "scheme rows: " + scheme_string(spec.scheme()) + "\n";
    const char* labels[] = {"P1", "P2", "P3"};
    for (std::size_t i = 0; i < polys.size(); ++i)
        out += std::string(spec.family() == Family::Heisenberg ? labels[i] : "p") + " = " + polys[i] + "\n";
    out += "\nverdict: " + to_string(verdict.outcome) + "\n";
    if (verdict.witness)
        out += "witness: alpha0 = " + to_string(verdict.witness->alpha0) + ", normal " + to_string(verdict.witness->normal) + "\n";
    for (const auto& c : verdict.certificates) {
        std::string target = spec.family() == Family::Heisenberg ? to_string_xyt(c.target) : rational_list(c.target);
        out += "certificate for alpha0 = " + to_string(c.alpha0) + ", target " + target + ":\n";
        for (const auto& s : c.sectors)
            out += "  normal " + to_string(s.normal) + ": " + (s.spanned ? "target = " + combination_string(s, verdict.closure) : "not spanned") + "\n";
    }
    if (!verdict.diagnostics.empty()) out += "diagnostics: " + verdict.diagnostics + "\n";
    auto list = [&](const char* title, const std::vector<ExpansionLine>& lines) {
        out += std::string("\n") + title + ":\n";
        if (lines.empty()) out += "  (zero)\n";
        for (const auto& l : lines)
            out += "  t^" + l.alpha + "  deg " + l.degree + (l.pure ? "  pure     " : "  nonpure  ") + l.field + "\n";
    };
    list("W expansion", expansion_lines(w));
    list("X^ expansion", expansion_lines(xhat));
    out += "\npure closure:\n";
    if (sets.closure.empty()) out += "  (empty)\n";
    for (const auto& e : sets.closure) out += "  " + entry_string(e, sets.basis) + "\n";
    out += "nonpure:\n";
    if (sets.nonpure.empty()) out += "  (empty)\n";
    for (const auto& e : sets.nonpure) out += "  " + entry_string(e, sets.basis) + "\n";
    out += "\n" + text_input(ctx, "");
    return out;
}

BumpCheck check_bump(double a, int a1, const std::set<int>& excluded) {
    BumpCheck check{a, a1, excluded, moment_bump(a, a1, excluded), false};
    const auto& mb = check.result;
    bool ok = std::fabs(mb.moments[0]) < 1e-10 && std::fabs(mb.moments[1]) > 1e-6;
    for (std::size_t l = 2; l < mb.moments.size(); ++l) ok = ok && std::fabs(mb.moments[l]) < 1e-9;
    ok = ok && std::fabs(static_cast<double>(mb.determinant / mb.determinant_formula) - 1) < 1e-8;
    check.passed = ok;
    return check;
}

std::string render_bump(const ReportContext& ctx, const BumpCheck& check, ReportFormat format) {
    reject_csv(format, ctx.command);
    const auto& mb = check.result;
    auto role = [&](std::size_t l) { return l == 0 ? "mean" : l == 1 ? "target" : "excluded"; };
    double det_rel = std::fabs(static_cast<double>(mb.determinant / mb.determinant_formula) - 1);
    if (format == ReportFormat::Json) {
        Json j = header(ctx);
        j["a"] = check.a;
        j["a1"] = check.a1;
        j["excluded"] = std::vector<int>(check.excluded.begin(), check.excluded.end());
        Json atoms = Json::array();
        for (const auto& at : mb.bump.atoms()) atoms.push_back({at.coefficient, at.center, at.radius});
        j["atoms"] = atoms;
        Json moments = Json::array();
        for (std::size_t l = 0; l < mb.moments.size(); ++l)
            moments.push_back({{"exponent", mb.exponents[l]}, {"role", role(l)}, {"value", mb.moments[l]}});
        j["moments"] = moments;
        j["determinant"] = static_cast<double>(mb.determinant);
        j["determinant_formula"] = static_cast<double>(mb.determinant_formula);
        j["determinant_relative_error"] = det_rel;
        j["passed"] = check.passed;
        j["input"] = ctx.input_echo;
        return dump(j);
    }
    std::string out = text_header(ctx);
    out += "support (0, " + format_num(check.a) + "), a1 = " + std::to_string(check.a1) + ", excluded {";
    bool first = true;
    for (int e : check.excluded) {
        out += (first ? "" : ", ") + std::to_string(e);
        first = false;
    }
    out += "}\n\natoms (coefficient center radius):\n";
    for (const auto& at : mb.bump.atoms()) out += "  " + format_num(at.coefficient) + " " + format_num(at.center) + " " + format_num(at.radius) + "\n";
    out += "\nmoments:\n";
    for (std::size_t l = 0; l < mb.moments.size(); ++l)
        out += "  t^" + std::to_string(mb.exponents[l]) + "  " + role(l) + "  " + format_num(mb.moments[l]) + "\n";
    out += "\ndeterminant " + format_num(static_cast<double>(mb.determinant)) + ", formula " +
           format_num(static_cast<double>(mb.determinant_formula)) + ", relative error " + format_num(det_rel) + "\n";
    out += std::string("result: ") + (check.passed ? "pass" : "fail") + "\n\n" + text_input(ctx, "");
    return out;
}

std::string render_kernel_check(const ReportContext& ctx, const KernelCheck& check, ReportFormat format) {
    const auto& c = check.cancellation;
    if (format == ReportFormat::Json) {
        Json j = header(ctx);
        j["passed"] = check.passed;
        j["cancellation"] = {{"passed", c.violations.empty()}, {"checked", c.checked}, {"max_slice", c.max_slice}};
        Json viol = Json::array();
        for (const auto& v : c.violations) viol.push_back({{"k", v.k.components}, {"mu", v.mu + 1}, {"value", v.value}});
        j["cancellation"]["violations"] = viol;
        Json sup = Json::array();
        for (const auto& k : c.support_violations) sup.push_back(k.components);
        j["support_violations"] = sup;
        Json rows = Json::array();
        for (std::size_t i = 0; i < check.orders.size(); ++i)
            for (const auto& b : check.bounds[i])
                rows.push_back({{"M", check.orders[i]}, {"alpha", b.alpha.components}, {"constant", b.constant}, {"argmax", b.argmax}});
        j["bounds"] = rows;
        j["input"] = ctx.input_echo;
        return dump(j);
    }
    if (format == ReportFormat::Csv) {
        std::string out = "# " + std::string(kToolName) + " " + kToolVersion + " " + ctx.command + "\n";
        out += std::string("# cancellation=") + (c.violations.empty() ? "pass" : "fail") + " support=" +
               (c.support_violations.empty() ? "pass" : "fail") + "\n";
        if (ctx.timestamp) out += "# timestamp=" + utc_now() + "\n";
        out += "M,alpha1,alpha2,constant,argmax_s,argmax_t\n";
        for (std::size_t i = 0; i < check.orders.size(); ++i)
            for (const auto& b : check.bounds[i])
                out += std::to_string(check.orders[i]) + "," + std::to_string(b.alpha[0]) + "," + std::to_string(b.alpha[1]) + "," +
                       format_num(b.constant) + "," + format_num(b.argmax[0]) + "," + format_num(b.argmax[1]) + "\n";
        return out;
    }
    std::string out = text_header(ctx);
    out += "cancellation: " + std::string(c.violations.empty() ? "pass" : "fail") + " (" + std::to_string(c.checked) +
           " slices, max |integral| " + format_num(c.max_slice) + ")\n";
    for (const auto& v : c.violations)
        out += "  violated at k = " + to_string(v.k) + ", mu = " + std::to_string(v.mu + 1) + ": " + format_num(v.value) + "\n";
    for (const auto& k : c.support_violations) out += "  support of entry " + to_string(k) + " leaves the ball\n";
    if (!check.orders.empty()) {
        out += "\nproduct bounds sup |d^alpha K_M| |s|^(1+a1) |t|^(1+a2):\n";
        for (std::size_t i = 0; i < check.orders.size(); ++i)
            for (const auto& b : check.bounds[i])
                out += "  M = " + std::to_string(check.orders[i]) + "  alpha = " + to_string(b.alpha) + "  C = " + format_num(b.constant) + "\n";
    }
    out += std::string("result: ") + (check.passed ? "pass" : "fail") + "\n\n" + text_input(ctx, "");
    return out;
}

std::string render_growth(const ReportContext& ctx, const GrowthResult& result, ReportFormat format) {
    const auto& cfg = result.config;
    const bool know = cfg.which == GrowthCase::Know;
    std::ostringstream params;
    params << "case=" << to_string(cfg.which);
    if (know) params << " L=" << cfg.scale_l;
    params << " support=" << format_num(cfg.support) << " window=[" << format_num(-cfg.window) << "," << format_num(cfg.window)
           << "] grid_n=" << cfg.grid_n << " quad_order=" << cfg.quad_order << " seed=ones tol=" << format_num(cfg.tol)
           << " max_iters=" << cfg.max_iters;

    if (format == ReportFormat::Csv) {
        std::string out = "# " + std::string(kToolName) + " " + kToolVersion + " " + ctx.command + " " + params.str() + "\n";
        if (ctx.timestamp) out += "# timestamp=" + utc_now() + "\n";
        out += "M,L,norm,ratio,iterations,converged\n";
        for (const auto& r : result.rows)
            out += std::to_string(r.m) + "," + (know ? std::to_string(cfg.scale_l) : "") + "," + format_num(r.norm.value) + "," +
                   format_num(r.ratio) + "," + std::to_string(r.norm.iterations) + "," + (r.norm.converged ? "1" : "0") + "\n";
        return out;
    }
    if (format == ReportFormat::Json) {
        Json j = header(ctx);
        j["case"] = to_string(cfg.which);
        if (know) j["L"] = cfg.scale_l;
        j["grid"] = {{"xmin", -cfg.window}, {"xmax", cfg.window}, {"n", cfg.grid_n}};
        j["support"] = cfg.support;
        j["quad_order"] = cfg.quad_order;
        j["power_iteration"] = {{"seed", "ones"}, {"tol", cfg.tol}, {"max_iters", cfg.max_iters}};
        Json rows = Json::array();
        for (const auto& r : result.rows)
            rows.push_back({{"M", r.m}, {"norm", r.norm.value}, {"ratio", r.ratio}, {"iterations", r.norm.iterations}, {"converged", r.norm.converged}});
        j["rows"] = rows;
        j["input"] = ctx.input_echo;
        return dump(j);
    }
    std::string out = text_header(ctx) + params.str() + "\n\n";
    out += "   M        norm         ratio   iterations\n";
    for (const auto& r : result.rows) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%4d  %14.9g  %12.9g  %8d%s\n", r.m, r.norm.value, r.ratio, r.norm.iterations,
                      r.norm.converged ? "" : "  (not converged)");
        out += buf;
    }
    out += "\n" + text_input(ctx, "");
    return out;
}

}  // namespace mprt
