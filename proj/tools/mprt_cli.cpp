#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "mprt/errors.hpp"
#include "mprt/kernels.hpp"
#include "mprt/problem_spec.hpp"
#include "mprt/report.hpp"

using namespace mprt;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitError = 1;
constexpr int kExitFail = 2;
constexpr int kExitInconclusive = 3;

struct CommonOptions {
    std::string spec;
    std::string out;
    std::string format = "text";
    std::optional<std::size_t> grid_n;
    std::optional<int> quad_order;
    bool no_timestamp = false;
};

// Command-line values for [experiment] keys, spelled as in a spec file.
struct Overrides {
    std::string growth_case, orders, scale_l, a, a1, excluded, kernel, alpha, samples;
    bool excluded_given = false;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool spec_required) {
    auto* spec = cmd->add_option("--spec", o.spec, "problem specification file");
    if (spec_required) spec->required();
    cmd->add_option("--out", o.out, "write the report here instead of stdout");
    cmd->add_option("--format", o.format, "text, json or csv")->check(CLI::IsMember({"text", "json", "csv"}));
    cmd->add_option("--grid-n", o.grid_n, "grid points");
    cmd->add_option("--quad-order", o.quad_order, "Gauss-Legendre order per axis");
    cmd->add_flag("--no-timestamp", o.no_timestamp, "omit the timestamp so reports are byte-identical");
}

ProblemSpecFile load(const CommonOptions& o) {
    if (o.spec.empty()) return {};
    try {
        return read_problem_spec_file(o.spec);
    } catch (const ParseError& err) {
        throw InputError(o.spec + ": " + err.what());
    }
}

// Applies command-line values by parsing them as an [experiment] block, so
// they obey the same grammar and checks as spec files.
void apply_overrides(ExperimentBlock& e, const Overrides& ov, const CommonOptions& o) {
    std::string text = "[experiment]\n";
    auto put = [&](const char* key, const std::string& value) {
        if (!value.empty()) text += std::string(key) + " = " + value + "\n";
    };
    put("case", ov.growth_case);
    put("M", ov.orders);
    put("L", ov.scale_l);
    put("a", ov.a);
    put("a1", ov.a1);
    if (ov.excluded_given) text += "excluded = " + ov.excluded + "\n";
    put("kernel", ov.kernel);
    put("alpha", ov.alpha);
    put("samples", ov.samples);
    if (o.grid_n) put("grid_n", std::to_string(*o.grid_n));
    if (o.quad_order) put("quad_order", std::to_string(*o.quad_order));

    ExperimentBlock cli;
    try {
        cli = parse_problem_spec(text).experiment;
    } catch (const InputError& err) {
        throw InputError(std::string("command line: ") + err.what());
    }
    if (cli.growth_case) e.growth_case = cli.growth_case;
    if (!cli.orders.empty()) e.orders = cli.orders;
    if (cli.scale_l) e.scale_l = cli.scale_l;
    if (cli.grid_n) e.grid_n = cli.grid_n;
    if (cli.quad_order) e.quad_order = cli.quad_order;
    if (cli.bump_a) e.bump_a = cli.bump_a;
    if (cli.bump_a1) e.bump_a1 = cli.bump_a1;
    if (cli.excluded) e.excluded = cli.excluded;
    if (cli.kernel) e.kernel = cli.kernel;
    if (!cli.alphas.empty()) e.alphas = cli.alphas;
    if (cli.samples) e.samples = cli.samples;
}

ReportContext context(const char* command, const CommonOptions& o, const ProblemSpecFile& spec) {
    return {command, write_problem_spec(spec), !o.no_timestamp};
}

void emit(const CommonOptions& o, const std::string& report) {
    if (o.out.empty()) {
        std::cout << report;
        return;
    }
    std::ofstream file(o.out, std::ios::binary);
    if (!file) throw InputError("cannot write '" + o.out + "'");
    file << report;
    if (!file) throw InputError("failed writing '" + o.out + "'");
}

int run_analyze(const CommonOptions& o) {
    auto spec = load(o);
    if (!spec.gamma) throw InputError(o.spec + ": no [problem] section to analyze");
    Verdict verdict = analyze(*spec.gamma);
    emit(o, render_analysis(context("analyze", o, spec), *spec.gamma, verdict, parse_report_format(o.format)));
    switch (verdict.outcome) {
        case Outcome::Bounded: return kExitPass;
        case Outcome::Unbounded: return kExitFail;
        case Outcome::Inconclusive: return kExitInconclusive;
    }
    return kExitError;
}

int run_bump(const CommonOptions& o, const Overrides& ov, const std::string& save) {
    auto spec = load(o);
    apply_overrides(spec.experiment, ov, o);
    auto& e = spec.experiment;
    if (!e.bump_a) e.bump_a = 1.0;
    if (!e.bump_a1) e.bump_a1 = 1;
    if (!e.excluded) e.excluded = std::set<int>{};
    BumpCheck check = check_bump(*e.bump_a, *e.bump_a1, *e.excluded);
    if (!save.empty()) {
        std::ofstream file(save, std::ios::binary);
        if (!file) throw InputError("cannot write '" + save + "'");
        bool json = std::filesystem::path(save).extension() == ".json";
        file << (json ? write_bump_json(check.result.bump) : write_bump_text(check.result.bump));
    }
    emit(o, render_bump(context("bump", o, spec), check, parse_report_format(o.format)));
    return check.passed ? kExitPass : kExitFail;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open kernel file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int run_kernel_check(const CommonOptions& o, const Overrides& ov) {
    auto spec = load(o);
    apply_overrides(spec.experiment, ov, o);
    auto& e = spec.experiment;
    if (!e.kernel) throw InputError("no kernel file: give --kernel or 'kernel' in [experiment]");

    // Spec-relative paths resolve against the spec file; command-line paths against the working directory.
    std::filesystem::path path(*e.kernel);
    if (ov.kernel.empty() && path.is_relative() && !o.spec.empty()) path = std::filesystem::path(o.spec).parent_path() / path;
    DyadicKernelSeq seq = [&] {
        try {
            return read_kernel_text(read_file(path.string()));
        } catch (const ParseError& err) {
            throw InputError(path.string() + ": " + err.what());
        }
    }();

    KernelCheck check;
    check.cancellation = verify_cancellation(seq);
    check.orders = e.orders;
    if (check.orders.empty() && seq.scheme() == ExponentScheme::product(2)) {
        int top = 0;
        for (const auto& [k, entry] : seq.entries()) top = std::max(top, k[0] + k[1]);
        check.orders = {top};
    }
    if (!check.orders.empty()) {
        if (e.alphas.empty()) e.alphas = {MultiIndex{0, 0}, MultiIndex{1, 0}, MultiIndex{0, 1}, MultiIndex{1, 1}};
        auto samples = product_samples(e.samples.value_or(24), 1e-4, seq.support_bound());
        for (int m : check.orders) {
            auto& row = check.bounds.emplace_back();
            for (const auto& alpha : e.alphas) row.push_back(sample_product_kernel_bounds(seq, m, alpha, samples));
        }
    }
    check.passed = check.cancellation.passed;
    emit(o, render_kernel_check(context("kernel-check", o, spec), check, parse_report_format(o.format)));
    return check.passed ? kExitPass : kExitFail;
}

int run_norm_growth(const CommonOptions& o, const Overrides& ov) {
    auto spec = load(o);
    apply_overrides(spec.experiment, ov, o);
    auto& e = spec.experiment;
    if (!e.growth_case) throw InputError("no case: give --case or 'case' in [experiment]");
    GrowthConfig cfg = default_growth_config(*e.growth_case);
    if (e.scale_l) cfg.scale_l = *e.scale_l;
    if (e.grid_n) cfg.grid_n = *e.grid_n;
    if (e.quad_order) cfg.quad_order = *e.quad_order;
    if (e.support) cfg.support = *e.support;
    if (e.window) cfg.window = *e.window;
    if (e.max_iters) cfg.max_iters = *e.max_iters;
    if (e.tol) cfg.tol = *e.tol;
    if (e.orders.empty()) {
        int top = *e.growth_case == GrowthCase::Billy ? 12 : 8;
        for (int m = 0; m <= top; ++m) e.orders.push_back(m);
    }
    GrowthResult result = growth_experiment(cfg, e.orders);
    emit(o, render_growth(context("norm-growth", o, spec), result, parse_report_format(o.format)));
    for (const auto& row : result.rows)
        if (!row.norm.converged) return kExitInconclusive;
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Boundedness criteria, kernel constructions and norm-growth experiments for multi-parameter singular Radon transforms",
                 kToolName};
    app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
    app.require_subcommand(1);

    CommonOptions common;
    Overrides ov;
    std::string save;

    auto* analyze_cmd = app.add_subcommand("analyze", "decide boundedness of the curve family in [problem]");
    add_common(analyze_cmd, common, true);

    auto* bump_cmd = app.add_subcommand("bump", "build a moment-vanishing bump and check its moments");
    add_common(bump_cmd, common, false);
    bump_cmd->add_option("--a", ov.a, "support (0, a)");
    bump_cmd->add_option("--a1", ov.a1, "moment kept nonzero");
    bump_cmd->add_option("--excluded", ov.excluded, "moments forced to vanish, e.g. 1,3")
        ->each([&](const std::string&) { ov.excluded_given = true; });
    bump_cmd->add_option("--save", save, "write the bump (text, or JSON for a .json path)");

    auto* kernel_cmd = app.add_subcommand("kernel-check", "verify cancellation and sample product-kernel bounds");
    add_common(kernel_cmd, common, false);
    kernel_cmd->add_option("--kernel", ov.kernel, "kernel sequence file");
    kernel_cmd->add_option("--M", ov.orders, "truncation orders, e.g. 0..8 or 2,4");
    kernel_cmd->add_option("--alpha", ov.alpha, "derivative orders, e.g. \"0 0; 1 0\"");
    kernel_cmd->add_option("--samples", ov.samples, "sample points per axis and sign");

    auto* growth_cmd = app.add_subcommand("norm-growth", "operator norms of the truncated kernels against M");
    add_common(growth_cmd, common, false);
    growth_cmd->add_option("--case", ov.growth_case, "kitty, know or billy");
    growth_cmd->add_option("--M", ov.orders, "truncation orders, e.g. 0..8 or 2,4");
    growth_cmd->add_option("--L", ov.scale_l, "scale parameter of the know case");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitError;
    }

    try {
        if (*analyze_cmd) return run_analyze(common);
        if (*bump_cmd) return run_bump(common, ov, save);
        if (*kernel_cmd) return run_kernel_check(common, ov);
        if (*growth_cmd) return run_norm_growth(common, ov);
    } catch (const std::exception& e) {
        std::cerr << kToolName << ": error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
