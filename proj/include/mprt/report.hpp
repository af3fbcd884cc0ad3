#pragma once

#include <set>
#include <string>
#include <vector>

#include "mprt/bumps.hpp"
#include "mprt/criteria.hpp"
#include "mprt/harness.hpp"
#include "mprt/kernels.hpp"
#include "mprt/symbolic.hpp"

namespace mprt {

inline constexpr const char* kToolName = "mprt";
inline constexpr const char* kToolVersion = "0.1.0";

enum class ReportFormat { Text, Json, Csv };

ReportFormat parse_report_format(const std::string& name);

/// Shared header of every report. `input_echo` is the canonical spec text.
struct ReportContext {
    std::string command;
    std::string input_echo;
    bool timestamp = true;
};

std::string render_analysis(const ReportContext& ctx, const GammaSpec& spec, const Verdict& verdict, ReportFormat format);

/// Moment bump together with the threshold checks of its moments.
struct BumpCheck {
    double a = 1;
    int a1 = 1;
    std::set<int> excluded;
    MomentBump result;
    bool passed = false;
};

/// Builds the bump and checks |int s| < 1e-10, |int t^{a_l} s| < 1e-9 for the
/// excluded a_l, |int t^{a1} s| > 1e-6 and the determinant formula to 1e-8.
BumpCheck check_bump(double a, int a1, const std::set<int>& excluded);

std::string render_bump(const ReportContext& ctx, const BumpCheck& check, ReportFormat format);

struct KernelCheck {
    CancellationReport cancellation;
    std::vector<int> orders;
    /// bounds[i][j]: constant for orders[i] and the j-th derivative order.
    std::vector<std::vector<ProductBound>> bounds;
    bool passed = false;
};

std::string render_kernel_check(const ReportContext& ctx, const KernelCheck& check, ReportFormat format);

std::string render_growth(const ReportContext& ctx, const GrowthResult& result, ReportFormat format);

}  // namespace mprt
