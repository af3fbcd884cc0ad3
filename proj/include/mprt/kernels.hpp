#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mprt/bumps.hpp"
#include "mprt/dilations.hpp"

namespace mprt {

/// Finite sum of tensor-product bumps on R^N.
class TensorSum {
public:
    TensorSum() = default;
    explicit TensorSum(std::vector<TensorBump> terms);
    TensorSum(TensorBump term) : TensorSum(std::vector<TensorBump>{std::move(term)}) {}

    void add(TensorBump term);
    const std::vector<TensorBump>& terms() const noexcept { return terms_; }
    bool empty() const noexcept { return terms_.empty(); }
    std::size_t dimension() const noexcept { return terms_.empty() ? 0 : terms_.front().dimension(); }

    double operator()(std::span<const double> t) const;
    double derivative(std::span<const double> t, const MultiIndex& alpha) const;
    /// Per-coordinate dilation f(t) -> (prod lambda_i) f(lambda t), exact per atom.
    TensorSum dilated(std::span<const double> factors) const;
    TensorSum scaled(double factor) const;

    /// Per-coordinate hull [lo_i, hi_i] of all atom supports.
    std::vector<std::pair<double, double>> support_box() const;

    friend bool operator==(const TensorSum&, const TensorSum&) = default;

private:
    std::vector<TensorBump> terms_;
};

/// Sequence {sigma_k}, k in N^nu, representing K = sum_k sigma_k^{(2^k)}.
class DyadicKernelSeq {
public:
    using EntryMap = std::map<MultiIndex, TensorSum, GradedLex>;

    DyadicKernelSeq(ExponentScheme scheme, double support_bound);

    const ExponentScheme& scheme() const noexcept { return scheme_; }
    double support_bound() const noexcept { return support_bound_; }
    const EntryMap& entries() const noexcept { return entries_; }

    /// Replaces the entry at k. k must have nu nonnegative components and the
    /// sum must live on R^N.
    void set(const MultiIndex& k, TensorSum entry);
    /// Entry at k, or nullptr when absent.
    const TensorSum* find(const MultiIndex& k) const;

    /// Per-coordinate factors (2^k)^{e_i} = 2^{k . e_i}.
    std::vector<double> dilation_factors(const MultiIndex& k) const;

    /// sum over entries with |k|_1 <= max_order (all entries if absent) of
    /// sigma_k^{(2^k)}(t), or the alpha-derivative of that sum.
    double evaluate(std::span<const double> t, std::optional<int> max_order = std::nullopt) const;
    double derivative(std::span<const double> t, const MultiIndex& alpha, std::optional<int> max_order = std::nullopt) const;

    DyadicKernelSeq truncated(int max_order) const;
    DyadicKernelSeq scaled(double factor) const;

    friend bool operator==(const DyadicKernelSeq&, const DyadicKernelSeq&) = default;

private:
    ExponentScheme scheme_;
    double support_bound_;
    EntryMap entries_;
};

/// sigma_k = atom for every k in N^nu with |k|_1 <= max_order.
DyadicKernelSeq uniform_sequence(const ExponentScheme& scheme, const TensorSum& atom, int max_order,
                                 double support_bound);

struct CancellationReport {
    struct Violation {
        MultiIndex k;
        std::size_t mu;
        double value;
    };
    bool passed = true;
    double max_slice = 0;
    std::size_t checked = 0;
    std::vector<Violation> violations;
    /// Entries whose support leaves the closed ball of radius support_bound.
    std::vector<MultiIndex> support_violations;
};

/// For every k and mu with k_mu != 0, integrates sigma_k over the coordinates
/// t^mu (order-24 Gauss-Legendre per axis) on a grid of the remaining
/// coordinates. Passes when every slice integral is below `tolerance` and
/// every support fits.
CancellationReport verify_cancellation(const DyadicKernelSeq& seq, double tolerance = 1e-9, int grid_per_axis = 17);

struct ProductBound {
    MultiIndex alpha;
    double constant = 0;
    std::array<double, 2> argmax{};
};

/// sup over samples of |d^alpha K_M(s,t)| |s|^{1+alpha_1} |t|^{1+alpha_2}
/// with K_M the truncation to |k|_1 <= max_order. Two-parameter product
/// schemes only; samples on an axis are rejected.
ProductBound sample_product_kernel_bounds(const DyadicKernelSeq& seq, int max_order, const MultiIndex& alpha,
                                          std::span<const std::array<double, 2>> samples);

/// Log-spaced sample points with |s|, |t| in [min_abs, max_abs], all four sign
/// quadrants.
std::vector<std::array<double, 2>> product_samples(int per_axis, double min_abs, double max_abs);

/// max over a grid on the support box of |d^beta f| for |beta| <= order.
double sampled_cm_norm(const TensorSum& f, int order, int grid_per_axis = 41);

struct RegroupResult {
    DyadicKernelSeq sequence;
    std::size_t max_terms_per_entry = 0;
};

/// Rewrites sum_{k=0}^{M} atom^{(tilde_tau 2^{k n})} as sum_i sigma~_i^{(2^i)}
/// with sigma~_i = sum_{k: k n + log2 tilde_tau - i in [0,1)^nu}
/// atom^{(tilde_tau 2^{k n - i})}. Requires log2 tilde_tau + k n > 0 for all k <= M.
RegroupResult regroup_to_dyadic(const TensorSum& atom, std::span<const double> tilde_tau, std::span<const double> n,
                                int max_order, const ExponentScheme& scheme, double support_bound);

/// One signed term (-1)^{|p|} sigma_{(l-m)_+}^{(2^{-p-m} S)} of phi_l.
struct TelescopeTerm {
    MultiIndex l;
    MultiIndex p;
    MultiIndex atom_index;
    int sign;
    std::vector<double> scale;
};

struct TelescopeResult {
    DyadicKernelSeq phi;
    std::vector<TelescopeTerm> terms;
};

/// phi_l = sum_{p in {0,1}^nu, p <= l, p_mu = 0 where l_mu > m_mu}
/// (-1)^{|p|} sigma_{(l-m)_+}^{(2^{-p-m} S)}, dropped when |(l-m)_+|_1 > M.
/// Satisfies sum_l phi_l^{(2^l)} = sum_{j in N^nu, |j|_1 <= M} sigma_j^{(2^j S)}.
/// Requires 2^{m+1} <= S < 2^{m+2} componentwise.
TelescopeResult telescope_decompose(const DyadicKernelSeq& atoms, const MultiIndex& m, std::span<const double> scale,
                                    int max_order);

/// Plain-text kernel files (see write_kernel_text for the layout).
std::string write_kernel_text(const DyadicKernelSeq& seq);
DyadicKernelSeq read_kernel_text(std::string_view text);

}  // namespace mprt
