#include "mprt/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "mprt/errors.hpp"
#include "mprt/quadrature.hpp"

namespace mprt {

namespace {

int l1(const MultiIndex& k) { return k.total(); }

double integral_1d(const BumpCombination& f) {
    auto bps = f.breakpoints();
    if (bps.size() < 2) return 0.0;
    return integrate_composite([&](double t) { return f(t); }, bps, 24, 4);
}

std::vector<double> grid(double lo, double hi, int count) {
    std::vector<double> out;
    if (count == 1) return {0.5 * (lo + hi)};
    for (int i = 0; i < count; ++i) out.push_back(lo + (hi - lo) * i / (count - 1));
    return out;
}

// Row-major enumeration of the tensor grid over the given axes.
template <class F>
void for_each_grid_point(const std::vector<std::vector<double>>& axes, F&& visit) {
    std::vector<std::size_t> idx(axes.size(), 0);
    std::vector<double> point(axes.size());
    while (true) {
        for (std::size_t i = 0; i < axes.size(); ++i) point[i] = axes[i][idx[i]];
        visit(point);
        std::size_t d = axes.size();
        while (d > 0) {
            --d;
            if (++idx[d] < axes[d].size()) break;
            idx[d] = 0;
            if (d == 0) return;
        }
        if (axes.empty()) return;
    }
}

}  // namespace

TensorSum::TensorSum(std::vector<TensorBump> terms) : terms_(std::move(terms)) {
    for (const auto& t : terms_)
        if (t.dimension() != terms_.front().dimension()) throw InputError("tensor sum terms differ in dimension");
}

void TensorSum::add(TensorBump term) {
    if (!terms_.empty() && term.dimension() != dimension()) throw InputError("tensor sum terms differ in dimension");
    terms_.push_back(std::move(term));
}

double TensorSum::operator()(std::span<const double> t) const {
    double v = 0;
    for (const auto& term : terms_) v += term(t);
    return v;
}

double TensorSum::derivative(std::span<const double> t, const MultiIndex& alpha) const {
    double v = 0;
    for (const auto& term : terms_) v += term.derivative(t, alpha);
    return v;
}

TensorSum TensorSum::dilated(std::span<const double> factors) const {
    std::vector<TensorBump> out;
    out.reserve(terms_.size());
    for (const auto& term : terms_) out.push_back(term.dilated(factors));
    return TensorSum(std::move(out));
}

TensorSum TensorSum::scaled(double factor) const {
    std::vector<TensorBump> out;
    out.reserve(terms_.size());
    for (const auto& term : terms_) out.push_back(term.scaled(factor));
    return TensorSum(std::move(out));
}

std::vector<std::pair<double, double>> TensorSum::support_box() const {
    std::vector<std::pair<double, double>> box;
    for (const auto& term : terms_) {
        for (std::size_t i = 0; i < term.dimension(); ++i) {
            auto s = term.components()[i].support();
            if (box.size() <= i) {
                box.push_back(s);
            } else {
                box[i].first = std::min(box[i].first, s.first);
                box[i].second = std::max(box[i].second, s.second);
            }
        }
    }
    return box;
}

DyadicKernelSeq::DyadicKernelSeq(ExponentScheme scheme, double support_bound)
    : scheme_(std::move(scheme)), support_bound_(support_bound) {
    if (!(support_bound > 0) || !std::isfinite(support_bound)) throw InputError("support bound must be positive");
}

void DyadicKernelSeq::set(const MultiIndex& k, TensorSum entry) {
    if (k.size() != scheme_.parameters())
        throw InputError("kernel index " + to_string(k) + " needs " + std::to_string(scheme_.parameters()) + " components");
    for (int c : k.components)
        if (c < 0) throw InputError("kernel index " + to_string(k) + " has a negative component");
    if (!entry.empty() && entry.dimension() != scheme_.dimension())
        throw InputError("kernel entry dimension does not match the scheme");
    entries_[k] = std::move(entry);
}

const TensorSum* DyadicKernelSeq::find(const MultiIndex& k) const {
    auto it = entries_.find(k);
    return it == entries_.end() ? nullptr : &it->second;
}

std::vector<double> DyadicKernelSeq::dilation_factors(const MultiIndex& k) const {
    std::vector<double> out(scheme_.dimension());
    for (std::size_t i = 0; i < out.size(); ++i) {
        Rational e = 0;
        for (std::size_t mu = 0; mu < scheme_.parameters(); ++mu) e += k[mu] * scheme_.exponent(i, mu);
        out[i] = std::exp2(to_double(e));
    }
    return out;
}

double DyadicKernelSeq::evaluate(std::span<const double> t, std::optional<int> max_order) const {
    double v = 0;
    for (const auto& [k, entry] : entries_) {
        if (max_order && l1(k) > *max_order) continue;
        v += entry.dilated(dilation_factors(k))(t);
    }
    return v;
}

double DyadicKernelSeq::derivative(std::span<const double> t, const MultiIndex& alpha, std::optional<int> max_order) const {
    double v = 0;
    for (const auto& [k, entry] : entries_) {
        if (max_order && l1(k) > *max_order) continue;
        v += entry.dilated(dilation_factors(k)).derivative(t, alpha);
    }
    return v;
}

DyadicKernelSeq DyadicKernelSeq::truncated(int max_order) const {
    DyadicKernelSeq out(scheme_, support_bound_);
    for (const auto& [k, entry] : entries_)
        if (l1(k) <= max_order) out.entries_[k] = entry;
    return out;
}

DyadicKernelSeq DyadicKernelSeq::scaled(double factor) const {
    DyadicKernelSeq out(scheme_, support_bound_);
    for (const auto& [k, entry] : entries_) out.entries_[k] = entry.scaled(factor);
    return out;
}

DyadicKernelSeq uniform_sequence(const ExponentScheme& scheme, const TensorSum& atom, int max_order,
                                 double support_bound) {
    DyadicKernelSeq seq(scheme, support_bound);
    const std::size_t nu = scheme.parameters();
    MultiIndex k = MultiIndex::zeros(nu);
    // Enumerate N^nu within the l1 ball by odometer.
    while (true) {
        if (k.total() <= max_order) seq.set(k, atom);
        std::size_t d = 0;
        while (d < nu) {
            if (++k[d] <= max_order) break;
            k[d] = 0;
            ++d;
        }
        if (d == nu) break;
    }
    return seq;
}

CancellationReport verify_cancellation(const DyadicKernelSeq& seq, double tolerance, int grid_per_axis) {
    CancellationReport report;
    const auto& scheme = seq.scheme();
    for (const auto& [k, entry] : seq.entries()) {
        double reach = 0;
        for (auto [lo, hi] : entry.support_box()) reach += std::max(lo * lo, hi * hi);
        if (std::sqrt(reach) > seq.support_bound() * (1 + 1e-12)) report.support_violations.push_back(k);

        auto box = entry.support_box();
        for (std::size_t mu = 0; mu < scheme.parameters(); ++mu) {
            if (k[mu] == 0) continue;
            auto coords = scheme.coordinates_of(mu);
            std::vector<bool> integrated(scheme.dimension(), false);
            for (auto i : coords) integrated[i] = true;

            std::vector<std::size_t> free;
            std::vector<std::vector<double>> axes;
            for (std::size_t i = 0; i < scheme.dimension(); ++i) {
                if (integrated[i]) continue;
                free.push_back(i);
                axes.push_back(grid(box[i].first, box[i].second, grid_per_axis));
            }

            // Tensor terms factor: integrate the mu-coordinates once per term.
            std::vector<double> factors;
            for (const auto& term : entry.terms()) {
                double f = 1;
                for (auto i : coords) f *= integral_1d(term.components()[i]);
                factors.push_back(f);
            }

            double worst = 0;
            for_each_grid_point(axes, [&](const std::vector<double>& point) {
                double v = 0;
                for (std::size_t j = 0; j < entry.terms().size(); ++j) {
                    double f = factors[j];
                    for (std::size_t a = 0; a < free.size() && f != 0; ++a)
                        f *= entry.terms()[j].components()[free[a]](point[a]);
                    v += f;
                }
                worst = std::max(worst, std::fabs(v));
            });
            ++report.checked;
            report.max_slice = std::max(report.max_slice, worst);
            if (worst >= tolerance) report.violations.push_back({k, mu, worst});
        }
    }
    report.passed = report.violations.empty() && report.support_violations.empty();
    return report;
}

ProductBound sample_product_kernel_bounds(const DyadicKernelSeq& seq, int max_order, const MultiIndex& alpha,
                                          std::span<const std::array<double, 2>> samples) {
    if (!(seq.scheme() == ExponentScheme::product(2)))
        throw InputError("product kernel bounds need the two-parameter product scheme");
    if (alpha.size() != 2) throw InputError("derivative order needs two components");
    ProductBound out;
    out.alpha = alpha;
    for (const auto& p : samples) {
        if (p[0] == 0 || p[1] == 0) throw InputError("sample points must lie off the coordinate axes");
        double v = std::fabs(seq.derivative(p, alpha, max_order)) * std::pow(std::fabs(p[0]), 1 + alpha[0]) *
                   std::pow(std::fabs(p[1]), 1 + alpha[1]);
        if (v > out.constant) {
            out.constant = v;
            out.argmax = p;
        }
    }
    return out;
}

std::vector<std::array<double, 2>> product_samples(int per_axis, double min_abs, double max_abs) {
    if (per_axis < 2 || !(min_abs > 0) || !(max_abs > min_abs)) throw InputError("invalid sample specification");
    std::vector<double> mags;
    for (int i = 0; i < per_axis; ++i)
        mags.push_back(min_abs * std::pow(max_abs / min_abs, static_cast<double>(i) / (per_axis - 1)));
    std::vector<std::array<double, 2>> out;
    for (double s : mags)
        for (double t : mags)
            for (double ss : {1.0, -1.0})
                for (double ts : {1.0, -1.0}) out.push_back({ss * s, ts * t});
    return out;
}

double sampled_cm_norm(const TensorSum& f, int order, int grid_per_axis) {
    auto box = f.support_box();
    std::vector<std::vector<double>> axes;
    for (auto [lo, hi] : box) axes.push_back(grid(lo, hi, grid_per_axis));
    const std::size_t n = box.size();
    std::vector<MultiIndex> orders;
    MultiIndex beta = MultiIndex::zeros(n);
    while (true) {
        if (beta.total() <= order) orders.push_back(beta);
        std::size_t d = 0;
        while (d < n) {
            if (++beta[d] <= order) break;
            beta[d] = 0;
            ++d;
        }
        if (d == n) break;
    }
    double worst = 0;
    for_each_grid_point(axes, [&](const std::vector<double>& p) {
        for (const auto& b : orders) worst = std::max(worst, std::fabs(f.derivative(p, b)));
    });
    return worst;
}

RegroupResult regroup_to_dyadic(const TensorSum& atom, std::span<const double> tilde_tau, std::span<const double> n,
                                int max_order, const ExponentScheme& scheme, double support_bound) {
    const std::size_t nu = scheme.parameters();
    if (tilde_tau.size() != nu || n.size() != nu) throw InputError("regroup: parameter vectors need nu components");
    if (max_order < 0) throw InputError("regroup: M must be nonnegative");
    for (double tau : tilde_tau)
        if (!(tau > 0)) throw InputError("regroup: tilde_tau must be positive");

    RegroupResult out{DyadicKernelSeq(scheme, support_bound), 0};
    std::map<MultiIndex, std::vector<TensorBump>, GradedLex> groups;
    for (int k = 0; k <= max_order; ++k) {
        MultiIndex i = MultiIndex::zeros(nu);
        std::vector<double> delta(nu);
        for (std::size_t mu = 0; mu < nu; ++mu) {
            double exponent = std::log2(tilde_tau[mu]) + k * n[mu];
            if (!(exponent > 0))
                throw InputError("regroup: log2(tilde_tau) + k n must be positive (violated at k = " + std::to_string(k) + ")");
            int im = static_cast<int>(std::floor(exponent));
            double scale = std::ldexp(tilde_tau[mu] * std::exp2(k * n[mu]), -im);
            if (scale >= 2) {
                ++im;
                scale /= 2;
            } else if (scale < 1) {
                --im;
                scale *= 2;
            }
            i[mu] = im;
            delta[mu] = scale;
        }
        auto factors = mprt::dilation_factors(delta, scheme);
        TensorSum dilated = atom.dilated(factors);
        for (const auto& term : dilated.terms()) groups[i].push_back(term);
    }
    for (auto& [i, terms] : groups) {
        out.max_terms_per_entry = std::max(out.max_terms_per_entry, terms.size() / std::max<std::size_t>(1, atom.terms().size()));
        out.sequence.set(i, TensorSum(std::move(terms)));
    }
    return out;
}

TelescopeResult telescope_decompose(const DyadicKernelSeq& atoms, const MultiIndex& m, std::span<const double> scale,
                                    int max_order) {
    const auto& scheme = atoms.scheme();
    const std::size_t nu = scheme.parameters();
    if (m.size() != nu || scale.size() != nu) throw InputError("telescope: m and the scale vector need nu components");
    for (std::size_t mu = 0; mu < nu; ++mu) {
        if (m[mu] < 0) throw InputError("telescope: m must be nonnegative");
        if (!(std::ldexp(1.0, m[mu] + 1) <= scale[mu] && scale[mu] < std::ldexp(1.0, m[mu] + 2)))
            throw InputError("telescope: scale component " + std::to_string(mu + 1) + " is not bracketed by 2^(m+1) and 2^(m+2)");
    }
    if (max_order < 0) throw InputError("telescope: M must be nonnegative");

    TelescopeResult out{DyadicKernelSeq(scheme, atoms.support_bound()), {}};
    MultiIndex l = MultiIndex::zeros(nu);
    while (true) {
        MultiIndex j = MultiIndex::zeros(nu);
        for (std::size_t mu = 0; mu < nu; ++mu) j[mu] = std::max(0, l[mu] - m[mu]);
        const TensorSum* atom = atoms.find(j);
        if (j.total() <= max_order && atom && !atom->empty()) {
            TensorSum phi;
            for (unsigned mask = 0; mask < (1u << nu); ++mask) {
                MultiIndex p = MultiIndex::zeros(nu);
                bool allowed = true;
                for (std::size_t mu = 0; mu < nu; ++mu) {
                    p[mu] = (mask >> mu) & 1u;
                    if (p[mu] && (l[mu] < 1 || l[mu] > m[mu])) allowed = false;
                }
                if (!allowed) continue;
                std::vector<double> delta(nu);
                for (std::size_t mu = 0; mu < nu; ++mu) delta[mu] = std::ldexp(scale[mu], -p[mu] - m[mu]);
                int sign = p.total() % 2 ? -1 : 1;
                TensorSum piece = atom->dilated(mprt::dilation_factors(delta, scheme));
                if (sign < 0) piece = piece.scaled(-1.0);
                for (const auto& term : piece.terms()) phi.add(term);
                out.terms.push_back({l, p, j, sign, delta});
            }
            out.phi.set(l, std::move(phi));
        }
        std::size_t d = 0;
        while (d < nu) {
            if (++l[d] <= m[d] + max_order) break;
            l[d] = 0;
            ++d;
        }
        if (d == nu) break;
    }
    return out;
}

}  // namespace mprt
