#include "mprt/harness.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "mprt/errors.hpp"
#include "mprt/quadrature.hpp"

namespace mprt {

namespace {

constexpr int kMaxPanels = 1024;
// Below this many multiply-adds an application runs on the calling thread.
constexpr double kParallelWork = 2e5;

struct Cell {
    std::array<double, 2> lo, hi;
};

// Cells of the tensor support: products of consecutive breakpoint intervals.
std::vector<Cell> support_cells(const TensorBump& atom) {
    auto b0 = atom.components()[0].breakpoints();
    auto b1 = atom.components()[1].breakpoints();
    std::vector<Cell> cells;
    for (std::size_t i = 0; i + 1 < b0.size(); ++i)
        for (std::size_t j = 0; j + 1 < b1.size(); ++j) cells.push_back({{b0[i], b1[j]}, {b0[i + 1], b1[j + 1]}});
    return cells;
}

std::vector<std::pair<double, double>> composite_nodes(double lo, double hi, int order, int panels) {
    const auto& rule = gauss_legendre(order);
    std::vector<std::pair<double, double>> out;
    double width = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
        double a = lo + p * width, half = width / 2, mid = a + half;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) out.push_back({mid + half * rule.nodes[q], half * rule.weights[q]});
    }
    return out;
}

// Calls visit(displacement, weight) for every quadrature node of one term in
// normalized coordinates. Panels per cell are chosen so that neighbouring
// nodes move the displacement by about a quarter of the grid spacing.
template <class F>
void for_each_node(const DiscretizedOperator& op, const DyadicTerm& term, F&& visit) {
    const auto& flow = op.flow;
    const std::array<Polynomial, 2> grad{flow.derivative(0), flow.derivative(1)};
    const double h = op.grid.spacing();
    const int q = op.quad_order;
    const auto& phi0 = term.atom.components()[0];
    const auto& phi1 = term.atom.components()[1];
    auto original = [&](double u0, double u1) { return std::array<double, 2>{u0 / term.scale[0], u1 / term.scale[1]}; };

    for (const auto& cell : support_cells(term.atom)) {
        std::array<int, 2> panels{};
        auto coarse0 = composite_nodes(cell.lo[0], cell.hi[0], q, 1);
        auto coarse1 = composite_nodes(cell.lo[1], cell.hi[1], q, 1);
        for (int a = 0; a < 2; ++a) {
            double slope = 0;
            for (auto [u0, w0] : coarse0)
                for (auto [u1, w1] : coarse1) {
                    auto st = original(u0, u1);
                    slope = std::max(slope, std::fabs(grad[a].evaluate(st) / term.scale[a]));
                }
            double variation = slope * (cell.hi[a] - cell.lo[a]);
            double wanted = std::ceil(4 * variation / (q * h));
            panels[a] = static_cast<int>(std::clamp(wanted, 1.0, static_cast<double>(kMaxPanels)));
        }
        auto nodes0 = composite_nodes(cell.lo[0], cell.hi[0], q, panels[0]);
        auto nodes1 = composite_nodes(cell.lo[1], cell.hi[1], q, panels[1]);
        std::vector<double> weights1;
        for (auto [u1, w1] : nodes1) weights1.push_back(w1 * phi1(u1));
        for (auto [u0, w0] : nodes0) {
            double a0 = w0 * phi0(u0);
            if (a0 == 0) continue;
            for (std::size_t j = 0; j < nodes1.size(); ++j) {
                double weight = a0 * weights1[j];
                if (weight == 0) continue;
                visit(flow.evaluate(original(u0, nodes1[j].first)), weight);
            }
        }
    }
}

void check_operator(const DiscretizedOperator& op) {
    if (op.flow.num_vars() != 2) throw InputError("flow must be a polynomial in (s, t)");
    if (op.quad_order < 1 || op.quad_order > 256) throw InputError("quadrature order must be in 1..256");
    for (const auto& term : op.terms) {
        if (term.atom.dimension() != 2) throw InputError("terms must be tensor bumps on R^2");
        if (!(term.scale[0] > 0 && term.scale[1] > 0)) throw InputError("term scales must be positive");
    }
}

// Runs body(begin, end) over [0, n), split across threads when the work is large.
template <class F>
void parallel_rows(std::size_t n, double work, F&& body) {
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    if (work < kParallelWork || threads == 1) {
        body(std::size_t{0}, n);
        return;
    }
    threads = std::min<unsigned>(threads, 16);
    std::vector<std::jthread> pool;
    std::size_t chunk = (n + threads - 1) / threads;
    for (std::size_t begin = 0; begin < n; begin += chunk) pool.emplace_back([&, begin] { body(begin, std::min(n, begin + chunk)); });
}

// Four interleaved partial sums combined as (s0 + s1) + (s2 + s3): a fixed
// order, so results do not depend on threading.
double dot(const double* w, const double* x, long count) {
    double a0 = 0, a1 = 0, a2 = 0, a3 = 0;
    long j = 0;
    for (; j + 4 <= count; j += 4) {
        a0 += w[j] * x[j];
        a1 += w[j + 1] * x[j + 1];
        a2 += w[j + 2] * x[j + 2];
        a3 += w[j + 3] * x[j + 3];
    }
    for (; j < count; ++j) a0 += w[j] * x[j];
    return (a0 + a1) + (a2 + a3);
}

// sum_j w[j] x[-j], same grouping as dot.
double dot_reversed(const double* w, const double* x, long count) {
    double a0 = 0, a1 = 0, a2 = 0, a3 = 0;
    long j = 0;
    for (; j + 4 <= count; j += 4) {
        a0 += w[j] * x[-j];
        a1 += w[j + 1] * x[-j - 1];
        a2 += w[j + 2] * x[-j - 2];
        a3 += w[j + 3] * x[-j - 3];
    }
    for (; j < count; ++j) a0 += w[j] * x[-j];
    return (a0 + a1) + (a2 + a3);
}

double norm2(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

Grid1D::Grid1D(double xmin, double xmax, std::size_t n) : xmin_(xmin), xmax_(xmax), n_(n) {
    if (n < 2) throw InputError("grid needs at least two nodes");
    if (!(xmax > xmin) || !std::isfinite(xmin) || !std::isfinite(xmax)) throw InputError("grid window must be a finite interval");
    h_ = (xmax - xmin) / static_cast<double>(n - 1);
}

double Grid1D::interpolate(const std::vector<double>& values, double x) const {
    double pos = (x - xmin_) / h_;
    if (!(pos > -1 && pos < static_cast<double>(n_))) return 0;
    double cell = std::floor(pos);
    double theta = pos - cell;
    long j = static_cast<long>(cell);
    auto at = [&](long i) { return i >= 0 && i < static_cast<long>(n_) ? values[static_cast<std::size_t>(i)] : 0.0; };
    return (1 - theta) * at(j) + theta * at(j + 1);
}

Stencil term_stencil(const DiscretizedOperator& op, std::size_t term) {
    check_operator(op);
    const long n = static_cast<long>(op.grid.size());
    const double h = op.grid.spacing();
    // Offsets o with |o| <= n - 1 touch at least one node; index o + n.
    std::vector<double> dense(static_cast<std::size_t>(2 * n + 1), 0.0);
    for_each_node(op, op.terms.at(term), [&](double d, double weight) {
        double x = d / h;
        if (!(x > -static_cast<double>(n) - 1 && x < static_cast<double>(n))) return;
        double cell = std::floor(x);
        double theta = x - cell;
        long m = static_cast<long>(cell);
        // f(x_i - d) = (1 - theta) f_{i-m} + theta f_{i-m-1}
        if (m >= -n && m <= n) dense[static_cast<std::size_t>(m + n)] += (1 - theta) * weight;
        if (m + 1 >= -n && m + 1 <= n) dense[static_cast<std::size_t>(m + 1 + n)] += theta * weight;
    });
    long lo = 1, hi = -1;
    for (long o = -(n - 1); o <= n - 1; ++o) {
        if (dense[static_cast<std::size_t>(o + n)] == 0) continue;
        if (lo > hi) lo = o;
        hi = o;
    }
    Stencil s;
    if (lo > hi) return s;
    s.first = lo;
    s.weights.assign(dense.begin() + (lo + n), dense.begin() + (hi + n + 1));
    return s;
}

namespace {

Stencil add_stencils(const std::vector<Stencil>& parts) {
    long lo = 0, hi = -1;
    bool any = false;
    for (const auto& p : parts) {
        if (p.weights.empty()) continue;
        long plo = p.first, phi = p.first + static_cast<long>(p.weights.size()) - 1;
        lo = any ? std::min(lo, plo) : plo;
        hi = any ? std::max(hi, phi) : phi;
        any = true;
    }
    Stencil out;
    if (!any) return out;
    out.first = lo;
    out.weights.assign(static_cast<std::size_t>(hi - lo + 1), 0.0);
    for (const auto& p : parts)
        for (std::size_t j = 0; j < p.weights.size(); ++j) out.weights[static_cast<std::size_t>(p.first - lo) + j] += p.weights[j];
    return out;
}

}  // namespace

Stencil operator_stencil(const DiscretizedOperator& op) {
    std::vector<Stencil> parts(op.terms.size());
    for (std::size_t k = 0; k < op.terms.size(); ++k) parts[k] = term_stencil(op, k);
    return add_stencils(parts);
}

std::vector<double> apply_stencil(const Stencil& s, const std::vector<double>& f) {
    const long n = static_cast<long>(f.size());
    const long w = static_cast<long>(s.weights.size());
    std::vector<double> out(f.size(), 0.0);
    parallel_rows(f.size(), static_cast<double>(n) * static_cast<double>(w), [&](std::size_t begin, std::size_t end) {
        for (long i = static_cast<long>(begin); i < static_cast<long>(end); ++i) {
            // index i - first - j in [0, n)
            long jlo = std::max(0L, i - s.first - n + 1), jhi = std::min(w - 1, i - s.first);
            out[static_cast<std::size_t>(i)] = dot_reversed(s.weights.data() + jlo, f.data() + (i - s.first - jlo), jhi - jlo + 1);
        }
    });
    return out;
}

std::vector<double> apply_stencil_transpose(const Stencil& s, const std::vector<double>& g) {
    const long n = static_cast<long>(g.size());
    const long w = static_cast<long>(s.weights.size());
    std::vector<double> out(g.size(), 0.0);
    parallel_rows(g.size(), static_cast<double>(n) * static_cast<double>(w), [&](std::size_t begin, std::size_t end) {
        for (long l = static_cast<long>(begin); l < static_cast<long>(end); ++l) {
            // index l + first + j in [0, n)
            long jlo = std::max(0L, -l - s.first), jhi = std::min(w - 1, n - 1 - l - s.first);
            out[static_cast<std::size_t>(l)] = dot(s.weights.data() + jlo, g.data() + (l + s.first + jlo), jhi - jlo + 1);
        }
    });
    return out;
}

std::vector<double> apply_operator(const DiscretizedOperator& op, const std::vector<double>& f) {
    if (f.size() != op.grid.size()) throw InputError("grid function has the wrong length");
    return apply_stencil(operator_stencil(op), f);
}

std::vector<double> apply_operator_direct(const DiscretizedOperator& op, const std::vector<double>& f) {
    check_operator(op);
    if (f.size() != op.grid.size()) throw InputError("grid function has the wrong length");
    std::vector<std::pair<double, double>> nodes;
    for (const auto& term : op.terms) for_each_node(op, term, [&](double d, double w) { nodes.push_back({d, w}); });
    std::vector<double> out(f.size(), 0.0);
    for (std::size_t i = 0; i < f.size(); ++i) {
        double x = op.grid.node(i), acc = 0;
        for (auto [d, w] : nodes) acc += w * op.grid.interpolate(f, x - d);
        out[i] = acc;
    }
    return out;
}

NormEstimate operator_norm(const Stencil& s, std::size_t n, int max_iters, double tol) {
    if (n < 1 || max_iters < 1 || !(tol > 0)) throw InputError("invalid power iteration parameters");
    NormEstimate est;
    std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
    double previous = 0;
    for (int it = 1; it <= max_iters; ++it) {
        auto w = apply_stencil(s, v);
        // |v| = 1, so |T v| is the Rayleigh estimate of the top singular value.
        double sigma = norm2(w);
        est.value = std::max(est.value, sigma);
        est.iterations = it;
        if (sigma == 0) {
            est.converged = true;
            return est;
        }
        if (it > 1 && std::fabs(sigma - previous) <= tol * sigma) {
            est.converged = true;
            return est;
        }
        previous = sigma;
        auto z = apply_stencil_transpose(s, w);
        double nz = norm2(z);
        if (nz == 0) {
            est.converged = true;
            return est;
        }
        for (std::size_t i = 0; i < n; ++i) v[i] = z[i] / nz;
    }
    return est;
}

NormEstimate operator_norm(const DiscretizedOperator& op, int max_iters, double tol) {
    return operator_norm(operator_stencil(op), op.grid.size(), max_iters, tol);
}

std::string to_string(GrowthCase c) {
    switch (c) {
        case GrowthCase::Kitty: return "kitty";
        case GrowthCase::Know: return "know";
        case GrowthCase::Billy: return "billy";
    }
    return "?";
}

GrowthCase parse_growth_case(const std::string& name) {
    if (name == "kitty") return GrowthCase::Kitty;
    if (name == "know") return GrowthCase::Know;
    if (name == "billy") return GrowthCase::Billy;
    throw InputError("unknown experiment case '" + name + "' (expected kitty, know or billy)");
}

GrowthConfig default_growth_config(GrowthCase c) {
    // Linear interpolation errs by about (xi h)^2 / 12 at the symbol peak
    // xi ~ 1 / displacement, so each window is sized to the displacements of
    // its case: about 64 cells per unit displacement at n = 2048.
    GrowthConfig cfg;
    cfg.which = c;
    switch (c) {
        case GrowthCase::Kitty:
            cfg.window = 2.0;
            break;
        case GrowthCase::Know:
            // Displacements scale like a^2.
            cfg.support = 0.125;
            cfg.window = 0.125;
            break;
        case GrowthCase::Billy:
            cfg.window = 4.0;
            break;
    }
    return cfg;
}

DiscretizedOperator growth_operator(const GrowthConfig& cfg, int max_order) {
    if (max_order < 0) throw InputError("M must be nonnegative");
    if (cfg.which == GrowthCase::Know && (cfg.scale_l < 0 || cfg.scale_l > 1000)) throw InputError("L must be in 0..1000");
    if (!(cfg.window > 0)) throw InputError("grid window must be positive");
    auto phi = moment_bump(cfg.support, 1, {}).bump;
    TensorBump atom({phi, phi});

    const Polynomial s = Polynomial::variable(2, 0), t = Polynomial::variable(2, 1);
    Polynomial flow = s * t;
    if (cfg.which == GrowthCase::Know) {
        Rational c(1);
        for (int i = 0; i < cfg.scale_l; ++i) c /= 2;
        flow += c * (s * s * s) + c * (t * t * t);
    } else if (cfg.which == GrowthCase::Billy) {
        flow += s;
    }

    DiscretizedOperator op{flow, {}, cfg.quad_order, Grid1D(-cfg.window, cfg.window, cfg.grid_n)};
    for (int k = 0; k <= max_order; ++k) {
        std::array<double, 2> scale{std::ldexp(1.0, k), std::ldexp(1.0, -k)};
        if (cfg.which == GrowthCase::Billy) std::swap(scale[0], scale[1]);
        op.terms.push_back({atom, scale});
    }
    return op;
}

GrowthResult growth_experiment(const GrowthConfig& cfg, const std::vector<int>& orders) {
    if (orders.empty()) throw InputError("no M values requested");
    int top = 0;
    for (int m : orders) {
        if (m < 0) throw InputError("M must be nonnegative");
        top = std::max(top, m);
    }
    auto op = growth_operator(cfg, top);
    check_operator(op);
    if (cfg.max_iters < 1 || !(cfg.tol > 0)) throw InputError("invalid power iteration parameters");
    std::vector<Stencil> parts(op.terms.size());
    std::vector<std::exception_ptr> failures(op.terms.size());
    {
        std::vector<std::jthread> pool;
        for (std::size_t k = 0; k < parts.size(); ++k)
            pool.emplace_back([&, k] {
                try {
                    parts[k] = term_stencil(op, k);
                } catch (...) {
                    failures[k] = std::current_exception();
                }
            });
    }
    for (const auto& f : failures)
        if (f) std::rethrow_exception(f);
    auto norm_at = [&](int m) {
        std::vector<Stencil> prefix(parts.begin(), parts.begin() + m + 1);
        return operator_norm(add_stencils(prefix), op.grid.size(), cfg.max_iters, cfg.tol);
    };

    GrowthResult result{cfg, {}};
    NormEstimate base = norm_at(0);
    for (int m : orders) {
        GrowthRow row;
        row.m = m;
        row.norm = m == 0 ? base : norm_at(m);
        row.ratio = base.value > 0 ? row.norm.value / base.value : 0;
        result.rows.push_back(row);
    }
    return result;
}

}  // namespace mprt
