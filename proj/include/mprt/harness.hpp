#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "mprt/bumps.hpp"
#include "mprt/polynomial.hpp"

namespace mprt {

/// Uniform nodes xmin = x_0 < ... < x_{n-1} = xmax. A grid function is
/// sum_j f_j hat_j with hat_j the piecewise-linear hat at x_j, i.e. the nodal
/// values extended by zero.
class Grid1D {
public:
    Grid1D(double xmin, double xmax, std::size_t n);

    double xmin() const noexcept { return xmin_; }
    double xmax() const noexcept { return xmax_; }
    std::size_t size() const noexcept { return n_; }
    double spacing() const noexcept { return h_; }
    double node(std::size_t i) const noexcept { return xmin_ + static_cast<double>(i) * h_; }

    /// sum_j values[j] hat_j(x).
    double interpolate(const std::vector<double>& values, double x) const;

private:
    double xmin_, xmax_;
    std::size_t n_;
    double h_;
};

/// One term atom^{(scale)}(s,t) of a two-parameter dyadic sum.
struct DyadicTerm {
    TensorBump atom;
    std::array<double, 2> scale;
};

/// T f(x) = sum_terms integral f(x - p(s,t)) atom^{(scale)}(s,t) ds dt.
/// Each term is integrated in u = scale * (s,t), where it reads
/// integral f(x - p(u_1/scale_1, u_2/scale_2)) atom(u) du.
struct DiscretizedOperator {
    Polynomial flow;
    std::vector<DyadicTerm> terms;
    int quad_order = 24;
    Grid1D grid;
};

/// Weights of a translation-invariant operator on the grid:
/// (T f)_i = sum_j weights[j] f_{i - first - j}, zero-extended.
struct Stencil {
    long first = 0;
    std::vector<double> weights;
};

/// Stencil of one term. Offsets whose shift leaves the window for every node
/// are dropped. Identical (flow, atom, normalized nodes) give identical bits.
Stencil term_stencil(const DiscretizedOperator& op, std::size_t term);

/// Sum of the term stencils, accumulated in term order.
Stencil operator_stencil(const DiscretizedOperator& op);

std::vector<double> apply_stencil(const Stencil& s, const std::vector<double>& f);
std::vector<double> apply_stencil_transpose(const Stencil& s, const std::vector<double>& g);

std::vector<double> apply_operator(const DiscretizedOperator& op, const std::vector<double>& f);

/// Node-by-node evaluation of the defining sum with the grid interpolant.
std::vector<double> apply_operator_direct(const DiscretizedOperator& op, const std::vector<double>& f);

struct NormEstimate {
    double value = 0;
    int iterations = 0;
    bool converged = false;
};

/// Largest singular value by power iteration on T^T T from the all-ones seed;
/// stops when successive estimates agree to `tol` relatively.
NormEstimate operator_norm(const Stencil& s, std::size_t n, int max_iters = 20000, double tol = 1e-9);
NormEstimate operator_norm(const DiscretizedOperator& op, int max_iters = 20000, double tol = 1e-9);

enum class GrowthCase { Kitty, Know, Billy };

std::string to_string(GrowthCase c);
GrowthCase parse_growth_case(const std::string& name);

struct GrowthConfig {
    GrowthCase which = GrowthCase::Kitty;
    int scale_l = 20;              // L, used by know only
    double support = 0.5;          // a: phi = moment bump on (0, a)
    double window = 8.0;           // grid [-window, window]
    std::size_t grid_n = 2048;
    int quad_order = 24;
    int max_iters = 20000;
    double tol = 1e-9;
};

/// Defaults per case: kitty a = 1/2 on [-2, 2]; know a = 1/8 on [-1/8, 1/8];
/// billy a = 1/2 on [-4, 4].
GrowthConfig default_growth_config(GrowthCase c);

/// The operator T_M of a case.
///   kitty: p = s t,                          scales (2^k, 2^-k)
///   know:  p = 2^-L s^3 + 2^-L t^3 + s t,    scales (2^k, 2^-k)
///   billy: p = s + s t,                      scales (2^-k, 2^k)
/// for k = 0..M, every term with atom phi (x) phi.
DiscretizedOperator growth_operator(const GrowthConfig& cfg, int max_order);

struct GrowthRow {
    int m = 0;
    NormEstimate norm;
    double ratio = 0;
};

struct GrowthResult {
    GrowthConfig config;
    std::vector<GrowthRow> rows;
};

/// Norms of T_M for each M in `orders`, with ratios to the norm of T_0.
GrowthResult growth_experiment(const GrowthConfig& cfg, const std::vector<int>& orders);

}  // namespace mprt
