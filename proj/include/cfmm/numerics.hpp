#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace cfmm {

/// Log-uniform grid of exchange rates (units of Y per X).
class PriceGrid {
public:
    PriceGrid() = default;

    std::span<const double> points() const { return points_; }
    std::span<const double> log_points() const { return logs_; }
    double operator[](std::size_t i) const { return points_[i]; }
    std::size_t size() const { return points_.size(); }
    double p_min() const { return points_.front(); }
    double p_max() const { return points_.back(); }
    double log_step() const { return log_step_; }

    /// Index i with points[i] <= p < points[i+1], clamped to [0, n-2].
    std::size_t cell(double p) const;

    /// True when both grids were built from identical (p_min, p_max, n).
    bool same_as(const PriceGrid& other) const;

    /// Grid with twice the cell count over the same bounds.
    PriceGrid refined() const;

    friend PriceGrid make_log_grid(double p_min, double p_max, std::size_t n, std::size_t min_points);

private:
    std::vector<double> points_;
    std::vector<double> logs_;
    double log_step_ = 0.0;
};

/// Throws ErrorKind::invalid_bounds unless 0 < p_min < p_max and n >= min_points.
PriceGrid make_log_grid(double p_min, double p_max, std::size_t n, std::size_t min_points = 16);

/// Default working grid: [1e-4, 1e4] with 2001 points.
PriceGrid default_grid();

enum class Weight { one, inv_p, inv_p2 };

/// Trapezoid rule in ln p: int f(p) dp = int f(p) p d(ln p), over [p_min, p_max].
double integrate_log(const PriceGrid& grid, std::span<const double> values, Weight weight = Weight::one);

/// Same as above with a caller-supplied pointwise weight.
double integrate_log(const PriceGrid& grid, std::span<const double> values, std::span<const double> weight);

/// Integral of f over [lo, hi] (clamped to the grid) using the piecewise-linear-in-ln-p
/// interpolant of f(p)·p. Returns a signed value when hi < lo.
double integrate_log_between(const PriceGrid& grid, std::span<const double> f, double lo, double hi);

/// C[i] = integral of f from p_min to points[i].
std::vector<double> cumulative_log(const PriceGrid& grid, std::span<const double> f);

/// Higher-order variant of cumulative_log. Stencils never span a zero sample or a listed kink index,
/// falling back to one-sided quadratics and then the trapezoid, so support edges do not overshoot.
std::vector<double> cumulative_log_cubic(const PriceGrid& grid, std::span<const double> f,
                                         std::span<const std::size_t> kinks = {});

/// Power-law closures of int_0^{p_min} f dp and int_{p_max}^inf f dp, with the exponent
/// taken from the two outermost samples on each side. A divergent closure is +inf.
struct TailIntegrals {
    double below = 0.0;
    double above = 0.0;
    double total() const { return below + above; }
};

TailIntegrals power_law_tails(const PriceGrid& grid, std::span<const double> f);

enum class TailMode { truncate, power_law };

/// Integral of f over (0, inf): trapezoid on the grid plus optional tail closure.
double integrate_positive_axis(const PriceGrid& grid, std::span<const double> f,
                               TailMode tails = TailMode::power_law);

/// Root of a monotone function by bisection. Throws ErrorKind::no_bracket when
/// fn(lo) and fn(hi) share a sign.
double bisect(const std::function<double(double)>& fn, double lo, double hi, double tol);

struct GaussLegendre {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

GaussLegendre gauss_legendre(std::size_t n);

/// Integral over [a, b] with precomputed Gauss-Legendre nodes.
template <typename F>
double integrate_gl(const GaussLegendre& rule, double a, double b, F&& f) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    }
    return sum * half;
}

/// Fritsch-Carlson monotone cubic through (x_i, y_i), x strictly increasing.
/// Monotone data gives a monotone interpolant; evaluation clamps outside [x_0, x_n].
class MonotoneCubic {
public:
    MonotoneCubic() = default;
    MonotoneCubic(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;
    double derivative(double x) const;

    /// For nondecreasing data: smallest x in the table range with value(x) >= y, by bisection.
    double inverse(double y) const;

    bool empty() const { return x_.empty(); }

private:
    std::vector<double> x_, y_, d_;
};

/// Interpolates positive samples linearly in (ln p, ln f), falling back to linear in f when a
/// neighbour is zero. Outside the grid the end exponents are extended (power-law), or zero
/// when `zero_outside` is set.
double interp_loglog(const PriceGrid& grid, std::span<const double> f, double p, bool zero_outside = false);

}  // namespace cfmm
