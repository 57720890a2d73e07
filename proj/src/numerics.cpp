#include "cfmm/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cfmm/error.hpp"

namespace cfmm {

PriceGrid make_log_grid(double p_min, double p_max, std::size_t n, std::size_t min_points) {
    if (!(p_min > 0.0) || !(p_max > p_min) || !std::isfinite(p_max) || n < min_points || n < 2) {
        throw Error(ErrorKind::invalid_bounds,
                    "need 0 < p_min < p_max and n >= " + std::to_string(min_points));
    }
    PriceGrid g;
    const double lo = std::log(p_min);
    const double hi = std::log(p_max);
    g.log_step_ = (hi - lo) / static_cast<double>(n - 1);
    g.logs_.resize(n);
    g.points_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        g.logs_[i] = lo + g.log_step_ * static_cast<double>(i);
        g.points_[i] = std::exp(g.logs_[i]);
    }
    g.logs_.back() = hi;
    g.points_.front() = p_min;
    g.points_.back() = p_max;
    return g;
}

PriceGrid default_grid() { return make_log_grid(1e-4, 1e4, 2001); }

std::size_t PriceGrid::cell(double p) const {
    const double u = std::log(p);
    const double pos = (u - logs_.front()) / log_step_;
    if (!(pos > 0.0)) return 0;
    auto i = static_cast<std::size_t>(pos);
    return std::min(i, points_.size() - 2);
}

bool PriceGrid::same_as(const PriceGrid& other) const {
    return points_.size() == other.points_.size() && p_min() == other.p_min() &&
           p_max() == other.p_max();
}

PriceGrid PriceGrid::refined() const { return make_log_grid(p_min(), p_max(), 2 * size() - 1); }

namespace {

void require_aligned(const PriceGrid& grid, std::size_t len) {
    if (len != grid.size()) {
        throw Error(ErrorKind::length_mismatch, "expected " + std::to_string(grid.size()) +
                                                    " samples, got " + std::to_string(len));
    }
}

double weight_factor(Weight w, double p) {
    switch (w) {
        case Weight::one: return 1.0;
        case Weight::inv_p: return 1.0 / p;
        case Weight::inv_p2: return 1.0 / (p * p);
    }
    return 1.0;
}

// Integrand in ln p coordinates: g(u) = f(p) * p.
template <typename F>
double trapezoid(const PriceGrid& grid, F&& f_at) {
    const auto logs = grid.log_points();
    double sum = 0.0;
    double prev = f_at(0) * grid[0];
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double cur = f_at(i) * grid[i];
        sum += 0.5 * (prev + cur) * (logs[i] - logs[i - 1]);
        prev = cur;
    }
    return sum;
}

}  // namespace

double integrate_log(const PriceGrid& grid, std::span<const double> values, Weight weight) {
    require_aligned(grid, values.size());
    return trapezoid(grid, [&](std::size_t i) { return values[i] * weight_factor(weight, grid[i]); });
}

double integrate_log(const PriceGrid& grid, std::span<const double> values, std::span<const double> weight) {
    require_aligned(grid, values.size());
    require_aligned(grid, weight.size());
    return trapezoid(grid, [&](std::size_t i) { return values[i] * weight[i]; });
}

double integrate_log_between(const PriceGrid& grid, std::span<const double> f, double lo, double hi) {
    require_aligned(grid, f.size());
    if (hi < lo) return -integrate_log_between(grid, f, hi, lo);
    lo = std::clamp(lo, grid.p_min(), grid.p_max());
    hi = std::clamp(hi, grid.p_min(), grid.p_max());
    if (!(hi > lo)) return 0.0;

    const auto logs = grid.log_points();
    auto g_at = [&](std::size_t i) { return f[i] * grid[i]; };
    auto g_interp = [&](std::size_t cell, double u) {
        const double t = (u - logs[cell]) / (logs[cell + 1] - logs[cell]);
        return g_at(cell) + t * (g_at(cell + 1) - g_at(cell));
    };

    const double ulo = std::log(lo);
    const double uhi = std::log(hi);
    const std::size_t c_lo = grid.cell(lo);
    const std::size_t c_hi = grid.cell(hi);
    if (c_lo == c_hi) {
        return 0.5 * (g_interp(c_lo, ulo) + g_interp(c_lo, uhi)) * (uhi - ulo);
    }
    double sum = 0.5 * (g_interp(c_lo, ulo) + g_at(c_lo + 1)) * (logs[c_lo + 1] - ulo);
    for (std::size_t i = c_lo + 1; i < c_hi; ++i) {
        sum += 0.5 * (g_at(i) + g_at(i + 1)) * (logs[i + 1] - logs[i]);
    }
    sum += 0.5 * (g_at(c_hi) + g_interp(c_hi, uhi)) * (uhi - logs[c_hi]);
    return sum;
}

std::vector<double> cumulative_log(const PriceGrid& grid, std::span<const double> f) {
    require_aligned(grid, f.size());
    const auto logs = grid.log_points();
    std::vector<double> out(grid.size(), 0.0);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        out[i] = out[i - 1] + 0.5 * (f[i - 1] * grid[i - 1] + f[i] * grid[i]) * (logs[i] - logs[i - 1]);
    }
    return out;
}

std::vector<double> cumulative_log_cubic(const PriceGrid& grid, std::span<const double> f,
                                         std::span<const std::size_t> kinks) {
    require_aligned(grid, f.size());
    const std::size_t n = grid.size();
    std::vector<double> g(n);
    std::vector<char> kink(n, 0);
    for (std::size_t i = 0; i < n; ++i) g[i] = f[i] * grid[i];
    for (std::size_t k : kinks) {
        if (k < n) kink[k] = 1;
    }
    // a stencil on [a, b] needs positive samples and no kink strictly inside
    const auto usable = [&](std::size_t a, std::size_t b) {
        for (std::size_t j = a; j <= b; ++j) {
            if (!(g[j] > 0.0) || (j > a && j < b && kink[j])) return false;
        }
        return true;
    };
    const double h = grid.log_step();
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double step = 0.5 * h * (g[i] + g[i + 1]);
        if (i >= 1 && i + 2 < n && usable(i - 1, i + 2)) {
            step = h / 24.0 * (13.0 * (g[i] + g[i + 1]) - g[i - 1] - g[i + 2]);
        } else if (i + 2 < n && usable(i, i + 2)) {
            step = h / 12.0 * (5.0 * g[i] + 8.0 * g[i + 1] - g[i + 2]);
        } else if (i >= 1 && usable(i - 1, i + 1)) {
            step = h / 12.0 * (5.0 * g[i + 1] + 8.0 * g[i] - g[i - 1]);
        }
        out[i + 1] = out[i] + step;
    }
    return out;
}

TailIntegrals power_law_tails(const PriceGrid& grid, std::span<const double> f) {
    require_aligned(grid, f.size());
    const double inf = std::numeric_limits<double>::infinity();
    const std::size_t n = grid.size();
    TailIntegrals t;

    const double f0 = f[0], f1 = f[1];
    if (f0 > 0.0 && f1 > 0.0) {
        const double b = std::log(f1 / f0) / (grid.log_points()[1] - grid.log_points()[0]);
        t.below = (b > -1.0) ? f0 * grid.p_min() / (b + 1.0) : inf;
    }
    const double fn = f[n - 1], fm = f[n - 2];
    if (fn > 0.0 && fm > 0.0) {
        const double b = std::log(fn / fm) / (grid.log_points()[n - 1] - grid.log_points()[n - 2]);
        t.above = (b < -1.0) ? fn * grid.p_max() / (-1.0 - b) : inf;
    }
    return t;
}

double integrate_positive_axis(const PriceGrid& grid, std::span<const double> f, TailMode tails) {
    const double body = integrate_log(grid, f);
    if (tails == TailMode::truncate) return body;
    return body + power_law_tails(grid, f).total();
}

double bisect(const std::function<double(double)>& fn, double lo, double hi, double tol) {
    double f_lo = fn(lo);
    const double f_hi = fn(hi);
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;
    if ((f_lo > 0.0) == (f_hi > 0.0)) {
        throw Error(ErrorKind::no_bracket, "function has the same sign at both ends of the bracket");
    }
    for (int it = 0; it < 2000 && (hi - lo) > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double f_mid = fn(mid);
        if (f_mid == 0.0) return mid;
        if ((f_mid > 0.0) == (f_lo > 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

GaussLegendre gauss_legendre(std::size_t n) {
    GaussLegendre rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
                p0 = p1;
                p1 = pk;
            }
            if (n == 1) p0 = 1.0;
            dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    if (x_.size() != y_.size() || x_.size() < 2) {
        throw Error(ErrorKind::length_mismatch, "monotone cubic needs matching x/y with >= 2 points");
    }
    const std::size_t n = x_.size();
    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x_[i + 1] - x_[i];
        delta[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    d_.assign(n, 0.0);
    d_[0] = delta[0];
    d_[n - 1] = delta[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) {
            d_[i] = 0.0;
        } else {
            // weighted harmonic mean (Fritsch-Butland form)
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    // end slopes must not overshoot
    for (std::size_t e : {std::size_t{0}, n - 1}) {
        const double del = (e == 0) ? delta[0] : delta[n - 2];
        if (d_[e] * del <= 0.0) d_[e] = 0.0;
        else if (std::abs(d_[e]) > 3.0 * std::abs(del)) d_[e] = 3.0 * del;
    }
}

double MonotoneCubic::operator()(double x) const {
    if (x <= x_.front()) return y_.front();
    if (x >= x_.back()) return y_.back();
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y_[i] + (t3 - 2 * t2 + t) * h * d_[i] + (-2 * t3 + 3 * t2) * y_[i + 1] +
           (t3 - t2) * h * d_[i + 1];
}

double MonotoneCubic::derivative(double x) const {
    if (x < x_.front() || x > x_.back()) return 0.0;
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = static_cast<std::size_t>(it - x_.begin());
    i = std::clamp<std::size_t>(i, 1, x_.size() - 1) - 1;
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t;
    return ((6 * t2 - 6 * t) * y_[i] + (3 * t2 - 4 * t + 1) * h * d_[i] + (-6 * t2 + 6 * t) * y_[i + 1] +
            (3 * t2 - 2 * t) * h * d_[i + 1]) /
           h;
}

double MonotoneCubic::inverse(double y) const {
    if (y <= y_.front()) return x_.front();
    if (y >= y_.back()) return x_.back();
    // locate the bracketing knot interval, then bisect inside it
    const auto it = std::lower_bound(y_.begin(), y_.end(), y);
    const std::size_t hi_i = static_cast<std::size_t>(it - y_.begin());
    double lo = x_[hi_i - 1], hi = x_[hi_i];
    for (int k = 0; k < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++k) {
        const double mid = 0.5 * (lo + hi);
        if ((*this)(mid) < y) lo = mid;
        else hi = mid;
    }
    return hi;
}

double interp_loglog(const PriceGrid& grid, std::span<const double> f, double p, bool zero_outside) {
    require_aligned(grid, f.size());
    const auto logs = grid.log_points();
    const double u = std::log(p);
    const std::size_t n = grid.size();
    if (u < logs[0] || u > logs[n - 1]) {
        if (zero_outside) return 0.0;
        const bool low = u < logs[0];
        const std::size_t a = low ? 0 : n - 2;
        const std::size_t edge = low ? 0 : n - 1;
        if (!(f[a] > 0.0) || !(f[a + 1] > 0.0)) return f[edge];
        const double b = std::log(f[a + 1] / f[a]) / (logs[a + 1] - logs[a]);
        return f[edge] * std::exp(b * (u - logs[edge]));
    }
    const std::size_t c = grid.cell(p);
    const double t = std::clamp((u - logs[c]) / (logs[c + 1] - logs[c]), 0.0, 1.0);
    if (f[c] > 0.0 && f[c + 1] > 0.0) {
        return std::exp(std::log(f[c]) + t * (std::log(f[c + 1]) - std::log(f[c])));
    }
    return f[c] + t * (f[c + 1] - f[c]);
}

}  // namespace cfmm
