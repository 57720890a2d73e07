#include "cfmm/belief.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "cfmm/error.hpp"

namespace cfmm {

namespace {

constexpr double kPi = std::numbers::pi;

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

// Linear interpolation in ln p, geometric between positive neighbours.
double interp_table(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (!(x >= xs.front() && x <= xs.back())) return 0.0;
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    std::size_t i = it == xs.end() ? xs.size() - 2 : static_cast<std::size_t>(it - xs.begin()) - 1;
    i = std::min(i, xs.size() - 2);
    const double t = (std::log(x) - std::log(xs[i])) / (std::log(xs[i + 1]) - std::log(xs[i]));
    if (ys[i] > 0.0 && ys[i + 1] > 0.0) {
        return std::exp((1.0 - t) * std::log(ys[i]) + t * std::log(ys[i + 1]));
    }
    return (1.0 - t) * ys[i] + t * ys[i + 1];
}

void check_axis(const std::vector<double>& axis, const char* name) {
    if (axis.size() < 2) throw Error(ErrorKind::invalid_params, std::string(name) + " needs at least 2 nodes");
    for (std::size_t i = 0; i < axis.size(); ++i) {
        if (!finite_positive(axis[i])) throw Error(ErrorKind::invalid_params, std::string(name) + " must be positive");
        if (i > 0 && !(axis[i] > axis[i - 1])) {
            throw Error(ErrorKind::invalid_params, std::string(name) + " must be strictly increasing");
        }
    }
}

double log_normal_pdf(double x, double mean, double var) {
    const double d = x - mean;
    return -0.5 * d * d / var - 0.5 * std::log(2.0 * kPi * var);
}

// A ray through the origin at angle theta, stored as (cos, sin) to keep precision near the axes.
struct Ray {
    double c, s;
    double ratio() const { return c / s; }
};

Ray ray_at_ratio(double p) {
    const double h = std::hypot(p, 1.0);
    return {p / h, 1.0 / h};
}

// Radial moments J_k = int_0^inf r^k psi(r cos, r sin) dr for k = 0, 1, 2.
using Moments = std::array<double, 3>;

struct RayIntegrator {
    const BeliefSpec& spec;
    GaussLegendre rule;
    std::size_t panels;

    Moments operator()(Ray ray) const {
        switch (spec.kind) {
        case BeliefKind::gbm_discounted: return gbm(ray);
        case BeliefKind::table_2d: return table(ray);
        default: return rectangle(ray);
        }
    }

    Moments rectangle(Ray ray) const {
        const double r_max = std::min(ray.c > 0.0 ? spec.P_X / ray.c : INFINITY,
                                      ray.s > 0.0 ? spec.P_Y / ray.s : INFINITY);
        Moments m{0.0, 0.0, 0.0};
        const double step = r_max / static_cast<double>(panels);
        for (std::size_t j = 0; j < panels; ++j) {
            const double a = step * static_cast<double>(j);
            const double half = 0.5 * step;
            const double mid = a + half;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                const double r = mid + half * rule.nodes[i];
                const double v = rule.weights[i] * half * eval_psi(spec, r * ray.c, r * ray.s);
                m[0] += v;
                m[1] += v * r;
                m[2] += v * r * r;
            }
        }
        return m;
    }

    Moments table(Ray ray) const {
        const Table2d& t = *spec.table;
        double lo = 0.0, hi = INFINITY;
        if (ray.c > 0.0) {
            lo = std::max(lo, t.px_axis().front() / ray.c);
            hi = std::min(hi, t.px_axis().back() / ray.c);
        }
        if (ray.s > 0.0) {
            lo = std::max(lo, t.py_axis().front() / ray.s);
            hi = std::min(hi, t.py_axis().back() / ray.s);
        }
        Moments m{0.0, 0.0, 0.0};
        if (!(hi > lo) || lo <= 0.0) return m;
        const double ua = std::log(lo), ub = std::log(hi);
        const double step = (ub - ua) / static_cast<double>(panels);
        for (std::size_t j = 0; j < panels; ++j) {
            const double half = 0.5 * step;
            const double mid = ua + step * static_cast<double>(j) + half;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                const double r = std::exp(mid + half * rule.nodes[i]);
                const double v = rule.weights[i] * half * r * t(r * ray.c, r * ray.s);
                m[0] += v;
                m[1] += v * r;
                m[2] += v * r * r;
            }
        }
        return m;
    }

    // Each time slice is a product of lognormals; along a ray it integrates in closed form.
    Moments gbm(Ray ray) const {
        Moments m{0.0, 0.0, 0.0};
        if (ray.c <= 0.0 || ray.s <= 0.0) return m;
        const GbmParams& g = spec.gbm;
        const GbmTimeRule& rule_t = *spec.time_rule;
        const double lc = std::log(ray.c), ls = std::log(ray.s);
        for (std::size_t n = 0; n < rule_t.t.size(); ++n) {
            const double t = rule_t.t[n];
            const double v1 = g.sigma_X * g.sigma_X * t;
            const double v2 = g.sigma_Y * g.sigma_Y * t;
            const double m1 = std::log(g.P_X) + (g.mu_X - 0.5 * g.sigma_X * g.sigma_X) * t - lc;
            const double m2 = std::log(g.P_Y) + (g.mu_Y - 0.5 * g.sigma_Y * g.sigma_Y) * t - ls;
            const double vs = v1 + v2;
            const double v = v1 * v2 / vs;
            const double mu = (m1 * v2 + m2 * v1) / vs;
            const double base = std::log(rule_t.weight[n]) + log_normal_pdf(m1 - m2, 0.0, vs) - lc - ls;
            for (int k = 0; k < 3; ++k) {
                const double a = static_cast<double>(k - 1);
                m[k] += std::exp(base + a * mu + 0.5 * a * a * v);
            }
        }
        return m;
    }
};

// Integral of f(d) over (0, d0], with panels graded geometrically toward d = 0.
template <typename F>
double graded_integral(double d0, const GaussLegendre& rule, F&& f) {
    double sum = 0.0;
    double hi = d0;
    for (int j = 0; j < 48; ++j) {
        const double lo = 0.5 * hi;
        sum += integrate_gl(rule, lo, hi, f);
        hi = lo;
    }
    return sum + integrate_gl(rule, 0.0, hi, f);
}

// Grid index of the corner ray p = P_X / P_Y, where rectangle moments have a slope kink.
std::vector<std::size_t> corner_kink(const PriceGrid& grid, double p0) {
    const double u = (std::log(p0) - grid.log_points().front()) / grid.log_step();
    const double k = std::round(u);
    if (k < 0.0 || k >= static_cast<double>(grid.size()) || std::abs(u - k) > 1e-6) return {};
    return {static_cast<std::size_t>(k)};
}

template <typename MomentFn>
BeliefSummary summarize(const PriceGrid& grid, MomentFn&& moments, std::span<const std::size_t> kinks = {}) {
    const std::size_t n = grid.size();
    BeliefSummary out = BeliefSummary::empty(grid);
    std::vector<double> i1(n), i2(n), pi2(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double p = grid[i];
        const Ray ray = ray_at_ratio(p);
        const Moments j = moments(ray);
        // Change of variables dtheta = sin^2(theta) dp.
        out.w[i] = ray.s * j[0];
        i1[i] = ray.s * ray.s * j[1];
        i2[i] = ray.s * ray.s * ray.s * j[2];
        pi2[i] = p * i2[i];
    }

    const GaussLegendre tail_rule = gauss_legendre(16);
    // Below p_min: theta = pi/2 - d, so (cos, sin) = (sin d, cos d).
    const auto lower = [&](double d, int k, bool weight_cos) {
        const Ray ray{std::sin(d), std::cos(d)};
        const Moments j = moments(ray);
        return weight_cos ? ray.c * j[k] : j[k];
    };
    const auto upper = [&](double d, int k, bool weight_sin) {
        const Ray ray{std::cos(d), std::sin(d)};
        const Moments j = moments(ray);
        return weight_sin ? ray.s * j[k] : j[k];
    };
    const double d_low = std::atan(grid.p_min());
    const double d_high = std::atan(1.0 / grid.p_max());

    const double mass_below = graded_integral(d_low, tail_rule, [&](double d) { return lower(d, 1, false); });
    const double mass_above = graded_integral(d_high, tail_rule, [&](double d) { return upper(d, 1, false); });
    const double mx_below = graded_integral(d_low, tail_rule, [&](double d) { return lower(d, 2, true); });
    const double my_above = graded_integral(d_high, tail_rule, [&](double d) { return upper(d, 2, true); });

    const std::vector<double> cx = cumulative_log_cubic(grid, pi2, kinks);
    const std::vector<double> cy = cumulative_log_cubic(grid, i2, kinks);
    for (std::size_t i = 0; i < n; ++i) {
        out.m_X[i] = mx_below + cx[i];
        out.m_Y[i] = my_above + (cy.back() - cy[i]);
    }
    out.mass_outside_grid = mass_below + mass_above;
    out.mass = cumulative_log_cubic(grid, i1, kinks).back() + out.mass_outside_grid;
    out.m_X_total = out.m_X.back() +
                    graded_integral(d_high, tail_rule, [&](double d) { return upper(d, 2, false) * std::cos(d); });
    out.m_Y_total = out.m_Y.front() +
                    graded_integral(d_low, tail_rule, [&](double d) { return lower(d, 2, false) * std::cos(d); });

    if (!std::isfinite(out.mass)) throw Error(ErrorKind::invalid_params, "belief mass is not finite");
    if (!(out.mass > 0.0)) throw Error(ErrorKind::zero_mass, "belief integrates to zero");
    return out;
}

}  // namespace

RatioDensity RatioDensity::from_function(std::function<double(double)> h, std::vector<double> breakpoints) {
    RatioDensity d;
    d.fn_ = std::move(h);
    std::sort(breakpoints.begin(), breakpoints.end());
    d.breakpoints_ = std::move(breakpoints);
    return d;
}

RatioDensity RatioDensity::from_table(std::vector<double> p, std::vector<double> h) {
    if (p.size() != h.size()) throw Error(ErrorKind::length_mismatch, "ratio table columns differ in length");
    check_axis(p, "ratio table p");
    for (double v : h) {
        if (!std::isfinite(v) || v < 0.0) throw Error(ErrorKind::invalid_params, "ratio density must be non-negative");
    }
    RatioDensity d;
    d.breakpoints_ = {p.front(), p.back()};
    d.table_p_ = std::move(p);
    d.table_h_ = std::move(h);
    return d;
}

RatioDensity RatioDensity::constant(double value) {
    return from_function([value](double) { return value; });
}

RatioDensity RatioDensity::indicator(double p_lo, double p_hi) {
    if (!finite_positive(p_lo) || !(p_hi > p_lo) || !std::isfinite(p_hi)) {
        throw Error(ErrorKind::invalid_params, "indicator range must satisfy 0 < lo < hi");
    }
    return from_function([p_lo, p_hi](double p) { return p >= p_lo && p <= p_hi ? 1.0 : 0.0; }, {p_lo, p_hi});
}

RatioDensity RatioDensity::lognormal(double sigma) {
    if (!finite_positive(sigma)) throw Error(ErrorKind::invalid_params, "lognormal sigma must be positive");
    return from_function([sigma](double p) {
        if (p <= 0.0) return 0.0;
        const double l = std::log(p);
        return std::exp(-l * l / (2.0 * sigma * sigma)) / (p * sigma * std::sqrt(2.0 * kPi));
    });
}

double RatioDensity::operator()(double p) const {
    if (fn_) return fn_(p);
    if (!table_p_.empty()) return interp_table(table_p_, table_h_, p);
    return 0.0;
}

Table2d::Table2d(std::vector<double> px_axis, std::vector<double> py_axis, std::vector<double> psi)
    : px_(std::move(px_axis)), py_(std::move(py_axis)), psi_(std::move(psi)) {
    check_axis(px_, "p_x axis");
    check_axis(py_, "p_y axis");
    if (psi_.size() != px_.size() * py_.size()) {
        throw Error(ErrorKind::length_mismatch, "psi table does not fill the p_x by p_y grid");
    }
    for (double v : psi_) {
        if (!std::isfinite(v) || v < 0.0) throw Error(ErrorKind::invalid_params, "psi table must be non-negative");
    }
    lx_.resize(px_.size());
    ly_.resize(py_.size());
    std::transform(px_.begin(), px_.end(), lx_.begin(), [](double v) { return std::log(v); });
    std::transform(py_.begin(), py_.end(), ly_.begin(), [](double v) { return std::log(v); });
}

double Table2d::operator()(double p_x, double p_y) const {
    if (!(p_x >= px_.front() && p_x <= px_.back() && p_y >= py_.front() && p_y <= py_.back())) return 0.0;
    const double ux = std::log(p_x), uy = std::log(p_y);
    const auto locate = [](const std::vector<double>& axis, double u) {
        auto it = std::upper_bound(axis.begin(), axis.end(), u);
        std::size_t i = it == axis.begin() ? 0 : static_cast<std::size_t>(it - axis.begin()) - 1;
        return std::min(i, axis.size() - 2);
    };
    const std::size_t ix = locate(lx_, ux), iy = locate(ly_, uy);
    const double tx = std::clamp((ux - lx_[ix]) / (lx_[ix + 1] - lx_[ix]), 0.0, 1.0);
    const double ty = std::clamp((uy - ly_[iy]) / (ly_[iy + 1] - ly_[iy]), 0.0, 1.0);
    return (1.0 - tx) * ((1.0 - ty) * at(ix, iy) + ty * at(ix, iy + 1)) +
           tx * ((1.0 - ty) * at(ix + 1, iy) + ty * at(ix + 1, iy + 1));
}

void GbmParams::validate() const {
    for (double v : {P_X, P_Y, mu_X, mu_Y, sigma_X, sigma_Y, gamma}) {
        if (!std::isfinite(v)) throw Error(ErrorKind::invalid_params, "gbm parameters must be finite");
    }
    if (P_X <= 0.0 || P_Y <= 0.0) throw Error(ErrorKind::invalid_params, "gbm initial prices must be positive");
    if (sigma_X <= 0.0 || sigma_Y <= 0.0) throw Error(ErrorKind::invalid_params, "gbm volatilities must be positive");
    if (gamma <= 0.0) throw Error(ErrorKind::invalid_params, "gbm discount rate must be positive");
}

GbmTimeRule make_gbm_time_rule(const GbmParams& params, std::size_t t_steps) {
    params.validate();
    if (t_steps < 2) throw Error(ErrorKind::invalid_params, "gbm time rule needs at least 2 steps");
    const double lo = std::log(1e-4 / params.gamma);
    const double hi = std::log(14.0 / params.gamma);   // e^{-14} < 1e-6
    const double h = (hi - lo) / static_cast<double>(t_steps - 1);
    GbmTimeRule rule;
    rule.t.resize(t_steps);
    rule.weight.resize(t_steps);
    for (std::size_t i = 0; i < t_steps; ++i) {
        const double t = std::exp(lo + h * static_cast<double>(i));
        const double end = (i == 0 || i + 1 == t_steps) ? 0.5 : 1.0;
        rule.t[i] = t;
        rule.weight[i] = end * h * t * std::exp(-params.gamma * t);
    }
    return rule;
}

const char* to_string(BeliefKind kind) {
    switch (kind) {
    case BeliefKind::uniform_rect: return "uniform-rect";
    case BeliefKind::power_rect: return "power-rect";
    case BeliefKind::lmsr_rect: return "lmsr-rect";
    case BeliefKind::ratio_1d: return "ratio-1d";
    case BeliefKind::lognormal_ratio: return "lognormal-ratio";
    case BeliefKind::gbm_discounted: return "gbm-discounted";
    case BeliefKind::table_2d: return "table-2d";
    }
    return "unknown";
}

BeliefSpec BeliefSpec::uniform(double P_X, double P_Y) {
    BeliefSpec s;
    s.kind = BeliefKind::uniform_rect;
    s.P_X = P_X;
    s.P_Y = P_Y;
    return s;
}

BeliefSpec BeliefSpec::power(double exponent, double P_X, double P_Y) {
    BeliefSpec s = uniform(P_X, P_Y);
    s.kind = BeliefKind::power_rect;
    s.exponent = exponent;
    return s;
}

BeliefSpec BeliefSpec::weighted_product(double alpha, double P_X, double P_Y) {
    if (!finite_positive(alpha)) throw Error(ErrorKind::invalid_params, "weighted-product alpha must be positive");
    return power((alpha - 1.0) / (alpha + 1.0), P_X, P_Y);
}

BeliefSpec BeliefSpec::lmsr(double P_X, double P_Y) {
    BeliefSpec s = uniform(P_X, P_Y);
    s.kind = BeliefKind::lmsr_rect;
    return s;
}

BeliefSpec BeliefSpec::ratio(RatioDensity h, double P_X, double P_Y) {
    BeliefSpec s = uniform(P_X, P_Y);
    s.kind = BeliefKind::ratio_1d;
    s.density = std::move(h);
    return s;
}

BeliefSpec BeliefSpec::lognormal_ratio(double sigma, double P_X, double P_Y) {
    BeliefSpec s = uniform(P_X, P_Y);
    s.kind = BeliefKind::lognormal_ratio;
    s.sigma = sigma;
    s.density = RatioDensity::lognormal(sigma);
    return s;
}

BeliefSpec BeliefSpec::concentrated(double p_lo, double p_hi, double P_X, double P_Y) {
    return ratio(RatioDensity::indicator(p_lo, p_hi), P_X, P_Y);
}

BeliefSpec BeliefSpec::gbm_discounted(const GbmParams& params, std::size_t t_steps) {
    BeliefSpec s;
    s.kind = BeliefKind::gbm_discounted;
    s.gbm = params;
    s.P_X = params.P_X;
    s.P_Y = params.P_Y;
    s.time_rule = std::make_shared<const GbmTimeRule>(make_gbm_time_rule(params, t_steps));
    return s;
}

BeliefSpec BeliefSpec::tabulated(std::shared_ptr<const Table2d> table) {
    if (!table) throw Error(ErrorKind::invalid_params, "table-2d belief needs a table");
    BeliefSpec s;
    s.kind = BeliefKind::table_2d;
    s.table = std::move(table);
    s.P_X = s.table->px_axis().back();
    s.P_Y = s.table->py_axis().back();
    return s;
}

BeliefSpec BeliefSpec::scaled(double alpha) const {
    if (!finite_positive(alpha)) throw Error(ErrorKind::invalid_params, "belief scale must be positive");
    BeliefSpec s = *this;
    s.scale *= alpha;
    return s;
}

bool BeliefSpec::rectangle_supported() const {
    return kind != BeliefKind::gbm_discounted && kind != BeliefKind::table_2d;
}

void BeliefSpec::validate() const {
    if (!finite_positive(scale)) throw Error(ErrorKind::invalid_params, "belief scale must be positive");
    if (rectangle_supported() && (!finite_positive(P_X) || !finite_positive(P_Y))) {
        throw Error(ErrorKind::invalid_params, "support bounds P_X, P_Y must be positive");
    }
    switch (kind) {
    case BeliefKind::power_rect:
        if (!std::isfinite(exponent)) throw Error(ErrorKind::invalid_params, "power exponent must be finite");
        break;
    case BeliefKind::lognormal_ratio:
        if (!finite_positive(sigma)) throw Error(ErrorKind::invalid_params, "lognormal sigma must be positive");
        break;
    case BeliefKind::ratio_1d:
        if (density.empty()) throw Error(ErrorKind::invalid_params, "ratio-1d belief needs a density");
        break;
    case BeliefKind::gbm_discounted:
        gbm.validate();
        if (!time_rule) throw Error(ErrorKind::invalid_params, "gbm belief has no time rule");
        break;
    case BeliefKind::table_2d:
        if (!table) throw Error(ErrorKind::invalid_params, "table-2d belief needs a table");
        break;
    default: break;
    }
}

double eval_psi(const BeliefSpec& spec, double p_x, double p_y) {
    if (!(p_x > 0.0 && p_y > 0.0)) return 0.0;
    if (spec.rectangle_supported() && (p_x > spec.P_X || p_y > spec.P_Y)) return 0.0;
    double v = 0.0;
    switch (spec.kind) {
    case BeliefKind::uniform_rect: v = 1.0; break;
    case BeliefKind::power_rect: v = std::pow(p_x / p_y, spec.exponent); break;
    case BeliefKind::lmsr_rect: v = p_x * p_y / ((p_x + p_y) * (p_x + p_y)); break;
    case BeliefKind::ratio_1d:
    case BeliefKind::lognormal_ratio: v = spec.density(p_x / p_y); break;
    case BeliefKind::gbm_discounted: {
        const GbmTimeRule& rule = *spec.time_rule;
        for (std::size_t i = 0; i < rule.t.size(); ++i) {
            v += rule.weight[i] * gbm_snapshot_density(spec.gbm, rule.t[i], p_x, p_y);
        }
        break;
    }
    case BeliefKind::table_2d: v = (*spec.table)(p_x, p_y); break;
    }
    return spec.scale * v;
}

BeliefSummary BeliefSummary::empty(const PriceGrid& grid) {
    BeliefSummary s;
    s.grid = grid;
    s.w.assign(grid.size(), 0.0);
    s.m_X.assign(grid.size(), 0.0);
    s.m_Y.assign(grid.size(), 0.0);
    return s;
}

BeliefSummary BeliefSummary::scaled(double alpha) const {
    BeliefSummary s = *this;
    for (auto* v : {&s.w, &s.m_X, &s.m_Y}) {
        for (double& x : *v) x *= alpha;
    }
    s.mass *= alpha;
    s.mass_outside_grid *= alpha;
    s.m_X_total *= alpha;
    s.m_Y_total *= alpha;
    return s;
}

BeliefSummary compile_2d(const BeliefSpec& spec, const PriceGrid& grid, std::size_t radial_n) {
    spec.validate();
    if (radial_n < 64) throw Error(ErrorKind::invalid_params, "radial_n must be at least 64");
    BeliefSpec unit = spec;
    unit.scale = 1.0;
    const RayIntegrator integrate{unit, gauss_legendre(32), std::max<std::size_t>(1, radial_n / 32)};
    std::vector<std::size_t> kinks;
    if (spec.kind != BeliefKind::gbm_discounted && spec.kind != BeliefKind::table_2d) {
        kinks = corner_kink(grid, spec.P_X / spec.P_Y);
    }
    return summarize(grid, integrate, kinks).scaled(spec.scale);
}

BeliefSummary compile_ratio(const RatioDensity& h, double P_X, double P_Y, const PriceGrid& grid) {
    if (!finite_positive(P_X) || !finite_positive(P_Y)) {
        throw Error(ErrorKind::invalid_params, "support bounds P_X, P_Y must be positive");
    }
    if (h.empty()) throw Error(ErrorKind::invalid_params, "ratio density is empty");
    // psi is constant along each ray inside the rectangle, so J_k = h * r_max^{k+1} / (k+1).
    const auto moments = [&](Ray ray) {
        const double r_max = std::min(ray.c > 0.0 ? P_X / ray.c : INFINITY, ray.s > 0.0 ? P_Y / ray.s : INFINITY);
        const double hv = (ray.s > 0.0 && ray.c > 0.0) ? h(ray.ratio()) : 0.0;
        return Moments{hv * r_max, hv * r_max * r_max / 2.0, hv * r_max * r_max * r_max / 3.0};
    };
    const double p0 = P_X / P_Y;
    BeliefSummary out = summarize(grid, moments, corner_kink(grid, p0));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double p = grid[i];
        out.w[i] = p <= p0 ? h(p) * P_Y : h(p) * P_X / p;
    }
    return out;
}

double gbm_snapshot_density(const GbmParams& params, double t, double p_x, double p_y) {
    if (!(t > 0.0)) throw Error(ErrorKind::nonpositive_time, "snapshot time must be positive");
    if (!(p_x > 0.0 && p_y > 0.0)) return 0.0;
    const double vx = params.sigma_X * params.sigma_X * t;
    const double vy = params.sigma_Y * params.sigma_Y * t;
    const double mx = std::log(params.P_X) + (params.mu_X - 0.5 * params.sigma_X * params.sigma_X) * t;
    const double my = std::log(params.P_Y) + (params.mu_Y - 0.5 * params.sigma_Y * params.sigma_Y) * t;
    const double lx = std::log(p_x), ly = std::log(p_y);
    return std::exp(log_normal_pdf(lx, mx, vx) + log_normal_pdf(ly, my, vy) - lx - ly);
}

BeliefSummary compile_gbm_discounted(const GbmParams& params, const PriceGrid& grid, std::size_t t_steps,
                                     std::size_t radial_n) {
    return compile_2d(BeliefSpec::gbm_discounted(params, t_steps), grid, radial_n);
}

BeliefSummary add_beliefs(const BeliefSummary& a, const BeliefSummary& b) {
    if (!a.grid.same_as(b.grid)) throw Error(ErrorKind::grid_mismatch, "beliefs were compiled on different grids");
    BeliefSummary s = a;
    for (std::size_t i = 0; i < s.w.size(); ++i) {
        s.w[i] += b.w[i];
        s.m_X[i] += b.m_X[i];
        s.m_Y[i] += b.m_Y[i];
    }
    s.mass += b.mass;
    s.mass_outside_grid += b.mass_outside_grid;
    s.m_X_total += b.m_X_total;
    s.m_Y_total += b.m_Y_total;
    return s;
}

BeliefSummary compile(const BeliefSpec& spec, const PriceGrid& grid, bool prefer_ratio) {
    if (!prefer_ratio) return compile_2d(spec, grid);
    spec.validate();
    RatioDensity h;
    switch (spec.kind) {
    case BeliefKind::uniform_rect: h = RatioDensity::constant(1.0); break;
    case BeliefKind::power_rect: {
        const double e = spec.exponent;
        h = RatioDensity::from_function([e](double p) { return std::pow(p, e); });
        break;
    }
    case BeliefKind::lmsr_rect:
        h = RatioDensity::from_function([](double p) { return p / ((1.0 + p) * (1.0 + p)); });
        break;
    case BeliefKind::ratio_1d:
    case BeliefKind::lognormal_ratio: h = spec.density; break;
    default: return compile_2d(spec, grid);
    }
    return compile_ratio(h, spec.P_X, spec.P_Y, grid).scaled(spec.scale);
}

}  // namespace cfmm
