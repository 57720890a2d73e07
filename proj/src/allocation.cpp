#include "cfmm/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cfmm/error.hpp"

namespace cfmm {

namespace {

std::vector<double> divided_by_power(const PriceGrid& grid, std::span<const double> L, int power) {
    std::vector<double> f(L.size());
    for (std::size_t i = 0; i < L.size(); ++i) f[i] = L[i] / std::pow(grid[i], power);
    return f;
}

void require_inside(const PriceGrid& grid, double p0) {
    if (!(p0 >= grid.p_min() && p0 <= grid.p_max())) {
        throw Error(ErrorKind::invalid_params, "initial spot lies outside the price grid");
    }
}

}  // namespace

double reserve_Y(const PriceGrid& grid, std::span<const double> L, double p0) {
    if (L.size() != grid.size()) throw Error(ErrorKind::length_mismatch, "liquidity not aligned with grid");
    require_inside(grid, p0);
    const std::vector<double> f = divided_by_power(grid, L, 1);
    return integrate_log_between(grid, f, grid.p_min(), p0) + power_law_tails(grid, f).below;
}

double reserve_X(const PriceGrid& grid, std::span<const double> L, double p0) {
    if (L.size() != grid.size()) throw Error(ErrorKind::length_mismatch, "liquidity not aligned with grid");
    require_inside(grid, p0);
    const std::vector<double> f = divided_by_power(grid, L, 2);
    return integrate_log_between(grid, f, p0, grid.p_max()) + power_law_tails(grid, f).above;
}

Allocation Allocation::from_liquidity(const PriceGrid& grid, std::vector<double> L, double p0) {
    if (L.size() != grid.size()) throw Error(ErrorKind::length_mismatch, "liquidity not aligned with grid");
    for (double v : L) {
        if (!std::isfinite(v) || v < 0.0) throw Error(ErrorKind::invalid_params, "liquidity must be finite and >= 0");
    }
    Allocation a;
    a.grid = grid;
    a.L = std::move(L);
    a.p0 = p0;
    a.Y0 = reserve_Y(grid, a.L, p0);
    a.X0 = reserve_X(grid, a.L, p0);
    return a;
}

double Allocation::liquidity(double p) const { return interp_loglog(grid, L, p, true); }

const char* to_string(CurveFamily family) {
    switch (family) {
    case CurveFamily::tabulated: return "tabulated";
    case CurveFamily::constant_product: return "constant-product";
    case CurveFamily::weighted_product: return "weighted-product";
    case CurveFamily::lmsr: return "lmsr";
    case CurveFamily::concentrated: return "concentrated";
    }
    return "unknown";
}

TradingCurve TradingCurve::tabulated(const PriceGrid& grid, std::vector<double> Y, std::vector<double> X,
                                     double p0) {
    if (Y.size() != grid.size() || X.size() != grid.size()) {
        throw Error(ErrorKind::length_mismatch, "reserve columns not aligned with grid");
    }
    TradingCurve c;
    c.grid_ = grid;
    c.params_.family = CurveFamily::tabulated;
    c.p0_ = p0;
    const std::vector<double> logs(grid.log_points().begin(), grid.log_points().end());
    c.y_interp_ = MonotoneCubic(logs, Y);
    c.x_interp_ = MonotoneCubic(logs, X);
    c.Y_ = std::move(Y);
    c.X_ = std::move(X);
    return c;
}

TradingCurve TradingCurve::closed_form(const CurveParams& params, const PriceGrid& grid, double p0) {
    const auto bad = [](const char* what) { throw Error(ErrorKind::invalid_params, what); };
    if (!(params.K > 0.0) || !std::isfinite(params.K)) bad("curve level K must be positive");
    if (!(p0 > 0.0) || !std::isfinite(p0)) bad("initial spot must be positive");
    switch (params.family) {
    case CurveFamily::tabulated: bad("tabulated curves are built from samples"); break;
    case CurveFamily::weighted_product:
        if (!(params.alpha > 0.0) || !std::isfinite(params.alpha)) bad("weighted-product alpha must be positive");
        break;
    case CurveFamily::concentrated:
        if (!(params.p_lo > 0.0) || !(params.p_hi > params.p_lo) || !std::isfinite(params.p_hi)) {
            bad("concentrated range must satisfy 0 < p_lo < p_hi");
        }
        break;
    default: break;
    }
    TradingCurve c;
    c.grid_ = grid;
    c.params_ = params;
    c.p0_ = p0;
    c.Y_.resize(grid.size());
    c.X_.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        c.Y_[i] = c.Y(grid[i]);
        c.X_[i] = c.X(grid[i]);
    }
    return c;
}

double TradingCurve::Y(double p) const {
    const double K = params_.K;
    switch (params_.family) {
    case CurveFamily::tabulated: return y_interp_(std::log(p));
    case CurveFamily::constant_product: return std::sqrt(p * K);
    case CurveFamily::weighted_product: {
        const double a = params_.alpha;
        return std::pow(p, a / (a + 1.0)) * std::pow(K / std::pow(a, a), 1.0 / (a + 1.0));
    }
    case CurveFamily::lmsr: return std::log((1.0 + p) / K);
    case CurveFamily::concentrated: {
        const double q = std::clamp(p, params_.p_lo, params_.p_hi);
        return std::sqrt(K) * (std::sqrt(q) - std::sqrt(params_.p_lo));
    }
    }
    return 0.0;
}

double TradingCurve::X(double p) const {
    const double K = params_.K;
    switch (params_.family) {
    case CurveFamily::tabulated: return x_interp_(std::log(p));
    case CurveFamily::constant_product: return std::sqrt(K / p);
    case CurveFamily::weighted_product: return params_.alpha * Y(p) / p;
    case CurveFamily::lmsr: return std::log((1.0 + 1.0 / p) / K);
    case CurveFamily::concentrated: {
        const double q = std::clamp(p, params_.p_lo, params_.p_hi);
        return std::sqrt(K) * (1.0 / std::sqrt(q) - 1.0 / std::sqrt(params_.p_hi));
    }
    }
    return 0.0;
}

double TradingCurve::liquidity(double p) const {
    switch (params_.family) {
    case CurveFamily::tabulated: return std::max(0.0, y_interp_.derivative(std::log(p)));
    case CurveFamily::constant_product: return 0.5 * std::sqrt(p * params_.K);
    case CurveFamily::weighted_product: return params_.alpha / (params_.alpha + 1.0) * Y(p);
    case CurveFamily::lmsr: return p / (1.0 + p);
    case CurveFamily::concentrated:
        return (p > params_.p_lo && p < params_.p_hi) ? 0.5 * std::sqrt(p * params_.K) : 0.0;
    }
    return 0.0;
}

double TradingCurve::y_lower() const {
    switch (params_.family) {
    case CurveFamily::tabulated: return Y_.front();
    case CurveFamily::lmsr: return -std::log(params_.K);
    default: return 0.0;
    }
}

double TradingCurve::y_upper() const {
    switch (params_.family) {
    case CurveFamily::tabulated: return Y_.back();
    case CurveFamily::concentrated: return Y(params_.p_hi);
    default: return std::numeric_limits<double>::infinity();
    }
}

double TradingCurve::spot_from_Y(double y) const {
    const bool closed_ends = params_.family == CurveFamily::tabulated || params_.family == CurveFamily::concentrated;
    const bool inside = closed_ends ? (y >= y_lower() && y <= y_upper()) : (y > y_lower() && y < y_upper());
    if (!inside || !std::isfinite(y)) {
        throw Error(ErrorKind::insufficient_reserves, "Y reserve " + std::to_string(y) + " is not reachable on the curve");
    }
    const double K = params_.K;
    switch (params_.family) {
    case CurveFamily::tabulated: return std::exp(y_interp_.inverse(y));
    case CurveFamily::constant_product: return y * y / K;
    case CurveFamily::weighted_product: {
        const double a = params_.alpha;
        const double c = std::pow(K / std::pow(a, a), 1.0 / (a + 1.0));
        return std::pow(y / c, (a + 1.0) / a);
    }
    case CurveFamily::lmsr: return K * std::exp(y) - 1.0;
    case CurveFamily::concentrated: {
        const double r = y / std::sqrt(K) + std::sqrt(params_.p_lo);
        return std::clamp(r * r, params_.p_lo, params_.p_hi);
    }
    }
    return 0.0;
}

TradingCurve reserves_from_liquidity(const Allocation& alloc) {
    const PriceGrid& grid = alloc.grid;
    const std::vector<double> fy = divided_by_power(grid, alloc.L, 1);
    const std::vector<double> fx = divided_by_power(grid, alloc.L, 2);
    const std::vector<double> cy = cumulative_log(grid, fy);
    const std::vector<double> cx = cumulative_log(grid, fx);
    const double cy0 = integrate_log_between(grid, fy, grid.p_min(), alloc.p0);
    const double cx0 = integrate_log_between(grid, fx, grid.p_min(), alloc.p0);
    std::vector<double> Y(grid.size()), X(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        Y[i] = std::max(0.0, alloc.Y0 + (cy[i] - cy0));
        X[i] = std::max(0.0, alloc.X0 - (cx[i] - cx0));
    }
    return TradingCurve::tabulated(grid, std::move(Y), std::move(X), alloc.p0);
}

Allocation liquidity_from_curve(const TradingCurve& curve) {
    const PriceGrid& grid = curve.grid();
    const std::size_t n = grid.size();
    const double h = grid.log_step();
    std::vector<double> L(n);
    if (curve.family() == CurveFamily::tabulated) {
        const auto& Y = curve.Y_of_p();
        for (std::size_t i = 1; i + 1 < n; ++i) L[i] = (Y[i + 1] - Y[i - 1]) / (2.0 * h);
        L[0] = (-3.0 * Y[0] + 4.0 * Y[1] - Y[2]) / (2.0 * h);
        L[n - 1] = (3.0 * Y[n - 1] - 4.0 * Y[n - 2] + Y[n - 3]) / (2.0 * h);
    } else {
        const double up = std::exp(h), down = std::exp(-h);
        for (std::size_t i = 0; i < n; ++i) {
            L[i] = (curve.Y(grid[i] * up) - curve.Y(grid[i] * down)) / (2.0 * h);
        }
    }
    for (double& v : L) v = std::max(0.0, v);
    Allocation a;
    a.grid = grid;
    a.L = std::move(L);
    a.p0 = curve.p0();
    a.Y0 = curve.Y(a.p0);
    a.X0 = curve.X(a.p0);
    return a;
}

TradingCurve reference_curve(const CurveParams& params, const PriceGrid& grid, double p0) {
    return TradingCurve::closed_form(params, grid, p0);
}

BandCapital band_capital(const TradingCurve& curve, double p_hat, double eps) {
    if (!(eps > 0.0) || !(p_hat > 0.0)) throw Error(ErrorKind::invalid_params, "band needs p_hat > 0 and eps > 0");
    const double lo = p_hat / (1.0 + eps), hi = p_hat * (1.0 + eps);
    BandCapital b;
    b.clamped = curve.family() == CurveFamily::tabulated &&
                (lo < curve.grid().p_min() || hi > curve.grid().p_max());
    b.capital = std::max(0.0, curve.Y(hi) - curve.Y(lo));
    return b;
}

BandCapital band_capital(const Allocation& alloc, double p_hat, double eps) {
    if (!(eps > 0.0) || !(p_hat > 0.0)) throw Error(ErrorKind::invalid_params, "band needs p_hat > 0 and eps > 0");
    const double lo = p_hat / (1.0 + eps), hi = p_hat * (1.0 + eps);
    BandCapital b;
    b.clamped = lo < alloc.grid.p_min() || hi > alloc.grid.p_max();
    b.capital = std::max(0.0, integrate_log_between(alloc.grid, divided_by_power(alloc.grid, alloc.L, 1), lo, hi));
    return b;
}

TradeResult execute_trade(const TradingCurve& curve, double y_before, TradeSide side, double k, double p_hat,
                          double eps, SuccessRule rule) {
    if (!(k > 0.0) || !(p_hat > 0.0) || !(eps > 0.0)) {
        throw Error(ErrorKind::invalid_params, "trade needs k > 0, p_hat > 0, eps > 0");
    }
    const bool sell = side == TradeSide::sell_y;
    const double p_before = curve.spot_from_Y(y_before);
    const double x_before = curve.X(p_before);
    const double y_after = sell ? y_before + k : y_before - k;
    if (y_after < 0.0) throw Error(ErrorKind::insufficient_reserves, "trade would drive Y below zero");
    const double p_after = curve.spot_from_Y(y_after);
    const double x_after = curve.X(p_after);
    if (x_after < 0.0) throw Error(ErrorKind::insufficient_reserves, "trade would drive X below zero");

    TradeResult r;
    r.delta_y = k;
    r.delta_x = std::abs(x_before - x_after);
    r.pre_spot = p_before;
    // k / delta_x is Y per X; a vanishing trade reports the spot it started from.
    r.overall_rate = k < 1e-12 * y_before ? p_before : k / r.delta_x;
    const double band_hi = p_hat * (1.0 + eps), band_lo = p_hat / (1.0 + eps);
    const double tested = rule == SuccessRule::overall_rate ? r.overall_rate : p_after;
    r.succeeded = sell ? tested <= band_hi : tested >= band_lo;
    r.slippage = (r.overall_rate - p_hat) / p_hat;
    if (r.succeeded) {
        r.post_spot = p_after;
        r.post_y = y_after;
        r.post_x = x_after;
    } else {
        r.post_spot = p_before;
        r.post_y = y_before;
        r.post_x = x_before;
    }
    return r;
}

double lmsr_trading_function(double x, double y) { return 2.0 - std::exp(-x) - std::exp(-y); }

double lmsr_cost(std::span<const double> q) {
    if (q.empty()) throw Error(ErrorKind::length_mismatch, "cost function needs at least one share balance");
    const double m = *std::max_element(q.begin(), q.end());
    double s = 0.0;
    for (double v : q) s += std::exp(v - m);
    return m + std::log(s);
}

LmsrCorrespondence lmsr_cost_roundtrip(std::span<const double> shares) {
    if (shares.size() != 2) throw Error(ErrorKind::length_mismatch, "two share balances expected");
    LmsrCorrespondence c;
    c.trading_value = lmsr_trading_function(shares[0], shares[1]);
    const double neg[2] = {-shares[0], -shares[1]};
    c.cost = lmsr_cost(neg);
    c.mapped = 2.0 - std::exp(c.cost);
    return c;
}

}  // namespace cfmm
