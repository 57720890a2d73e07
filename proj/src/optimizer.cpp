#include "cfmm/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cfmm/error.hpp"

namespace cfmm {

namespace {

struct Support {
    std::vector<bool> active;
    double w_max = 0.0;
};

Support support_of(const BeliefSummary& summary) {
    Support s;
    for (double v : summary.w) s.w_max = std::max(s.w_max, v);
    s.active.resize(summary.w.size());
    for (std::size_t i = 0; i < summary.w.size(); ++i) {
        s.active[i] = s.w_max > 0.0 && summary.w[i] > kSupportThreshold * s.w_max;
    }
    return s;
}

void check_inputs(const BeliefSummary& summary, const MarketParams& market, const Support& support) {
    market.validate();
    const PriceGrid& grid = summary.grid;
    if (summary.w.size() != grid.size()) throw Error(ErrorKind::length_mismatch, "belief summary not aligned with grid");
    if (!(market.p0() >= grid.p_min() && market.p0() <= grid.p_max())) {
        throw Error(ErrorKind::invalid_params, "initial spot P_X/P_Y lies outside the price grid");
    }
    if (!(support.w_max > 0.0)) throw Error(ErrorKind::degenerate_belief, "ratio weight is identically zero");
    if (summary.truncated_fraction() > 0.01) {
        throw Error(ErrorKind::truncation_dominated,
                    std::to_string(100.0 * summary.truncated_fraction()) + "% of belief mass lies outside the grid");
    }
}

// lambda_side * c_side(p) for lambda_B = 1.
double side_pressure(double p, const MarketParams& market) {
    return p >= market.p0() ? market.P_X / (p * p) : market.P_Y / p;
}

double spent_budget(const Allocation& a, const MarketParams& market) { return market.P_X * a.X0 + market.P_Y * a.Y0; }

void set_multipliers(Allocation& a, const MarketParams& market, double lambda_B) {
    a.lambda_B = lambda_B;
    a.lambda_X = market.P_X * lambda_B;
    a.lambda_Y = market.P_Y * lambda_B;
}

}  // namespace

void MarketParams::validate() const {
    for (double v : {P_X, P_Y, B}) {
        if (!std::isfinite(v) || v <= 0.0) throw Error(ErrorKind::invalid_params, "P_X, P_Y and B must be positive");
    }
}

LinearTerm LinearTerm::zero(const PriceGrid& grid) { return LinearTerm{std::vector<double>(grid.size(), 0.0)}; }

LinearTerm LinearTerm::divergence_value(std::vector<double> kappa) {
    for (double& v : kappa) v = -v;
    return LinearTerm{std::move(kappa)};
}

LinearTerm LinearTerm::cost(std::vector<double> per_unit) { return LinearTerm{std::move(per_unit)}; }

LinearTerm LinearTerm::uniform_cost(const PriceGrid& grid, double c) {
    return LinearTerm{std::vector<double>(grid.size(), c)};
}

Allocation allocation_at_multiplier(const BeliefSummary& summary, const LinearTerm* g, const MarketParams& market,
                                    double lambda_B) {
    const PriceGrid& grid = summary.grid;
    const Support support = support_of(summary);
    std::vector<double> L(grid.size(), 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!support.active[i]) continue;
        const double denom = lambda_B * side_pressure(grid[i], market) + (g ? g->g[i] : 0.0);
        if (!(denom > 0.0)) {
            throw Error(ErrorKind::infeasible_linear_term, "multiplier leaves a nonpositive stationarity denominator");
        }
        L[i] = std::sqrt(summary.w[i] / denom);
    }
    Allocation a = Allocation::from_liquidity(grid, std::move(L), market.p0());
    set_multipliers(a, market, lambda_B);
    a.truncated_fraction = summary.truncated_fraction();
    return a;
}

Allocation solve_cop(const BeliefSummary& summary, const MarketParams& market) {
    const Support support = support_of(summary);
    check_inputs(summary, market, support);
    const PriceGrid& grid = summary.grid;
    const double p0 = market.p0();

    // Unscaled solution at lambda_B = 1; every L scales as lambda_B^{-1/2}.
    std::vector<double> unit(grid.size(), 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!support.active[i]) continue;
        const double p = grid[i];
        unit[i] = p >= p0 ? p * std::sqrt(summary.w[i] / market.P_X) : std::sqrt(p * summary.w[i] / market.P_Y);
    }
    const double spent_unit = market.P_X * reserve_X(grid, unit, p0) + market.P_Y * reserve_Y(grid, unit, p0);
    if (!std::isfinite(spent_unit)) {
        throw Error(ErrorKind::truncation_dominated, "reserve integrals diverge beyond the grid");
    }
    if (!(spent_unit > 0.0)) throw Error(ErrorKind::degenerate_belief, "optimal reserves vanish");
    const double scale = market.B / spent_unit;
    for (double& v : unit) v *= scale;
    Allocation a = Allocation::from_liquidity(grid, std::move(unit), p0);
    set_multipliers(a, market, 1.0 / (scale * scale));
    a.truncated_fraction = summary.truncated_fraction();
    return a;
}

Allocation solve_with_linear_term(const BeliefSummary& summary, const LinearTerm& g, const MarketParams& market) {
    const Support support = support_of(summary);
    check_inputs(summary, market, support);
    const PriceGrid& grid = summary.grid;
    if (g.g.size() != grid.size()) throw Error(ErrorKind::length_mismatch, "linear term not aligned with grid");

    double lower = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(g.g[i])) throw Error(ErrorKind::invalid_params, "linear term must be finite");
        if (support.active[i]) lower = std::max(lower, -g.g[i] / side_pressure(grid[i], market));
    }
    lower = lower > 0.0 ? lower * (1.0 + 1e-9) : 0.0;

    const auto excess = [&](double log_lambda) {
        const Allocation a = allocation_at_multiplier(summary, &g, market, std::exp(log_lambda));
        const double s = spent_budget(a, market);
        return (std::isfinite(s) ? s : std::numeric_limits<double>::max()) - market.B;
    };

    // Bracket in ln(lambda_B): spent budget falls as lambda_B grows.
    const double guess = solve_cop(summary, market).lambda_B;
    double hi = std::log(std::max(guess, lower) * 4.0);
    for (int i = 0; i < 200 && excess(hi) > 0.0; ++i) hi += std::log(4.0);
    double lo;
    if (lower > 0.0) {
        lo = std::log(lower);
    } else {
        lo = std::log(guess) - std::log(4.0);
        for (int i = 0; i < 200 && excess(lo) < 0.0; ++i) lo -= std::log(4.0);
    }
    if (excess(lo) < 0.0) {
        throw Error(ErrorKind::infeasible_linear_term, "no budget multiplier spends the full budget");
    }
    const double root = bisect(excess, lo, hi, 1e-15);
    return allocation_at_multiplier(summary, &g, market, std::exp(root));
}

KKTReport kkt_residuals(const Allocation& alloc, const BeliefSummary& summary, const MarketParams& market,
                        const LinearTerm* g) {
    const PriceGrid& grid = alloc.grid;
    if (!grid.same_as(summary.grid)) throw Error(ErrorKind::grid_mismatch, "allocation and belief grids differ");
    const Support support = support_of(summary);
    KKTReport r;
    r.lambda_B = alloc.lambda_B;
    r.lambda_X = alloc.lambda_X;
    r.lambda_Y = alloc.lambda_Y;
    r.pointwise_stationarity.assign(grid.size(), 0.0);

    std::vector<double> w_over_L(grid.size(), 0.0), gL(grid.size(), 0.0);
    bool unbounded = false;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double p = grid[i];
        const double lam = (p >= alloc.p0 ? alloc.lambda_X / (p * p) : alloc.lambda_Y / p);
        const double gi = g ? g->g[i] : 0.0;
        const double L = alloc.L[i];
        gL[i] = gi * L;
        if (support.active[i]) {
            if (L > 0.0) {
                const double res = std::abs(lam + gi - summary.w[i] / (L * L));
                r.pointwise_stationarity[i] = res;
                r.stationarity_residual = std::max(r.stationarity_residual, res);
                w_over_L[i] = summary.w[i] / L;
            } else {
                unbounded = true;
            }
        } else {
            r.complementary_slackness = std::max(r.complementary_slackness, L * std::abs(lam + gi));
        }
    }
    r.budget_residual = std::abs(spent_budget(alloc, market) - market.B);
    r.reserve_residual_X = std::abs(alloc.X0 - reserve_X(grid, alloc.L, alloc.p0));
    r.reserve_residual_Y = std::abs(alloc.Y0 - reserve_Y(grid, alloc.L, alloc.p0));
    const double linear = integrate_positive_axis(grid, gL);
    r.objective = unbounded ? std::numeric_limits<double>::infinity() : integrate_positive_axis(grid, w_over_L) + linear;
    r.multiplier_objective = alloc.lambda_Y * alloc.Y0 + alloc.lambda_X * alloc.X0 + 2.0 * linear;
    if (!std::isfinite(r.objective) || !std::isfinite(r.multiplier_objective)) {
        if (unbounded) {
            r.objective_gap = std::numeric_limits<double>::infinity();
            return r;
        }
        // both sides diverge in the tails: compare on the grid alone
        std::vector<double> cL(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double p = grid[i];
            cL[i] = alloc.L[i] * (p >= alloc.p0 ? alloc.lambda_X / (p * p) : alloc.lambda_Y / p);
        }
        const double on_grid = integrate_log(grid, w_over_L) + integrate_log(grid, gL);
        r.objective_gap = std::abs(on_grid - integrate_log(grid, cL) - 2.0 * integrate_log(grid, gL));
        return r;
    }
    r.objective_gap = std::abs(r.objective - r.multiplier_objective);
    return r;
}

Inversion invert_allocation(const Allocation& alloc, const MarketParams& market) {
    market.validate();
    const PriceGrid& grid = alloc.grid;
    const double p0 = market.p0();
    Inversion inv;
    inv.h.resize(grid.size());
    inv.w.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double p = grid[i];
        if (!(alloc.L[i] >= 0.0)) throw Error(ErrorKind::invalid_params, "liquidity must be non-negative");
        inv.h[i] = alloc.L[i] * alloc.L[i] / p;
        inv.w[i] = p <= p0 ? inv.h[i] * market.P_Y : inv.h[i] * market.P_X / p;
    }
    std::vector<double> ps(grid.points().begin(), grid.points().end());
    inv.spec = BeliefSpec::ratio(RatioDensity::from_table(std::move(ps), inv.h), market.P_X, market.P_Y);
    return inv;
}

BeliefSummary inversion_summary(const Inversion& inv, const Allocation& alloc, const MarketParams& market) {
    BeliefSummary s = compile_ratio(inv.spec.density, market.P_X, market.P_Y, alloc.grid);
    s.w = inv.w;
    return s;
}

std::shared_ptr<const Table2d> inversion_table(const Allocation& alloc, const MarketParams& market,
                                               const std::vector<double>& px_axis,
                                               const std::vector<double>& py_axis) {
    std::vector<double> psi(px_axis.size() * py_axis.size(), 0.0);
    for (std::size_t ix = 0; ix < px_axis.size(); ++ix) {
        for (std::size_t iy = 0; iy < py_axis.size(); ++iy) {
            const double px = px_axis[ix], py = py_axis[iy];
            if (px > market.P_X || py > market.P_Y) continue;
            const double p = px / py;
            const double L = alloc.liquidity(p);
            psi[ix * py_axis.size() + iy] = L * L / p;
        }
    }
    return std::make_shared<const Table2d>(px_axis, py_axis, std::move(psi));
}

}  // namespace cfmm
