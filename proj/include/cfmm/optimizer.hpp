#pragma once

#include <memory>
#include <vector>

#include "cfmm/allocation.hpp"
#include "cfmm/belief.hpp"

namespace cfmm {

struct MarketParams {
    double P_X = 1.0;
    double P_Y = 1.0;
    double B = 1.0;

    double p0() const { return P_X / P_Y; }
    void validate() const;
};

/// Per-unit-liquidity coefficient added to the minimized objective: positive values are costs.
/// The stationarity condition becomes w / L^2 = lambda_side c_side + g.
struct LinearTerm {
    std::vector<double> g;

    static LinearTerm zero(const PriceGrid& grid);
    /// Expected reserve value enters as a reward, so g = -kappa.
    static LinearTerm divergence_value(std::vector<double> kappa);
    /// Nonnegative per-liquidity cost (e.g. an LVR weight).
    static LinearTerm cost(std::vector<double> per_unit);
    static LinearTerm uniform_cost(const PriceGrid& grid, double c);
};

struct KKTReport {
    double lambda_B = 0.0;
    double lambda_X = 0.0;
    double lambda_Y = 0.0;
    double stationarity_residual = 0.0;
    double complementary_slackness = 0.0;
    double budget_residual = 0.0;
    double reserve_residual_X = 0.0;
    double reserve_residual_Y = 0.0;
    double objective = 0.0;              // int w / L dp + int g L dp
    double multiplier_objective = 0.0;   // lambda_Y Y0 + lambda_X X0 + 2 int g L dp
    double objective_gap = 0.0;          // |objective - multiplier_objective|; on the grid alone when both diverge
    std::vector<double> pointwise_stationarity;
};

/// Relative weight below which w is treated as exactly zero.
inline constexpr double kSupportThreshold = 1e-14;

Allocation solve_cop(const BeliefSummary& summary, const MarketParams& market);

Allocation solve_with_linear_term(const BeliefSummary& summary, const LinearTerm& g, const MarketParams& market);

/// Closed-form KKT allocation at a fixed budget multiplier (budget not enforced).
Allocation allocation_at_multiplier(const BeliefSummary& summary, const LinearTerm* g, const MarketParams& market,
                                    double lambda_B);

KKTReport kkt_residuals(const Allocation& alloc, const BeliefSummary& summary, const MarketParams& market,
                        const LinearTerm* g = nullptr);

/// psi(p_X, p_Y) = h(p_X / p_Y) on (0, P_X] x (0, P_Y] with h(p) = L(p)^2 / p, plus the
/// ratio weight it compiles to.
struct Inversion {
    BeliefSpec spec;
    std::vector<double> h;   // aligned with the allocation grid
    std::vector<double> w;   // h times the rectangle factor: P_Y below p0, P_X / p above
};

Inversion invert_allocation(const Allocation& alloc, const MarketParams& market);

/// Summary built straight from the inverted ratio weight, skipping any quadrature.
BeliefSummary inversion_summary(const Inversion& inv, const Allocation& alloc, const MarketParams& market);

/// The inverted belief sampled on a tensor grid, for the two-dimensional pipeline.
std::shared_ptr<const Table2d> inversion_table(const Allocation& alloc, const MarketParams& market,
                                               const std::vector<double>& px_axis,
                                               const std::vector<double>& py_axis);

}  // namespace cfmm
