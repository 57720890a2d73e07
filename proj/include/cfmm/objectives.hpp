#pragma once

#include <optional>
#include <vector>

#include "cfmm/allocation.hpp"
#include "cfmm/belief.hpp"
#include "cfmm/optimizer.hpp"

namespace cfmm {

struct FeeParams {
    double delta = 0.003;   // proportional fee
    double s = 0.01;        // mean trade size (numeraire)
    double rate = 1.0;      // constant trade-volume rate; non-constant rates are folded into the belief

    void validate() const;
};

/// (1/N) int w(p) / L(p) dp; +inf when L vanishes somewhere w is positive.
double inefficiency(const Allocation& alloc, const BeliefSummary& summary);

/// (1/N) iint psi(p_X, p_Y) / (p_Y L(p_X/p_Y)) dp_X dp_Y evaluated directly in two dimensions.
double inefficiency_direct(const Allocation& alloc, const BeliefSpec& spec);

/// delta * rate * (1 - s * inefficiency). Negative when s is too large for the liquidity.
double fee_revenue(const Allocation& alloc, const BeliefSummary& summary, const FeeParams& fees);

/// kappa(p) = (1/N)(m_X(p)/p^2 + m_Y(p)/p), the marginal reserve value of liquidity at p.
std::vector<double> kappa(const BeliefSummary& summary);

/// Linear term that rewards expected reserve value (g = -kappa).
LinearTerm divergence_value_term(const BeliefSummary& summary);

/// nu = int L(p) kappa(p) dp, the expected future value of the reserves.
double reserve_value(const Allocation& alloc, const BeliefSummary& summary, TailMode tails = TailMode::power_law);

/// Expected value of simply holding (X0, Y0): E[p_X] X0 + E[p_Y] Y0.
double hold_value(const BeliefSummary& summary, double X0, double Y0);

/// counterfactual - nu.
double divergence_loss(const Allocation& alloc, const BeliefSummary& summary, double counterfactual);

/// Weighting of the instantaneous LVR over rates: a probability density on the grid or a point mass,
/// times a per-rate variance. Proportionality constants are normalized to 1.
struct LvrProfile {
    std::vector<double> weight;   // density over p on the grid, normalized to unit integral
    std::vector<double> sigma2;   // variance per rate, on the grid
    std::optional<double> point;  // when set, all weight sits at this rate
    double point_sigma2 = 1.0;

    static LvrProfile point_mass(double p_hat, double sigma2 = 1.0);
    static LvrProfile density(const PriceGrid& grid, std::vector<double> weight, std::vector<double> sigma2);
    static LvrProfile constant(const PriceGrid& grid, std::vector<double> weight, double sigma2 = 1.0);
};

double lvr_rate(const Allocation& alloc, const LvrProfile& profile);

/// The LVR weighting as a per-liquidity cost for solve_with_linear_term (density profiles only).
LinearTerm lvr_linear_term(const LvrProfile& profile, double scale = 1.0);

/// int g L dp over the grid.
double linear_cost(const Allocation& alloc, const LinearTerm& g);

/// fee_revenue - int loss L dp.
double net_profit(const Allocation& alloc, const BeliefSummary& summary, const FeeParams& fees,
                  const LinearTerm& loss);

}  // namespace cfmm
