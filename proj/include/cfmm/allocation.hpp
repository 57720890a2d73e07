#pragma once

#include <span>
#include <string>
#include <vector>

#include "cfmm/numerics.hpp"

namespace cfmm {

/// Liquidity L(p) = dY/d(ln p) on a grid, with the reserves it implies at the initial spot p0.
struct Allocation {
    PriceGrid grid;
    std::vector<double> L;
    double p0 = 1.0;
    double X0 = 0.0;
    double Y0 = 0.0;
    double lambda_B = 0.0;
    double lambda_X = 0.0;
    double lambda_Y = 0.0;
    double truncated_fraction = 0.0;

    /// Builds an allocation and fills X0, Y0 from the reserve integrals.
    static Allocation from_liquidity(const PriceGrid& grid, std::vector<double> L, double p0);

    double liquidity(double p) const;   // log-log interpolation, zero off the grid
};

/// Y0 = int_0^p0 L/p dp and X0 = int_p0^inf L/p^2 dp, with power-law closure of the grid tails.
double reserve_Y(const PriceGrid& grid, std::span<const double> L, double p0);
double reserve_X(const PriceGrid& grid, std::span<const double> L, double p0);

enum class CurveFamily { tabulated, constant_product, weighted_product, lmsr, concentrated };

const char* to_string(CurveFamily family);

struct CurveParams {
    CurveFamily family = CurveFamily::constant_product;
    double K = 1.0;
    double alpha = 1.0;   // weighted product x^alpha y
    double p_lo = 0.0;    // concentrated range
    double p_hi = 0.0;
};

/// Reserve functions Y(p), X(p); closed-form families evaluate analytically, tabulated ones
/// through a monotone cubic in ln p.
class TradingCurve {
public:
    static TradingCurve tabulated(const PriceGrid& grid, std::vector<double> Y, std::vector<double> X, double p0);
    static TradingCurve closed_form(const CurveParams& params, const PriceGrid& grid, double p0 = 1.0);

    double Y(double p) const;
    double X(double p) const;
    double liquidity(double p) const;

    /// Spot rate at which the Y reserve equals y. Throws insufficient_reserves outside the curve.
    double spot_from_Y(double y) const;

    /// Open range of Y reserves the curve can hold.
    double y_lower() const;
    double y_upper() const;

    const PriceGrid& grid() const { return grid_; }
    const std::vector<double>& Y_of_p() const { return Y_; }
    const std::vector<double>& X_of_p() const { return X_; }
    const CurveParams& params() const { return params_; }
    CurveFamily family() const { return params_.family; }
    double K() const { return params_.K; }
    double p0() const { return p0_; }

private:
    PriceGrid grid_;
    std::vector<double> Y_, X_;
    CurveParams params_;
    double p0_ = 1.0;
    MonotoneCubic y_interp_, x_interp_;   // in ln p
};

TradingCurve reserves_from_liquidity(const Allocation& alloc);

/// L = dY/d(ln p) by central differences (one-sided second order at the ends).
Allocation liquidity_from_curve(const TradingCurve& curve);

TradingCurve reference_curve(const CurveParams& params, const PriceGrid& grid = default_grid(), double p0 = 1.0);

struct BandCapital {
    double capital = 0.0;
    bool clamped = false;   // band reached past the grid
};

/// Y(p_hat (1+eps)) - Y(p_hat / (1+eps)).
BandCapital band_capital(const TradingCurve& curve, double p_hat, double eps);
BandCapital band_capital(const Allocation& alloc, double p_hat, double eps);

enum class TradeSide { buy_y, sell_y };

/// overall_rate: the trade's realized rate must stay inside the slippage band.
/// strict_spot: the post-trade spot must stay inside the band.
enum class SuccessRule { overall_rate, strict_spot };

struct TradeResult {
    double delta_x = 0.0;   // X moved (paid out on sell-Y, paid in on buy-Y)
    double delta_y = 0.0;
    double overall_rate = 0.0;
    double pre_spot = 0.0;
    double post_spot = 0.0;   // equals pre_spot when the trade failed
    double post_y = 0.0;
    double post_x = 0.0;
    bool succeeded = false;
    double slippage = 0.0;
};

/// Trade of k units of Y against the curve from the state holding y_before of Y.
/// Failed trades leave the state unchanged.
TradeResult execute_trade(const TradingCurve& curve, double y_before, TradeSide side, double k, double p_hat,
                          double eps, SuccessRule rule = SuccessRule::overall_rate);

/// f(x, y) = 2 - e^{-x} - e^{-y}
double lmsr_trading_function(double x, double y);

/// Cost function C(q) = log sum_i exp(q_i).
double lmsr_cost(std::span<const double> q);

struct LmsrCorrespondence {
    double trading_value = 0.0;   // f(x, y)
    double cost = 0.0;            // C(-r) with r = (x, y)
    double mapped = 0.0;          // 2 - exp(C(-r)); equals trading_value
};

LmsrCorrespondence lmsr_cost_roundtrip(std::span<const double> shares);

}  // namespace cfmm
