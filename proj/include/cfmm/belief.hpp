#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "cfmm/numerics.hpp"

namespace cfmm {

/// Density h(p) over the exchange-rate ratio p = p_X / p_Y, either parametric or tabulated.
class RatioDensity {
public:
    RatioDensity() = default;

    static RatioDensity from_function(std::function<double(double)> h, std::vector<double> breakpoints = {});

    /// Tabulated samples; interpolated log-log between nodes and zero outside [p.front(), p.back()].
    static RatioDensity from_table(std::vector<double> p, std::vector<double> h);

    static RatioDensity constant(double value = 1.0);
    static RatioDensity indicator(double p_lo, double p_hi);
    /// Lognormal(0, sigma^2) density of the ratio.
    static RatioDensity lognormal(double sigma);

    double operator()(double p) const;

    bool empty() const { return !fn_ && table_p_.empty(); }
    bool tabulated() const { return !table_p_.empty(); }
    const std::vector<double>& table_p() const { return table_p_; }
    const std::vector<double>& table_h() const { return table_h_; }

    /// Ratios where h jumps; quadratures that see these can split there.
    const std::vector<double>& breakpoints() const { return breakpoints_; }

private:
    std::function<double(double)> fn_;
    std::vector<double> table_p_, table_h_;
    std::vector<double> breakpoints_;
};

/// Tabulated psi(p_X, p_Y) on a tensor grid, bilinear in (ln p_X, ln p_Y), zero outside its hull.
class Table2d {
public:
    Table2d(std::vector<double> px_axis, std::vector<double> py_axis, std::vector<double> psi);

    double operator()(double p_x, double p_y) const;

    const std::vector<double>& px_axis() const { return px_; }
    const std::vector<double>& py_axis() const { return py_; }
    const std::vector<double>& values() const { return psi_; }   // row-major: [ix * ny + iy]
    double at(std::size_t ix, std::size_t iy) const { return psi_[ix * py_.size() + iy]; }

private:
    std::vector<double> px_, py_, psi_;
    std::vector<double> lx_, ly_;
};

/// Parameters of two independent geometric Brownian motions plus a discount rate.
struct GbmParams {
    double P_X = 1.0, P_Y = 1.0;
    double mu_X = 0.0, mu_Y = 0.0;
    double sigma_X = 1.0, sigma_Y = 1.0;
    double gamma = 1.0;

    void validate() const;
};

/// Log-spaced discounting quadrature for int_0^inf e^{-gamma t} rho_t dt.
struct GbmTimeRule {
    std::vector<double> t;
    std::vector<double> weight;   // includes e^{-gamma t} and the d(ln t) Jacobian
};

GbmTimeRule make_gbm_time_rule(const GbmParams& params, std::size_t t_steps);

enum class BeliefKind { uniform_rect, power_rect, lmsr_rect, ratio_1d, lognormal_ratio, gbm_discounted, table_2d };

const char* to_string(BeliefKind kind);

/// An unnormalized belief psi(p_X, p_Y) over future numeraire prices.
struct BeliefSpec {
    BeliefKind kind = BeliefKind::uniform_rect;
    double P_X = 1.0, P_Y = 1.0;     // support rectangle (0, P_X] x (0, P_Y] for rectangle kinds
    double exponent = 0.0;           // power-rect: psi = (p_X/p_Y)^exponent
    double sigma = 1.0;              // lognormal-ratio
    double scale = 1.0;              // global multiplier
    RatioDensity density;            // ratio-1d
    GbmParams gbm;
    std::shared_ptr<const GbmTimeRule> time_rule;
    std::shared_ptr<const Table2d> table;

    static BeliefSpec uniform(double P_X = 1.0, double P_Y = 1.0);
    static BeliefSpec power(double exponent, double P_X = 1.0, double P_Y = 1.0);
    /// Belief whose optimal curve is the weighted product x^alpha y.
    static BeliefSpec weighted_product(double alpha, double P_X = 1.0, double P_Y = 1.0);
    static BeliefSpec lmsr(double P_X = 1.0, double P_Y = 1.0);
    static BeliefSpec ratio(RatioDensity h, double P_X = 1.0, double P_Y = 1.0);
    static BeliefSpec lognormal_ratio(double sigma, double P_X = 1.0, double P_Y = 1.0);
    /// Uniform belief restricted to ratios in [p_lo, p_hi] (concentrated liquidity).
    static BeliefSpec concentrated(double p_lo, double p_hi, double P_X = 1.0, double P_Y = 1.0);
    static BeliefSpec gbm_discounted(const GbmParams& params, std::size_t t_steps = 160);
    static BeliefSpec tabulated(std::shared_ptr<const Table2d> table);

    BeliefSpec scaled(double alpha) const;
    bool rectangle_supported() const;
    void validate() const;
};

/// psi(p_X, p_Y); zero outside the support.
double eval_psi(const BeliefSpec& spec, double p_x, double p_y);

/// Grid-sampled form of a belief:
///   w(p)   = phi(acot p) sin(acot p), the ratio weight driving the optimizer
///   m_X(p) = iint p_X psi 1{p_X/p_Y <= p},  m_Y(p) = iint p_Y psi 1{p_X/p_Y >= p}
///   mass   = iint psi
struct BeliefSummary {
    PriceGrid grid;
    std::vector<double> w;
    std::vector<double> m_X;
    std::vector<double> m_Y;
    double mass = 0.0;
    double mass_outside_grid = 0.0;   // belief mass whose ratio falls outside [p_min, p_max]
    double m_X_total = 0.0;           // iint p_X psi
    double m_Y_total = 0.0;           // iint p_Y psi

    static BeliefSummary empty(const PriceGrid& grid);

    double truncated_fraction() const { return mass > 0.0 ? mass_outside_grid / mass : 0.0; }
    BeliefSummary scaled(double alpha) const;
};

BeliefSummary compile_2d(const BeliefSpec& spec, const PriceGrid& grid, std::size_t radial_n = 256);

BeliefSummary compile_ratio(const RatioDensity& h, double P_X, double P_Y, const PriceGrid& grid);

/// Joint lognormal snapshot density of the two GBMs at time t.
double gbm_snapshot_density(const GbmParams& params, double t, double p_x, double p_y);

BeliefSummary compile_gbm_discounted(const GbmParams& params, const PriceGrid& grid,
                                     std::size_t t_steps = 160, std::size_t radial_n = 256);

/// Pointwise sum; summaries must share a grid.
BeliefSummary add_beliefs(const BeliefSummary& a, const BeliefSummary& b);

/// Dispatches to compile_ratio for ratio-form kinds when `prefer_ratio` is set, else compile_2d.
BeliefSummary compile(const BeliefSpec& spec, const PriceGrid& grid, bool prefer_ratio = false);

}  // namespace cfmm
