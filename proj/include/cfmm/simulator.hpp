#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "cfmm/allocation.hpp"

namespace cfmm {

struct SimConfig {
    double k = 0.02;            // trade size in units of Y
    double q = 0.5;             // per-step arrival probability
    double eps = 0.21;
    double p_hat = 1.0;
    std::uint64_t steps = 1'000'000;
    std::int64_t burn_in = -1;  // negative: 10 (band / k)^2
    std::uint64_t trades = 0;   // when nonzero, stop after this many trades past burn-in instead of `steps`
    std::uint64_t seed = 1;
    SuccessRule rule = SuccessRule::strict_spot;

    void validate() const;
};

struct SimStats {
    std::uint64_t attempted = 0;
    std::uint64_t succeeded = 0;
    std::uint64_t failed = 0;
    double failure_rate = 0.0;
    // visit_histogram[i] counts steps spent in state y0 + (n_min + i) k
    std::vector<std::uint64_t> visit_histogram;
    std::int64_t n_min = 0;
    double y0 = 0.0;
    double k = 0.0;
    double band = 0.0;
    double bound_lo = 0.0;
    double bound_hi = 0.0;
    double tv_distance_uniform = 0.0;

    double state_y(std::size_t i) const { return y0 + static_cast<double>(n_min + static_cast<std::int64_t>(i)) * k; }
    /// Binomial standard error of failure_rate.
    double standard_error() const;
};

/// (k / (band + k), min(1, k / |band - k|)).
std::pair<double, double> failure_bounds(double k, double band);

SimStats simulate(const TradingCurve& curve, const SimConfig& cfg);

/// Trade sizes drawn per arrival from `size`; the lattice histogram is not kept.
SimStats simulate_continuous(const TradingCurve& curve, const SimConfig& cfg,
                             const std::function<double(std::mt19937_64&)>& size);

/// TV distance of the occupancy histogram from uniform over reached states.
/// Throws insufficient_samples when a reached state has fewer than 100 visits.
double stationary_check(const SimStats& stats);

double tv_from_uniform(const std::vector<std::uint64_t>& histogram);

/// Combines replicas of the same chain (same y0 and k).
SimStats merge(const SimStats& a, const SimStats& b);

}  // namespace cfmm
