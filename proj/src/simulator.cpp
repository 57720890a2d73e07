#include "cfmm/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "cfmm/error.hpp"

namespace cfmm {

namespace {

struct Streams {
    std::mt19937_64 arrivals;
    std::mt19937_64 sides;

    explicit Streams(std::uint64_t seed) {
        std::seed_seq a{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 1u};
        std::seed_seq s{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 2u};
        arrivals.seed(a);
        sides.seed(s);
    }
};

std::uint64_t burn_in_steps(const SimConfig& cfg, double band) {
    if (cfg.burn_in >= 0) return static_cast<std::uint64_t>(cfg.burn_in);
    const double r = band / cfg.k;
    return static_cast<std::uint64_t>(std::ceil(10.0 * r * r));
}

void finish(SimStats& s) {
    s.failed = s.attempted - s.succeeded;
    s.failure_rate = s.attempted ? static_cast<double>(s.failed) / static_cast<double>(s.attempted) : 0.0;
    s.tv_distance_uniform = tv_from_uniform(s.visit_histogram);
}

bool keep_going(const SimConfig& cfg, std::uint64_t step, std::uint64_t burn, const SimStats& s) {
    if (cfg.trades > 0) return s.attempted < cfg.trades;
    return step < burn + cfg.steps;
}

}  // namespace

void SimConfig::validate() const {
    if (!(q > 0.0 && q < 1.0)) throw Error(ErrorKind::invalid_params, "arrival probability q must lie in (0, 1)");
    if (!(k > 0.0) || !std::isfinite(k)) throw Error(ErrorKind::invalid_params, "trade size k must be positive");
    if (!(eps > 0.0) || !std::isfinite(eps)) throw Error(ErrorKind::invalid_params, "slippage eps must be positive");
    if (!(p_hat > 0.0) || !std::isfinite(p_hat)) throw Error(ErrorKind::invalid_params, "p_hat must be positive");
}

double SimStats::standard_error() const {
    if (attempted == 0) return 0.0;
    const double f = failure_rate;
    return std::sqrt(std::max(f * (1.0 - f), 0.0) / static_cast<double>(attempted));
}

std::pair<double, double> failure_bounds(double k, double band) {
    if (!(k > 0.0) || !(band > 0.0)) throw Error(ErrorKind::invalid_params, "failure bounds need k > 0 and band > 0");
    const double a = k / (band + k);
    const double b = band == k ? 1.0 : std::min(1.0, k / std::abs(band - k));
    return {std::min(a, b), std::max(a, b)};
}

SimStats simulate(const TradingCurve& curve, const SimConfig& cfg) {
    cfg.validate();
    SimStats s;
    s.k = cfg.k;
    s.y0 = curve.Y(cfg.p_hat);
    s.band = band_capital(curve, cfg.p_hat, cfg.eps).capital;
    if (s.band > 0.0) std::tie(s.bound_lo, s.bound_hi) = failure_bounds(cfg.k, s.band);
    else s.bound_lo = s.bound_hi = 1.0;

    Streams rng(cfg.seed);
    std::bernoulli_distribution arrive(cfg.q);
    std::bernoulli_distribution coin(0.5);
    const std::uint64_t burn = burn_in_steps(cfg, s.band);

    std::map<std::int64_t, std::uint64_t> visits;
    std::int64_t n = 0;
    for (std::uint64_t step = 0; keep_going(cfg, step, burn, s); ++step) {
        const bool recording = step >= burn;
        if (arrive(rng.arrivals)) {
            const TradeSide side = coin(rng.sides) ? TradeSide::sell_y : TradeSide::buy_y;
            bool ok = false;
            try {
                const double y = s.y0 + static_cast<double>(n) * cfg.k;
                ok = execute_trade(curve, y, side, cfg.k, cfg.p_hat, cfg.eps, cfg.rule).succeeded;
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::insufficient_reserves) throw;
            }
            if (ok) n += side == TradeSide::sell_y ? 1 : -1;
            if (recording) {
                ++s.attempted;
                if (ok) ++s.succeeded;
            }
        }
        if (recording) ++visits[n];
    }

    if (!visits.empty()) {
        s.n_min = visits.begin()->first;
        s.visit_histogram.assign(static_cast<std::size_t>(visits.rbegin()->first - s.n_min + 1), 0);
        for (const auto& [state, count] : visits) s.visit_histogram[static_cast<std::size_t>(state - s.n_min)] = count;
    }
    finish(s);
    return s;
}

SimStats simulate_continuous(const TradingCurve& curve, const SimConfig& cfg,
                             const std::function<double(std::mt19937_64&)>& size) {
    cfg.validate();
    SimStats s;
    s.k = cfg.k;
    s.y0 = curve.Y(cfg.p_hat);
    s.band = band_capital(curve, cfg.p_hat, cfg.eps).capital;
    if (s.band > 0.0) std::tie(s.bound_lo, s.bound_hi) = failure_bounds(cfg.k, s.band);

    Streams rng(cfg.seed);
    std::mt19937_64 sizes(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    std::bernoulli_distribution arrive(cfg.q);
    std::bernoulli_distribution coin(0.5);
    const std::uint64_t burn = burn_in_steps(cfg, s.band);

    double y = s.y0;
    for (std::uint64_t step = 0; keep_going(cfg, step, burn, s); ++step) {
        if (!arrive(rng.arrivals)) continue;
        const TradeSide side = coin(rng.sides) ? TradeSide::sell_y : TradeSide::buy_y;
        const double k = size(sizes);
        bool ok = false;
        if (k > 0.0) {
            try {
                const TradeResult r = execute_trade(curve, y, side, k, cfg.p_hat, cfg.eps, cfg.rule);
                ok = r.succeeded;
                if (ok) y = r.post_y;
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::insufficient_reserves) throw;
            }
        }
        if (step >= burn) {
            ++s.attempted;
            if (ok) ++s.succeeded;
        }
    }
    finish(s);
    return s;
}

double tv_from_uniform(const std::vector<std::uint64_t>& histogram) {
    std::uint64_t total = 0;
    std::size_t reached = 0;
    for (auto c : histogram) {
        total += c;
        if (c > 0) ++reached;
    }
    if (total == 0 || reached == 0) return 0.0;
    const double u = 1.0 / static_cast<double>(reached);
    double tv = 0.0;
    for (auto c : histogram) {
        if (c > 0) tv += std::abs(static_cast<double>(c) / static_cast<double>(total) - u);
    }
    return 0.5 * tv;
}

double stationary_check(const SimStats& stats) {
    for (auto c : stats.visit_histogram) {
        if (c > 0 && c < 100) {
            throw Error(ErrorKind::insufficient_samples, "a reached state has fewer than 100 visits");
        }
    }
    return tv_from_uniform(stats.visit_histogram);
}

SimStats merge(const SimStats& a, const SimStats& b) {
    if (a.visit_histogram.empty()) return b;
    if (b.visit_histogram.empty()) return a;
    if (a.y0 != b.y0 || a.k != b.k) throw Error(ErrorKind::invalid_params, "replicas describe different chains");
    SimStats s = a;
    s.attempted += b.attempted;
    s.succeeded += b.succeeded;
    const std::int64_t lo = std::min(a.n_min, b.n_min);
    const std::int64_t hi = std::max(a.n_min + static_cast<std::int64_t>(a.visit_histogram.size()),
                                     b.n_min + static_cast<std::int64_t>(b.visit_histogram.size()));
    s.n_min = lo;
    s.visit_histogram.assign(static_cast<std::size_t>(hi - lo), 0);
    for (const SimStats* src : {&a, &b}) {
        for (std::size_t i = 0; i < src->visit_histogram.size(); ++i) {
            s.visit_histogram[static_cast<std::size_t>(src->n_min - lo) + i] += src->visit_histogram[i];
        }
    }
    finish(s);
    return s;
}

}  // namespace cfmm
