#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "cfmm/allocation.hpp"
#include "cfmm/error.hpp"

using namespace cfmm;

namespace {

const PriceGrid& grid() {
    static const PriceGrid g = default_grid();
    return g;
}

Allocation alloc_of(double (*f)(double), double p0 = 1.0) {
    std::vector<double> L;
    for (double p : grid().points()) L.push_back(f(p));
    return Allocation::from_liquidity(grid(), L, p0);
}

double half_root(double p) { return std::sqrt(p) / 2.0; }
double logistic(double p) { return p / (1.0 + p); }

TradingCurve cp() { return reference_curve({CurveFamily::constant_product}); }

}  // namespace

TEST_CASE("reserves of the constant-product liquidity") {
    const Allocation a = alloc_of(half_root);
    CHECK(std::abs(a.X0 - 1.0) < 1e-3);
    CHECK(std::abs(a.Y0 - 1.0) < 1e-3);
    const TradingCurve c = reserves_from_liquidity(a);
    for (double p : {1e-3, 0.1, 0.5, 2.0, 30.0, 1e3}) {
        CHECK(std::abs(c.Y(p) / std::sqrt(p) - 1.0) < 1e-3);
        CHECK(std::abs(c.X(p) * std::sqrt(p) - 1.0) < 1e-3);
    }
    CHECK(c.Y(1.0) == doctest::Approx(a.Y0).epsilon(1e-12));
    CHECK(c.X(1.0) == doctest::Approx(a.X0).epsilon(1e-12));
}

TEST_CASE("reserves of the logistic liquidity") {
    const TradingCurve c = reserves_from_liquidity(alloc_of(logistic));
    for (double p : {0.01, 0.3, 3.0, 100.0}) {
        CHECK(std::abs((c.Y(p) - c.Y(1.0)) - std::log((1.0 + p) / 2.0)) < 1e-3);
    }
}

TEST_CASE("empty allocation holds nothing") {
    const TradingCurve c = reserves_from_liquidity(alloc_of([](double) { return 0.0; }));
    for (double p : {0.01, 1.0, 100.0}) {
        CHECK(c.Y(p) == 0.0);
        CHECK(c.X(p) == 0.0);
    }
    CHECK(band_capital(alloc_of([](double) { return 0.0; }), 1.0, 0.1).capital == 0.0);
}

TEST_CASE("reserve integrals reject p0 off the grid") {
    std::vector<double> L(grid().size(), 1.0);
    CHECK_THROWS_AS(reserve_Y(grid(), L, 1e5), Error);
}

TEST_CASE("liquidity recovered from closed-form curves") {
    const Allocation cpl = liquidity_from_curve(cp());
    const Allocation wl = liquidity_from_curve(reference_curve({CurveFamily::weighted_product, 1.0, 4.0}));
    const Allocation ll = liquidity_from_curve(reference_curve({CurveFamily::lmsr}));
    const double wnorm = wl.liquidity(1.0);
    for (double p : {1e-3, 0.05, 0.7, 1.0, 3.0, 90.0, 1e3}) {
        CHECK(std::abs(cpl.liquidity(p) / half_root(p) - 1.0) < 1e-3);
        CHECK(std::abs(wl.liquidity(p) / wnorm / std::pow(p, 0.8) - 1.0) < 1e-3);
        CHECK(std::abs(ll.liquidity(p) / logistic(p) - 1.0) < 1e-3);
    }
}

TEST_CASE("weighted product level constant") {
    const TradingCurve c = reference_curve({CurveFamily::weighted_product, 256.0, 4.0});
    CHECK(c.Y(1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.X(1.0) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(liquidity_from_curve(c).liquidity(1.0) == doctest::Approx(0.8).epsilon(1e-4));
}

TEST_CASE("round trip allocation to curve to allocation") {
    for (auto f : {half_root, logistic, +[](double p) { return std::pow(p, 0.8) / (1.0 + std::pow(p, 0.8)); }}) {
        const Allocation a = alloc_of(f);
        const Allocation b = liquidity_from_curve(reserves_from_liquidity(a));
        double worst = 0.0;
        for (std::size_t i = 1; i + 1 < grid().size(); ++i) worst = std::max(worst, std::abs(b.L[i] / a.L[i] - 1.0));
        CHECK(worst < 1e-3);
    }
}

TEST_CASE("closed-form curves") {
    const TradingCurve c = cp();
    CHECK(c.Y(1.0) == 1.0);
    CHECK(c.X(1.0) == 1.0);
    CHECK(c.Y(1.0) / c.X(1.0) == 1.0);   // spot of xy = 1 at (1, 1)
    CHECK(c.Y(4.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(reference_curve({CurveFamily::lmsr}).Y(1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));

    const TradingCurve conc = reference_curve({CurveFamily::concentrated, 1.0, 1.0, 0.5, 2.0});
    for (double p : {0.1, 0.4999, 0.5, 2.0, 2.5, 100.0}) CHECK(conc.liquidity(p) == 0.0);
    for (double p : {0.6, 1.0, 1.9}) CHECK(conc.liquidity(p) / std::sqrt(p) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(conc.Y(0.1) == conc.Y(0.5));
    CHECK(conc.X(5.0) == conc.X(2.0));

    CHECK_THROWS_AS(reference_curve({CurveFamily::concentrated, 1.0, 1.0, 2.0, 0.5}), Error);
    CHECK_THROWS_AS(reference_curve({CurveFamily::weighted_product, 1.0, -1.0}), Error);
}

TEST_CASE("tabulated curves match closed forms on the grid") {
    const TradingCurve c = cp();
    for (std::size_t i = 0; i < grid().size(); i += 7) {
        CHECK(std::abs(c.Y_of_p()[i] - std::sqrt(grid()[i])) <= 1e-10 * std::sqrt(grid()[i]));
        CHECK(std::abs(c.X_of_p()[i] - 1.0 / std::sqrt(grid()[i])) <= 1e-10 / std::sqrt(grid()[i]));
    }
}

TEST_CASE("reserve functions are monotone") {
    const TradingCurve curves[] = {cp(), reference_curve({CurveFamily::lmsr}),
                                   reference_curve({CurveFamily::weighted_product, 1.0, 0.3}),
                                   reference_curve({CurveFamily::concentrated, 1.0, 1.0, 0.5, 2.0}),
                                   reserves_from_liquidity(alloc_of(logistic))};
    for (const auto& c : curves) {
        double py = -INFINITY, px = INFINITY;
        for (double l = -9.0; l <= 9.0; l += 0.01) {
            const double p = std::exp(l);
            CHECK(c.Y(p) >= py);
            CHECK(c.X(p) <= px);
            py = c.Y(p);
            px = c.X(p);
        }
    }
}

TEST_CASE("band capital") {
    const BandCapital b = band_capital(cp(), 1.0, 0.21);
    CHECK(std::abs(b.capital - (std::sqrt(1.21) - std::sqrt(1.0 / 1.21))) < 1e-6);
    CHECK(std::abs(b.capital - 0.190909) < 1e-6);
    CHECK_FALSE(b.clamped);

    for (double p_hat : {0.3, 1.0, 7.0}) {
        const double eps = 1e-4;
        const double lim = band_capital(cp(), p_hat, eps).capital / (2.0 * std::log1p(eps));
        CHECK(std::abs(lim / half_root(p_hat) - 1.0) < 1e-3);
    }
    CHECK(band_capital(alloc_of(half_root), 1e4, 0.5).clamped);
}

TEST_CASE("constant-product trade examples") {
    const TradingCurve c = cp();
    const TradeResult ok = execute_trade(c, 1.0, TradeSide::sell_y, 0.1, 1.0, 0.21);
    CHECK(ok.delta_x == doctest::Approx(1.0 - 1.0 / 1.1).epsilon(1e-12));
    CHECK(ok.overall_rate == doctest::Approx(1.1).epsilon(1e-12));
    CHECK(ok.succeeded);
    CHECK(ok.post_y == doctest::Approx(1.1));

    const TradeResult bad = execute_trade(c, 1.0, TradeSide::sell_y, 0.1, 1.0, 0.05);
    CHECK_FALSE(bad.succeeded);
    CHECK(bad.post_y == 1.0);
    CHECK(bad.post_spot == bad.pre_spot);

    const TradeResult tiny = execute_trade(c, 1.0, TradeSide::buy_y, 1e-14, 1.0, 0.05);
    CHECK(tiny.overall_rate == doctest::Approx(1.0).epsilon(1e-12));
    const TradeResult small = execute_trade(c, 1.0, TradeSide::buy_y, 1e-7, 1.0, 0.05);
    CHECK(small.overall_rate == doctest::Approx(1.0).epsilon(1e-6));

    const TradingCurve conc = reference_curve({CurveFamily::concentrated, 1.0, 1.0, 0.5, 2.0});
    CHECK_THROWS_AS(execute_trade(conc, conc.Y(1.0), TradeSide::buy_y, 10.0, 1.0, 10.0), Error);
}

TEST_CASE("trades are path independent and rates lie between spots") {
    const TradingCurve curves[] = {cp(), reference_curve({CurveFamily::lmsr}),
                                   reserves_from_liquidity(alloc_of(logistic))};
    for (const auto& c : curves) {
        const double y0 = c.Y(1.0);
        const double x0 = c.X(1.0);
        for (double k : {1e-3 * y0, 0.05 * y0, 0.3 * y0}) {
            const TradeResult s = execute_trade(c, y0, TradeSide::sell_y, k, 1.0, 100.0);
            REQUIRE(s.succeeded);
            const TradeResult b = execute_trade(c, s.post_y, TradeSide::buy_y, k, 1.0, 100.0);
            REQUIRE(b.succeeded);
            CHECK(std::abs(b.post_y - y0) < 1e-9);
            CHECK(std::abs(b.post_x - x0) < 1e-9 * std::max(1.0, x0));
            CHECK(s.delta_y > 0.0);
            CHECK(s.delta_x > 0.0);
            CHECK(s.overall_rate == doctest::Approx(s.delta_y / s.delta_x));
            CHECK(s.overall_rate >= s.pre_spot * (1.0 - 1e-9));
            CHECK(s.overall_rate <= s.post_spot * (1.0 + 1e-9));
            CHECK(b.overall_rate <= b.pre_spot * (1.0 + 1e-9));
            CHECK(b.overall_rate >= b.post_spot * (1.0 - 1e-9));
        }
    }
}

TEST_CASE("strict spot rule is never more lenient than the overall rate") {
    const TradingCurve c = cp();
    for (double k = 0.01; k < 0.3; k += 0.01) {
        for (auto side : {TradeSide::buy_y, TradeSide::sell_y}) {
            const bool strict = execute_trade(c, 1.0, side, k, 1.0, 0.21, SuccessRule::strict_spot).succeeded;
            const bool overall = execute_trade(c, 1.0, side, k, 1.0, 0.21, SuccessRule::overall_rate).succeeded;
            if (strict) CHECK(overall);
        }
    }
}

TEST_CASE("lmsr cost function correspondence") {
    const double l2 = std::log(2.0);
    CHECK(lmsr_trading_function(l2, l2) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(lmsr_trading_function(1e-9, 40.0) == doctest::Approx(1.0).epsilon(1e-8));

    std::vector<double> f, cst;
    for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j) {
            const std::vector<double> r{0.1 + 0.3 * i, 0.05 + 0.25 * j};
            const auto rt = lmsr_cost_roundtrip(r);
            CHECK(rt.mapped == doctest::Approx(rt.trading_value).epsilon(1e-13));
            f.push_back(rt.trading_value);
            cst.push_back(rt.cost);
        }
    }
    for (std::size_t a = 0; a < f.size(); ++a) {
        for (std::size_t b = 0; b < f.size(); ++b) {
            if (f[a] < f[b]) CHECK(cst[a] > cst[b]);
        }
    }
    const std::vector<double> q{1000.0, 999.0};
    CHECK(lmsr_cost(q) == doctest::Approx(1000.0 + std::log1p(std::exp(-1.0))));
}
