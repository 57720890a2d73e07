// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cfmm/allocation.hpp"
#include "cfmm/belief.hpp"
#include "cfmm/objectives.hpp"
#include "cfmm/optimizer.hpp"
#include "cfmm/simulator.hpp"

using namespace cfmm;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
    std::printf("%s %2d %s: %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const MarketParams unit{1.0, 1.0, 2.0};

const PriceGrid& narrow() {
    static const PriceGrid g = default_grid();
    return g;
}

// weighted α = 4 puts ~2% of its mass above p = 1e4; the lower end stays at 1e-4 to keep λ_Y/p well scaled
const PriceGrid& wide() {
    static const PriceGrid g = make_log_grid(1e-4, 1e8, 3001);
    return g;
}

std::size_t index_of(const PriceGrid& g, double p) {
    std::size_t best = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (std::abs(std::log(g[i] / p)) < std::abs(std::log(g[best] / p))) best = i;
    }
    return best;
}

// max over [lo, hi] of |L(p)/L(1) / (f(p)/f(1)) - 1|
double shape_dev(const Allocation& a, const std::function<double(double)>& f, double lo = 1e-2, double hi = 1e2) {
    const std::size_t ref = index_of(a.grid, 1.0);
    const double scale = f(a.grid[ref]) / a.L[ref];
    double worst = 0.0;
    for (std::size_t i = 0; i < a.grid.size(); ++i) {
        const double p = a.grid[i];
        if (p < lo || p > hi) continue;
        worst = std::max(worst, std::abs(a.L[i] * scale / f(p) - 1.0));
    }
    return worst;
}

struct Family {
    std::string name;
    BeliefSpec spec;
    const PriceGrid* grid;
    std::function<double(double)> shape;
};

std::vector<Family> families() {
    return {
        {"constant-product", BeliefSpec::uniform(), &narrow(), [](double p) { return std::sqrt(p); }},
        {"weighted:4", BeliefSpec::weighted_product(4.0), &wide(), [](double p) { return std::pow(p, 0.8); }},
        {"lmsr", BeliefSpec::lmsr(), &narrow(), [](double p) { return p / (1.0 + p); }},
        {"lognormal:1", BeliefSpec::lognormal_ratio(1.0), &narrow(),
         [](double p) { return std::sqrt(std::exp(-std::log(p) * std::log(p) / 2.0)); }},
        {"concentrated:0.5:2", BeliefSpec::concentrated(0.5, 2.0), &narrow(),
         [](double p) { return p >= 0.5 && p <= 2.0 ? std::sqrt(p) : 0.0; }},
    };
}

double spent(const Allocation& a, const MarketParams& m) { return m.P_X * a.X0 + m.P_Y * a.Y0; }

void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    const BeliefSummary s = compile_2d(BeliefSpec::uniform(), narrow());
    const Allocation a = solve_cop(s, unit);
    const double secs = seconds_since(t0);
    double worst = 0.0;
    for (std::size_t i = 0; i < narrow().size(); ++i) {
        const double p = narrow()[i];
        if (p >= 1e-2 && p <= 1e2) worst = std::max(worst, std::abs(a.L[i] / (std::sqrt(p) / 2.0) - 1.0));
    }
    const double dx = std::abs(a.X0 - 1.0), dy = std::abs(a.Y0 - 1.0);
    report(1, "constant product", dx < 1e-3 && dy < 1e-3 && worst < 1e-3 && secs < 1.0,
           fmt("|X0-1|=%.2e", dx) + fmt(" |Y0-1|=%.2e", dy) + fmt(" max|L/(sqrt(p)/2)-1|=%.2e", worst) +
               fmt(" runtime=%.3fs", secs));
}

void criterion_shape(int id, const Family& f, double tol) {
    const Allocation a = solve_cop(compile_2d(f.spec, *f.grid), unit);
    const double dev = shape_dev(a, f.shape);
    report(id, f.name + " shape", dev < tol, fmt("max rel dev=%.2e", dev) + fmt(" (tol %.0e)", tol));
}

void criterion_5() {
    const BeliefSummary s = compile_2d(BeliefSpec::concentrated(0.5, 2.0), narrow());
    const Allocation a = solve_cop(s, unit);
    double outside = 0.0;
    for (std::size_t i = 0; i < narrow().size(); ++i) {
        const double p = narrow()[i];
        if (p < 0.5 || p > 2.0) outside = std::max(outside, a.L[i]);
    }
    const double dev = shape_dev(a, [](double p) { return std::sqrt(p); }, 0.5, 2.0);
    report(5, "concentrated liquidity", outside == 0.0 && dev < 1e-3,
           fmt("max L outside=%.1e", outside) + fmt(" max rel dev inside=%.2e", dev));
}

void criterion_6() {
    double worst_ratio = 0.0, worst_2d = 0.0;
    std::string detail;
    for (const auto& f : families()) {
        const PriceGrid& g = *f.grid;
        const BeliefSummary s = compile_2d(f.spec, g);
        const Allocation a = solve_cop(s, unit);
        const Inversion inv = invert_allocation(a, unit);

        const Allocation r = solve_cop(inversion_summary(inv, a, unit), unit);
        const std::size_t ref = index_of(g, 1.0);
        double dr = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (a.L[i] > 0.0) dr = std::max(dr, std::abs(r.L[i] * a.L[ref] / r.L[ref] / a.L[i] - 1.0));
            else if (r.L[i] != 0.0) dr = INFINITY;
        }

        // two-dimensional pipeline through a tabulated belief
        const double step = std::log(2.0) / 12.0;
        std::vector<double> ax, ay;
        for (double l = std::log(1e-7); l <= step / 2; l += step) {
            ax.push_back(std::exp(l) * unit.P_X);
            ay.push_back(std::exp(l) * unit.P_Y);
        }
        const BeliefSpec table = BeliefSpec::tabulated(inversion_table(a, unit, ax, ay));
        const Allocation t = solve_cop(compile_2d(table, g), unit);
        double lo = 1e-2, hi = 1e2;
        if (f.name.rfind("concentrated", 0) == 0) {
            // bilinear interpolation smears the support edges over two table cells
            lo = 0.5 * std::exp(2 * step);
            hi = 2.0 * std::exp(-2 * step);
        }
        double d2 = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (g[i] < lo || g[i] > hi) continue;
            d2 = std::max(d2, std::abs(t.L[i] * a.L[ref] / t.L[ref] / a.L[i] - 1.0));
        }
        worst_ratio = std::max(worst_ratio, dr);
        worst_2d = std::max(worst_2d, d2);
        detail += " " + f.name + fmt("=%.1e", dr) + fmt("/%.1e", d2);
    }
    report(6, "inversion round trip", worst_ratio < 1e-6 && worst_2d < 1e-2,
           fmt("ratio max=%.2e", worst_ratio) + fmt(" 2d max=%.2e;", worst_2d) + detail);
}

double perturbation_margin(const BeliefSummary& s, const Allocation& a, int trials, std::uint64_t seed) {
    const double best = inefficiency(a, s);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 0.2);
    double margin = INFINITY;
    for (int t = 0; t < trials; ++t) {
        const double c1 = n(rng), c2 = n(rng), c3 = n(rng), c4 = n(rng);
        std::vector<double> L(a.L);
        for (std::size_t i = 0; i < L.size(); ++i) {
            const double l = a.grid.log_points()[i];
            L[i] *= std::exp(c1 * std::tanh(l) + c2 * std::sin(l) + c3 / (1.0 + l * l) + c4 * std::cos(3.0 * l));
        }
        Allocation p = Allocation::from_liquidity(a.grid, L, a.p0);
        const double k = unit.B / spent(p, unit);
        for (double& v : L) v *= k;
        p = Allocation::from_liquidity(a.grid, L, a.p0);
        margin = std::min(margin, inefficiency(p, s) / best - 1.0);
    }
    return margin;
}

void criterion_7() {
    bool pass = true;
    std::string detail;
    for (const auto& f : families()) {
        const BeliefSummary s = compile_2d(f.spec, *f.grid);
        const Allocation a = solve_cop(s, unit);
        const KKTReport r = kkt_residuals(a, s, unit);
        const double budget = r.budget_residual / unit.B;
        const double stat = r.stationarity_residual / a.lambda_B;
        const double gap = r.objective_gap / r.objective;
        const double margin = perturbation_margin(s, a, 100, 17);
        pass = pass && budget < 1e-8 && stat < 1e-8 && gap < 1e-3 && margin > 0.0;
        detail += " " + f.name + fmt(": budget=%.1e", budget) + fmt(" stat=%.1e", stat) + fmt(" gap=%.1e", gap) +
                  fmt(" min perturbation excess=%.1e;", margin);
    }
    report(7, "KKT and optimality", pass, detail.substr(1));
}

void criterion_8() {
    double scale_dev = 0.0, budget_dev = 0.0;
    for (const auto& f : families()) {
        const BeliefSummary s = compile_2d(f.spec, *f.grid);
        const Allocation base = solve_cop(s, unit);
        for (double alpha : {1e-3, 1.0, 1e3}) {
            const Allocation a = solve_cop(compile_2d(f.spec.scaled(alpha), *f.grid), unit);
            for (std::size_t i = 0; i < a.L.size(); ++i) {
                if (base.L[i] > 0.0) scale_dev = std::max(scale_dev, std::abs(a.L[i] / base.L[i] - 1.0));
                else if (a.L[i] != 0.0) scale_dev = INFINITY;
            }
        }
        const Allocation twice = solve_cop(s, MarketParams{unit.P_X, unit.P_Y, 2.0 * unit.B});
        budget_dev = std::max({budget_dev, std::abs(twice.X0 / (2.0 * base.X0) - 1.0),
                               std::abs(twice.Y0 / (2.0 * base.Y0) - 1.0)});
        for (std::size_t i = 0; i < base.L.size(); ++i) {
            if (base.L[i] > 0.0) budget_dev = std::max(budget_dev, std::abs(twice.L[i] / (2.0 * base.L[i]) - 1.0));
        }
    }
    report(8, "equivalence class and homogeneity", scale_dev < 1e-12 && budget_dev < 1e-12,
           fmt("belief scaling max rel dev=%.1e", scale_dev) + fmt(" budget doubling max rel dev=%.1e", budget_dev));
}

void criterion_9() {
    const PriceGrid& g = narrow();
    const BeliefSummary su = compile_2d(BeliefSpec::uniform(), g);
    const BeliefSummary sl = compile_2d(BeliefSpec::lmsr(), g);
    const Allocation a = solve_cop(su, unit), b = solve_cop(sl, unit), c = solve_cop(add_beliefs(su, sl), unit);

    // relative least squares for L^2 = ca L1^2 + cb L2^2
    double s11 = 0, s12 = 0, s22 = 0, t1 = 0, t2 = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double y = c.L[i] * c.L[i];
        const double u = a.L[i] * a.L[i] / y, v = b.L[i] * b.L[i] / y;
        s11 += u * u;
        s12 += u * v;
        s22 += v * v;
        t1 += u;
        t2 += v;
    }
    const double det = s11 * s22 - s12 * s12;
    const double ca = (t1 * s22 - t2 * s12) / det, cb = (s11 * t2 - s12 * t1) / det;
    double resid = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double y = c.L[i] * c.L[i];
        resid = std::max(resid, std::abs(ca * a.L[i] * a.L[i] + cb * b.L[i] * b.L[i] - y) / y);
    }
    const double ka = a.lambda_X / c.lambda_X, kb = b.lambda_X / c.lambda_X;

    const BeliefSummary d1 = compile_2d(BeliefSpec::concentrated(0.25, 0.5), g);
    const BeliefSummary d2 = compile_2d(BeliefSpec::concentrated(1.0, 4.0), g);
    const Allocation e1 = solve_cop(d1, unit), e2 = solve_cop(d2, unit), e = solve_cop(add_beliefs(d1, d2), unit);
    const double c1 = e.L[index_of(g, 0.35)] / e1.L[index_of(g, 0.35)];
    const double c2 = e.L[index_of(g, 2.0)] / e2.L[index_of(g, 2.0)];
    double piece = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double expect = c1 * e1.L[i] + c2 * e2.L[i];
        if (expect > 0.0) piece = std::max(piece, std::abs(e.L[i] / expect - 1.0));
        else if (e.L[i] != 0.0) piece = INFINITY;
    }
    const bool pass = ca >= 0.0 && cb >= 0.0 && resid < 1e-6 && piece < 1e-6;
    report(9, "additivity", pass,
           fmt("fit ca=%.6g", ca) + fmt(" cb=%.6g", cb) + fmt(" (multiplier ratios %.6g", ka) + fmt(", %.6g)", kb) +
               fmt(" residual=%.1e", resid) + fmt(" disjoint-support dev=%.1e", piece));
}

void criterion_10() {
    const TradingCurve cp = reference_curve({CurveFamily::constant_product});
    bool pass = true;
    std::string detail;
    for (double k : {0.01, 0.02, 0.04}) {
        SimConfig cfg;
        cfg.k = k;
        cfg.eps = 0.21;
        cfg.p_hat = 1.0;
        cfg.steps = 1'000'000;
        cfg.seed = 1;
        cfg.rule = SuccessRule::strict_spot;
        const auto t0 = std::chrono::steady_clock::now();
        const SimStats s = simulate(cp, cfg);
        const double secs = seconds_since(t0);
        const double se = s.standard_error();
        const bool inside = s.failure_rate >= s.bound_lo - 3 * se && s.failure_rate <= s.bound_hi + 3 * se;
        const double tv = stationary_check(s);
        pass = pass && inside && tv < 0.02 && secs < 30.0;
        detail += fmt(" k=%.2f:", k) + fmt(" rate=%.4f", s.failure_rate) + fmt(" in [%.4f,", s.bound_lo) +
                  fmt(" %.4f]", s.bound_hi) + fmt(" +-3se(%.4f)", 3 * se) + fmt(" tv=%.4f", tv) +
                  fmt(" %.2fs;", secs);
    }
    report(10, "simulator bounds", pass, fmt("band=%.6f;", band_capital(cp, 1.0, 0.21).capital) + detail);
}

void criterion_11() {
    const PriceGrid& g = narrow();
    const BeliefSummary s = compile_2d(BeliefSpec::uniform(), g);
    const Allocation a = solve_cop(s, unit);
    const Allocation b = solve_with_linear_term(s, divergence_value_term(s), unit);
    const std::size_t i0 = index_of(g, 1.0);
    const auto changes = [&](std::size_t from, std::size_t to, double& where) {
        int count = 0, prev = 0;
        for (std::size_t i = from; i < to; ++i) {
            const double d = a.L[i] / a.X0 - b.L[i] / b.X0;
            const int sign = d > 1e-10 ? 1 : (d < -1e-10 ? -1 : 0);
            if (sign == 0) continue;
            if (prev != 0 && sign != prev) {
                ++count;
                where = g[i];
            }
            prev = sign;
        }
        return count;
    };
    double p_above = 0.0, p_below = 0.0;
    const int above = changes(i0 + 1, g.size() - 1, p_above);
    const int below = changes(1, i0, p_below);
    report(11, "divergence-loss shift", above == 1 && below == 1,
           fmt("sign changes above p0=%.0f", above) + fmt(" (at p~%.4g)", p_above) +
               fmt(", below p0=%.0f", below) + fmt(" (at p~%.4g)", p_below));
}

void criterion_12() {
    const PriceGrid& g = narrow();
    const BeliefSummary s = compile_2d(BeliefSpec::uniform(), g);
    const auto k = kappa(s);
    double dev = 0.0;
    for (std::size_t i = 0; i < g.size() && g[i] <= 1.0; ++i) {
        dev = std::max(dev, std::abs(k[i] - (1.0 / (2.0 * g[i]) - 1.0 / 6.0)));
    }
    std::size_t drops = 0;
    for (std::size_t i = 1; i < g.size(); ++i) {
        if (k[i] * g[i] * g[i] < k[i - 1] * g[i - 1] * g[i - 1]) ++drops;
    }
    report(12, "kappa analytics", dev < 1e-3 && drops == 0,
           fmt("max |kappa - (1/(2p) - 1/6)| on p<=1 = %.2e", dev) + fmt(", decreases of kappa p^2 = %.0f", drops));
}

void criterion_13() {
    const PriceGrid& g = narrow();
    const BeliefSummary s = compile_2d(BeliefSpec::uniform(), g);
    std::vector<double> L;
    for (double p : g.points()) L.push_back(std::sqrt(p) / 2.0);
    const Allocation a = Allocation::from_liquidity(g, L, 1.0);
    const double nu = reserve_value(a, s);
    const TradingCurve curve = reserves_from_liquidity(a);
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double sum = 0.0;
    const int n = 1'000'000;
    for (int i = 0; i < n; ++i) {
        const double x = u(rng), y = u(rng);
        const double p = x / y;
        sum += x * curve.X(p) + y * curve.Y(p);
    }
    const double mc = sum / n;
    report(13, "reserve-value oracle", std::abs(nu / mc - 1.0) < 1e-2,
           fmt("nu=%.6f", nu) + fmt(" monte-carlo=%.6f", mc) + fmt(" rel dev=%.2e", std::abs(nu / mc - 1.0)));
}

void criterion_14() {
    const BeliefSummary su = compile_2d(BeliefSpec::uniform(), narrow());
    const double cp = inefficiency(solve_cop(su, unit), su);
    double worst = 0.0;
    std::string detail;
    for (const auto& f : families()) {
        const BeliefSummary s = compile_2d(f.spec, *f.grid);
        const Allocation a = solve_cop(s, unit);
        const double r = inefficiency(a, s);
        const double d = inefficiency_direct(a, f.spec);
        worst = std::max(worst, std::abs(r / d - 1.0));
        detail += " " + f.name + fmt("=%.6g", r) + fmt("/%.6g", d);
    }
    report(14, "inefficiency cross-form", std::abs(cp - 8.0) < 1e-2 && worst < 1e-3,
           fmt("constant product=%.5f", cp) + fmt(" ratio vs direct max rel dev=%.2e;", worst) + detail);
}

}  // namespace

int main() {
    const auto fams = families();
    criterion_1();
    criterion_shape(2, fams[1], 1e-3);
    criterion_shape(3, fams[2], 1e-3);
    criterion_shape(4, fams[3], 1e-2);
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    criterion_12();
    criterion_13();
    criterion_14();
    std::printf("%d of 14 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
