#include "cfmm/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cfmm/error.hpp"

namespace cfmm {

namespace {

void require_same_grid(const Allocation& alloc, const BeliefSummary& summary) {
    if (!alloc.grid.same_as(summary.grid)) throw Error(ErrorKind::grid_mismatch, "allocation and belief grids differ");
}

double normalizer(const BeliefSummary& summary) {
    if (!(summary.mass > 0.0)) throw Error(ErrorKind::zero_mass, "belief mass must be positive");
    return 1.0 / summary.mass;
}

// Composite Gauss-Legendre over [a, b] split at `cuts`, panels no wider than `width`.
template <typename F>
double composite(double a, double b, std::vector<double> cuts, double width, const GaussLegendre& rule, F&& f) {
    if (!(b > a)) return 0.0;
    cuts.push_back(a);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = std::max(a, cuts[i]), hi = std::min(b, cuts[i + 1]);
        if (!(hi > lo)) continue;
        const auto panels = static_cast<std::size_t>(std::ceil((hi - lo) / width));
        const double step = (hi - lo) / static_cast<double>(panels);
        for (std::size_t j = 0; j < panels; ++j) {
            sum += integrate_gl(rule, lo + step * static_cast<double>(j), lo + step * static_cast<double>(j + 1), f);
        }
    }
    return sum;
}

}  // namespace

void FeeParams::validate() const {
    if (!(delta >= 0.0 && delta < 1.0)) throw Error(ErrorKind::invalid_params, "fee delta must lie in [0, 1)");
    if (!(s > 0.0) || !std::isfinite(s)) throw Error(ErrorKind::invalid_params, "mean trade size must be positive");
    if (!(rate >= 0.0) || !std::isfinite(rate)) throw Error(ErrorKind::invalid_params, "trade rate must be >= 0");
}

double inefficiency(const Allocation& alloc, const BeliefSummary& summary) {
    require_same_grid(alloc, summary);
    double w_max = 0.0;
    for (double v : summary.w) w_max = std::max(w_max, v);
    std::vector<double> f(alloc.grid.size(), 0.0);
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!(summary.w[i] > kSupportThreshold * w_max)) continue;
        if (!(alloc.L[i] > 0.0)) return std::numeric_limits<double>::infinity();
        f[i] = summary.w[i] / alloc.L[i];
    }
    return normalizer(summary) * integrate_positive_axis(alloc.grid, f);
}

double inefficiency_direct(const Allocation& alloc, const BeliefSpec& spec) {
    spec.validate();
    const PriceGrid& grid = alloc.grid;
    const GaussLegendre rule = gauss_legendre(8);

    // Coordinates rho = ln(p_X / p_Y), v = ln p_Y; dp_X dp_Y = p_X p_Y drho dv.
    std::vector<double> cuts{std::log(alloc.p0), std::log(grid.p_min()), std::log(grid.p_max())};
    for (double b : spec.density.breakpoints()) cuts.push_back(std::log(b));
    const double rho_lo = std::log(grid.p_min()) - 20.0, rho_hi = std::log(grid.p_max()) + 20.0;

    const auto v_range = [&](double rho) -> std::pair<double, double> {
        switch (spec.kind) {
        case BeliefKind::table_2d: {
            const Table2d& t = *spec.table;
            return {std::max(std::log(t.py_axis().front()), std::log(t.px_axis().front()) - rho),
                    std::min(std::log(t.py_axis().back()), std::log(t.px_axis().back()) - rho)};
        }
        case BeliefKind::gbm_discounted: {
            const GbmParams& g = spec.gbm;
            const double horizon = 14.0 / g.gamma;
            const double half = 10.0 * std::max(g.sigma_X, g.sigma_Y) * std::sqrt(horizon) +
                                (std::abs(g.mu_X) + std::abs(g.mu_Y) + g.sigma_X * g.sigma_X + g.sigma_Y * g.sigma_Y) *
                                    horizon;
            const double c = 0.5 * (std::log(g.P_Y) + std::log(g.P_X) - rho);
            return {c - half, c + half};
        }
        default: {
            const double top = std::min(std::log(spec.P_Y), std::log(spec.P_X) - rho);
            return {top - 40.0, top};
        }
        }
    };

    // The p_X power carried by the inner integrand: psi p_X for the value, psi p_X p_Y for the mass, and
    // psi p_Y^2 for the ratio weight w(p), which decides whether a zero of L is admissible.
    enum class Moment { value, mass, weight };
    const auto outer = [&](double rho, Moment m) {
        const auto [va, vb] = v_range(rho);
        return composite(va, vb, {}, 0.5, rule, [&](double v) {
            const double py = std::exp(v), px = std::exp(rho + v);
            const double psi = eval_psi(spec, px, py);
            return m == Moment::value ? psi * px : (m == Moment::mass ? psi * px * py : psi * py * py);
        });
    };
    double w_peak = 0.0, w_uncovered = 0.0;
    const double value = composite(rho_lo, rho_hi, cuts, 0.25, rule, [&](double rho) {
        const double inner = outer(rho, Moment::value);
        if (inner <= 0.0) return 0.0;
        const double L = interp_loglog(grid, alloc.L, std::exp(rho));
        if (!(L > 0.0)) {
            w_uncovered = std::max(w_uncovered, outer(rho, Moment::weight));
            return 0.0;
        }
        return inner / L;
    });
    for (double p : grid.points()) w_peak = std::max(w_peak, outer(std::log(p), Moment::weight));
    const double mass = composite(rho_lo, rho_hi, cuts, 0.25, rule, [&](double rho) { return outer(rho, Moment::mass); });
    if (w_uncovered > kSupportThreshold * w_peak) return std::numeric_limits<double>::infinity();
    if (!(mass > 0.0)) throw Error(ErrorKind::zero_mass, "belief integrates to zero");
    return value / mass;
}

double fee_revenue(const Allocation& alloc, const BeliefSummary& summary, const FeeParams& fees) {
    fees.validate();
    if (fees.delta == 0.0) return 0.0;
    return fees.delta * fees.rate * (1.0 - fees.s * inefficiency(alloc, summary));
}

std::vector<double> kappa(const BeliefSummary& summary) {
    const double inv_n = normalizer(summary);
    std::vector<double> k(summary.grid.size());
    for (std::size_t i = 0; i < k.size(); ++i) {
        const double p = summary.grid[i];
        k[i] = inv_n * (summary.m_X[i] / (p * p) + summary.m_Y[i] / p);
    }
    return k;
}

LinearTerm divergence_value_term(const BeliefSummary& summary) { return LinearTerm::divergence_value(kappa(summary)); }

double reserve_value(const Allocation& alloc, const BeliefSummary& summary, TailMode tails) {
    require_same_grid(alloc, summary);
    const std::vector<double> k = kappa(summary);
    std::vector<double> f(k.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = alloc.L[i] * k[i];
    return integrate_positive_axis(alloc.grid, f, tails);
}

double hold_value(const BeliefSummary& summary, double X0, double Y0) {
    return normalizer(summary) * (summary.m_X_total * X0 + summary.m_Y_total * Y0);
}

double divergence_loss(const Allocation& alloc, const BeliefSummary& summary, double counterfactual) {
    return counterfactual - reserve_value(alloc, summary);
}

LvrProfile LvrProfile::point_mass(double p_hat, double sigma2) {
    if (!(p_hat > 0.0) || !(sigma2 >= 0.0)) throw Error(ErrorKind::invalid_params, "point mass needs p > 0, sigma2 >= 0");
    LvrProfile p;
    p.point = p_hat;
    p.point_sigma2 = sigma2;
    return p;
}

LvrProfile LvrProfile::density(const PriceGrid& grid, std::vector<double> weight, std::vector<double> sigma2) {
    if (weight.size() != grid.size() || sigma2.size() != grid.size()) {
        throw Error(ErrorKind::length_mismatch, "LVR profile not aligned with grid");
    }
    for (std::size_t i = 0; i < weight.size(); ++i) {
        if (!(weight[i] >= 0.0) || !(sigma2[i] >= 0.0)) {
            throw Error(ErrorKind::invalid_params, "LVR weights and variances must be non-negative");
        }
    }
    const double total = integrate_log(grid, weight);
    if (!(total > 0.0)) throw Error(ErrorKind::zero_mass, "LVR weight integrates to zero");
    for (double& v : weight) v /= total;
    LvrProfile p;
    p.weight = std::move(weight);
    p.sigma2 = std::move(sigma2);
    return p;
}

LvrProfile LvrProfile::constant(const PriceGrid& grid, std::vector<double> weight, double sigma2) {
    return density(grid, std::move(weight), std::vector<double>(grid.size(), sigma2));
}

double lvr_rate(const Allocation& alloc, const LvrProfile& profile) {
    if (profile.point) return profile.point_sigma2 * alloc.liquidity(*profile.point);
    if (profile.weight.size() != alloc.grid.size()) {
        throw Error(ErrorKind::length_mismatch, "LVR profile not aligned with allocation grid");
    }
    std::vector<double> f(alloc.L.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = profile.weight[i] * profile.sigma2[i] * alloc.L[i];
    return integrate_log(alloc.grid, f);
}

LinearTerm lvr_linear_term(const LvrProfile& profile, double scale) {
    if (profile.point) throw Error(ErrorKind::invalid_params, "a point-mass LVR profile has no pointwise cost");
    std::vector<double> g(profile.weight.size());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = scale * profile.weight[i] * profile.sigma2[i];
    return LinearTerm::cost(std::move(g));
}

double linear_cost(const Allocation& alloc, const LinearTerm& g) {
    if (g.g.size() != alloc.grid.size()) throw Error(ErrorKind::length_mismatch, "linear term not aligned with grid");
    std::vector<double> f(g.g.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = g.g[i] * alloc.L[i];
    return integrate_log(alloc.grid, f);
}

double net_profit(const Allocation& alloc, const BeliefSummary& summary, const FeeParams& fees,
                  const LinearTerm& loss) {
    return fee_revenue(alloc, summary, fees) - linear_cost(alloc, loss);
}

}  // namespace cfmm
