#include "cfmm/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cfmm/allocation.hpp"
#include "cfmm/belief.hpp"
#include "cfmm/error.hpp"
#include "cfmm/io.hpp"
#include "cfmm/objectives.hpp"
#include "cfmm/optimizer.hpp"
#include "cfmm/simulator.hpp"

namespace cfmm {

namespace {

using Entries = std::vector<std::pair<std::string, std::string>>;

struct Options {
    std::string belief;
    std::string family;
    std::string alloc;
    std::string grid;
    double budget = 2.0;
    double px = 1.0;
    double py = 1.0;
    std::string fee;
    std::string sim;
    std::string linear_term;
    std::string out;
    std::string table;
    std::string table_grid;
    std::string histogram;
    std::string window = "0.01,100";
    std::string rule = "strict-spot";
    double q = 0.5;
    double p_hat = 1.0;
    double tol = 1e-3;
    bool assert_bounds = false;
    // gbm overrides for compile-belief
    double mu_x = 0.0, mu_y = 0.0, sigma_x = 1.0, sigma_y = 1.0, gamma = 1.0;
    std::size_t t_steps = 160;
};

[[noreturn]] void bad_input(const std::string& what) { throw Error(ErrorKind::malformed_input, what); }

std::vector<double> parse_list(const std::string& text, const std::string& flag, std::size_t lo, std::size_t hi) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(cell, &used));
            if (used != cell.size()) throw std::invalid_argument(cell);
        } catch (const std::exception&) {
            bad_input(flag + ": '" + cell + "' is not a number");
        }
    }
    if (v.size() < lo || v.size() > hi) {
        bad_input(flag + " expects " + std::to_string(lo) + (lo == hi ? "" : "-" + std::to_string(hi)) + " values");
    }
    return v;
}

PriceGrid grid_from(const std::string& text, double p_min, double p_max, std::size_t n) {
    if (!text.empty()) {
        const auto v = parse_list(text, "--grid", 3, 3);
        if (v[2] < 0 || v[2] != std::floor(v[2])) bad_input("--grid point count must be a whole number");
        p_min = v[0];
        p_max = v[1];
        n = static_cast<std::size_t>(v[2]);
    }
    return make_log_grid(p_min, p_max, n);
}

std::string grid_text(const PriceGrid& g) {
    return format_double(g.p_min()) + "," + format_double(g.p_max()) + "," + std::to_string(g.size());
}

struct Family {
    std::string name;
    std::vector<double> params;
};

Family parse_family(const std::string& text) {
    Family f;
    std::stringstream ss(text);
    std::string part;
    std::getline(ss, f.name, ':');
    while (std::getline(ss, part, ':')) {
        const auto v = parse_list(part, "--family", 1, 1);
        f.params.push_back(v[0]);
    }
    const auto need = [&](std::size_t k) {
        if (f.params.size() != k) {
            bad_input("--family " + f.name + " takes " + std::to_string(k) + " parameter(s)");
        }
    };
    if (f.name == "constant-product" || f.name == "lmsr") need(0);
    else if (f.name == "weighted" || f.name == "lognormal") need(1);
    else if (f.name == "concentrated") need(2);
    else bad_input("--family: unknown family '" + f.name + "'");
    return f;
}

BeliefSpec belief_for(const Family& f, double P_X, double P_Y) {
    if (f.name == "constant-product") return BeliefSpec::uniform(P_X, P_Y);
    if (f.name == "weighted") return BeliefSpec::weighted_product(f.params[0], P_X, P_Y);
    if (f.name == "lmsr") return BeliefSpec::lmsr(P_X, P_Y);
    if (f.name == "lognormal") return BeliefSpec::lognormal_ratio(f.params[0], P_X, P_Y);
    return BeliefSpec::concentrated(f.params[0], f.params[1], P_X, P_Y);
}

CurveParams curve_for(const Family& f) {
    CurveParams c;
    if (f.name == "constant-product") c.family = CurveFamily::constant_product;
    else if (f.name == "weighted") {
        c.family = CurveFamily::weighted_product;
        c.alpha = f.params[0];
    } else if (f.name == "lmsr") c.family = CurveFamily::lmsr;
    else if (f.name == "concentrated") {
        c.family = CurveFamily::concentrated;
        c.p_lo = f.params[0];
        c.p_hi = f.params[1];
    } else {
        bad_input("--family " + f.name + " has no closed-form trading curve");
    }
    return c;
}

// Shape of the optimal liquidity, up to a constant, for each family.
double family_shape(const Family& f, double p) {
    if (f.name == "constant-product") return std::sqrt(p);
    if (f.name == "weighted") return std::pow(p, f.params[0] / (f.params[0] + 1.0));
    if (f.name == "lmsr") return p / (1.0 + p);
    if (f.name == "lognormal") {
        const double l = std::log(p);
        return std::sqrt(std::exp(-l * l / (2.0 * f.params[0] * f.params[0])));
    }
    return (p >= f.params[0] && p <= f.params[1]) ? std::sqrt(p) : 0.0;
}

std::vector<std::string> header_lines(const std::string& command, const Entries& config) {
    std::vector<std::string> lines{"command=" + command};
    for (const auto& [k, v] : config) lines.push_back(k + "=" + v);
    return lines;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream f(path);
    if (!f) bad_input("cannot write " + path);
    return f;
}

int cmd_optimize(const Options& o, std::ostream& out) {
    if (o.belief.empty() == o.family.empty()) bad_input("optimize needs exactly one of --belief or --family");
    const PriceGrid grid = grid_from(o.grid, 1e-4, 1e4, 2001);
    const MarketParams market{o.px, o.py, o.budget};
    market.validate();
    BeliefSpec spec = o.belief.empty() ? belief_for(parse_family(o.family), o.px, o.py) : load_belief(o.belief);
    const BeliefSummary summary = compile(spec, grid);

    Allocation alloc;
    LinearTerm g = LinearTerm::zero(grid);
    bool has_linear = false;
    if (!o.linear_term.empty()) {
        has_linear = true;
        if (o.linear_term == "kappa") {
            g = divergence_value_term(summary);
        } else if (o.linear_term.rfind("lvr:", 0) == 0) {
            g = LinearTerm::uniform_cost(grid, parse_list(o.linear_term.substr(4), "--linear-term lvr", 1, 1)[0]);
        } else {
            bad_input("--linear-term must be kappa or lvr:<c>");
        }
        alloc = solve_with_linear_term(summary, g, market);
    } else {
        alloc = solve_cop(summary, market);
    }
    const KKTReport kkt = kkt_residuals(alloc, summary, market, has_linear ? &g : nullptr);

    const Entries config{
        {"belief", o.belief.empty() ? "family:" + o.family : o.belief},
        {"belief_kind", to_string(spec.kind)},
        {"P_X", format_double(o.px)},
        {"P_Y", format_double(o.py)},
        {"B", format_double(o.budget)},
        {"grid", grid_text(grid)},
        {"linear_term", o.linear_term.empty() ? "none" : o.linear_term},
        {"fee", o.fee.empty() ? "none" : o.fee},
    };
    Entries report{
        {"p0", format_double(alloc.p0)},
        {"X0", format_double(alloc.X0)},
        {"Y0", format_double(alloc.Y0)},
        {"lambda_B", format_double(alloc.lambda_B)},
        {"lambda_X", format_double(alloc.lambda_X)},
        {"lambda_Y", format_double(alloc.lambda_Y)},
        {"objective", format_double(kkt.objective)},
        {"multiplier_objective", format_double(kkt.multiplier_objective)},
        {"inefficiency", format_double(inefficiency(alloc, summary))},
        {"reserve_value", format_double(reserve_value(alloc, summary))},
        {"belief_mass", format_double(summary.mass)},
        {"truncated_fraction", format_double(summary.truncated_fraction())},
        {"stationarity_residual", format_double(kkt.stationarity_residual)},
        {"budget_residual", format_double(kkt.budget_residual)},
    };
    if (!o.fee.empty()) {
        const auto v = parse_list(o.fee, "--fee", 2, 2);
        FeeParams fees;
        fees.delta = v[0];
        fees.s = v[1];
        report.emplace_back("fee_revenue", format_double(fee_revenue(alloc, summary, fees)));
        if (has_linear) report.emplace_back("net_profit", format_double(net_profit(alloc, summary, fees, g)));
    }

    if (!o.out.empty()) {
        std::ofstream csv = open_output(o.out);
        write_allocation_csv(csv, alloc, header_lines("optimize", config));
        std::ofstream meta = open_output(o.out + ".meta");
        write_key_values(meta, {{"p0", format_double(alloc.p0)},
                                {"X0", format_double(alloc.X0)},
                                {"Y0", format_double(alloc.Y0)},
                                {"B", format_double(o.budget)},
                                {"P_X", format_double(o.px)},
                                {"P_Y", format_double(o.py)},
                                {"family", o.family.empty() ? "tabulated" : o.family}});
    }
    for (const auto& line : header_lines("optimize", config)) out << "# " << line << '\n';
    write_key_values(out, report);
    return exit_ok;
}

MarketParams market_for_alloc(const Options& o, const std::string& alloc_path, bool px_set, bool py_set) {
    MarketParams m{o.px, o.py, o.budget};
    const std::string meta = alloc_path + ".meta";
    if (std::ifstream(meta).good()) {
        const KeyValues kv = read_key_values(meta);
        const auto num = [&](const char* key, double& dst) {
            if (kv.count(key)) dst = parse_list(kv.at(key), meta + " " + key, 1, 1)[0];
        };
        if (!px_set) num("P_X", m.P_X);
        if (!py_set) num("P_Y", m.P_Y);
        num("B", m.B);
    }
    m.validate();
    return m;
}

int cmd_invert(const Options& o, std::ostream& out, bool px_set, bool py_set) {
    if (o.alloc.empty()) bad_input("invert needs --alloc");
    const MarketParams market = market_for_alloc(o, o.alloc, px_set, py_set);
    const Allocation alloc = read_allocation_csv(o.alloc, market.p0());
    const Inversion inv = invert_allocation(alloc, market);
    const Entries config{{"alloc", o.alloc}, {"P_X", format_double(market.P_X)}, {"P_Y", format_double(market.P_Y)}};

    double h_min = INFINITY, h_max = 0.0;
    for (double v : inv.h) {
        if (v > 0.0) h_min = std::min(h_min, v);
        h_max = std::max(h_max, v);
    }
    if (!o.out.empty()) {
        std::ofstream csv = open_output(o.out);
        const std::vector<double> p(alloc.grid.points().begin(), alloc.grid.points().end());
        write_csv(csv, header_lines("invert", config), {"p", "h"}, {p, inv.h});
    }
    if (!o.table.empty()) {
        std::vector<double> spec{1e-4, 1.0, 81.0};
        if (!o.table_grid.empty()) spec = parse_list(o.table_grid, "--table-grid", 3, 3);
        const PriceGrid axis = make_log_grid(spec[0], spec[1], static_cast<std::size_t>(spec[2]), 2);
        std::vector<double> ax, ay;
        for (double v : axis.points()) {
            ax.push_back(v * market.P_X);
            ay.push_back(v * market.P_Y);
        }
        std::ofstream csv = open_output(o.table);
        write_table2d_csv(csv, *inversion_table(alloc, market, ax, ay), header_lines("invert", config));
    }
    for (const auto& line : header_lines("invert", config)) out << "# " << line << '\n';
    write_key_values(out, {{"points", std::to_string(inv.h.size())},
                           {"h_min_positive", format_double(h_max > 0.0 ? h_min : 0.0)},
                           {"h_max", format_double(h_max)},
                           {"h_spread", format_double(h_max > 0.0 ? h_max / h_min : 0.0)}});
    return exit_ok;
}

std::uint64_t resolve_seed(const std::vector<double>& sim) {
    if (sim.size() == 4) return static_cast<std::uint64_t>(sim[3]);
    if (const char* env = std::getenv("CFMM_FORGE_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            bad_input("CFMM_FORGE_SEED must be an unsigned integer");
        }
    }
    return 1;
}

int cmd_simulate(const Options& o, std::ostream& out, bool px_set, bool py_set) {
    if (o.family.empty() == o.alloc.empty()) bad_input("simulate needs exactly one of --family or --alloc");
    TradingCurve curve;
    if (!o.family.empty()) {
        curve = reference_curve(curve_for(parse_family(o.family)));
    } else {
        const MarketParams market = market_for_alloc(o, o.alloc, px_set, py_set);
        curve = reserves_from_liquidity(read_allocation_csv(o.alloc, market.p0()));
    }
    SimConfig cfg;
    const auto sim = parse_list(o.sim.empty() ? "0.02,0.21,1000000" : o.sim, "--sim", 3, 4);
    cfg.k = sim[0];
    cfg.eps = sim[1];
    if (sim[2] < 1 || sim[2] != std::floor(sim[2])) bad_input("--sim steps must be a positive whole number");
    cfg.steps = static_cast<std::uint64_t>(sim[2]);
    cfg.seed = resolve_seed(sim);
    cfg.q = o.q;
    cfg.p_hat = o.p_hat;
    if (o.rule == "strict-spot") cfg.rule = SuccessRule::strict_spot;
    else if (o.rule == "overall-rate") cfg.rule = SuccessRule::overall_rate;
    else bad_input("--rule must be strict-spot or overall-rate");

    const SimStats s = simulate(curve, cfg);
    const double se = s.standard_error();
    const bool inside = s.failure_rate >= s.bound_lo - 3.0 * se && s.failure_rate <= s.bound_hi + 3.0 * se;
    const Entries config{{"curve", o.family.empty() ? o.alloc : "family:" + o.family},
                         {"k", format_double(cfg.k)},
                         {"eps", format_double(cfg.eps)},
                         {"steps", std::to_string(cfg.steps)},
                         {"seed", std::to_string(cfg.seed)},
                         {"q", format_double(cfg.q)},
                         {"p_hat", format_double(cfg.p_hat)},
                         {"rule", o.rule}};
    for (const auto& line : header_lines("simulate", config)) out << "# " << line << '\n';
    write_key_values(out, {{"attempted", std::to_string(s.attempted)},
                           {"succeeded", std::to_string(s.succeeded)},
                           {"failed", std::to_string(s.failed)},
                           {"failure_rate", format_double(s.failure_rate)},
                           {"standard_error", format_double(se)},
                           {"band", format_double(s.band)},
                           {"bound_lo", format_double(s.bound_lo)},
                           {"bound_hi", format_double(s.bound_hi)},
                           {"within_bounds", inside ? "yes" : "no"},
                           {"states", std::to_string(s.visit_histogram.size())},
                           {"tv_distance_uniform", format_double(s.tv_distance_uniform)}});
    if (!o.histogram.empty()) {
        std::ofstream csv = open_output(o.histogram);
        std::vector<double> idx, y, visits;
        for (std::size_t i = 0; i < s.visit_histogram.size(); ++i) {
            idx.push_back(static_cast<double>(s.n_min + static_cast<std::int64_t>(i)));
            y.push_back(s.state_y(i));
            visits.push_back(static_cast<double>(s.visit_histogram[i]));
        }
        write_csv(csv, header_lines("simulate", config), {"state_index", "y", "visits"}, {idx, y, visits});
    }
    if (o.assert_bounds && !inside) return exit_sim_bound;
    return exit_ok;
}

int cmd_verify(const Options& o, std::ostream& out) {
    if (o.family.empty()) bad_input("verify needs --family");
    const Family fam = parse_family(o.family);
    const PriceGrid grid = grid_from(o.grid, 1e-8, 1e8, 4001);
    const auto window = parse_list(o.window, "--window", 2, 2);
    const MarketParams market{1.0, 1.0, 2.0};
    const BeliefSummary summary = compile(belief_for(fam, 1.0, 1.0), grid);
    const Allocation alloc = solve_cop(summary, market);

    std::size_t ref = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (std::abs(std::log(grid[i])) < std::abs(std::log(grid[ref]))) ref = i;
    }
    const double scale = family_shape(fam, grid[ref]) / alloc.L[ref];
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double p = grid[i];
        if (p < window[0] || p > window[1]) continue;
        const double expect = family_shape(fam, p);
        const double got = alloc.L[i] * scale;
        const double dev = expect > 0.0 ? std::abs(got / expect - 1.0) : (got == 0.0 ? 0.0 : INFINITY);
        worst = std::max(worst, dev);
    }
    const bool pass = worst <= o.tol;
    out << "# command=verify\n# family=" << o.family << "\n# grid=" << grid_text(grid) << "\n# window=" << o.window
        << "\n# tol=" << format_double(o.tol) << '\n';
    write_key_values(out, {{"family", o.family},
                           {"max_rel_dev", format_double(worst)},
                           {"X0", format_double(alloc.X0)},
                           {"Y0", format_double(alloc.Y0)},
                           {"result", pass ? "PASS" : "FAIL"}});
    return pass ? exit_ok : exit_verify;
}

int cmd_compile_belief(const Options& o, std::ostream& out, bool px_set, bool py_set) {
    GbmParams g;
    std::size_t t_steps = o.t_steps;
    if (!o.belief.empty()) {
        const BeliefSpec spec = load_belief(o.belief);
        if (spec.kind != BeliefKind::gbm_discounted) bad_input("compile-belief expects a gbm-discounted belief");
        g = spec.gbm;
        t_steps = spec.time_rule->t.size();
    } else {
        g.mu_X = o.mu_x;
        g.mu_Y = o.mu_y;
        g.sigma_X = o.sigma_x;
        g.sigma_Y = o.sigma_y;
        g.gamma = o.gamma;
    }
    if (px_set || o.belief.empty()) g.P_X = o.px;
    if (py_set || o.belief.empty()) g.P_Y = o.py;
    try {
        g.validate();
    } catch (const Error& e) {
        bad_input(e.what());
    }
    const BeliefSpec spec = BeliefSpec::gbm_discounted(g, t_steps);
    const PriceGrid grid = grid_from(o.grid, 1e-4, 1e4, 2001);
    const BeliefSummary summary = compile_2d(spec, grid);

    std::vector<double> axis_spec{1e-3, 1e3, 121.0};
    if (!o.table_grid.empty()) axis_spec = parse_list(o.table_grid, "--table-grid", 3, 3);
    const PriceGrid axis = make_log_grid(axis_spec[0], axis_spec[1], static_cast<std::size_t>(axis_spec[2]), 2);
    std::vector<double> ax, ay, psi;
    for (double v : axis.points()) {
        ax.push_back(v * g.P_X);
        ay.push_back(v * g.P_Y);
    }
    for (double x : ax) {
        for (double y : ay) psi.push_back(eval_psi(spec, x, y));
    }
    double asym = 0.0, peak = 0.0;
    const std::size_t n = axis.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            peak = std::max(peak, psi[i * n + j]);
            asym = std::max(asym, std::abs(psi[i * n + j] - psi[j * n + i]));
        }
    }
    const Entries config{{"P_X", format_double(g.P_X)},         {"P_Y", format_double(g.P_Y)},
                         {"mu_X", format_double(g.mu_X)},       {"mu_Y", format_double(g.mu_Y)},
                         {"sigma_X", format_double(g.sigma_X)}, {"sigma_Y", format_double(g.sigma_Y)},
                         {"gamma", format_double(g.gamma)},     {"t_steps", std::to_string(t_steps)},
                         {"table_grid", grid_text(axis)}};
    if (!o.out.empty()) {
        std::ofstream csv = open_output(o.out);
        write_table2d_csv(csv, Table2d(ax, ay, psi), header_lines("compile-belief", config));
    }
    for (const auto& line : header_lines("compile-belief", config)) out << "# " << line << '\n';
    write_key_values(out, {{"mass", format_double(summary.mass)},
                           {"expected_mass", format_double(1.0 / g.gamma)},
                           {"truncated_fraction", format_double(summary.truncated_fraction())},
                           {"swap_asymmetry", format_double(peak > 0.0 ? asym / peak : 0.0)}});
    return exit_ok;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Optimal CFMM liquidity from price beliefs", "cfmm-forge"};
    app.set_config("--config", "", "INI/TOML file with option values; flags override it");
    app.require_subcommand(1);
    Options o;

    auto* optimize = app.add_subcommand("optimize", "Optimal liquidity allocation for a belief");
    auto* invert = app.add_subcommand("invert", "Belief that makes an allocation optimal");
    auto* simulate_cmd = app.add_subcommand("simulate", "Size-k trade Markov chain against a curve");
    auto* verify = app.add_subcommand("verify", "Check an optimized family against its closed form");
    auto* compile_cmd = app.add_subcommand("compile-belief", "Tabulate a discounted GBM belief");

    std::vector<CLI::Option*> px_opts, py_opts;
    for (auto* sub : {optimize, invert, simulate_cmd, compile_cmd}) {
        px_opts.push_back(sub->add_option("--px", o.px, "Initial numeraire price of X")->capture_default_str());
        py_opts.push_back(sub->add_option("--py", o.py, "Initial numeraire price of Y")->capture_default_str());
    }
    for (auto* sub : {optimize, verify, compile_cmd}) {
        sub->add_option("--grid", o.grid, "Price grid as pmin,pmax,n");
    }
    for (auto* sub : {optimize, invert, compile_cmd}) sub->add_option("--out", o.out, "Output CSV path");

    optimize->add_option("--belief", o.belief, "Belief file (JSON or CSV)");
    optimize->add_option("--family", o.family, "Belief of a named family: constant-product, weighted:a, lmsr, "
                                               "lognormal:s, concentrated:lo:hi");
    optimize->add_option("--budget", o.budget, "Budget B in numeraire")->capture_default_str();
    optimize->add_option("--fee", o.fee, "Fee report as delta,s");
    optimize->add_option("--linear-term", o.linear_term, "kappa or lvr:<c>");

    invert->add_option("--alloc", o.alloc, "Allocation CSV (p,L[,Y,X])");
    invert->add_option("--table", o.table, "Also write the 2-D belief table here");
    invert->add_option("--table-grid", o.table_grid, "Table axes relative to P as lo,hi,n");

    simulate_cmd->add_option("--family", o.family, "Closed-form curve: constant-product, weighted:a, lmsr, "
                                                   "concentrated:lo:hi");
    simulate_cmd->add_option("--alloc", o.alloc, "Allocation CSV to trade against");
    simulate_cmd->add_option("--sim", o.sim, "k,eps,steps[,seed]");
    simulate_cmd->add_option("--q", o.q, "Per-step arrival probability")->capture_default_str();
    simulate_cmd->add_option("--p-hat", o.p_hat, "Reference exchange rate")->capture_default_str();
    simulate_cmd->add_option("--rule", o.rule, "strict-spot or overall-rate")->capture_default_str();
    simulate_cmd->add_flag("--assert-bounds", o.assert_bounds, "Exit 4 when the failure rate leaves the bounds");
    simulate_cmd->add_option("--histogram", o.histogram, "Visit histogram CSV path");

    verify->add_option("--family", o.family, "constant-product, weighted:a, lmsr, lognormal:s, concentrated:lo:hi");
    verify->add_option("--tol", o.tol, "Maximum relative deviation")->capture_default_str();
    verify->add_option("--window", o.window, "Comparison range lo,hi")->capture_default_str();

    compile_cmd->add_option("--belief", o.belief, "gbm-discounted belief JSON");
    compile_cmd->add_option("--mu-x", o.mu_x, "Drift of X")->capture_default_str();
    compile_cmd->add_option("--mu-y", o.mu_y, "Drift of Y")->capture_default_str();
    compile_cmd->add_option("--sigma-x", o.sigma_x, "Volatility of X")->capture_default_str();
    compile_cmd->add_option("--sigma-y", o.sigma_y, "Volatility of Y")->capture_default_str();
    compile_cmd->add_option("--gamma", o.gamma, "Discount rate")->capture_default_str();
    compile_cmd->add_option("--t-steps", o.t_steps, "Time quadrature nodes")->capture_default_str();
    compile_cmd->add_option("--table-grid", o.table_grid, "Table axes relative to P as lo,hi,n");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_input;
    }
    const auto any_count = [](const std::vector<CLI::Option*>& opts) {
        return std::any_of(opts.begin(), opts.end(), [](CLI::Option* opt) { return opt->count() > 0; });
    };
    const bool px_set = any_count(px_opts), py_set = any_count(py_opts);

    try {
        if (optimize->parsed()) return cmd_optimize(o, out);
        if (invert->parsed()) return cmd_invert(o, out, px_set, py_set);
        if (simulate_cmd->parsed()) return cmd_simulate(o, out, px_set, py_set);
        if (verify->parsed()) return cmd_verify(o, out);
        if (compile_cmd->parsed()) return cmd_compile_belief(o, out, px_set, py_set);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.kind() == ErrorKind::truncation_dominated ? exit_truncation : exit_input;
    }
    return exit_input;
}

}  // namespace cfmm
