#include "cfmm/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cfmm/error.hpp"

namespace cfmm {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, sep)) out.push_back(trim(cell));
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

double parse_number(const std::string& text, const std::string& where) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || text.empty()) {
        throw Error(ErrorKind::malformed_input, where + ": '" + text + "' is not a number");
    }
    return v;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::malformed_input, "cannot open " + path);
    return in;
}

std::string read_text(const std::string& path) {
    std::ifstream in = open_input(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<double> axis_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw Error(ErrorKind::malformed_input, "missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
}

std::vector<double> CsvTable::values(const std::string& name) const {
    const std::size_t c = column(name);
    std::vector<double> v;
    v.reserve(rows.size());
    for (const auto& r : rows) v.push_back(r[c]);
    return v;
}

CsvTable read_csv(std::istream& in, const std::string& source) {
    CsvTable t;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string s = trim(line);
        if (s.empty()) continue;
        if (s[0] == '#') {
            t.comments.push_back(trim(s.substr(1)));
            continue;
        }
        const std::vector<std::string> cells = split(s, ',');
        if (t.header.empty()) {
            t.header = cells;
            continue;
        }
        const std::string where = source + ":" + std::to_string(lineno);
        if (cells.size() != t.header.size()) {
            throw Error(ErrorKind::malformed_input, where + ": expected " + std::to_string(t.header.size()) +
                                                        " fields, found " + std::to_string(cells.size()));
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) row.push_back(parse_number(c, where));
        t.rows.push_back(std::move(row));
    }
    if (t.header.empty()) throw Error(ErrorKind::malformed_input, source + ": no header line");
    return t;
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in = open_input(path);
    return read_csv(in, path);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(std::ostream& out, const std::vector<std::string>& comments, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
    for (const auto& c : comments) out << "# " << c << '\n';
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    const std::size_t n = columns.empty() ? 0 : columns.front().size();
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << format_double(columns[c][r]);
        out << '\n';
    }
}

void write_allocation_csv(std::ostream& out, const Allocation& alloc, const std::vector<std::string>& comments) {
    const TradingCurve curve = reserves_from_liquidity(alloc);
    const std::vector<double> p(alloc.grid.points().begin(), alloc.grid.points().end());
    write_csv(out, comments, {"p", "L", "Y", "X"}, {p, alloc.L, curve.Y_of_p(), curve.X_of_p()});
}

Allocation read_allocation_csv(const std::string& path, double p0) {
    const CsvTable t = read_csv_file(path);
    const std::vector<double> p = t.values("p");
    std::vector<double> L = t.values("L");
    if (p.size() < 3) throw Error(ErrorKind::malformed_input, path + ": too few rows");
    PriceGrid grid;
    try {
        grid = make_log_grid(p.front(), p.back(), p.size(), 3);
    } catch (const Error&) {
        throw Error(ErrorKind::malformed_input, path + ": p column must increase from a positive value");
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (std::abs(p[i] - grid[i]) > 1e-9 * grid[i]) {
            throw Error(ErrorKind::malformed_input, path + ": p column is not a log-uniform grid (row " +
                                                        std::to_string(i + 1) + ")");
        }
        if (!std::isfinite(L[i]) || L[i] < 0.0) {
            throw Error(ErrorKind::malformed_input, path + ": L must be finite and non-negative (row " +
                                                        std::to_string(i + 1) + ")");
        }
    }
    return Allocation::from_liquidity(grid, std::move(L), p0);
}

KeyValues read_key_values(const std::string& path) {
    std::ifstream in = open_input(path);
    KeyValues kv;
    std::string line;
    while (std::getline(in, line)) {
        const std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw Error(ErrorKind::malformed_input, path + ": expected key=value, got '" + s + "'");
        kv[trim(s.substr(0, eq))] = trim(s.substr(eq + 1));
    }
    return kv;
}

void write_key_values(std::ostream& out, const std::vector<std::pair<std::string, std::string>>& entries) {
    for (const auto& [k, v] : entries) out << k << '=' << v << '\n';
}

std::shared_ptr<const Table2d> table2d_from_csv(const CsvTable& csv, const std::string& source) {
    const std::vector<double> px = csv.values("p_x"), py = csv.values("p_y"), psi = csv.values("psi");
    const std::vector<double> ax = axis_of(px), ay = axis_of(py);
    std::vector<double> grid(ax.size() * ay.size(), 0.0);
    std::vector<bool> seen(grid.size(), false);
    for (std::size_t r = 0; r < px.size(); ++r) {
        const auto ix = static_cast<std::size_t>(std::lower_bound(ax.begin(), ax.end(), px[r]) - ax.begin());
        const auto iy = static_cast<std::size_t>(std::lower_bound(ay.begin(), ay.end(), py[r]) - ay.begin());
        grid[ix * ay.size() + iy] = psi[r];
        seen[ix * ay.size() + iy] = true;
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
        throw Error(ErrorKind::malformed_input, source + ": p_x,p_y rows do not fill a tensor grid");
    }
    try {
        return std::make_shared<const Table2d>(ax, ay, std::move(grid));
    } catch (const Error& e) {
        throw Error(ErrorKind::malformed_input, source + ": " + e.what());
    }
}

RatioDensity ratio_from_csv(const CsvTable& csv) {
    std::vector<double> p = csv.values("p"), h = csv.values("h");
    try {
        return RatioDensity::from_table(std::move(p), std::move(h));
    } catch (const Error& e) {
        throw Error(ErrorKind::malformed_input, std::string("ratio table: ") + e.what());
    }
}

void write_table2d_csv(std::ostream& out, const Table2d& table, const std::vector<std::string>& comments) {
    std::vector<double> px, py, psi;
    for (std::size_t ix = 0; ix < table.px_axis().size(); ++ix) {
        for (std::size_t iy = 0; iy < table.py_axis().size(); ++iy) {
            px.push_back(table.px_axis()[ix]);
            py.push_back(table.py_axis()[iy]);
            psi.push_back(table.at(ix, iy));
        }
    }
    write_csv(out, comments, {"p_x", "p_y", "psi"}, {px, py, psi});
}

BeliefSpec parse_belief_json(const std::string& text, const std::string& base_dir) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::malformed_input, std::string("belief JSON: ") + e.what());
    }
    if (!doc.is_object()) throw Error(ErrorKind::malformed_input, "belief config must be a JSON object");
    if (!doc.contains("kind") || !doc["kind"].is_string()) {
        throw Error(ErrorKind::malformed_input, "key 'kind' is missing or not a string");
    }
    const std::string kind = doc["kind"];

    const auto number = [&](const char* key, double fallback) {
        if (!doc.contains(key)) return fallback;
        if (!doc[key].is_number()) throw Error(ErrorKind::malformed_input, std::string("key '") + key + "' must be a number");
        return doc[key].get<double>();
    };
    const auto resolve = [&](const std::string& p) {
        const std::filesystem::path path(p);
        return path.is_absolute() ? p : (std::filesystem::path(base_dir) / path).string();
    };
    const auto check_keys = [&](std::set<std::string> allowed) {
        allowed.insert({"kind", "scale"});
        for (const auto& item : doc.items()) {
            if (!allowed.count(item.key())) {
                throw Error(ErrorKind::malformed_input, "unknown key '" + item.key() + "' for kind " + kind);
            }
        }
    };

    BeliefSpec spec;
    const double P_X = number("P_X", 1.0), P_Y = number("P_Y", 1.0);
    if (kind == "uniform-rect") {
        check_keys({"P_X", "P_Y"});
        spec = BeliefSpec::uniform(P_X, P_Y);
    } else if (kind == "power-rect") {
        check_keys({"P_X", "P_Y", "exponent"});
        if (!doc.contains("exponent")) throw Error(ErrorKind::malformed_input, "key 'exponent' is required for power-rect");
        spec = BeliefSpec::power(number("exponent", 0.0), P_X, P_Y);
    } else if (kind == "lmsr-rect") {
        check_keys({"P_X", "P_Y"});
        spec = BeliefSpec::lmsr(P_X, P_Y);
    } else if (kind == "lognormal-ratio") {
        check_keys({"P_X", "P_Y", "sigma"});
        spec = BeliefSpec::lognormal_ratio(number("sigma", 1.0), P_X, P_Y);
    } else if (kind == "ratio-1d") {
        check_keys({"P_X", "P_Y", "density"});
        if (!doc.contains("density")) throw Error(ErrorKind::malformed_input, "key 'density' is required for ratio-1d");
        const json& d = doc["density"];
        RatioDensity h;
        if (d.is_string()) {
            h = ratio_from_csv(read_csv_file(resolve(d.get<std::string>())));
        } else if (d.is_object() && d.contains("indicator")) {
            const json& r = d["indicator"];
            if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number()) {
                throw Error(ErrorKind::malformed_input, "key 'density.indicator' must be [lo, hi]");
            }
            h = RatioDensity::indicator(r[0].get<double>(), r[1].get<double>());
        } else if (d.is_object() && d.contains("p") && d.contains("h")) {
            try {
                h = RatioDensity::from_table(d["p"].get<std::vector<double>>(), d["h"].get<std::vector<double>>());
            } catch (const json::exception&) {
                throw Error(ErrorKind::malformed_input, "keys 'density.p' and 'density.h' must be number arrays");
            }
        } else {
            throw Error(ErrorKind::malformed_input, "key 'density' must be a CSV path, {p, h} arrays, or {indicator}");
        }
        spec = BeliefSpec::ratio(std::move(h), P_X, P_Y);
    } else if (kind == "gbm-discounted") {
        check_keys({"P_X", "P_Y", "mu_X", "mu_Y", "sigma_X", "sigma_Y", "gamma", "t_steps"});
        GbmParams g;
        g.P_X = P_X;
        g.P_Y = P_Y;
        g.mu_X = number("mu_X", 0.0);
        g.mu_Y = number("mu_Y", 0.0);
        g.sigma_X = number("sigma_X", 1.0);
        g.sigma_Y = number("sigma_Y", 1.0);
        g.gamma = number("gamma", 1.0);
        const double steps = number("t_steps", 160.0);
        if (!(steps >= 2.0) || steps != std::floor(steps)) {
            throw Error(ErrorKind::malformed_input, "key 't_steps' must be an integer >= 2");
        }
        spec = BeliefSpec::gbm_discounted(g, static_cast<std::size_t>(steps));
    } else if (kind == "table-2d") {
        check_keys({"table"});
        if (!doc.contains("table") || !doc["table"].is_string()) {
            throw Error(ErrorKind::malformed_input, "key 'table' must be a CSV path");
        }
        const std::string path = resolve(doc["table"].get<std::string>());
        spec = BeliefSpec::tabulated(table2d_from_csv(read_csv_file(path), path));
    } else {
        throw Error(ErrorKind::malformed_input, "key 'kind' has unknown value '" + kind + "'");
    }
    if (doc.contains("scale")) spec = spec.scaled(number("scale", 1.0));
    try {
        spec.validate();
    } catch (const Error& e) {
        throw Error(ErrorKind::malformed_input, e.what());
    }
    return spec;
}

BeliefSpec load_belief(const std::string& path) {
    const std::string text = read_text(path);
    const std::string base = std::filesystem::path(path).parent_path().string();
    std::string first;
    {
        std::stringstream ss(text);
        std::string line;
        while (std::getline(ss, line)) {
            const std::string s = trim(line);
            if (!s.empty() && s[0] != '#') {
                first = s;
                break;
            }
        }
    }
    if (!first.empty() && first[0] != '{') {
        std::stringstream ss(text);
        const CsvTable csv = read_csv(ss, path);
        if (csv.header == std::vector<std::string>{"p_x", "p_y", "psi"}) {
            return BeliefSpec::tabulated(table2d_from_csv(csv, path));
        }
        if (csv.header == std::vector<std::string>{"p", "h"}) return BeliefSpec::ratio(ratio_from_csv(csv));
        throw Error(ErrorKind::malformed_input, path + ": CSV header must be p_x,p_y,psi or p,h");
    }
    return parse_belief_json(text, base.empty() ? "." : base);
}

}  // namespace cfmm
