#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cfmm/error.hpp"
#include "cfmm/io.hpp"
#include "cfmm/optimizer.hpp"

using namespace cfmm;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "cfmm_io_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
    const fs::path p = scratch() / name;
    std::ofstream(p) << text;
    return p.string();
}

std::string error_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("csv round trip keeps every digit") {
    std::ostringstream out;
    const std::vector<double> a{0.1, 1.0 / 3.0, 1e-300}, b{std::sqrt(2.0), -2.5, 7.0};
    write_csv(out, {"note=one"}, {"a", "b"}, {a, b});
    std::istringstream in(out.str());
    const CsvTable t = read_csv(in, "mem");
    CHECK(t.comments.size() == 1);
    CHECK(t.values("a") == a);
    CHECK(t.values("b") == b);
    CHECK_THROWS_AS(t.column("c"), Error);
}

TEST_CASE("csv errors name the line") {
    std::istringstream in("p,h\n1,2\n3,x\n");
    CHECK(error_of([&] { read_csv(in, "belief.csv"); }).find("belief.csv:3") != std::string::npos);
    std::istringstream ragged("p,h\n1,2,3\n");
    CHECK(error_of([&] { read_csv(ragged, "r.csv"); }).find("r.csv:2") != std::string::npos);
}

TEST_CASE("allocation csv round trip") {
    const PriceGrid g = make_log_grid(1e-3, 1e3, 301);
    std::vector<double> L;
    for (double p : g.points()) L.push_back(p / (1.0 + p));
    const Allocation a = Allocation::from_liquidity(g, L, 1.0);
    const std::string path = (scratch() / "alloc.csv").string();
    {
        std::ofstream f(path);
        write_allocation_csv(f, a, {"command=test"});
    }
    const CsvTable t = read_csv_file(path);
    CHECK(t.header == std::vector<std::string>{"p", "L", "Y", "X"});
    const Allocation b = read_allocation_csv(path, 1.0);
    CHECK(b.L == a.L);
    CHECK(b.grid.same_as(g));
    CHECK(b.X0 == doctest::Approx(a.X0).epsilon(1e-14));

    const std::string bad = write_file("bad_alloc.csv", "p,L\n1,1\n2,1\n5,1\n");
    CHECK(error_of([&] { read_allocation_csv(bad, 1.0); }).find("log-uniform") != std::string::npos);
}

TEST_CASE("key value files") {
    std::ostringstream out;
    write_key_values(out, {{"X0", "1"}, {"family", "lmsr"}});
    const std::string path = write_file("kv.meta", "# c\n" + out.str());
    const KeyValues kv = read_key_values(path);
    CHECK(kv.at("X0") == "1");
    CHECK(kv.at("family") == "lmsr");
}

TEST_CASE("json beliefs") {
    CHECK(parse_belief_json(R"({"kind": "uniform-rect"})", ".").kind == BeliefKind::uniform_rect);
    const BeliefSpec p = parse_belief_json(R"({"kind": "power-rect", "exponent": 0.6, "P_X": 2})", ".");
    CHECK(p.exponent == 0.6);
    CHECK(p.P_X == 2.0);
    const BeliefSpec l = parse_belief_json(R"({"kind": "lognormal-ratio", "sigma": 0.5, "scale": 3})", ".");
    CHECK(l.sigma == 0.5);
    CHECK(l.scale == 3.0);
    const BeliefSpec ind = parse_belief_json(R"({"kind": "ratio-1d", "density": {"indicator": [0.5, 2]}})", ".");
    CHECK(ind.density(1.0) > 0.0);
    CHECK(ind.density(3.0) == 0.0);
    const BeliefSpec g = parse_belief_json(
        R"({"kind": "gbm-discounted", "P_X": 1, "P_Y": 1, "mu_X": 0, "mu_Y": 0, "sigma_X": 1, "sigma_Y": 1, "gamma": 2})",
        ".");
    CHECK(g.gbm.gamma == 2.0);

    CHECK(error_of([] { parse_belief_json(R"({"kind": "uniform-rect", "sigmaa": 1})", "."); })
              .find("unknown key 'sigmaa'") != std::string::npos);
    CHECK(error_of([] { parse_belief_json(R"({"kind": "power-rect", "exponent": "x"})", "."); })
              .find("'exponent'") != std::string::npos);
    CHECK(error_of([] { parse_belief_json(R"({"kind": "nope"})", "."); }).find("'kind'") != std::string::npos);
    CHECK(error_of([] { parse_belief_json("{", "."); }).find("malformed-input") == 0);
}

TEST_CASE("csv beliefs are detected by header") {
    const std::string ratio = write_file("h.csv", "p,h\n0.1,1\n1,1\n10,1\n");
    const BeliefSpec r = load_belief(ratio);
    CHECK(r.kind == BeliefKind::ratio_1d);
    CHECK(r.density(2.0) == doctest::Approx(1.0));

    const std::string table = write_file("t.csv", "p_x,p_y,psi\n0.5,0.5,1\n0.5,1,2\n1,0.5,3\n1,1,4\n");
    const BeliefSpec t = load_belief(table);
    CHECK(t.kind == BeliefKind::table_2d);
    CHECK(eval_psi(t, 1.0, 0.5) == 3.0);

    const std::string holes = write_file("holes.csv", "p_x,p_y,psi\n0.5,0.5,1\n0.5,1,2\n1,0.5,3\n");
    CHECK(error_of([&] { load_belief(holes); }).find("tensor grid") != std::string::npos);

    const std::string other = write_file("o.csv", "a,b\n1,2\n");
    CHECK(error_of([&] { load_belief(other); }).find("header") != std::string::npos);

    const std::string json = write_file("b.json", R"({"kind": "ratio-1d", "density": "h.csv"})");
    CHECK(load_belief(json).density(5.0) == doctest::Approx(1.0));
}

TEST_CASE("table csv round trip") {
    const Table2d t({0.5, 1.0}, {0.25, 0.5, 1.0}, {1, 2, 3, 4, 5, 6});
    std::ostringstream out;
    write_table2d_csv(out, t, {});
    std::istringstream in(out.str());
    const auto back = table2d_from_csv(read_csv(in, "mem"), "mem");
    CHECK(back->values() == t.values());
    CHECK(back->px_axis() == t.px_axis());
}
