#include "support.hpp"

#include "lleekit/errors.hpp"
#include "lleekit/io.hpp"
#include "lleekit/random.hpp"
#include "lleekit/solve.hpp"

#include <doctest.h>

using namespace lleekit;

namespace {

std::size_t error_line(const std::string& text)
{
    try {
        read_chart(text);
    } catch (const FormatError& e) {
        return e.line();
    }
    return 999;
}

} // namespace

TEST_CASE("chart text round trip")
{
    for (auto name : {"fig2_g.chart", "fig4_ci.chart", "fig5_cii.chart", "non_lee.chart"}) {
        auto g = fx::chart(name);
        CHECK(read_chart(write_chart(g)) == g);
        CHECK(chart_from_json(chart_to_json(g)) == g);
    }
    Rng rng(97);
    for (int i = 0; i < 200; ++i) {
        RandomChartOptions o;
        o.nodes = 1 + i % 7;
        o.with_initial = i % 2;
        auto g = random_chart(rng, o);
        CHECK(read_chart(write_chart(g)) == g);
        CHECK(chart_from_json(nlohmann::json::parse(chart_to_json(g).dump())) == g);
    }
    auto iso = ChartBuilder().node("lonely").transition("p", "a", "!").build();
    CHECK(write_chart(iso).find("node lonely") != std::string::npos);
    CHECK(read_chart(write_chart(iso)) == iso);
}

TEST_CASE("chart text: comments, blanks and errors")
{
    auto g = read_chart("# header comment\nchart v1\n\ninit x   # start\nx a x # loop\nx b !\n");
    CHECK(g.node_count() == 1);
    CHECK(g.transition_count() == 2);
    CHECK(g.initial() == std::optional<NodeId>(0));

    CHECK(error_line("") == 1);
    CHECK(error_line("graph v1\n") == 1);
    CHECK(error_line("chart v2\n") == 1);
    CHECK(error_line("chart v1\nx a\n") == 2);
    CHECK(error_line("chart v1\n\nx A y\n") == 3);
    CHECK(error_line("chart v1\ninit x\ninit y\n") == 3);
    CHECK(error_line("chart v1\n! a x\n") == 2);
    CHECK(error_line("chart v1\nx a y z\n") == 2);
}

TEST_CASE("witness text round trip and errors")
{
    auto g = fx::chart("fig5_cii.chart");
    auto w = fx::witness(g, "fig5_cii_hat.witness");
    CHECK(read_witness(write_witness(w), g) == w);
    CHECK(witness_from_json(witness_to_json(w), g) == w);

    auto ci = fx::chart("fig4_ci.chart");
    auto expect_line = [&](const std::string& text, std::size_t line) {
        try {
            read_witness(text, ci);
            FAIL("no throw");
        } catch (const FormatError& e) {
            CHECK(e.line() == line);
        }
    };
    expect_line("witness v1\nZ a1 Z\n", 2);
    expect_line("witness v1\nZ a1 Q 1\n", 2);
    expect_line("witness v1\nZ a1 Z x\n", 2);
    expect_line("witness v1\nZ a1 Z -1\n", 2);
    expect_line("witness v1\nZ a1 Z 1\nZ a1 Z 2\n", 3);
    expect_line("witness v1\nZ a1 Z 1\n", 0); // others missing
    auto n = fx::chart("non_lee.chart");
    CHECK_THROWS_AS(read_witness("witness v1\nX b ! 0\nX a Y 0\nY a X 0\n", n), FormatError);
}

TEST_CASE("map and solution round trips")
{
    auto cii = fx::chart("fig5_cii.chart"), ci = fx::chart("fig4_ci.chart");
    auto m = read_map(read_file(fx::path("fig5_theta.map")), cii, ci);
    CHECK(read_map(write_map(m), cii, ci).map() == m.map());
    CHECK(map_to_json(m)["map"]["z''"] == "Z");
    CHECK_THROWS_AS(read_map("map v1\nz Z\n", cii, ci), FormatError);
    CHECK_THROWS_AS(read_map("map v1\nz Q\n", cii, ci), FormatError);
    CHECK_THROWS_AS(read_map("map v1\nz Z\nz X\n", cii, ci), FormatError);

    auto h = fx::chart("fig2_h.chart");
    Solution s{h, {parse("(a+b)*0")}};
    auto back = read_solution(write_solution(s), h);
    CHECK(back.assign == s.assign);
    CHECK(read_solution("solution v1\nX ( a + b ) * 0\n", h).assign == s.assign);
    CHECK_THROWS_AS(read_solution("solution v1\nX a b\n", h), FormatError);
    CHECK_THROWS_AS(read_solution("solution v1\n", h), FormatError);
    CHECK_THROWS_AS(read_solution("solution v1\nY a\n", h), FormatError);
}

TEST_CASE("json errors")
{
    CHECK_THROWS_AS(chart_from_json(nlohmann::json{{"v", 2}}), FormatError);
    CHECK_THROWS_AS(chart_from_json(nlohmann::json{{"v", 1}}), FormatError);
    CHECK_THROWS_AS(witness_from_json(nlohmann::json{{"v", 1}}, fx::chart("fig2_h.chart")), FormatError);
}

TEST_CASE("dot output")
{
    auto g = fx::chart("fig2_g.chart");
    auto w = fx::witness(g, "fig2_g_hat.witness");
    auto dot = chart_to_dot(g, &w, {{"loop", fx::nodes(g, {"x'"})}});
    CHECK(dot.rfind("digraph", 0) == 0);
    CHECK(dot.find("__init -> \"x\"") != std::string::npos);
    CHECK(dot.find("[2]") != std::string::npos);
    CHECK(dot.find("color=red") != std::string::npos);
    CHECK(dot.find("cluster_0") != std::string::npos);
    auto n = chart_to_dot(fx::chart("non_lee.chart"));
    CHECK(n.find("doublecircle") != std::string::npos);
    CHECK(n.find("-> \"!\"") != std::string::npos);
    CHECK(n.find("color=red") == std::string::npos);
}

TEST_CASE("files")
{
    CHECK_THROWS_AS(read_file("/nonexistent/dir/file"), IoError);
    CHECK_THROWS_AS(write_file("/nonexistent/dir/file", "x"), IoError);
}
