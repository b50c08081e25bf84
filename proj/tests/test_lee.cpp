#include "oracles.hpp"
#include "support.hpp"

#include "lleekit/errors.hpp"
#include "lleekit/lee.hpp"
#include "lleekit/random.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace lleekit;

namespace {

std::set<std::string> names(const Chart& g, const NodeSet& s)
{
    std::set<std::string> out;
    for (auto v : s) out.insert(g.node_name(v));
    return out;
}

std::set<std::string> described(const Chart& g, const std::vector<TransitionId>& ts)
{
    std::set<std::string> out;
    for (auto t : ts) out.insert(g.describe(t));
    return out;
}

RandomChartOptions loopy(std::size_t n)
{
    RandomChartOptions o;
    o.nodes = n;
    o.edge_probability = 0.3;
    o.terminal_probability = 0.1;
    return o;
}

// Eliminates random entry sets at randomly chosen nodes until no cycle is left.
std::optional<Witness> random_elimination(const Chart& g, Rng& rng)
{
    Remnant r(g);
    Witness w = Witness::zero(g);
    for (Order n = 1; !r.acyclic(); ++n) {
        std::vector<std::vector<TransitionId>> options;
        for (NodeId x = 0; x < g.node_count(); ++x)
            if (auto e = max_entry_set(r, x); !e.empty()) options.push_back(std::move(e));
        if (options.empty()) return std::nullopt;
        auto pick = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
        // a random admissible part of the maximal set
        const NodeId x = g.transition(pick.front()).src;
        for (int tries = 0; tries < 8; ++tries) {
            std::vector<TransitionId> part;
            for (auto t : pick)
                if (std::bernoulli_distribution(0.5)(rng)) part.push_back(t);
            if (!part.empty() && is_loop_chart(g, generated_chart(r, x, part))) {
                pick = std::move(part);
                break;
            }
        }
        for (auto t : pick) w.order[t] = n;
        r.remove(pick);
    }
    return w;
}

} // namespace

TEST_CASE("generated charts")
{
    auto g = fx::chart("fig4_ci.chart");
    const TransitionId a3[] = {fx::tr(g, "Z", "a3", "Y")};
    auto c = generated_chart(g, g.node("Z"), a3);
    CHECK(names(g, c.nodes()) == std::set<std::string>{"Z", "Y"});
    CHECK(names(g, c.body) == std::set<std::string>{"Y"});
    CHECK(described(g, c.transitions) == std::set<std::string>{"Z a3 Y", "Y d1 Z"});
    CHECK(is_loop_chart(g, c));

    const TransitionId a4[] = {fx::tr(g, "Z", "a4", "K")};
    auto d = generated_chart(g, g.node("Z"), a4);
    CHECK(names(g, d.nodes()) == std::set<std::string>{"Z", "K", "X"});
    CHECK(described(g, d.transitions) == std::set<std::string>{"Z a4 K", "K d2 X", "X b1 Z"});

    CHECK_THROWS_AS(generated_chart(g, g.node("Z"), std::span<const TransitionId>{}), EmptyEntrySet);
    const TransitionId wrong[] = {fx::tr(g, "Y", "d1", "Z")};
    CHECK_THROWS_AS(generated_chart(g, g.node("Z"), wrong), Error);
}

TEST_CASE("loop chart conditions")
{
    auto g = fx::chart("fig2_g.chart");
    const TransitionId self[] = {fx::tr(g, "x'", "a", "x'")};
    CHECK(is_loop_chart(g, generated_chart(g, g.node("x'"), self)));
    // from x the body contains the x' self-loop: not a loop chart
    const TransitionId fromx[] = {fx::tr(g, "x", "a", "x'")};
    CHECK_FALSE(is_loop_chart(g, generated_chart(g, g.node("x"), fromx)));

    auto n = fx::chart("non_lee.chart");
    const TransitionId xy[] = {fx::tr(n, "X", "a", "Y")};
    CHECK_FALSE(is_loop_chart(n, generated_chart(n, n.node("X"), xy))); // Y terminates

    auto h = fx::chart("fig2_h.chart");
    CHECK(is_loop_chart(chart_of_nodes(h, NodeSet{0}), 0));
    CHECK_FALSE(is_loop_chart(chart_of_nodes(g, fx::nodes(g, {"x", "x'"})), g.node("x")));
    auto straight = ChartBuilder().transition("p", "a", "q").build();
    CHECK_FALSE(is_loop_chart(chart_of_nodes(straight, NodeSet{0, 1}), 0));
}

TEST_CASE("eliminate: two steps reduce the chart to its start")
{
    auto g = fx::chart("fig2_g.chart");
    const NodeSet roots{g.node("x")};
    const TransitionId e1[] = {fx::tr(g, "x'", "a", "x'")};
    auto g1 = eliminate(g, g.node("x'"), e1, roots);
    CHECK(g1.transition_count() == 3);
    CHECK_FALSE(g1.find_transition("x'", "a", "x'"));

    const TransitionId e2[] = {*g1.find_transition("x", "a", "x'"), *g1.find_transition("x", "b", "x'")};
    auto g2 = eliminate(g1, g1.node("x"), e2, NodeSet{g1.node("x")});
    CHECK(g2.node_names() == std::vector<std::string>{"x"});
    CHECK(g2.transition_count() == 0);

    const TransitionId bad[] = {fx::tr(g, "x", "a", "x'")};
    CHECK_THROWS_AS(eliminate(g, g.node("x"), bad, roots), NotALoopChart);
}

TEST_CASE("max entry set: fixtures")
{
    auto ci = fx::chart("fig4_ci.chart");
    CHECK(max_entry_set(ci, ci.node("Z")).size() == 4);
    CHECK(max_entry_set(ci, ci.node("Y")).empty());
    auto n = fx::chart("non_lee.chart");
    CHECK(max_entry_set(n, n.node("X")).empty());
    CHECK(max_entry_set(n, n.node("Y")).empty());

    auto g = fx::chart("fig2_g.chart");
    auto xp = described(g, max_entry_set(g, g.node("x'")));
    CHECK(xp.count("x' a x'") == 1);
    CHECK(max_entry_set(g, g.node("x")).empty());
}

TEST_CASE("max entry set: brute force over all subsets")
{
    Rng rng(41);
    for (int i = 0; i < 400; ++i) {
        auto g = random_chart(rng, loopy(2 + i % 5));
        std::vector<bool> alive(g.transition_count(), true);
        for (NodeId x = 0; x < g.node_count(); ++x) {
            auto got = max_entry_set(g, x);
            CHECK(got == oracle::brute_max_entries(g, x));
            if (got.empty()) continue;
            // each member is admissible on its own, next to a returning entry
            std::vector<TransitionId> ret;
            for (auto t : got)
                if (oracle::loop_chart(g, alive, x, {t})) ret.push_back(t);
            REQUIRE_FALSE(ret.empty());
            for (auto t : got) CHECK(oracle::loop_chart(g, alive, x, {t, ret.front()}));
        }
    }
}

TEST_CASE("replay and witness checks on fixtures")
{
    auto g = fx::chart("fig2_g.chart");
    auto gw = fx::witness(g, "fig2_g_hat.witness");
    CHECK(is_lee_witness(gw));
    CHECK(is_llee_witness(gw));
    auto rp = replay(gw);
    REQUIRE(rp.steps.size() == 2);
    CHECK(g.node_name(rp.steps[0].start) == "x'");
    CHECK(g.node_name(rp.steps[1].start) == "x");

    auto ci = fx::chart("fig4_ci.chart");
    auto ciw = fx::witness(ci, "ci_hat.witness");
    CHECK(is_lee_witness(ciw));
    CHECK_FALSE(is_llee_witness(ciw));
    CHECK(llee_violation(ciw));
    auto ciw2 = fx::witness(ci, "ci_hat_prime.witness");
    CHECK(is_llee_witness(ciw2));

    auto cii = fx::chart("fig5_cii.chart");
    CHECK(is_llee_witness(fx::witness(cii, "fig5_cii_hat.witness")));

    auto zero = Witness::zero(g);
    CHECK_FALSE(is_lee_witness(zero));
    CHECK_THROWS_AS(is_llee_witness(zero), InvalidWitness);

    auto gap = gw;
    for (auto& o : gap.order)
        if (o == 2) o = 3;
    CHECK_FALSE(gap.down_closed());
    CHECK_FALSE(is_lee_witness(gap));
    CHECK(gap.compressed() == gw);
    CHECK(gw.max_order() == 2);
}

TEST_CASE("find_lee_witness: fixtures")
{
    auto g = fx::chart("fig2_g.chart");
    auto w = find_lee_witness(g);
    REQUIRE(w);
    CHECK(is_lee_witness(*w));
    CHECK((*w)[fx::tr(g, "x'", "a", "x'")] > 0);

    CHECK_FALSE(find_lee_witness(fx::chart("non_lee.chart")));
    CHECK_FALSE(oracle::exhaustive_lee(fx::chart("non_lee.chart")));

    auto acyclic = interpret(parse("a.(b+c.d)"));
    auto wa = find_lee_witness(acyclic);
    REQUIRE(wa);
    CHECK(wa->max_order() == 0);

    for (auto name : {"fig4_ci.chart", "fig5_cii.chart", "fig2_h.chart"}) {
        auto c = fx::chart(name);
        auto cw = find_lee_witness(c);
        REQUIRE(cw);
        CHECK(is_lee_witness(*cw));
    }
}

TEST_CASE("find_lee_witness: agrees with exhaustive search")
{
    Rng rng(43);
    int yes = 0, no = 0;
    for (int i = 0; i < 300; ++i) {
        auto g = random_chart(rng, loopy(2 + i % 4));
        auto w = find_lee_witness(g);
        CHECK(w.has_value() == oracle::exhaustive_lee(g));
        if (w) {
            CHECK(is_lee_witness(*w));
            ++yes;
        } else {
            ++no;
        }
    }
    CHECK(yes > 0);
    CHECK(no > 0);
}

TEST_CASE("loops-back-to on fixtures")
{
    auto g = fx::chart("fig2_g.chart");
    auto rel = loops_back_to(fx::witness(g, "fig2_g_hat.witness"));
    CHECK(names(g, rel.direct[g.node("x")]) == std::set<std::string>{"x'"});
    CHECK(rel.direct[g.node("x'")].empty());
    CHECK(rel.acyclic());

    auto cii = fx::chart("fig5_cii.chart");
    auto w = fx::witness(cii, "fig5_cii_hat.witness");
    auto r5 = loops_back_to(w);
    CHECK(names(cii, r5.direct[cii.node("x")]) == std::set<std::string>{"z''", "k"});
    CHECK(names(cii, r5.closure[cii.node("x")]) == std::set<std::string>{"z''", "k", "y"});
    CHECK(names(cii, r5.direct[cii.node("z''")]) == std::set<std::string>{"y"});
    CHECK(names(cii, r5.closure[cii.node("z'")]) == std::set<std::string>{"x'"});
    CHECK(r5.closure[cii.node("z")].size() == 6);
    CHECK(r5.acyclic());

    auto ci = fx::chart("fig4_ci.chart");
    CHECK_THROWS_AS(loops_back_to(fx::witness(ci, "ci_hat.witness")), NotLLEE);
}

TEST_CASE("looping-back charts on fixtures")
{
    auto cii = fx::chart("fig5_cii.chart");
    auto w = fx::witness(cii, "fig5_cii_hat.witness");
    auto lc = [&](const char* x) { return looping_back_chart(w, cii.node(x)); };
    REQUIRE(lc("x"));
    CHECK(names(cii, lc("x")->nodes()) == std::set<std::string>{"x", "z''", "k", "y"});
    CHECK(names(cii, lc("x")->body()) == std::set<std::string>{"z''", "k", "y"});
    CHECK(names(cii, lc("z'")->nodes()) == std::set<std::string>{"z'", "x'"});
    CHECK(names(cii, lc("z''")->nodes()) == std::set<std::string>{"z''", "y"});
    CHECK(lc("z")->nodes().size() == 7);
    CHECK_FALSE(lc("y"));
    CHECK_FALSE(lc("k"));
    CHECK(looping_back_charts(w).size() == 4);

    for (const auto& c : looping_back_charts(w)) {
        auto rep = check_lbc_properties(w, c);
        CHECK(rep.ok());
    }

    // drop y: z'' a3 y now leaves the chart
    LoopingBackChart cut{chart_of_nodes(cii, fx::nodes(cii, {"x", "z''", "k"}), cii.node("x")), cii.node("x")};
    auto rep = check_lbc_properties(w, cut);
    CHECK_FALSE(rep.ok());
    CHECK_FALSE(rep.closed);
    CHECK_FALSE(rep.proper_subcharts);
    CHECK(rep.no_termination);
}

TEST_CASE("looping-back charts: termination is detected")
{
    auto g = ChartBuilder().initial("x").transition("x", "a", "y").transition("y", "b", "x").terminal("y", "c").build();
    Witness w = Witness::zero(g);
    w.order[fx::tr(g, "x", "a", "y")] = 1;
    CHECK_FALSE(is_lee_witness(w));
    LoopingBackChart lc{chart_of_nodes(g, NodeSet{0, 1}, 0), 0};
    auto rep = check_lbc_properties(w, lc);
    CHECK_FALSE(rep.no_termination);
}

TEST_CASE("lee_to_llee: fixtures")
{
    auto ci = fx::chart("fig4_ci.chart");
    auto out = lee_to_llee(fx::witness(ci, "ci_hat.witness"));
    CHECK(out == fx::witness(ci, "ci_hat_prime.witness"));

    auto g = fx::chart("fig2_g.chart");
    auto gw = fx::witness(g, "fig2_g_hat.witness");
    CHECK(lee_to_llee(gw) == gw);
    CHECK_THROWS_AS(lee_to_llee(Witness::zero(g)), NotLEE);
}

TEST_CASE("lee_to_llee: random LEE charts")
{
    Rng rng(47);
    int converted = 0;
    for (int i = 0; i < 4000; ++i) {
        auto g = random_chart(rng, loopy(2 + i % 6));
        auto w = random_elimination(g, rng);
        if (!w) continue;
        REQUIRE(is_lee_witness(*w));
        auto l = lee_to_llee(*w);
        CHECK(l.chart == g);
        CHECK(is_lee_witness(l));
        CHECK(is_llee_witness(l));
        CHECK(loops_back_to(l).acyclic());
        if (!is_llee_witness(*w)) ++converted;
    }
    MESSAGE("non-LLEE inputs converted: " << converted);
    CHECK(converted >= 50);
}

TEST_CASE("lee_to_llee: random eliminations on expression charts")
{
    Rng rng(59);
    int converted = 0;
    for (int i = 0; i < 12000; ++i) {
        auto g = interpret(random_expr(rng, 25));
        auto w = random_elimination(g, rng);
        if (!w) continue;
        REQUIRE(is_lee_witness(*w));
        if (is_llee_witness(*w)) continue;
        ++converted;
        auto l = lee_to_llee(*w);
        CHECK(is_llee_witness(l));
        for (const auto& lc : looping_back_charts(l)) CHECK(check_lbc_properties(l, lc).ok());
    }
    MESSAGE("non-LLEE inputs converted: " << converted);
    CHECK(converted >= 50);
}

TEST_CASE("property: expression charts carry LLEE witnesses")
{
    Rng rng(53);
    for (int i = 0; i < 300; ++i) {
        auto e = random_expr(rng, 20);
        auto g = interpret(e);
        auto w = find_lee_witness(g);
        REQUIRE(w);
        auto l = lee_to_llee(*w);
        REQUIRE(is_llee_witness(l));
        auto rel = loops_back_to(l);
        CHECK(rel.acyclic());
        for (const auto& lc : looping_back_charts(l)) CHECK(check_lbc_properties(l, lc).ok());
    }
}
