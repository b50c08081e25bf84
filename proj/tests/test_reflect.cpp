#include "support.hpp"

#include "lleekit/bisim.hpp"
#include "lleekit/errors.hpp"
#include "lleekit/random.hpp"
#include "lleekit/reflect.hpp"

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

struct Fig5 {
    Chart cii = fx::chart("fig5_cii.chart");
    Chart ci = fx::chart("fig4_ci.chart");
    Witness w = fx::witness(cii, "fig5_cii_hat.witness");
    BisimMap theta = read_map(read_file(fx::path("fig5_theta.map")), cii, ci);
};

} // namespace

TEST_CASE("images of the looping-back charts")
{
    Fig5 f;
    auto h = images(f.theta, f.w);
    REQUIRE(h.records.size() == 3);

    auto full = h.find(fx::nodes(f.ci, {"K", "X", "Y", "Z"}));
    auto zx = h.find(fx::nodes(f.ci, {"X", "Z"}));
    auto zy = h.find(fx::nodes(f.ci, {"Y", "Z"}));
    REQUIRE(full);
    REQUIRE(zx);
    REQUIRE(zy);

    const auto& r = h.records[*full];
    CHECK(r.preimages.size() == 2);
    CHECK(f.ci.node_name(r.start) == "X");
    CHECK(f.cii.node_name(r.well_structured.start) == "x");
    CHECK(names(f.cii, r.well_structured.nodes()) == std::set<std::string>{"x", "z''", "k", "y"});
    CHECK(is_well_structured(f.theta, f.w, r.well_structured));
    CHECK(f.ci.node_name(h.records[*zx].start) == "Z");
    CHECK(f.ci.node_name(h.records[*zy].start) == "Z");

    CHECK(h.below[*full].size() == 2);
    CHECK(h.below[*zx].empty());

    // the pre-image at z is not well-structured: the one at x has the same image
    auto at_z = looping_back_chart(f.w, f.cii.node("z"));
    REQUIRE(at_z);
    CHECK_FALSE(is_well_structured(f.theta, f.w, *at_z));
    CHECK(well_structured_preimage(f.theta, f.w, *at_z) == r.well_structured);
    CHECK(well_structured_preimage(f.theta, f.w, r) == r.well_structured);
}

TEST_CASE("lemma conditions and the collapsed witness")
{
    Fig5 f;
    auto rep = check_lemma_conditions(f.theta, f.w);
    CHECK(rep.ok());
    CHECK(rep.complete);
    CHECK(rep.violations.empty());

    auto wh = collapse_lee_witness(f.theta, f.w);
    CHECK(is_lee_witness(wh));
    CHECK(wh[fx::tr(f.ci, "Z", "a1", "Z")] == 1);
    CHECK(wh[fx::tr(f.ci, "Z", "a2", "X")] == 1);
    CHECK(wh[fx::tr(f.ci, "Z", "a3", "Y")] == 2);
    CHECK(wh[fx::tr(f.ci, "X", "b1", "Z")] == 3);
    CHECK(wh[fx::tr(f.ci, "Z", "a4", "K")] == 0);
    CHECK(is_llee_witness(lee_to_llee(wh)));
}

TEST_CASE("collapsed witness for the two-node chart")
{
    auto g = fx::chart("fig2_g.chart"), h = fx::chart("fig2_h.chart");
    auto theta = read_map(read_file(fx::path("fig2_theta.map")), g, h);
    auto w = fx::witness(g, "fig2_g_hat.witness");
    auto hier = images(theta, w);
    REQUIRE(hier.records.size() == 1);
    CHECK(hier.records[0].preimages.size() == 2);
    CHECK(g.node_name(hier.records[0].well_structured.start) == "x'");
    auto wh = collapse_lee_witness(theta, w);
    CHECK(wh == fx::witness(h, "fig2_h_hat.witness"));
}

TEST_CASE("images: identity map and errors")
{
    auto ci = fx::chart("fig4_ci.chart");
    auto w = fx::witness(ci, "ci_hat_prime.witness");
    BisimMap id(ci, ci, {0, 1, 2, 3});
    auto h = images(id, w);
    std::set<NodeSet> got, want;
    for (const auto& r : h.records) got.insert(r.image.nodes());
    for (const auto& lc : looping_back_charts(w)) want.insert(lc.nodes());
    CHECK(got == want);

    auto g = fx::chart("fig2_g.chart");
    BisimMap gid(g, g, {0, 1});
    CHECK_THROWS_AS(images(gid, fx::witness(g, "fig2_g_hat.witness")), NotCollapse);
    CHECK_THROWS_AS(images(id, fx::witness(ci, "ci_hat.witness")), NotLLEE);
}

TEST_CASE("loop correspondence")
{
    auto g = fx::chart("fig2_g.chart"), h = fx::chart("fig2_h.chart");
    auto theta = read_map(read_file(fx::path("fig2_theta.map")), g, h);
    Cycle a{{fx::tr(h, "X", "a", "X")}};
    auto lc = loop_correspondence(theta, a, g.node("x"));
    REQUIRE(lc.path.size() == 1);
    CHECK(g.describe(lc.path[0]) == "x a x'");
    REQUIRE(lc.loop.size() == 1);
    CHECK(g.describe(lc.loop[0]) == "x' a x'");

    Cycle b{{fx::tr(h, "X", "b", "X")}};
    auto lb = loop_correspondence(theta, b, g.node("x"));
    CHECK(lb.path.empty());
    REQUIRE(lb.loop.size() == 2);
    CHECK(g.describe(lb.loop[0]) == "x b x'");
    CHECK(g.describe(lb.loop[1]) == "x' b x");

    CHECK_THROWS_AS(loop_correspondence(theta, Cycle{}, 0), Error);
}

TEST_CASE("property: collapsing expression charts")
{
    Rng rng(61);
    int shrunk = 0;
    for (int i = 0; i < 1500; ++i) {
        auto e = random_expr_of_size(rng, 15 + 2 * (i % 6));
        auto g = interpret(e);
        auto c = collapse(g);
        if (c.chart.node_count() == g.node_count()) continue;
        ++shrunk;
        auto w = lee_to_llee(*find_lee_witness(g));
        auto hier = images(c.theta, w);
        auto rep = check_lemma_conditions(c.theta, hier);
        CAPTURE(print(e));
        REQUIRE(rep.ok());
        for (const auto& r : hier.records) {
            CHECK(is_well_structured(c.theta, w, r.well_structured));
            CHECK(c.theta.apply(r.well_structured.nodes()) == r.image.nodes());
        }
        auto wh = collapse_lee_witness(c.theta, hier);
        CHECK(is_lee_witness(wh));
        CHECK(is_llee_witness(lee_to_llee(wh)));

        // every target loop is followed by a source loop with the same actions
        const Chart& H = c.chart;
        for (const auto& loop : simple_cycles(H)) {
            for (NodeId x = 0; x < g.node_count(); ++x) {
                auto path = loop.path(H);
                if (std::find(path.begin(), path.end(), c.theta(x)) == path.end()) continue;
                auto corr = loop_correspondence(c.theta, loop, x);
                REQUIRE_FALSE(corr.loop.empty());
                CHECK(corr.loop.size() % loop.edges.size() == 0);
                CHECK(g.transition(corr.loop.back()).dst == g.transition(corr.loop.front()).src);
                for (std::size_t k = 0; k + 1 < corr.loop.size(); ++k)
                    CHECK(g.transition(corr.loop[k]).dst == g.transition(corr.loop[k + 1]).src);
                for (auto t : corr.loop) {
                    const auto& s = g.transition(t);
                    bool on_loop = std::any_of(loop.edges.begin(), loop.edges.end(), [&](TransitionId u) {
                        const auto& l = H.transition(u);
                        return l.src == c.theta(s.src) && l.dst == c.theta(s.dst) &&
                               H.action_name(l.action) == g.action_name(s.action);
                    });
                    CHECK(on_loop);
                }
            }
        }
    }
    MESSAGE("charts with a proper collapse: " << shrunk);
    CHECK(shrunk >= 100);
}
