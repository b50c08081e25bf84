#include "lleekit/reflect.hpp"

#include "lleekit/errors.hpp"

#include <algorithm>
#include <map>

namespace lleekit {

std::optional<std::size_t> ImageHierarchy::find(const NodeSet& nodes) const
{
    for (std::size_t i = 0; i < records.size(); ++i)
        if (records[i].image.nodes() == nodes) return i;
    return std::nullopt;
}

namespace {

bool strictly_inside(const NodeSet& a, const NodeSet& b)
{
    return a.size() < b.size() && is_subset(a, b);
}

void require_source(const BisimMap& theta, const Witness& w)
{
    if (!(w.chart.same_as(theta.source()) || w.chart == theta.source()))
        throw Error("witness and bisimulation map disagree on the source chart");
}

// Proper looping-back sub-charts of `lc`, by ascending start.
std::vector<LoopingBackChart> proper_subcharts(const Chart& g, const LoopsBackTo& rel, const LoopingBackChart& lc)
{
    std::vector<LoopingBackChart> out;
    for (auto y : lc.body())
        if (auto sub = looping_back_chart(g, rel, y); sub && is_proper_subchart(sub->chart, lc.chart))
            out.push_back(std::move(*sub));
    return out;
}

LoopingBackChart descend(const BisimMap& theta, const LoopsBackTo& rel, LoopingBackChart cur)
{
    const Chart& g = theta.source();
    const auto target = theta.apply(cur.nodes());
    for (bool moved = true; moved;) {
        moved = false;
        for (auto& sub : proper_subcharts(g, rel, cur))
            if (theta.apply(sub.nodes()) == target) {
                cur = std::move(sub);
                moved = true;
                break;
            }
    }
    return cur;
}

} // namespace

ImageHierarchy images(const BisimMap& theta, const Witness& w)
{
    require_source(theta, w);
    if (!is_minimal(theta.target())) throw NotCollapse("target chart has distinct bisimilar nodes");
    if (auto v = theta.violation()) throw Error("not a bisimulation function: " + *v);
    const auto rel = loops_back_to(w);
    const Chart& g = theta.source();

    std::map<NodeSet, std::vector<LoopingBackChart>> groups;
    for (NodeId x = 0; x < g.node_count(); ++x)
        if (auto lc = looping_back_chart(g, rel, x)) groups[theta.apply(lc->nodes())].push_back(std::move(*lc));

    ImageHierarchy h;
    for (auto& [nodes, pre] : groups) {
        std::optional<LoopingBackChart> best;
        for (const auto& lc : pre) {
            auto ws = descend(theta, rel, lc);
            if (!best || ws.start < best->start) best = std::move(ws);
        }
        const NodeId start = theta(best->start);
        h.records.push_back({NodeSetChart(theta.target(), nodes, start), start, std::move(pre), std::move(*best)});
    }
    h.below.resize(h.records.size());
    for (std::size_t i = 0; i < h.records.size(); ++i)
        for (std::size_t j = 0; j < h.records.size(); ++j)
            if (strictly_inside(h.records[j].image.nodes(), h.records[i].image.nodes())) h.below[i].push_back(j);
    return h;
}

LoopingBackChart well_structured_preimage(const BisimMap& theta, const Witness& w, const LoopingBackChart& from)
{
    require_source(theta, w);
    return descend(theta, loops_back_to(w), from);
}

LoopingBackChart well_structured_preimage(const BisimMap& theta, const Witness& w, const ImageRecord& rec)
{
    return well_structured_preimage(theta, w, rec.preimages.front());
}

bool is_well_structured(const BisimMap& theta, const Witness& w, const LoopingBackChart& lc)
{
    require_source(theta, w);
    const auto rel = loops_back_to(w);
    const auto target = theta.apply(lc.nodes());
    for (const auto& sub : proper_subcharts(theta.source(), rel, lc))
        if (!strictly_inside(theta.apply(sub.nodes()), target)) return false;
    return true;
}

LoopCorrespondence loop_correspondence(const BisimMap& theta, const Cycle& loop, NodeId x)
{
    const Chart& g = theta.source();
    const Chart& h = theta.target();
    const auto len = loop.edges.size();
    if (len == 0) throw Error("empty loop");
    std::size_t phase = len;
    for (std::size_t i = 0; i < len; ++i)
        if (h.transition(loop.edges[i]).src == theta(x)) {
            phase = i;
            break;
        }
    if (phase == len) throw Error("θ(" + g.node_name(x) + ") is not on the loop");

    std::map<std::pair<NodeId, std::size_t>, std::size_t> seen;
    std::vector<TransitionId> walk;
    NodeId cur = x;
    while (true) {
        auto key = std::make_pair(cur, phase);
        if (auto it = seen.find(key); it != seen.end()) {
            LoopCorrespondence out;
            out.path.assign(walk.begin(), walk.begin() + static_cast<std::ptrdiff_t>(it->second));
            out.loop.assign(walk.begin() + static_cast<std::ptrdiff_t>(it->second), walk.end());
            return out;
        }
        seen.emplace(key, walk.size());
        const auto& step = h.transition(loop.edges[phase]);
        const auto& action = h.action_name(step.action);
        std::optional<TransitionId> next;
        for (auto t : g.outgoing(cur)) {
            const auto& tr = g.transition(t);
            if (!tr.terminal() && g.action_name(tr.action) == action && theta(tr.dst) == step.dst) {
                next = t;
                break;
            }
        }
        if (!next) throw Error("θ is not a bisimulation function at " + g.node_name(cur));
        walk.push_back(*next);
        cur = g.transition(*next).dst;
        phase = (phase + 1) % len;
    }
}

LemmaReport check_lemma_conditions(const BisimMap& theta, const Witness& w, std::size_t cycle_cap)
{
    return check_lemma_conditions(theta, images(theta, w), cycle_cap);
}

LemmaReport check_lemma_conditions(const BisimMap& theta, const ImageHierarchy& hier, std::size_t cycle_cap)
{
    const Chart& h = theta.target();
    LemmaReport rep;
    auto cycle_text = [&](const Cycle& c) {
        std::string s;
        for (auto n : c.path(h)) s += h.node_name(n) + " ";
        return s + h.node_name(c.path(h).front());
    };

    std::vector<TransitionId> all(h.transition_count());
    for (TransitionId t = 0; t < all.size(); ++t) all[t] = t;
    auto cycles = enumerate_cycles(h, all, CycleMode::NodeDistinct, cycle_cap);
    rep.complete = rep.complete && cycles.complete;
    for (const auto& c : cycles.cycles) {
        auto nodes = c.nodes(h);
        bool covered = std::any_of(hier.records.begin(), hier.records.end(),
                                   [&](const ImageRecord& r) { return is_subset(nodes, r.image.nodes()); });
        if (!covered) {
            rep.cycles_covered = false;
            rep.violations.push_back("(1) cycle " + cycle_text(c) + " lies in no image");
        }
    }

    for (std::size_t i = 0; i < hier.records.size(); ++i) {
        const auto& rec = hier.records[i];
        auto inner = enumerate_cycles(h, rec.image.transitions(), CycleMode::NodeDistinct, cycle_cap);
        rep.complete = rep.complete && inner.complete;
        for (const auto& c : inner.cycles) {
            auto nodes = c.nodes(h);
            if (contains(nodes, rec.start)) continue;
            bool nested = std::any_of(hier.below[i].begin(), hier.below[i].end(), [&](std::size_t j) {
                return is_subset(nodes, hier.records[j].image.nodes());
            });
            if (!nested) {
                rep.cycles_anchored = false;
                rep.violations.push_back("(2) cycle " + cycle_text(c) + " misses " + h.node_name(rec.start) +
                                         " and every proper sub-image");
            }
        }
        for (auto u : rec.image.nodes()) {
            if (u == rec.start) continue;
            for (auto t : h.outgoing(u)) {
                const auto& tr = h.transition(t);
                if (tr.terminal() || !rec.image.contains(tr.dst)) {
                    rep.bodies_closed = false;
                    rep.violations.push_back("(3) body transition " + h.describe(t) + " leaves the image");
                }
            }
        }
    }
    return rep;
}

Witness collapse_lee_witness(const BisimMap& theta, const Witness& w)
{
    return collapse_lee_witness(theta, images(theta, w));
}

Witness collapse_lee_witness(const BisimMap& theta, const ImageHierarchy& hier)
{
    const Chart& h = theta.target();
    const auto count = hier.records.size();
    std::vector<bool> done(count, false);
    Remnant r(h);
    Witness out = Witness::zero(h);
    Order next = 1;
    for (std::size_t round = 0; round < count; ++round) {
        std::optional<std::size_t> pick;
        for (std::size_t i = 0; i < count; ++i) {
            if (done[i]) continue;
            bool ready = std::all_of(hier.below[i].begin(), hier.below[i].end(), [&](std::size_t j) { return done[j]; });
            if (!ready) continue;
            const auto& a = hier.records[i];
            if (!pick) {
                pick = i;
                continue;
            }
            const auto& b = hier.records[*pick];
            if (std::tie(a.start, a.image.nodes()) < std::tie(b.start, b.image.nodes())) pick = i;
        }
        if (!pick) throw LemmaViolated("sub-image relation is cyclic");
        done[*pick] = true;
        const auto& rec = hier.records[*pick];
        const NodeId s = rec.start;
        if (!r.node_alive[s]) continue;
        std::vector<TransitionId> entries;
        for (auto t : h.outgoing(s)) {
            const auto& tr = h.transition(t);
            if (r.edge_alive[t] && !tr.terminal() && rec.image.contains(tr.dst)) entries.push_back(t);
        }
        if (entries.empty()) continue;
        auto c = generated_chart(r, s, entries);
        bool returns = std::any_of(c.transitions.begin(), c.transitions.end(),
                                   [&](TransitionId t) { return h.transition(t).dst == s; });
        if (!returns) continue;
        if (!is_loop_chart(h, c))
            throw LemmaViolated("remnant of image {" + [&] {
                std::string s2;
                for (const auto& n : rec.image.names()) s2 += (s2.empty() ? "" : ",") + n;
                return s2;
            }() + "} at " + h.node_name(s) + " is not a loop chart");
        for (auto t : entries) out.order[t] = next;
        ++next;
        r.remove(entries);
    }
    if (!r.acyclic()) throw LemmaViolated("an infinite path survives the elimination of all images");
    auto rp = replay(out);
    if (!rp.valid) throw LemmaViolated("constructed witness does not replay: " + rp.error);
    return out;
}

} // namespace lleekit
