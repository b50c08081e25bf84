#include "lleekit/bisim.hpp"

#include "lleekit/errors.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace lleekit {

BisimMap::BisimMap(Chart source, Chart target, std::vector<NodeId> map)
    : source_(std::move(source)), target_(std::move(target)), map_(std::move(map))
{
    if (map_.size() != source_.node_count()) throw Error("bisimulation map is not total");
    for (auto y : map_)
        if (y >= target_.node_count()) throw UnknownNode("map target out of range");
}

NodeSet BisimMap::apply(const NodeSet& nodes) const
{
    std::vector<NodeId> out;
    for (auto n : nodes) out.push_back(map_.at(n));
    return make_node_set(std::move(out));
}

Relation BisimMap::relation() const
{
    Relation r;
    for (NodeId x = 0; x < map_.size(); ++x) r.emplace_back(x, map_[x]);
    return r;
}

namespace {

std::optional<std::string> pair_violation(const Chart& g, NodeId x, const Chart& h, NodeId y,
                                          const auto& related)
{
    auto describe = [&] { return "(" + g.node_name(x) + ", " + h.node_name(y) + ")"; };
    for (auto t : g.outgoing(x)) {
        const auto& tr = g.transition(t);
        const auto& a = g.action_name(tr.action);
        bool matched = false;
        for (auto u : h.outgoing(y)) {
            const auto& ur = h.transition(u);
            if (h.action_name(ur.action) != a || ur.terminal() != tr.terminal()) continue;
            if (tr.terminal() || related(tr.dst, ur.dst)) {
                matched = true;
                break;
            }
        }
        if (!matched) return "pair " + describe() + ": move " + g.describe(t) + " unmatched";
    }
    for (auto u : h.outgoing(y)) {
        const auto& ur = h.transition(u);
        const auto& a = h.action_name(ur.action);
        bool matched = false;
        for (auto t : g.outgoing(x)) {
            const auto& tr = g.transition(t);
            if (g.action_name(tr.action) != a || ur.terminal() != tr.terminal()) continue;
            if (ur.terminal() || related(tr.dst, ur.dst)) {
                matched = true;
                break;
            }
        }
        if (!matched) return "pair " + describe() + ": move " + h.describe(u) + " unmatched";
    }
    return std::nullopt;
}

} // namespace

std::optional<std::string> BisimMap::violation() const
{
    auto related = [&](NodeId a, NodeId b) { return map_[a] == b; };
    for (NodeId x = 0; x < map_.size(); ++x)
        if (auto v = pair_violation(source_, x, target_, map_[x], related)) return v;
    if (source_.initial() && target_.initial() && map_[*source_.initial()] != *target_.initial())
        return std::string("initial node is not mapped to the initial node");
    return std::nullopt;
}

void BisimMap::validate() const
{
    if (auto v = violation()) throw Error("not a bisimulation function: " + *v);
}

Partition partition(const Chart& g)
{
    const auto n = g.node_count();
    using Signature = std::tuple<std::uint32_t, std::vector<ActionId>, std::vector<std::pair<ActionId, std::uint32_t>>>;
    std::vector<std::uint32_t> block(n, 0);
    std::size_t count = n ? 1 : 0;
    // the first round splits on terminal actions only, since every block starts at 0
    while (true) {
        std::map<Signature, std::uint32_t> ids;
        std::vector<std::uint32_t> next(n);
        for (NodeId v = 0; v < n; ++v) {
            Signature sig;
            std::get<0>(sig) = block[v];
            for (auto t : g.outgoing(v)) {
                const auto& tr = g.transition(t);
                if (tr.terminal()) std::get<1>(sig).push_back(tr.action);
                else std::get<2>(sig).emplace_back(tr.action, block[tr.dst]);
            }
            auto& moves = std::get<2>(sig);
            std::sort(moves.begin(), moves.end());
            moves.erase(std::unique(moves.begin(), moves.end()), moves.end());
            auto [it, fresh] = ids.try_emplace(std::move(sig), static_cast<std::uint32_t>(ids.size()));
            next[v] = it->second;
        }
        block = std::move(next);
        if (ids.size() == count) break;
        count = ids.size();
    }
    // renumber blocks by least member
    std::vector<std::uint32_t> rename(count, UINT32_MAX);
    Partition p{g, {}, std::vector<std::uint32_t>(n)};
    for (NodeId v = 0; v < n; ++v) {
        auto& r = rename[block[v]];
        if (r == UINT32_MAX) {
            r = static_cast<std::uint32_t>(p.blocks.size());
            p.blocks.emplace_back();
        }
        p.block_of[v] = r;
        p.blocks[r].push_back(v);
    }
    return p;
}

Chart disjoint_union(const Chart& g, const Chart& h)
{
    ChartBuilder b;
    auto add = [&](const Chart& c, const std::string& prefix) {
        for (const auto& name : c.node_names()) b.node(prefix + name);
        for (const auto& a : c.alphabet()) b.action(a);
        for (const auto& tr : c.transitions())
            b.transition(prefix + c.node_name(tr.src), c.action_name(tr.action),
                         tr.terminal() ? std::string(kTerminationToken) : prefix + c.node_name(tr.dst));
    };
    add(g, "g:");
    add(h, "h:");
    return b.build();
}

Relation bisimilarity(const Chart& g, const Chart& h)
{
    const Chart u = disjoint_union(g, h);
    const auto p = partition(u);
    // "g:" sorts before "h:" and prefixing keeps the order, so ids are offsets
    const auto off = static_cast<NodeId>(g.node_count());
    std::vector<std::vector<NodeId>> h_in_block(p.blocks.size());
    for (NodeId y = 0; y < h.node_count(); ++y) h_in_block[p.block_of[off + y]].push_back(y);
    Relation r;
    for (NodeId x = 0; x < g.node_count(); ++x)
        for (auto y : h_in_block[p.block_of[x]]) r.emplace_back(x, y);
    return r;
}

bool bisimilar(const Chart& g, NodeId x, const Chart& h, NodeId y)
{
    auto r = bisimilarity(g, h);
    return std::binary_search(r.begin(), r.end(), std::make_pair(x, y));
}

bool is_bisimulation(const Relation& r, const Chart& g, const Chart& h)
{
    Relation sorted = r;
    std::sort(sorted.begin(), sorted.end());
    auto related = [&](NodeId a, NodeId b) {
        return std::binary_search(sorted.begin(), sorted.end(), std::make_pair(a, b));
    };
    for (const auto& [x, y] : sorted) {
        if (x >= g.node_count() || y >= h.node_count()) return false;
        if (pair_violation(g, x, h, y, related)) return false;
    }
    return true;
}

bool is_minimal(const Chart& g)
{
    return partition(g).blocks.size() == g.node_count();
}

Collapse collapse(const Chart& g)
{
    const auto p = partition(g);
    ChartBuilder b;
    auto rep = [&](NodeId v) -> const std::string& { return g.node_name(p.blocks[p.block_of[v]].front()); };
    for (const auto& block : p.blocks) b.node(g.node_name(block.front()));
    for (const auto& a : g.alphabet()) b.action(a);
    for (const auto& tr : g.transitions())
        b.transition(rep(tr.src), g.action_name(tr.action),
                     tr.terminal() ? std::string(kTerminationToken) : rep(tr.dst));
    if (g.initial()) b.initial(rep(*g.initial()));
    Chart h = b.build();
    std::vector<NodeId> map(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) map[v] = h.node(rep(v));
    return {h, BisimMap(g, h, std::move(map))};
}

std::optional<BisimMap> bisim_map(const Chart& g, const Chart& h)
{
    std::vector<NodeId> map(g.node_count(), kTermination);
    for (const auto& [x, y] : bisimilarity(g, h)) {
        if (map[x] == kTermination) map[x] = y;
    }
    if (std::find(map.begin(), map.end(), kTermination) != map.end()) return std::nullopt;
    BisimMap theta(g, h, std::move(map));
    if (!theta.is_valid()) return std::nullopt;
    return theta;
}

NodeSetChart image(const BisimMap& theta, const NodeSetChart& a)
{
    if (!(a.parent().same_as(theta.source()) || a.parent() == theta.source())) throw ParentMismatch();
    std::optional<NodeId> start;
    if (a.start()) start = theta(*a.start());
    return NodeSetChart(theta.target(), theta.apply(a.nodes()), start);
}

} // namespace lleekit
