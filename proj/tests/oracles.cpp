#include "oracles.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace oracle {

using lleekit::kTermination;

lleekit::Relation naive_bisimilarity(const Chart& g, const Chart& h)
{
    std::set<std::pair<NodeId, NodeId>> r;
    for (NodeId x = 0; x < g.node_count(); ++x)
        for (NodeId y = 0; y < h.node_count(); ++y) r.emplace(x, y);

    // does every move of (c1, p) have a partner move of (c2, q)?
    auto simulates = [&](const Chart& c1, NodeId p, const Chart& c2, NodeId q, bool flipped) {
        for (auto t : c1.outgoing(p)) {
            const auto& a = c1.transition(t);
            bool ok = false;
            for (auto u : c2.outgoing(q)) {
                const auto& b = c2.transition(u);
                if (c1.action_name(a.action) != c2.action_name(b.action)) continue;
                if (a.terminal() || b.terminal()) {
                    ok = ok || (a.terminal() && b.terminal());
                    continue;
                }
                auto pair = flipped ? std::make_pair(b.dst, a.dst) : std::make_pair(a.dst, b.dst);
                if (r.count(pair)) ok = true;
            }
            if (!ok) return false;
        }
        return true;
    };

    for (bool changed = true; changed;) {
        changed = false;
        for (auto it = r.begin(); it != r.end();) {
            auto [x, y] = *it;
            if (simulates(g, x, h, y, false) && simulates(h, y, g, x, true)) {
                ++it;
            } else {
                it = r.erase(it);
                changed = true;
            }
        }
    }
    return {r.begin(), r.end()};
}

std::set<std::vector<TransitionId>> dfs_cycles(const Chart& g)
{
    std::set<std::vector<TransitionId>> out;
    std::vector<TransitionId> path;
    std::vector<bool> on(g.node_count(), false);
    std::function<void(NodeId, NodeId)> go = [&](NodeId s, NodeId v) {
        for (auto t : g.outgoing(v)) {
            auto d = g.transition(t).dst;
            if (d == kTermination || d < s) continue;
            path.push_back(t);
            if (d == s) out.insert(path);
            else if (!on[d]) {
                on[d] = true;
                go(s, d);
                on[d] = false;
            }
            path.pop_back();
        }
    };
    for (NodeId s = 0; s < g.node_count(); ++s) {
        on[s] = true;
        go(s, s);
        on[s] = false;
    }
    return out;
}

bool loop_chart(const Chart& g, const std::vector<bool>& alive, NodeId x, const std::vector<TransitionId>& entries)
{
    if (entries.empty()) return false;
    // nodes reached from the entries without passing x
    std::vector<bool> in(g.node_count(), false);
    std::vector<NodeId> todo;
    bool back = false;
    for (auto t : entries) {
        auto d = g.transition(t).dst;
        if (d == kTermination) return false;
        if (d == x) back = true;
        else if (!in[d]) {
            in[d] = true;
            todo.push_back(d);
        }
    }
    while (!todo.empty()) {
        auto v = todo.back();
        todo.pop_back();
        for (auto t : g.outgoing(v)) {
            if (!alive[t]) continue;
            auto d = g.transition(t).dst;
            if (d == kTermination) return false; // L3
            if (d == x) back = true;
            else if (!in[d]) {
                in[d] = true;
                todo.push_back(d);
            }
        }
    }
    if (!back) return false; // L1
    // L2: colour DFS over the body
    std::vector<int> colour(g.node_count(), 0);
    std::function<bool(NodeId)> cyclic = [&](NodeId v) {
        colour[v] = 1;
        for (auto t : g.outgoing(v)) {
            if (!alive[t]) continue;
            auto d = g.transition(t).dst;
            if (d == kTermination || d == x || !in[d]) continue;
            if (colour[d] == 1) return true;
            if (colour[d] == 0 && cyclic(d)) return true;
        }
        colour[v] = 2;
        return false;
    };
    for (NodeId v = 0; v < g.node_count(); ++v)
        if (in[v] && colour[v] == 0 && cyclic(v)) return false;
    return true;
}

std::vector<TransitionId> brute_max_entries(const Chart& g, NodeId x)
{
    std::vector<bool> alive(g.transition_count(), true);
    std::vector<TransitionId> cand;
    for (auto t : g.outgoing(x))
        if (g.transition(t).dst != kTermination) cand.push_back(t);
    std::set<TransitionId> all;
    for (std::uint32_t mask = 1; mask < (1u << cand.size()); ++mask) {
        std::vector<TransitionId> e;
        for (std::size_t i = 0; i < cand.size(); ++i)
            if (mask >> i & 1) e.push_back(cand[i]);
        if (loop_chart(g, alive, x, e)) all.insert(e.begin(), e.end());
    }
    return {all.begin(), all.end()};
}

std::vector<bool> reach(const Chart& g, const std::vector<bool>& alive)
{
    std::vector<bool> seen(g.node_count(), false);
    std::vector<NodeId> todo;
    if (g.initial()) todo.push_back(*g.initial());
    else
        for (NodeId v = 0; v < g.node_count(); ++v) todo.push_back(v);
    for (auto v : todo) seen[v] = true;
    while (!todo.empty()) {
        auto v = todo.back();
        todo.pop_back();
        for (auto t : g.outgoing(v)) {
            auto d = g.transition(t).dst;
            if (alive[t] && d != kTermination && !seen[d]) {
                seen[d] = true;
                todo.push_back(d);
            }
        }
    }
    return seen;
}

namespace {

bool acyclic(const Chart& g, const std::vector<bool>& alive)
{
    std::vector<int> colour(g.node_count(), 0);
    std::function<bool(NodeId)> cyclic = [&](NodeId v) {
        colour[v] = 1;
        for (auto t : g.outgoing(v)) {
            auto d = g.transition(t).dst;
            if (!alive[t] || d == kTermination) continue;
            if (colour[d] == 1 || (colour[d] == 0 && cyclic(d))) return true;
        }
        colour[v] = 2;
        return false;
    };
    for (NodeId v = 0; v < g.node_count(); ++v)
        if (colour[v] == 0 && cyclic(v)) return false;
    return true;
}

} // namespace

bool exhaustive_lee(const Chart& g)
{
    std::map<std::vector<bool>, bool> memo;
    std::function<bool(std::vector<bool>)> search = [&](std::vector<bool> alive) {
        // garbage collection
        auto live = reach(g, alive);
        for (TransitionId t = 0; t < g.transition_count(); ++t)
            if (!live[g.transition(t).src]) alive[t] = false;
        if (acyclic(g, alive)) return true;
        if (auto it = memo.find(alive); it != memo.end()) return it->second;
        bool found = false;
        for (NodeId x = 0; x < g.node_count() && !found; ++x) {
            std::vector<TransitionId> cand;
            for (auto t : g.outgoing(x))
                if (alive[t] && g.transition(t).dst != kTermination) cand.push_back(t);
            for (std::uint32_t mask = 1; mask < (1u << cand.size()) && !found; ++mask) {
                std::vector<TransitionId> e;
                for (std::size_t i = 0; i < cand.size(); ++i)
                    if (mask >> i & 1) e.push_back(cand[i]);
                if (!loop_chart(g, alive, x, e)) continue;
                auto next = alive;
                for (auto t : e) next[t] = false;
                found = search(next);
            }
        }
        memo[alive] = found;
        return found;
    };
    return search(std::vector<bool>(g.transition_count(), true));
}

Chart rename_nodes(const Chart& g, const std::vector<std::string>& names)
{
    lleekit::ChartBuilder b;
    for (const auto& n : names) b.node(n);
    for (const auto& a : g.alphabet()) b.action(a);
    for (const auto& tr : g.transitions())
        b.transition(names[tr.src], g.action_name(tr.action),
                     tr.terminal() ? std::string(lleekit::kTerminationToken) : names[tr.dst]);
    if (g.initial()) b.initial(names[*g.initial()]);
    return b.build();
}

} // namespace oracle
