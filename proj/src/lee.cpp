#include "lleekit/lee.hpp"

#include "lleekit/errors.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>

namespace lleekit {

// ---------------------------------------------------------------------------
// Witness

Witness Witness::zero(const Chart& g)
{
    return {g, std::vector<Order>(g.transition_count(), 0)};
}

Order Witness::max_order() const
{
    Order m = 0;
    for (auto o : order) m = std::max(m, o);
    return m;
}

bool Witness::down_closed() const
{
    std::set<Order> used;
    for (auto o : order)
        if (o) used.insert(o);
    return used.empty() || (*used.begin() == 1 && *used.rbegin() == used.size());
}

Witness Witness::compressed() const
{
    std::set<Order> used;
    for (auto o : order)
        if (o) used.insert(o);
    std::map<Order, Order> rename;
    for (auto o : used) rename.emplace(o, static_cast<Order>(rename.size() + 1));
    Witness w = *this;
    for (auto& o : w.order)
        if (o) o = rename[o];
    return w;
}

// ---------------------------------------------------------------------------
// Remnant

namespace {

NodeSet default_roots(const Chart& g)
{
    if (g.initial()) return {*g.initial()};
    NodeSet all(g.node_count());
    for (NodeId n = 0; n < all.size(); ++n) all[n] = n;
    return all;
}

} // namespace

Remnant::Remnant(const Chart& g) : Remnant(g, default_roots(g)) {}

Remnant::Remnant(const Chart& g, NodeSet r)
    : chart(g), node_alive(g.node_count(), true), edge_alive(g.transition_count(), true),
      roots(make_node_set(std::move(r)))
{
    collect_garbage();
}

void Remnant::remove(std::span<const TransitionId> edges)
{
    for (auto t : edges) edge_alive.at(t) = false;
    collect_garbage();
}

void Remnant::collect_garbage()
{
    std::vector<bool> seen(chart.node_count(), false);
    std::vector<NodeId> stack;
    for (auto r : roots)
        if (node_alive.at(r) && !seen[r]) {
            seen[r] = true;
            stack.push_back(r);
        }
    while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        for (auto t : chart.outgoing(v)) {
            if (!edge_alive[t]) continue;
            auto d = chart.transition(t).dst;
            if (d != kTermination && !seen[d]) {
                seen[d] = true;
                stack.push_back(d);
            }
        }
    }
    for (NodeId v = 0; v < chart.node_count(); ++v) {
        if (seen[v]) continue;
        node_alive[v] = false;
        for (auto t : chart.outgoing(v)) edge_alive[t] = false;
    }
}

std::vector<TransitionId> Remnant::alive_edges() const
{
    std::vector<TransitionId> out;
    for (TransitionId t = 0; t < edge_alive.size(); ++t)
        if (edge_alive[t]) out.push_back(t);
    return out;
}

bool Remnant::acyclic() const
{
    return !has_cycle(chart, alive_edges());
}

Chart Remnant::to_chart() const
{
    ChartBuilder b;
    for (NodeId v = 0; v < chart.node_count(); ++v)
        if (node_alive[v]) b.node(chart.node_name(v));
    for (const auto& a : chart.alphabet()) b.action(a);
    for (auto t : alive_edges()) {
        const auto& tr = chart.transition(t);
        b.transition(chart.node_name(tr.src), chart.action_name(tr.action),
                     tr.terminal() ? std::string(kTerminationToken) : chart.node_name(tr.dst));
    }
    if (chart.initial() && node_alive[*chart.initial()]) b.initial(chart.node_name(*chart.initial()));
    return b.build();
}

// ---------------------------------------------------------------------------
// Generated charts and loop charts

NodeSet GeneratedChart::nodes() const
{
    auto out = body;
    out.insert(std::lower_bound(out.begin(), out.end(), start), start);
    return make_node_set(std::move(out));
}

NodeSetChart GeneratedChart::as_node_set_chart(const Chart& g) const
{
    return NodeSetChart(g, nodes(), start);
}

GeneratedChart generated_chart(const Remnant& r, NodeId x, std::span<const TransitionId> entries)
{
    if (entries.empty()) throw EmptyEntrySet();
    const Chart& g = r.chart;
    GeneratedChart c{x, {entries.begin(), entries.end()}, {}, {}};
    std::sort(c.entries.begin(), c.entries.end());
    c.entries.erase(std::unique(c.entries.begin(), c.entries.end()), c.entries.end());
    std::vector<bool> seen(g.node_count(), false);
    std::vector<NodeId> stack;
    auto visit = [&](NodeId d) {
        if (d != kTermination && d != x && !seen[d]) {
            seen[d] = true;
            stack.push_back(d);
        }
    };
    for (auto t : c.entries) {
        const auto& tr = g.transition(t);
        if (tr.src != x) throw Error("entry " + g.describe(t) + " does not leave " + g.node_name(x));
        visit(tr.dst);
    }
    while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        for (auto t : g.outgoing(v))
            if (r.edge_alive[t]) visit(g.transition(t).dst);
    }
    c.transitions = c.entries;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (!seen[v]) continue;
        c.body.push_back(v);
        for (auto t : g.outgoing(v))
            if (r.edge_alive[t]) c.transitions.push_back(t);
    }
    return c;
}

GeneratedChart generated_chart(const Chart& g, NodeId x, std::span<const TransitionId> entries)
{
    return generated_chart(Remnant(g, default_roots(g)), x, entries);
}

bool is_loop_chart(const Chart& g, const GeneratedChart& c)
{
    bool returns = false;
    std::vector<TransitionId> inner;
    for (auto t : c.transitions) {
        const auto& tr = g.transition(t);
        if (tr.terminal()) return false; // L3
        if (tr.dst == c.start) returns = true;
        else if (tr.src != c.start) inner.push_back(t);
    }
    if (!returns) return false; // L1
    return !has_cycle(g, inner); // L2
}

bool is_loop_chart(const NodeSetChart& c, NodeId x)
{
    if (!c.contains(x)) return false;
    const Chart& g = c.parent();
    for (auto n : c.nodes())
        if (g.has_terminal(n)) return false;
    auto ts = c.transitions();
    std::vector<TransitionId> avoiding;
    for (auto t : ts) {
        const auto& tr = g.transition(t);
        if (tr.src != x && tr.dst != x) avoiding.push_back(t);
    }
    if (has_cycle(g, avoiding)) return false;
    // some cycle through x: x reaches itself
    std::vector<bool> seen(g.node_count(), false);
    std::vector<NodeId> stack{x};
    while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        for (auto t : g.outgoing(v)) {
            auto d = g.transition(t).dst;
            if (d == kTermination || !c.contains(d)) continue;
            if (d == x) return true;
            if (!seen[d]) {
                seen[d] = true;
                stack.push_back(d);
            }
        }
    }
    return false;
}

Chart eliminate(const Chart& g, NodeId x, std::span<const TransitionId> entries, const NodeSet& roots)
{
    Remnant r(g, roots);
    auto c = generated_chart(r, x, entries);
    if (!is_loop_chart(g, c)) throw NotALoopChart("entries at " + g.node_name(x) + " do not generate a loop chart");
    r.remove(c.entries);
    return r.to_chart();
}

std::vector<TransitionId> max_entry_set(const Remnant& r, NodeId x)
{
    std::vector<TransitionId> out;
    if (!r.node_alive.at(x)) return out;
    bool returns = false;
    for (auto t : r.chart.outgoing(x)) {
        if (!r.edge_alive[t] || r.chart.transition(t).terminal()) continue;
        const TransitionId one[] = {t};
        auto c = generated_chart(r, x, one);
        std::vector<TransitionId> inner;
        bool ok = true, back = false;
        for (auto u : c.transitions) {
            const auto& tr = r.chart.transition(u);
            if (tr.terminal()) ok = false;
            else if (tr.dst == x) back = true;
            else if (tr.src != x) inner.push_back(u);
        }
        if (!ok || has_cycle(r.chart, inner)) continue;
        // dead-end entries are kept; (L1) only needs one entry that comes back
        returns = returns || back;
        out.push_back(t);
    }
    if (!returns) out.clear();
    return out;
}

std::vector<TransitionId> max_entry_set(const Chart& g, NodeId x)
{
    return max_entry_set(Remnant(g, default_roots(g)), x);
}

// ---------------------------------------------------------------------------
// Replay

Replay replay(const Witness& w)
{
    const Chart& g = w.chart;
    Replay out;
    if (w.order.size() != g.transition_count()) {
        out.error = "witness does not cover the chart's transitions";
        return out;
    }
    for (TransitionId t = 0; t < g.transition_count(); ++t)
        if (w.order[t] && g.transition(t).terminal()) {
            out.error = "terminal transition " + g.describe(t) + " has a positive order";
            return out;
        }
    if (!w.down_closed()) {
        out.error = "positive orders are not down-closed";
        return out;
    }
    Remnant r(g);
    std::vector<bool> in_body(g.node_count(), false);
    const Order max = w.max_order();
    for (Order n = 1; n <= max; ++n) {
        std::map<NodeId, std::vector<TransitionId>> pending;
        for (TransitionId t = 0; t < g.transition_count(); ++t)
            if (w.order[t] == n) pending[g.transition(t).src].push_back(t);
        while (!pending.empty()) {
            for (auto it = pending.begin(); it != pending.end();) {
                if (r.node_alive[it->first]) {
                    ++it;
                    continue;
                }
                out.steps.push_back({n, it->first, it->second, {}, true});
                it = pending.erase(it);
            }
            if (pending.empty()) break;
            std::optional<std::pair<NodeId, GeneratedChart>> pick;
            for (auto& [x, entries] : pending) {
                auto c = generated_chart(r, x, entries);
                if (!is_loop_chart(g, c)) continue;
                if (!pick || (in_body[pick->first] && !in_body[x])) pick.emplace(x, std::move(c));
            }
            if (!pick) {
                const auto& [x, entries] = *pending.begin();
                out.error = "order " + std::to_string(n) + ": entries at " + g.node_name(x) +
                            " do not generate a loop chart";
                return out;
            }
            auto& [x, c] = *pick;
            for (auto b : c.body) in_body[b] = true;
            r.remove(c.entries);
            out.steps.push_back({n, x, c.entries, c.body, false});
            pending.erase(x);
        }
    }
    if (!r.acyclic()) {
        out.error = "an infinite path remains after all eliminations";
        return out;
    }
    out.valid = true;
    return out;
}

bool is_lee_witness(const Witness& w)
{
    return replay(w).valid;
}

std::optional<std::string> llee_violation(const Witness& w)
{
    auto rp = replay(w);
    if (!rp.valid) throw InvalidWitness(rp.error);
    const Chart& g = w.chart;
    std::vector<bool> in_body(g.node_count(), false);
    for (const auto& s : rp.steps) {
        if (s.vacuous) continue;
        if (in_body[s.start])
            return "order " + std::to_string(s.order) + " removes loop entries from " + g.node_name(s.start) +
                   ", which lies in the body of an earlier loop";
        for (auto b : s.body) in_body[b] = true;
    }
    std::vector<TransitionId> zero;
    for (TransitionId t = 0; t < g.transition_count(); ++t)
        if (!w.order[t]) zero.push_back(t);
    if (has_cycle(g, zero)) return std::string("body transitions form a cycle");
    return std::nullopt;
}

bool is_llee_witness(const Witness& w)
{
    return !llee_violation(w);
}

// ---------------------------------------------------------------------------
// Search

namespace {

class LeeSearch {
public:
    explicit LeeSearch(const Chart& g) : g_(g) {}

    std::optional<Witness> run()
    {
        if (!dfs(Remnant(g_))) return std::nullopt;
        Witness w = Witness::zero(g_);
        for (std::size_t i = 0; i < steps_.size(); ++i)
            for (auto t : steps_[i]) w.order[t] = static_cast<Order>(i + 1);
        return w;
    }

private:
    bool dfs(const Remnant& r)
    {
        if (r.acyclic()) return true;
        if (failed_.count(r.edge_alive)) return false;
        for (NodeId x = 0; x < g_.node_count(); ++x) {
            auto entries = max_entry_set(r, x);
            if (entries.empty()) continue;
            Remnant next = r;
            next.remove(entries);
            steps_.push_back(entries);
            if (dfs(next)) return true;
            steps_.pop_back();
        }
        failed_.insert(r.edge_alive);
        return false;
    }

    const Chart& g_;
    std::vector<std::vector<TransitionId>> steps_;
    std::set<std::vector<bool>> failed_;
};

} // namespace

std::optional<Witness> find_lee_witness(const Chart& g)
{
    return LeeSearch(g).run();
}

// ---------------------------------------------------------------------------
// Loops-back-to

bool LoopsBackTo::acyclic() const
{
    for (NodeId x = 0; x < closure.size(); ++x)
        if (contains(closure[x], x)) return false;
    return true;
}

namespace {

LoopsBackTo compute_loops_back_to(const Witness& w)
{
    const Chart& g = w.chart;
    const auto n = g.node_count();
    LoopsBackTo rel{std::vector<NodeSet>(n), std::vector<NodeSet>(n)};
    for (NodeId x = 0; x < n; ++x) {
        std::vector<bool> seen(n, false);
        std::vector<NodeId> stack;
        for (auto t : g.outgoing(x)) {
            const auto& tr = g.transition(t);
            if (tr.terminal() || !w.order[t] || tr.dst == x || seen[tr.dst]) continue;
            seen[tr.dst] = true;
            stack.push_back(tr.dst);
        }
        while (!stack.empty()) {
            auto v = stack.back();
            stack.pop_back();
            rel.direct[x].push_back(v);
            for (auto t : g.outgoing(v)) {
                const auto& tr = g.transition(t);
                if (tr.terminal() || w.order[t] || tr.dst == x || seen[tr.dst]) continue;
                seen[tr.dst] = true;
                stack.push_back(tr.dst);
            }
        }
        rel.direct[x] = make_node_set(std::move(rel.direct[x]));
    }
    for (NodeId x = 0; x < n; ++x) {
        std::vector<bool> seen(n, false);
        std::vector<NodeId> stack(rel.direct[x].begin(), rel.direct[x].end());
        for (auto v : stack) seen[v] = true;
        while (!stack.empty()) {
            auto v = stack.back();
            stack.pop_back();
            rel.closure[x].push_back(v);
            for (auto u : rel.direct[v])
                if (!seen[u]) {
                    seen[u] = true;
                    stack.push_back(u);
                }
        }
        rel.closure[x] = make_node_set(std::move(rel.closure[x]));
    }
    return rel;
}

void require_llee(const Witness& w)
{
    std::optional<std::string> v;
    try {
        v = llee_violation(w);
    } catch (const InvalidWitness& e) {
        throw NotLLEE(std::string("witness does not replay: ") + e.what());
    }
    if (v) throw NotLLEE(*v);
}

} // namespace

LoopsBackTo loops_back_to(const Witness& w)
{
    require_llee(w);
    return compute_loops_back_to(w);
}

NodeSet LoopingBackChart::body() const
{
    NodeSet out;
    for (auto n : nodes())
        if (n != start) out.push_back(n);
    return out;
}

std::optional<LoopingBackChart> looping_back_chart(const Chart& g, const LoopsBackTo& rel, NodeId x)
{
    auto nodes = rel.closure.at(x);
    nodes.insert(std::lower_bound(nodes.begin(), nodes.end(), x), x);
    NodeSetChart c(g, make_node_set(std::move(nodes)), x);
    if (!has_cycle(g, c.transitions())) return std::nullopt;
    return LoopingBackChart{std::move(c), x};
}

std::optional<LoopingBackChart> looping_back_chart(const Witness& w, NodeId x)
{
    return looping_back_chart(w.chart, loops_back_to(w), x);
}

std::vector<LoopingBackChart> looping_back_charts(const Witness& w)
{
    auto rel = loops_back_to(w);
    std::vector<LoopingBackChart> out;
    for (NodeId x = 0; x < w.chart.node_count(); ++x)
        if (auto lc = looping_back_chart(w.chart, rel, x)) out.push_back(std::move(*lc));
    return out;
}

LbcReport check_lbc_properties(const Witness& w, const LoopingBackChart& lbc)
{
    const Chart& g = lbc.chart.parent();
    LbcReport rep;
    auto fail = [&](bool& flag, std::string why) {
        flag = false;
        if (!rep.first_violation) rep.first_violation = std::move(why);
    };
    const auto rel = compute_loops_back_to(w);
    const auto body = lbc.body();
    for (auto y : body) {
        auto sub = looping_back_chart(g, rel, y);
        if (sub && !is_proper_subchart(sub->chart, lbc.chart))
            fail(rep.proper_subcharts,
                 "(i) looping-back chart of " + g.node_name(y) + " is not a proper sub-chart");
    }
    for (auto y : body)
        for (auto t : g.outgoing(y)) {
            auto d = g.transition(t).dst;
            if (d != kTermination && !lbc.chart.contains(d))
                fail(rep.closed, "(ii) transition " + g.describe(t) + " leaves the chart");
        }
    std::vector<bool> seen(g.node_count(), false);
    std::vector<NodeId> stack;
    for (auto y : body) {
        seen[y] = true;
        stack.push_back(y);
    }
    while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        for (auto t : g.outgoing(v)) {
            auto d = g.transition(t).dst;
            if (d == kTermination) {
                fail(rep.no_termination, "(iii) " + g.node_name(v) + " terminates before returning to " +
                                             g.node_name(lbc.start));
            } else if (d != lbc.start && !seen[d]) {
                seen[d] = true;
                stack.push_back(d);
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// LEE -> LLEE

namespace {

// Shortest path of order-0 alive transitions from `from` to `to`.
std::optional<std::vector<TransitionId>> zero_path(const Remnant& r, const std::vector<Order>& ord, NodeId from,
                                                   NodeId to)
{
    const Chart& g = r.chart;
    if (from == to) return std::vector<TransitionId>{};
    std::vector<std::optional<TransitionId>> via(g.node_count());
    std::vector<bool> seen(g.node_count(), false);
    std::deque<NodeId> queue{from};
    seen[from] = true;
    while (!queue.empty()) {
        auto v = queue.front();
        queue.pop_front();
        for (auto t : g.outgoing(v)) {
            const auto& tr = g.transition(t);
            if (!r.edge_alive[t] || ord[t] || tr.terminal() || seen[tr.dst]) continue;
            seen[tr.dst] = true;
            via[tr.dst] = t;
            if (tr.dst == to) {
                std::vector<TransitionId> path;
                for (NodeId u = to; u != from; u = g.transition(*via[u]).src) path.push_back(*via[u]);
                std::reverse(path.begin(), path.end());
                return path;
            }
            queue.push_back(tr.dst);
        }
    }
    return std::nullopt;
}

} // namespace

Witness lee_to_llee(const Witness& w)
{
    const Chart& g = w.chart;
    auto rp = replay(w);
    if (!rp.valid) throw NotLEE(rp.error);

    std::vector<Order> ord(g.transition_count(), 0);
    Order steps = 0;
    for (const auto& s : rp.steps) {
        if (s.vacuous) continue;
        ++steps;
        for (auto t : s.entries) ord[t] = steps;
    }

    Remnant r(g);
    for (Order n = 1; n <= steps; ++n) {
        std::vector<TransitionId> entries;
        for (TransitionId t = 0; t < ord.size(); ++t) {
            if (ord[t] != n) continue;
            if (r.edge_alive[t]) entries.push_back(t);
            else ord[t] = 0;
        }
        if (entries.empty()) continue;
        const NodeId x = g.transition(entries.front()).src;
        for (auto t : entries)
            if (g.transition(t).src != x) throw Error("order " + std::to_string(n) + " is split over two nodes");
        auto c = generated_chart(r, x, entries);
        if (!is_loop_chart(g, c))
            throw NotLEE("order " + std::to_string(n) + " at " + g.node_name(x) + " is not a loop chart");

        std::vector<std::pair<Order, TransitionId>> demoted;
        for (auto b : c.body)
            for (auto t : g.outgoing(b))
                if (r.edge_alive[t] && ord[t] > n) demoted.emplace_back(ord[t], t);
        std::sort(demoted.begin(), demoted.end());
        for (auto [k, t] : demoted) ord[t] = 0;
        for (auto [k, t] : demoted) {
            const auto& tr = g.transition(t);
            while (auto path = zero_path(r, ord, tr.dst, tr.src)) {
                auto out = std::find_if(path->begin(), path->end(),
                                        [&](TransitionId e) { return g.transition(e).src == x; });
                if (out == path->end())
                    throw NotLEE("loop through " + g.describe(t) + " does not pass " + g.node_name(x));
                ord[*out] = k;
            }
        }
        r.remove(entries);
    }

    Witness result = Witness{g, std::move(ord)}.compressed();
    if (auto v = llee_violation(result)) throw Error("loop-entry switching left a non-LLEE witness: " + *v);
    return result;
}

} // namespace lleekit
