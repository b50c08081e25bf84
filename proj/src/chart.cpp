#include "lleekit/chart.hpp"

#include "lleekit/errors.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <functional>
#include <unordered_map>

namespace lleekit {

NodeSet make_node_set(std::vector<NodeId> nodes)
{
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    return nodes;
}

bool contains(const NodeSet& set, NodeId n)
{
    return std::binary_search(set.begin(), set.end(), n);
}

bool is_subset(const NodeSet& a, const NodeSet& b)
{
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

NodeSet set_union(const NodeSet& a, const NodeSet& b)
{
    NodeSet out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

// ---------------------------------------------------------------------------
// Chart

struct Chart::Data {
    std::vector<std::string> nodes;
    std::vector<std::string> alphabet;
    std::optional<NodeId> initial;
    std::vector<Transition> transitions;
    std::vector<std::vector<TransitionId>> out;
    std::vector<std::vector<TransitionId>> in;
    std::vector<bool> terminal;
};

Chart::Chart() : d_(std::make_shared<const Data>()) {}

std::size_t Chart::node_count() const noexcept { return d_->nodes.size(); }
std::size_t Chart::transition_count() const noexcept { return d_->transitions.size(); }

const std::string& Chart::node_name(NodeId n) const
{
    if (n >= d_->nodes.size()) throw UnknownNode("node id " + std::to_string(n) + " out of range");
    return d_->nodes[n];
}

std::optional<NodeId> Chart::find_node(std::string_view name) const
{
    auto it = std::lower_bound(d_->nodes.begin(), d_->nodes.end(), name);
    if (it == d_->nodes.end() || *it != name) return std::nullopt;
    return static_cast<NodeId>(it - d_->nodes.begin());
}

NodeId Chart::node(std::string_view name) const
{
    if (auto n = find_node(name)) return *n;
    throw UnknownNode("unknown node '" + std::string(name) + "'");
}

const std::vector<std::string>& Chart::node_names() const noexcept { return d_->nodes; }
const std::vector<std::string>& Chart::alphabet() const noexcept { return d_->alphabet; }

const std::string& Chart::action_name(ActionId a) const { return d_->alphabet.at(a); }

std::optional<ActionId> Chart::find_action(std::string_view name) const
{
    auto it = std::lower_bound(d_->alphabet.begin(), d_->alphabet.end(), name);
    if (it == d_->alphabet.end() || *it != name) return std::nullopt;
    return static_cast<ActionId>(it - d_->alphabet.begin());
}

std::optional<NodeId> Chart::initial() const noexcept { return d_->initial; }

std::span<const Transition> Chart::transitions() const noexcept { return d_->transitions; }

const Transition& Chart::transition(TransitionId t) const { return d_->transitions.at(t); }

std::span<const TransitionId> Chart::outgoing(NodeId n) const { return d_->out.at(n); }
std::span<const TransitionId> Chart::incoming(NodeId n) const { return d_->in.at(n); }
bool Chart::has_terminal(NodeId n) const { return d_->terminal.at(n); }

std::optional<TransitionId> Chart::find_transition(NodeId src, ActionId a, NodeId dst) const
{
    const Transition key{src, a, dst};
    auto& ts = d_->transitions;
    auto it = std::lower_bound(ts.begin(), ts.end(), key);
    if (it == ts.end() || *it != key) return std::nullopt;
    return static_cast<TransitionId>(it - ts.begin());
}

std::optional<TransitionId> Chart::find_transition(std::string_view src, std::string_view action,
                                                   std::string_view dst) const
{
    auto s = find_node(src);
    auto a = find_action(action);
    if (!s || !a) return std::nullopt;
    if (dst == kTerminationToken) return find_transition(*s, *a, kTermination);
    auto d = find_node(dst);
    if (!d) return std::nullopt;
    return find_transition(*s, *a, *d);
}

std::string Chart::describe(TransitionId t) const
{
    const auto& tr = transition(t);
    return node_name(tr.src) + " " + action_name(tr.action) + " " +
           (tr.terminal() ? std::string(kTerminationToken) : node_name(tr.dst));
}

NodeSet Chart::unreachable_nodes() const
{
    if (!d_->initial) return {};
    std::vector<bool> seen(node_count(), false);
    std::vector<NodeId> stack{*d_->initial};
    seen[*d_->initial] = true;
    while (!stack.empty()) {
        NodeId n = stack.back();
        stack.pop_back();
        for (auto t : outgoing(n)) {
            auto d = transition(t).dst;
            if (d != kTermination && !seen[d]) {
                seen[d] = true;
                stack.push_back(d);
            }
        }
    }
    NodeSet out;
    for (NodeId n = 0; n < node_count(); ++n)
        if (!seen[n]) out.push_back(n);
    return out;
}

bool operator==(const Chart& a, const Chart& b)
{
    if (a.d_ == b.d_) return true;
    return a.d_->nodes == b.d_->nodes && a.d_->alphabet == b.d_->alphabet &&
           a.d_->initial == b.d_->initial && a.d_->transitions == b.d_->transitions;
}

bool is_node_name(std::string_view name) noexcept
{
    if (name.empty() || name == kTerminationToken || name[0] == '#') return false;
    return std::none_of(name.begin(), name.end(),
                        [](char c) { return std::isspace(static_cast<unsigned char>(c)) || c == '"'; });
}

// ---------------------------------------------------------------------------
// ChartBuilder

ChartBuilder& ChartBuilder::node(std::string name)
{
    nodes_.push_back(std::move(name));
    return *this;
}

ChartBuilder& ChartBuilder::action(std::string name)
{
    actions_.push_back(std::move(name));
    return *this;
}

ChartBuilder& ChartBuilder::initial(std::string name)
{
    initial_ = std::move(name);
    return *this;
}

ChartBuilder& ChartBuilder::transition(std::string src, std::string action, std::string dst)
{
    transitions_.push_back({std::move(src), std::move(action), std::move(dst)});
    return *this;
}

ChartBuilder& ChartBuilder::terminal(std::string src, std::string action)
{
    return transition(std::move(src), std::move(action), std::string(kTerminationToken));
}

Chart ChartBuilder::build() const
{
    auto data = std::make_shared<Chart::Data>();
    std::vector<std::string> names = nodes_;
    std::vector<std::string> actions = actions_;
    if (initial_) names.push_back(*initial_);
    for (const auto& t : transitions_) {
        names.push_back(t.src);
        if (t.dst != kTerminationToken) names.push_back(t.dst);
        actions.push_back(t.action);
    }
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    std::sort(actions.begin(), actions.end());
    actions.erase(std::unique(actions.begin(), actions.end()), actions.end());
    for (const auto& n : names)
        if (!is_node_name(n)) throw Error("invalid node name '" + n + "'");
    for (const auto& a : actions)
        if (!is_action_name(a)) throw Error("invalid action name '" + a + "'");

    data->nodes = std::move(names);
    data->alphabet = std::move(actions);
    auto node_id = [&](const std::string& n) {
        return static_cast<NodeId>(std::lower_bound(data->nodes.begin(), data->nodes.end(), n) -
                                   data->nodes.begin());
    };
    auto action_id = [&](const std::string& a) {
        return static_cast<ActionId>(
            std::lower_bound(data->alphabet.begin(), data->alphabet.end(), a) - data->alphabet.begin());
    };
    if (initial_) data->initial = node_id(*initial_);
    for (const auto& t : transitions_) {
        NodeId dst = t.dst == kTerminationToken ? kTermination : node_id(t.dst);
        data->transitions.push_back({node_id(t.src), action_id(t.action), dst});
    }
    auto& ts = data->transitions;
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

    const auto n = data->nodes.size();
    data->out.resize(n);
    data->in.resize(n);
    data->terminal.assign(n, false);
    for (TransitionId i = 0; i < ts.size(); ++i) {
        data->out[ts[i].src].push_back(i);
        if (ts[i].terminal()) data->terminal[ts[i].src] = true;
        else data->in[ts[i].dst].push_back(i);
    }
    return Chart(std::move(data));
}

// ---------------------------------------------------------------------------
// Operational semantics

namespace {

void add_step(std::vector<Step>& out, Step s)
{
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(std::move(s));
}

} // namespace

std::vector<Step> step(const Expr& e)
{
    std::vector<Step> out;
    switch (e.kind()) {
    case ExprKind::Action: out.push_back({e.name(), std::nullopt}); break;
    case ExprKind::Zero: break;
    case ExprKind::Plus:
        for (auto& s : step(e.left())) add_step(out, std::move(s));
        for (auto& s : step(e.right())) add_step(out, std::move(s));
        break;
    case ExprKind::Seq:
        for (auto& s : step(e.left())) {
            if (!s.target) add_step(out, {s.action, e.right()});
            else add_step(out, {s.action, Expr::seq(*s.target, e.right())});
        }
        break;
    case ExprKind::Star:
        for (auto& s : step(e.left())) {
            if (!s.target) add_step(out, {s.action, e});
            else add_step(out, {s.action, Expr::seq(*s.target, e)});
        }
        for (auto& s : step(e.right())) add_step(out, std::move(s));
        break;
    }
    return out;
}

Interpretation interpret_detailed(const Expr& e, std::size_t state_cap)
{
    std::unordered_map<Expr, std::size_t> index;
    std::vector<Expr> order;
    std::deque<std::size_t> queue;
    auto visit = [&](const Expr& x) {
        auto [it, fresh] = index.try_emplace(x, order.size());
        if (fresh) {
            if (order.size() >= state_cap)
                throw StateExplosion("interpretation exceeds " + std::to_string(state_cap) + " nodes");
            order.push_back(x);
            queue.push_back(it->second);
        }
    };
    ChartBuilder builder;
    visit(e);
    std::vector<std::string> names;
    while (!queue.empty()) {
        auto i = queue.front();
        queue.pop_front();
        const Expr cur = order[i];
        for (auto& s : step(cur)) {
            if (s.target) visit(*s.target);
        }
    }
    names.reserve(order.size());
    for (const auto& x : order) names.push_back(print(x));
    for (std::size_t i = 0; i < order.size(); ++i) {
        builder.node(names[i]);
        for (auto& s : step(order[i]))
            builder.transition(names[i], s.action,
                               s.target ? names[index.at(*s.target)] : std::string(kTerminationToken));
    }
    builder.initial(names[0]);
    Interpretation out{builder.build(), std::vector<Expr>(order.size(), Expr::zero())};
    for (std::size_t i = 0; i < order.size(); ++i) out.exprs[out.chart.node(names[i])] = order[i];
    return out;
}

Chart interpret(const Expr& e, std::size_t state_cap)
{
    return interpret_detailed(e, state_cap).chart;
}

// ---------------------------------------------------------------------------
// NodeSetChart

NodeSetChart::NodeSetChart(Chart parent, NodeSet nodes, std::optional<NodeId> start)
    : parent_(std::move(parent)), nodes_(make_node_set(std::move(nodes))), start_(start)
{
    for (auto n : nodes_)
        if (n >= parent_.node_count()) throw UnknownNode("node id " + std::to_string(n) + " not in chart");
    if (start_ && !contains(*start_)) throw UnknownNode("start node is not in the node set");
}

std::vector<TransitionId> NodeSetChart::transitions() const
{
    std::vector<TransitionId> out;
    for (auto n : nodes_)
        for (auto t : parent_.outgoing(n)) {
            auto d = parent_.transition(t).dst;
            if (d != kTermination && contains(d)) out.push_back(t);
        }
    return out;
}

std::vector<std::string> NodeSetChart::names() const
{
    std::vector<std::string> out;
    for (auto n : nodes_) out.push_back(parent_.node_name(n));
    return out;
}

bool same_parent(const NodeSetChart& a, const NodeSetChart& b)
{
    return a.parent().same_as(b.parent()) || a.parent() == b.parent();
}

bool operator==(const NodeSetChart& a, const NodeSetChart& b)
{
    return same_parent(a, b) && a.nodes() == b.nodes();
}

NodeSetChart chart_of_nodes(const Chart& g, NodeSet nodes, std::optional<NodeId> start)
{
    return NodeSetChart(g, std::move(nodes), start);
}

NodeSetChart chart_of_nodes(const Chart& g, const std::vector<std::string>& names)
{
    NodeSet nodes;
    for (const auto& n : names) nodes.push_back(g.node(n));
    return NodeSetChart(g, std::move(nodes));
}

bool is_subchart(const NodeSetChart& a, const NodeSetChart& b)
{
    if (!same_parent(a, b)) throw ParentMismatch();
    return is_subset(a.nodes(), b.nodes());
}

bool is_proper_subchart(const NodeSetChart& a, const NodeSetChart& b)
{
    return is_subchart(a, b) && a.nodes().size() < b.nodes().size();
}

NodeSetChart union_chart(const NodeSetChart& a, const NodeSetChart& b)
{
    if (!same_parent(a, b)) throw ParentMismatch();
    return NodeSetChart(a.parent(), set_union(a.nodes(), b.nodes()));
}

// ---------------------------------------------------------------------------
// Cycles

NodeSet Cycle::nodes(const Chart& g) const
{
    std::vector<NodeId> out;
    for (auto t : edges) out.push_back(g.transition(t).src);
    return make_node_set(std::move(out));
}

std::vector<NodeId> Cycle::path(const Chart& g) const
{
    std::vector<NodeId> out;
    for (auto t : edges) out.push_back(g.transition(t).src);
    return out;
}

namespace {

struct Edge {
    NodeId dst;
    TransitionId id;
};

// Johnson's elementary circuit algorithm on a multigraph.
class CircuitFinder {
public:
    CircuitFinder(std::vector<std::vector<Edge>> adj, std::size_t limit)
        : adj_(std::move(adj)), limit_(limit)
    {
    }

    CycleEnumeration run()
    {
        const auto n = adj_.size();
        blocked_.assign(n, false);
        blocked_by_.assign(n, {});
        in_comp_.assign(n, false);
        for (NodeId s = 0; s < n && !stop_; ++s) {
            auto comp = component_of(s);
            if (comp.empty()) continue;
            std::fill(in_comp_.begin(), in_comp_.end(), false);
            for (auto v : comp) {
                in_comp_[v] = true;
                blocked_[v] = false;
                blocked_by_[v].clear();
            }
            start_ = s;
            circuit(s);
        }
        return {std::move(found_), !stop_};
    }

private:
    // Strongly connected component of `s` in the subgraph of nodes >= s,
    // or empty if `s` lies on no cycle there.
    std::vector<NodeId> component_of(NodeId s)
    {
        const auto n = adj_.size();
        std::vector<bool> fwd(n, false), bwd(n, false);
        std::vector<std::vector<NodeId>> radj(n);
        for (NodeId v = s; v < n; ++v)
            for (auto& e : adj_[v])
                if (e.dst >= s) radj[e.dst].push_back(v);
        auto sweep = [&](std::vector<bool>& seen, auto&& next) {
            std::vector<NodeId> stack{s};
            seen[s] = true;
            while (!stack.empty()) {
                auto v = stack.back();
                stack.pop_back();
                next(v, [&](NodeId w) {
                    if (w >= s && !seen[w]) {
                        seen[w] = true;
                        stack.push_back(w);
                    }
                });
            }
        };
        sweep(fwd, [&](NodeId v, auto push) {
            for (auto& e : adj_[v]) push(e.dst);
        });
        sweep(bwd, [&](NodeId v, auto push) {
            for (auto w : radj[v]) push(w);
        });
        std::vector<NodeId> comp;
        for (NodeId v = s; v < n; ++v)
            if (fwd[v] && bwd[v]) comp.push_back(v);
        bool cyclic = comp.size() > 1;
        for (auto& e : adj_[s]) cyclic = cyclic || e.dst == s;
        if (!cyclic) comp.clear();
        return comp;
    }

    void unblock(NodeId v)
    {
        blocked_[v] = false;
        auto pending = std::move(blocked_by_[v]);
        blocked_by_[v].clear();
        for (auto w : pending)
            if (blocked_[w]) unblock(w);
    }

    bool circuit(NodeId v)
    {
        bool found = false;
        blocked_[v] = true;
        for (auto& e : adj_[v]) {
            if (stop_) return true;
            if (!in_comp_[e.dst]) continue;
            if (e.dst == start_) {
                stack_.push_back(e.id);
                found_.push_back({stack_});
                stack_.pop_back();
                found = true;
                if (found_.size() >= limit_) stop_ = true;
            } else if (!blocked_[e.dst]) {
                stack_.push_back(e.id);
                if (circuit(e.dst)) found = true;
                stack_.pop_back();
            }
        }
        if (found) {
            unblock(v);
        } else {
            for (auto& e : adj_[v]) {
                if (!in_comp_[e.dst]) continue;
                auto& b = blocked_by_[e.dst];
                if (std::find(b.begin(), b.end(), v) == b.end()) b.push_back(v);
            }
        }
        return found;
    }

    std::vector<std::vector<Edge>> adj_;
    std::size_t limit_;
    std::vector<bool> blocked_;
    std::vector<std::vector<NodeId>> blocked_by_;
    std::vector<bool> in_comp_;
    std::vector<TransitionId> stack_;
    std::vector<Cycle> found_;
    NodeId start_ = 0;
    bool stop_ = false;
};

} // namespace

CycleEnumeration enumerate_cycles(const Chart& g, std::span<const TransitionId> edges, CycleMode mode,
                                  std::size_t limit)
{
    std::vector<std::vector<Edge>> adj(g.node_count());
    std::vector<TransitionId> sorted(edges.begin(), edges.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (auto t : sorted) {
        const auto& tr = g.transition(t);
        if (tr.terminal()) continue;
        auto& out = adj[tr.src];
        if (mode == CycleMode::NodeDistinct &&
            std::any_of(out.begin(), out.end(), [&](const Edge& e) { return e.dst == tr.dst; }))
            continue;
        out.push_back({tr.dst, t});
    }
    if (limit == 0) return {{}, false};
    return CircuitFinder(std::move(adj), limit).run();
}

std::vector<Cycle> simple_cycles(const Chart& g, CycleMode mode)
{
    std::vector<TransitionId> all(g.transition_count());
    for (TransitionId t = 0; t < all.size(); ++t) all[t] = t;
    return enumerate_cycles(g, all, mode).cycles;
}

bool has_cycle(const Chart& g, std::span<const TransitionId> edges)
{
    const auto n = g.node_count();
    std::vector<std::size_t> indeg(n, 0);
    std::vector<std::vector<NodeId>> adj(n);
    for (auto t : edges) {
        const auto& tr = g.transition(t);
        if (tr.terminal()) continue;
        adj[tr.src].push_back(tr.dst);
        ++indeg[tr.dst];
    }
    std::vector<NodeId> ready;
    for (NodeId v = 0; v < n; ++v)
        if (indeg[v] == 0) ready.push_back(v);
    std::size_t done = 0;
    while (!ready.empty()) {
        auto v = ready.back();
        ready.pop_back();
        ++done;
        for (auto w : adj[v])
            if (--indeg[w] == 0) ready.push_back(w);
    }
    return done != n;
}

} // namespace lleekit
