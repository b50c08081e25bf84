#pragma once

#include "lleekit/expr.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lleekit {

using NodeId = std::uint32_t;
using ActionId = std::uint32_t;
using TransitionId = std::uint32_t;

/// Target of a terminal transition X -a-> √. Never a node.
inline constexpr NodeId kTermination = std::numeric_limits<NodeId>::max();

/// Reserved node token for √ in the text formats.
inline constexpr std::string_view kTerminationToken = "!";

inline constexpr std::size_t kDefaultStateCap = 100000;

struct Transition {
    NodeId src;
    ActionId action;
    NodeId dst;

    bool terminal() const noexcept { return dst == kTermination; }
    auto operator<=>(const Transition&) const = default;
};

/// Sorted, duplicate-free list of node ids.
using NodeSet = std::vector<NodeId>;

NodeSet make_node_set(std::vector<NodeId> nodes);
bool contains(const NodeSet& set, NodeId n);
bool is_subset(const NodeSet& a, const NodeSet& b);
NodeSet set_union(const NodeSet& a, const NodeSet& b);

/*
 * A finite chart: nodes, an action alphabet, an optional initial node and a
 * set of transitions whose targets are nodes or √.
 *
 * Charts are immutable and cheap to copy. Node ids index the node names in
 * ascending byte order, so "least node id" and "lexicographically least name"
 * agree. Transitions are sorted by (src, action, dst) and duplicate-free;
 * terminal transitions sort after all transitions of the same source/action.
 */
class Chart {
public:
    Chart();

    std::size_t node_count() const noexcept;
    std::size_t transition_count() const noexcept;

    const std::string& node_name(NodeId n) const;
    std::optional<NodeId> find_node(std::string_view name) const;
    /// Throws UnknownNode.
    NodeId node(std::string_view name) const;

    const std::vector<std::string>& node_names() const noexcept;
    const std::vector<std::string>& alphabet() const noexcept;
    const std::string& action_name(ActionId a) const;
    std::optional<ActionId> find_action(std::string_view name) const;

    std::optional<NodeId> initial() const noexcept;

    std::span<const Transition> transitions() const noexcept;
    const Transition& transition(TransitionId t) const;
    /// All transitions leaving `n`, terminal ones included.
    std::span<const TransitionId> outgoing(NodeId n) const;
    /// Non-terminal transitions entering `n`.
    std::span<const TransitionId> incoming(NodeId n) const;
    bool has_terminal(NodeId n) const;

    std::optional<TransitionId> find_transition(NodeId src, ActionId a, NodeId dst) const;
    /// Looks a transition up by names; `dst` may be "!" for √.
    std::optional<TransitionId> find_transition(std::string_view src, std::string_view action,
                                                std::string_view dst) const;

    /// "src action dst" with "!" for √.
    std::string describe(TransitionId t) const;

    /// True iff both handles share the same underlying data.
    bool same_as(const Chart& other) const noexcept { return d_ == other.d_; }
    /// Nodes that are not reachable from the initial node (empty without one).
    NodeSet unreachable_nodes() const;

    friend bool operator==(const Chart& a, const Chart& b);

private:
    friend class ChartBuilder;
    struct Data;
    explicit Chart(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
    std::shared_ptr<const Data> d_;
};

/// Collects names and assembles a canonical Chart.
class ChartBuilder {
public:
    ChartBuilder& node(std::string name);
    ChartBuilder& action(std::string name);
    ChartBuilder& initial(std::string name);
    /// `dst` equal to "!" denotes √.
    ChartBuilder& transition(std::string src, std::string action, std::string dst);
    ChartBuilder& terminal(std::string src, std::string action);

    /// Validates names; throws Error on a malformed node or action token.
    Chart build() const;

private:
    std::vector<std::string> nodes_;
    std::vector<std::string> actions_;
    std::optional<std::string> initial_;
    struct Raw {
        std::string src, action, dst;
    };
    std::vector<Raw> transitions_;
};

bool is_node_name(std::string_view name) noexcept;

// ---------------------------------------------------------------------------
// Operational semantics

struct Step {
    std::string action;
    std::optional<Expr> target; ///< nullopt = √

    bool operator==(const Step&) const = default;
};

/// One-step transitions of `e`, duplicate-free, in a fixed order.
std::vector<Step> step(const Expr& e);

struct Interpretation {
    Chart chart;
    std::vector<Expr> exprs; ///< expression of each node, indexed by NodeId
};

/// Chart of `e`: closure of `step` from `e`; node names are print(expr).
/// Throws StateExplosion when more than `state_cap` nodes are reached.
Interpretation interpret_detailed(const Expr& e, std::size_t state_cap = kDefaultStateCap);
Chart interpret(const Expr& e, std::size_t state_cap = kDefaultStateCap);

// ---------------------------------------------------------------------------
// Sub-charts induced by node sets

/// The chart of a node set: its nodes and every non-terminal transition
/// between them. Terminal transitions are not part of it; query the parent.
class NodeSetChart {
public:
    NodeSetChart(Chart parent, NodeSet nodes, std::optional<NodeId> start = std::nullopt);

    const Chart& parent() const noexcept { return parent_; }
    const NodeSet& nodes() const noexcept { return nodes_; }
    std::optional<NodeId> start() const noexcept { return start_; }
    bool contains(NodeId n) const { return lleekit::contains(nodes_, n); }
    bool empty() const noexcept { return nodes_.empty(); }
    std::vector<TransitionId> transitions() const;
    /// Node names, sorted.
    std::vector<std::string> names() const;

    /// Chart identity: same parent and same node set. The start is ignored.
    friend bool operator==(const NodeSetChart& a, const NodeSetChart& b);

private:
    Chart parent_;
    NodeSet nodes_;
    std::optional<NodeId> start_;
};

/// Throws UnknownNode if a node is out of range.
NodeSetChart chart_of_nodes(const Chart& g, NodeSet nodes, std::optional<NodeId> start = std::nullopt);
NodeSetChart chart_of_nodes(const Chart& g, const std::vector<std::string>& names);

bool same_parent(const NodeSetChart& a, const NodeSetChart& b);
/// A ⊑ B. Throws ParentMismatch.
bool is_subchart(const NodeSetChart& a, const NodeSetChart& b);
/// A ⊏ B.
bool is_proper_subchart(const NodeSetChart& a, const NodeSetChart& b);
/// A ⊔ B. Throws ParentMismatch.
NodeSetChart union_chart(const NodeSetChart& a, const NodeSetChart& b);

// ---------------------------------------------------------------------------
// Cycles

enum class CycleMode {
    EdgeDistinct, ///< parallel transitions yield distinct cycles
    NodeDistinct, ///< one cycle per node sequence
};

struct Cycle {
    std::vector<TransitionId> edges; ///< starts at the least node of the cycle

    NodeSet nodes(const Chart& g) const;
    std::vector<NodeId> path(const Chart& g) const;
};

struct CycleEnumeration {
    std::vector<Cycle> cycles;
    bool complete = true; ///< false when `limit` stopped the search
};

/// Elementary cycles over the given non-terminal transitions, each once up to rotation.
CycleEnumeration enumerate_cycles(const Chart& g, std::span<const TransitionId> edges, CycleMode mode,
                                  std::size_t limit = std::numeric_limits<std::size_t>::max());

std::vector<Cycle> simple_cycles(const Chart& g, CycleMode mode = CycleMode::EdgeDistinct);

/// True iff the given transitions contain a cycle.
bool has_cycle(const Chart& g, std::span<const TransitionId> edges);

} // namespace lleekit
