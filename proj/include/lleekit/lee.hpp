#pragma once

#include "lleekit/chart.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lleekit {

using Order = std::uint32_t;

/// Order number per transition of `chart` (indexed by TransitionId); 0 marks
/// a body transition. Terminal transitions always carry 0.
struct Witness {
    Chart chart;
    std::vector<Order> order;

    static Witness zero(const Chart& g);
    Order operator[](TransitionId t) const { return order.at(t); }
    Order max_order() const;
    /// Positive orders form {1..max}.
    bool down_closed() const;
    /// Positive orders renumbered to 1..k keeping their relative order.
    Witness compressed() const;

    friend bool operator==(const Witness&, const Witness&) = default;
};

/*
 * Partially eliminated chart: the original chart with masks over nodes and
 * transitions. Node and transition ids stay those of the original chart.
 */
struct Remnant {
    Chart chart;
    std::vector<bool> node_alive;
    std::vector<bool> edge_alive;
    NodeSet roots;

    /// Everything alive; roots = {initial} or all nodes.
    explicit Remnant(const Chart& g);
    Remnant(const Chart& g, NodeSet roots);

    /// Removes `edges`, then every node not reachable from the roots.
    void remove(std::span<const TransitionId> edges);
    void collect_garbage();
    std::vector<TransitionId> alive_edges() const;
    bool acyclic() const;
    Chart to_chart() const;
};

/// An ⟨X,E⟩-generated chart. `transitions` lists E followed by every transition
/// leaving a body node, terminal ones included; it is not node-induced.
struct GeneratedChart {
    NodeId start;
    std::vector<TransitionId> entries;
    NodeSet body;
    std::vector<TransitionId> transitions;

    NodeSet nodes() const;
    NodeSetChart as_node_set_chart(const Chart& g) const;
};

/// Throws EmptyEntrySet, or Error if an entry does not leave `x`.
GeneratedChart generated_chart(const Chart& g, NodeId x, std::span<const TransitionId> entries);
GeneratedChart generated_chart(const Remnant& r, NodeId x, std::span<const TransitionId> entries);

/// (L1)-(L3) for a generated chart. L3 looks at body nodes only.
bool is_loop_chart(const Chart& g, const GeneratedChart& c);
/// (L1)-(L3) for an induced sub-chart started at `x`. L3 looks at every node.
bool is_loop_chart(const NodeSetChart& c, NodeId x);

/// Removes `entries` and garbage-collects from `roots`. Throws NotALoopChart.
Chart eliminate(const Chart& g, NodeId x, std::span<const TransitionId> entries, const NodeSet& roots);

/// Every transition x -> y whose x-avoiding continuation has no √ and no cycle;
/// empty unless at least one of them returns to x.
std::vector<TransitionId> max_entry_set(const Chart& g, NodeId x);
std::vector<TransitionId> max_entry_set(const Remnant& r, NodeId x);

struct ReplayStep {
    Order order;
    NodeId start;
    std::vector<TransitionId> entries;
    NodeSet body;
    bool vacuous = false; ///< the start was garbage-collected before its turn
};

struct Replay {
    bool valid = false;
    std::string error;
    std::vector<ReplayStep> steps;
};

Replay replay(const Witness& w);
bool is_lee_witness(const Witness& w);

/// Throws InvalidWitness when the replay fails.
bool is_llee_witness(const Witness& w);
/// The first reason `w` is not LLEE, or nullopt.
std::optional<std::string> llee_violation(const Witness& w);

std::optional<Witness> find_lee_witness(const Chart& g);

// ---------------------------------------------------------------------------
// Loops-back-to

struct LoopsBackTo {
    std::vector<NodeSet> direct;   ///< ↘
    std::vector<NodeSet> closure;  ///< ↘⁺
    bool acyclic() const;
};

/// Throws NotLLEE.
LoopsBackTo loops_back_to(const Witness& w);

struct LoopingBackChart {
    NodeSetChart chart;
    NodeId start;

    const NodeSet& nodes() const { return chart.nodes(); }
    NodeSet body() const;
    friend bool operator==(const LoopingBackChart& a, const LoopingBackChart& b)
    {
        return a.start == b.start && a.chart == b.chart;
    }
};

/// Throws NotLLEE.
std::optional<LoopingBackChart> looping_back_chart(const Witness& w, NodeId x);
std::vector<LoopingBackChart> looping_back_charts(const Witness& w);
std::optional<LoopingBackChart> looping_back_chart(const Chart& g, const LoopsBackTo& rel, NodeId x);

struct LbcReport {
    bool proper_subcharts = true; ///< (i)
    bool closed = true;           ///< (ii)
    bool no_termination = true;   ///< (iii)
    std::optional<std::string> first_violation;
    bool ok() const { return !first_violation; }
};

LbcReport check_lbc_properties(const Witness& w, const LoopingBackChart& lbc);

/// Loop-entry switching. Throws NotLEE.
Witness lee_to_llee(const Witness& w);

} // namespace lleekit
