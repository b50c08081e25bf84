#pragma once

#include "lleekit/chart.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace lleekit {

/// Sorted list of (G-node, H-node) pairs.
using Relation = std::vector<std::pair<NodeId, NodeId>>;

/*
 * Total function from the nodes of `source` to the nodes of `target`.
 * Construction does not validate; call is_valid()/validate().
 */
class BisimMap {
public:
    BisimMap(Chart source, Chart target, std::vector<NodeId> map);

    const Chart& source() const noexcept { return source_; }
    const Chart& target() const noexcept { return target_; }
    const std::vector<NodeId>& map() const noexcept { return map_; }
    NodeId operator()(NodeId x) const { return map_.at(x); }
    NodeSet apply(const NodeSet& nodes) const;

    Relation relation() const;
    /// First violated condition, or nullopt.
    std::optional<std::string> violation() const;
    bool is_valid() const { return !violation(); }
    /// Throws Error.
    void validate() const;

private:
    Chart source_;
    Chart target_;
    std::vector<NodeId> map_;
};

struct Partition {
    Chart chart;
    std::vector<NodeSet> blocks; ///< ordered by least member
    std::vector<std::uint32_t> block_of;
};

/// Coarsest bisimulation partition of one chart.
Partition partition(const Chart& g);

/// Largest bisimulation between the nodes of g and h.
Relation bisimilarity(const Chart& g, const Chart& h);
bool bisimilar(const Chart& g, NodeId x, const Chart& h, NodeId y);

/// Checks the three transfer conditions for every pair.
bool is_bisimulation(const Relation& r, const Chart& g, const Chart& h);

/// True iff no two distinct nodes of g are bisimilar.
bool is_minimal(const Chart& g);

struct Collapse {
    Chart chart;
    BisimMap theta;
};

/// Quotient by bisimilarity; each block is named after its least node.
Collapse collapse(const Chart& g);

/// The bisimulation function g -> h when h is minimal, or nullopt if some
/// node of g has no bisimilar counterpart (or the initial nodes disagree).
std::optional<BisimMap> bisim_map(const Chart& g, const Chart& h);

/// θ(A) as a node-set chart of the target. Throws ParentMismatch.
NodeSetChart image(const BisimMap& theta, const NodeSetChart& a);

/// Disjoint union with node names prefixed "g:" and "h:".
Chart disjoint_union(const Chart& g, const Chart& h);

} // namespace lleekit
