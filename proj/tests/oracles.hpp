#pragma once

// Slow, obviously-correct reference implementations used by the tests.

#include "lleekit/bisim.hpp"
#include "lleekit/chart.hpp"

#include <set>
#include <string>
#include <vector>

namespace oracle {

using lleekit::Chart;
using lleekit::NodeId;
using lleekit::TransitionId;

/// Greatest fixed point: start from all pairs, drop failing pairs until stable.
lleekit::Relation naive_bisimilarity(const Chart& g, const Chart& h);

/// Elementary cycles by DFS from each node through larger nodes only, one per edge sequence.
std::set<std::vector<TransitionId>> dfs_cycles(const Chart& g);

/// (L1)-(L3) for the ⟨x,E⟩ chart over the alive transitions, from first principles.
bool loop_chart(const Chart& g, const std::vector<bool>& alive, NodeId x, const std::vector<TransitionId>& entries);

/// Union of all entry subsets at x that generate a loop chart (empty if none).
std::vector<TransitionId> brute_max_entries(const Chart& g, NodeId x);

/// Tries every elimination sequence (every node, every nonempty entry subset).
bool exhaustive_lee(const Chart& g);

/// Reachable-from-initial (or all) node mask after removing dead transitions.
std::vector<bool> reach(const Chart& g, const std::vector<bool>& alive_edges);

/// Rebuilds `g` with the given node renamed through `rename`.
Chart rename_nodes(const Chart& g, const std::vector<std::string>& names);

} // namespace oracle
