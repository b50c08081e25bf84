#pragma once

#include "lleekit/bisim.hpp"
#include "lleekit/chart.hpp"
#include "lleekit/expr.hpp"
#include "lleekit/lee.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lleekit {

struct EquationSystem {
    struct Rhs {
        std::vector<std::pair<ActionId, NodeId>> summands;
        std::vector<ActionId> terminals;
    };
    Chart chart;
    std::vector<Rhs> rhs; ///< indexed by NodeId

    /// "s(X) = a·s(Y) + b", one line per node; an empty sum is "0".
    std::string render() const;
};

EquationSystem equation_system(const Chart& g);

enum class Axiom { A1, A2, A3, A4, A5, A6, A7, A8, A9, R1 };

std::string axiom_name(Axiom a);

/// First axiom (A1..A9) of which lhs = rhs or rhs = lhs is an instance.
std::optional<Axiom> is_axiom_instance(const Expr& lhs, const Expr& rhs);

/// For a premise e = e1·e + e2, the pair (e1, e2).
std::optional<std::pair<Expr, Expr>> r1_premise(const Expr& e, const Expr& rhs);

struct Solution {
    Chart chart;
    std::vector<Expr> assign; ///< indexed by NodeId
};

/// Throws NotLLEE.
Solution extract_solution(const Witness& w);

bool solution_check(const Solution& s, std::size_t state_cap = kDefaultStateCap);
/// Nodes whose expression is not bisimilar to the node.
std::vector<NodeId> solution_failures(const Solution& s, std::size_t state_cap = kDefaultStateCap);

/// x ↦ s(θ(x)).
Solution transfer_solution(const Solution& on_target, const BisimMap& theta);

struct Certificate {
    Chart collapse;
    BisimMap theta1;
    BisimMap theta2;
    Witness witness;   ///< LLEE, on `collapse`
    Solution solution;
    Expr primary;
    bool solution_valid = false;
};

struct EquivResult {
    bool equal = false;
    Chart chart1;
    Chart chart2;
    std::optional<Certificate> certificate;
    /// For NOT_EQUAL: the bisimulation classes of the two initial nodes in the
    /// union of both charts ("g:"/"h:" prefixed names).
    std::vector<std::string> block1;
    std::vector<std::string> block2;
};

EquivResult equiv(const Expr& e1, const Expr& e2, std::size_t state_cap = kDefaultStateCap);

} // namespace lleekit
