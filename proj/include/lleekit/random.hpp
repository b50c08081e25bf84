#pragma once

#include "lleekit/chart.hpp"
#include "lleekit/expr.hpp"

#include <cstddef>
#include <random>

namespace lleekit {

using Rng = std::mt19937_64;

/// Random expression with at most `max_size` AST nodes over actions a, b, c, ...
Expr random_expr(Rng& rng, std::size_t max_size, std::size_t actions = 3);
/// Random expression with exactly `size` nodes; even sizes are rounded down.
Expr random_expr_of_size(Rng& rng, std::size_t size, std::size_t actions = 3);

struct RandomChartOptions {
    std::size_t nodes = 6;
    std::size_t actions = 2;
    double edge_probability = 0.25;
    double terminal_probability = 0.15;
    bool with_initial = false;
};

/// Nodes are named n0, n1, ...; not necessarily reachable.
Chart random_chart(Rng& rng, const RandomChartOptions& opt);

} // namespace lleekit
