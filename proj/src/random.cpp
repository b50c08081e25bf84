#include "lleekit/random.hpp"

#include <string>

namespace lleekit {

namespace {

std::string action_name(std::size_t i)
{
    return std::string(1, static_cast<char>('a' + i % 26)) + (i >= 26 ? std::to_string(i / 26) : "");
}

} // namespace

Expr random_expr_of_size(Rng& rng, std::size_t size, std::size_t actions)
{
    if (size % 2 == 0 && size > 0) --size;
    if (size <= 1) {
        // zero is kept rare, otherwise most charts deadlock early
        if (std::uniform_int_distribution<int>(0, 7)(rng) == 0) return Expr::zero();
        return Expr::action(action_name(std::uniform_int_distribution<std::size_t>(0, actions - 1)(rng)));
    }
    // both operands odd
    const auto left = 2 * std::uniform_int_distribution<std::size_t>(0, (size - 3) / 2)(rng) + 1;
    auto l = random_expr_of_size(rng, left, actions);
    auto r = random_expr_of_size(rng, size - 1 - left, actions);
    switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
    case 0: return Expr::plus(std::move(l), std::move(r));
    case 1: return Expr::seq(std::move(l), std::move(r));
    default: return Expr::star(std::move(l), std::move(r));
    }
}

Expr random_expr(Rng& rng, std::size_t max_size, std::size_t actions)
{
    return random_expr_of_size(rng, std::uniform_int_distribution<std::size_t>(1, max_size)(rng), actions);
}

Chart random_chart(Rng& rng, const RandomChartOptions& opt)
{
    std::bernoulli_distribution edge(opt.edge_probability), stop(opt.terminal_probability);
    ChartBuilder b;
    for (std::size_t i = 0; i < opt.nodes; ++i) b.node("n" + std::to_string(i));
    for (std::size_t i = 0; i < opt.nodes; ++i)
        for (std::size_t a = 0; a < opt.actions; ++a) {
            for (std::size_t j = 0; j < opt.nodes; ++j)
                if (edge(rng)) b.transition("n" + std::to_string(i), action_name(a), "n" + std::to_string(j));
            if (stop(rng)) b.terminal("n" + std::to_string(i), action_name(a));
        }
    if (opt.with_initial && opt.nodes) b.initial("n0");
    return b.build();
}

} // namespace lleekit
