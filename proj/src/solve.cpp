#include "lleekit/solve.hpp"

#include "lleekit/errors.hpp"
#include "lleekit/reflect.hpp"

#include <map>
#include <set>
#include <unordered_map>

namespace lleekit {

EquationSystem equation_system(const Chart& g)
{
    EquationSystem es{g, std::vector<EquationSystem::Rhs>(g.node_count())};
    for (const auto& tr : g.transitions()) {
        if (tr.terminal()) es.rhs[tr.src].terminals.push_back(tr.action);
        else es.rhs[tr.src].summands.emplace_back(tr.action, tr.dst);
    }
    return es;
}

std::string EquationSystem::render() const
{
    std::string out;
    for (NodeId x = 0; x < rhs.size(); ++x) {
        std::string sum;
        auto add = [&](const std::string& term) {
            if (!sum.empty()) sum += " + ";
            sum += term;
        };
        for (auto [a, y] : rhs[x].summands) add(chart.action_name(a) + "·s(" + chart.node_name(y) + ")");
        for (auto a : rhs[x].terminals) add(chart.action_name(a));
        out += "s(" + chart.node_name(x) + ") = " + (sum.empty() ? "0" : sum) + "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Axioms

std::string axiom_name(Axiom a)
{
    static const char* names[] = {"A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "A9", "R1"};
    return names[static_cast<int>(a)];
}

namespace {

bool is(const Expr& e, ExprKind k) { return e.kind() == k; }

std::optional<Axiom> match_directed(const Expr& l, const Expr& r)
{
    using K = ExprKind;
    // A1  e1 + e2 = e2 + e1
    if (is(l, K::Plus) && is(r, K::Plus) && l.left() == r.right() && l.right() == r.left()) return Axiom::A1;
    // A2  (e1 + e2) + e3 = e1 + (e2 + e3)
    if (is(l, K::Plus) && is(l.left(), K::Plus) && is(r, K::Plus) && is(r.right(), K::Plus) &&
        l.left().left() == r.left() && l.left().right() == r.right().left() && l.right() == r.right().right())
        return Axiom::A2;
    // A3  e + e = e
    if (is(l, K::Plus) && l.left() == l.right() && l.left() == r) return Axiom::A3;
    // A4  (e1 + e2)·e3 = e1·e3 + e2·e3
    if (is(l, K::Seq) && is(l.left(), K::Plus) && is(r, K::Plus) && is(r.left(), K::Seq) &&
        is(r.right(), K::Seq) && r.left().left() == l.left().left() && r.right().left() == l.left().right() &&
        r.left().right() == l.right() && r.right().right() == l.right())
        return Axiom::A4;
    // A5  (e1·e2)·e3 = e1·(e2·e3)
    if (is(l, K::Seq) && is(l.left(), K::Seq) && is(r, K::Seq) && is(r.right(), K::Seq) &&
        l.left().left() == r.left() && l.left().right() == r.right().left() && l.right() == r.right().right())
        return Axiom::A5;
    // A6  e + 0 = e
    if (is(l, K::Plus) && l.right().is_zero() && l.left() == r) return Axiom::A6;
    // A7  0·e = 0
    if (is(l, K::Seq) && l.left().is_zero() && r.is_zero()) return Axiom::A7;
    // A8  e1*e2 = e1·(e1*e2) + e2
    if (is(l, K::Star) && is(r, K::Plus) && is(r.left(), K::Seq) && r.left().left() == l.left() &&
        r.left().right() == l && r.right() == l.right())
        return Axiom::A8;
    // A9  (e1*e2)·e3 = e1*(e2·e3)
    if (is(l, K::Seq) && is(l.left(), K::Star) && is(r, K::Star) && is(r.right(), K::Seq) &&
        r.left() == l.left().left() && r.right().left() == l.left().right() && r.right().right() == l.right())
        return Axiom::A9;
    return std::nullopt;
}

} // namespace

std::optional<Axiom> is_axiom_instance(const Expr& lhs, const Expr& rhs)
{
    auto a = match_directed(lhs, rhs);
    auto b = match_directed(rhs, lhs);
    if (a && b) return std::min(*a, *b);
    return a ? a : b;
}

std::optional<std::pair<Expr, Expr>> r1_premise(const Expr& e, const Expr& rhs)
{
    if (rhs.kind() != ExprKind::Plus || rhs.left().kind() != ExprKind::Seq || !(rhs.left().right() == e))
        return std::nullopt;
    return std::make_pair(rhs.left().left(), rhs.right());
}

// ---------------------------------------------------------------------------
// Extraction

namespace {

Expr sum(const std::vector<Expr>& terms)
{
    if (terms.empty()) return Expr::zero();
    Expr out = terms.front();
    for (std::size_t i = 1; i < terms.size(); ++i) out = Expr::plus(out, terms[i]);
    return out;
}

class Extractor {
public:
    explicit Extractor(const Witness& w) : w_(w), g_(w.chart), s_(g_.node_count()), s_busy_(g_.node_count(), false) {}

    Expr s(NodeId v)
    {
        if (s_[v]) return *s_[v];
        if (s_busy_[v]) throw NotLLEE("body transitions revisit " + g_.node_name(v));
        s_busy_[v] = true;
        std::vector<Expr> exits;
        for (auto t : g_.outgoing(v)) {
            const auto& tr = g_.transition(t);
            Expr a = Expr::action(g_.action_name(tr.action));
            if (tr.terminal()) exits.push_back(a);
            else if (!w_.order[t]) exits.push_back(Expr::seq(a, s(tr.dst)));
        }
        Expr out = wrap(v, sum(exits));
        s_busy_[v] = false;
        s_[v] = out;
        return out;
    }

private:
    // (Σ entries of v)* exit, or just exit when v has no loop entries
    Expr wrap(NodeId v, Expr exit)
    {
        std::vector<Expr> loops;
        for (auto t : g_.outgoing(v)) {
            const auto& tr = g_.transition(t);
            if (tr.terminal() || !w_.order[t]) continue;
            Expr a = Expr::action(g_.action_name(tr.action));
            loops.push_back(tr.dst == v ? a : Expr::seq(a, t_(tr.dst, v)));
        }
        if (loops.empty()) return exit;
        return Expr::star(sum(loops), exit);
    }

    // runs from w until the loop at v is re-entered
    Expr t_(NodeId w, NodeId v)
    {
        auto key = std::make_pair(w, v);
        if (auto it = t_memo_.find(key); it != t_memo_.end()) return it->second;
        if (!t_busy_.emplace(key).second)
            throw NotLLEE("loop structure at " + g_.node_name(w) + " is not well-founded");
        std::vector<Expr> exits;
        for (auto t : g_.outgoing(w)) {
            const auto& tr = g_.transition(t);
            if (tr.terminal())
                throw NotLLEE(g_.node_name(w) + " terminates inside the loop at " + g_.node_name(v));
            if (w_.order[t]) continue;
            Expr b = Expr::action(g_.action_name(tr.action));
            exits.push_back(tr.dst == v ? b : Expr::seq(b, t_(tr.dst, v)));
        }
        Expr out = wrap(w, sum(exits));
        t_busy_.erase(key);
        t_memo_.emplace(key, out);
        return out;
    }

    const Witness& w_;
    const Chart& g_;
    std::vector<std::optional<Expr>> s_;
    std::vector<bool> s_busy_;
    std::map<std::pair<NodeId, NodeId>, Expr> t_memo_;
    std::set<std::pair<NodeId, NodeId>> t_busy_;
};

} // namespace

Solution extract_solution(const Witness& w)
{
    if (auto v = [&]() -> std::optional<std::string> {
            try {
                return llee_violation(w);
            } catch (const InvalidWitness& e) {
                return std::string(e.what());
            }
        }())
        throw NotLLEE(*v);
    Extractor ex(w);
    Solution sol{w.chart, {}};
    for (NodeId v = 0; v < w.chart.node_count(); ++v) sol.assign.push_back(ex.s(v));
    return sol;
}

std::vector<NodeId> solution_failures(const Solution& s, std::size_t state_cap)
{
    std::vector<NodeId> bad;
    std::unordered_map<Expr, Chart> cache;
    for (NodeId x = 0; x < s.chart.node_count(); ++x) {
        auto it = cache.find(s.assign.at(x));
        if (it == cache.end()) it = cache.emplace(s.assign[x], interpret(s.assign[x], state_cap)).first;
        const Chart& c = it->second;
        if (!bisimilar(s.chart, x, c, *c.initial())) bad.push_back(x);
    }
    return bad;
}

bool solution_check(const Solution& s, std::size_t state_cap)
{
    if (s.assign.size() != s.chart.node_count()) return false;
    return solution_failures(s, state_cap).empty();
}

Solution transfer_solution(const Solution& on_target, const BisimMap& theta)
{
    Solution out{theta.source(), {}};
    for (NodeId x = 0; x < theta.source().node_count(); ++x) out.assign.push_back(on_target.assign.at(theta(x)));
    return out;
}

// ---------------------------------------------------------------------------
// Equivalence

EquivResult equiv(const Expr& e1, const Expr& e2, std::size_t state_cap)
{
    EquivResult res;
    res.chart1 = interpret(e1, state_cap);
    res.chart2 = interpret(e2, state_cap);
    const Chart u = disjoint_union(res.chart1, res.chart2);
    const auto p = partition(u);
    const NodeId i1 = u.node("g:" + res.chart1.node_name(*res.chart1.initial()));
    const NodeId i2 = u.node("h:" + res.chart2.node_name(*res.chart2.initial()));
    res.equal = p.block_of[i1] == p.block_of[i2];
    if (!res.equal) {
        for (auto n : p.blocks[p.block_of[i1]]) res.block1.push_back(u.node_name(n));
        for (auto n : p.blocks[p.block_of[i2]]) res.block2.push_back(u.node_name(n));
        return res;
    }

    auto c = collapse(res.chart1);
    auto theta2 = bisim_map(res.chart2, c.chart);
    if (!theta2) throw Error("no bisimulation function onto the collapse");
    auto w1 = find_lee_witness(res.chart1);
    if (!w1) throw NotLEE("interpretation of " + print(e1) + " has no LEE witness");
    auto wh = lee_to_llee(collapse_lee_witness(c.theta, lee_to_llee(*w1)));
    auto sol = extract_solution(wh);
    bool valid = solution_check(sol, state_cap);
    Expr primary = sol.assign.at(*c.chart.initial());
    res.certificate = Certificate{c.chart, c.theta, std::move(*theta2), std::move(wh), std::move(sol), primary, valid};
    return res;
}

} // namespace lleekit
