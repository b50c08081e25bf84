#include "lleekit/io.hpp"

#include "lleekit/errors.hpp"
#include "lleekit/solve.hpp"

#include <fstream>
#include <sstream>

namespace lleekit {

namespace {

struct Line {
    std::size_t number;
    std::vector<std::string> tokens;
};

std::vector<Line> tokenize(std::string_view text)
{
    std::vector<Line> out;
    std::size_t number = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++number;
        std::istringstream words(raw);
        Line line{number, {}};
        std::string tok;
        while (words >> tok) {
            if (tok[0] == '#') break;
            line.tokens.push_back(tok);
        }
        if (!line.tokens.empty()) out.push_back(std::move(line));
    }
    return out;
}

void expect_header(const std::vector<Line>& lines, std::string_view kind)
{
    if (lines.empty()) throw FormatError("missing '" + std::string(kind) + " v1' header", 1);
    const auto& h = lines.front();
    if (h.tokens.size() != 2 || h.tokens[0] != kind)
        throw FormatError("expected '" + std::string(kind) + " v1' header", h.number);
    if (h.tokens[1] != "v1") throw FormatError("unsupported version '" + h.tokens[1] + "'", h.number);
}

std::string dst_name(const Chart& g, const Transition& tr)
{
    return tr.terminal() ? std::string(kTerminationToken) : g.node_name(tr.dst);
}

TransitionId lookup(const Chart& g, const Line& line)
{
    auto t = g.find_transition(line.tokens[0], line.tokens[1], line.tokens[2]);
    if (!t)
        throw FormatError("no transition '" + line.tokens[0] + " " + line.tokens[1] + " " + line.tokens[2] +
                              "' in the chart",
                          line.number);
    return *t;
}

std::string dot_id(const std::string& s)
{
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

} // namespace

Chart read_chart(std::string_view text)
{
    auto lines = tokenize(text);
    expect_header(lines, "chart");
    ChartBuilder b;
    bool seen_init = false;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto& l = lines[i];
        const auto& t = l.tokens;
        if (t[0] == "init" && t.size() == 2) {
            if (seen_init) throw FormatError("duplicate init line", l.number);
            if (!is_node_name(t[1])) throw FormatError("invalid node name '" + t[1] + "'", l.number);
            seen_init = true;
            b.initial(t[1]);
        } else if (t[0] == "node" && t.size() == 2) {
            if (!is_node_name(t[1])) throw FormatError("invalid node name '" + t[1] + "'", l.number);
            b.node(t[1]);
        } else if (t.size() == 3) {
            if (!is_node_name(t[0])) throw FormatError("invalid node name '" + t[0] + "'", l.number);
            if (!is_action_name(t[1])) throw FormatError("invalid action '" + t[1] + "'", l.number);
            if (t[2] != kTerminationToken && !is_node_name(t[2]))
                throw FormatError("invalid node name '" + t[2] + "'", l.number);
            b.transition(t[0], t[1], t[2]);
        } else {
            throw FormatError("expected '<src> <action> <dst>'", l.number);
        }
    }
    return b.build();
}

std::string write_chart(const Chart& g)
{
    std::string out = "chart v1\n";
    if (g.initial()) out += "init " + g.node_name(*g.initial()) + "\n";
    std::vector<bool> mentioned(g.node_count(), false);
    if (g.initial()) mentioned[*g.initial()] = true;
    for (const auto& tr : g.transitions()) {
        mentioned[tr.src] = true;
        if (!tr.terminal()) mentioned[tr.dst] = true;
    }
    for (NodeId n = 0; n < g.node_count(); ++n)
        if (!mentioned[n]) out += "node " + g.node_name(n) + "\n";
    for (const auto& tr : g.transitions())
        out += g.node_name(tr.src) + " " + g.action_name(tr.action) + " " + dst_name(g, tr) + "\n";
    return out;
}

Witness read_witness(std::string_view text, const Chart& g)
{
    auto lines = tokenize(text);
    expect_header(lines, "witness");
    Witness w = Witness::zero(g);
    std::vector<bool> given(g.transition_count(), false);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto& l = lines[i];
        if (l.tokens.size() != 4) throw FormatError("expected '<src> <action> <dst> <order>'", l.number);
        auto t = lookup(g, l);
        if (g.transition(t).terminal()) throw FormatError("terminal transitions carry no order", l.number);
        if (given[t]) throw FormatError("transition listed twice", l.number);
        const auto& o = l.tokens[3];
        if (o.empty() || o.size() > 9 || o.find_first_not_of("0123456789") != std::string::npos)
            throw FormatError("invalid order '" + o + "'", l.number);
        w.order[t] = static_cast<Order>(std::stoul(o));
        given[t] = true;
    }
    for (TransitionId t = 0; t < g.transition_count(); ++t)
        if (!given[t] && !g.transition(t).terminal())
            throw FormatError("transition '" + g.describe(t) + "' has no order", 0);
    return w;
}

std::string write_witness(const Witness& w)
{
    const Chart& g = w.chart;
    std::string out = "witness v1\n";
    for (TransitionId t = 0; t < g.transition_count(); ++t) {
        const auto& tr = g.transition(t);
        if (tr.terminal()) continue;
        out += g.describe(t) + " " + std::to_string(w.order[t]) + "\n";
    }
    return out;
}

BisimMap read_map(std::string_view text, const Chart& source, const Chart& target)
{
    auto lines = tokenize(text);
    expect_header(lines, "map");
    std::vector<NodeId> map(source.node_count(), kTermination);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto& l = lines[i];
        if (l.tokens.size() != 2) throw FormatError("expected '<src-node> <dst-node>'", l.number);
        auto x = source.find_node(l.tokens[0]);
        auto y = target.find_node(l.tokens[1]);
        if (!x) throw FormatError("unknown source node '" + l.tokens[0] + "'", l.number);
        if (!y) throw FormatError("unknown target node '" + l.tokens[1] + "'", l.number);
        if (map[*x] != kTermination) throw FormatError("node mapped twice", l.number);
        map[*x] = *y;
    }
    for (NodeId x = 0; x < map.size(); ++x)
        if (map[x] == kTermination) throw FormatError("node '" + source.node_name(x) + "' is not mapped", 0);
    return BisimMap(source, target, std::move(map));
}

std::string write_map(const BisimMap& theta)
{
    std::string out = "map v1\n";
    for (NodeId x = 0; x < theta.map().size(); ++x)
        out += theta.source().node_name(x) + " " + theta.target().node_name(theta(x)) + "\n";
    return out;
}

Solution read_solution(std::string_view text, const Chart& g)
{
    auto lines = tokenize(text);
    expect_header(lines, "solution");
    std::vector<std::optional<Expr>> assign(g.node_count());
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto& l = lines[i];
        if (l.tokens.size() < 2) throw FormatError("expected '<node> <expression>'", l.number);
        auto x = g.find_node(l.tokens[0]);
        if (!x) throw FormatError("unknown node '" + l.tokens[0] + "'", l.number);
        std::string expr;
        for (std::size_t k = 1; k < l.tokens.size(); ++k) expr += (k > 1 ? " " : "") + l.tokens[k];
        try {
            assign[*x] = parse(expr);
        } catch (const SyntaxError& e) {
            throw FormatError(e.what(), l.number);
        }
    }
    Solution s{g, {}};
    for (NodeId x = 0; x < assign.size(); ++x) {
        if (!assign[x]) throw FormatError("node '" + g.node_name(x) + "' has no expression", 0);
        s.assign.push_back(*assign[x]);
    }
    return s;
}

std::string write_solution(const Solution& s)
{
    std::string out = "solution v1\n";
    for (NodeId x = 0; x < s.assign.size(); ++x) out += s.chart.node_name(x) + " " + print(s.assign[x]) + "\n";
    return out;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << content;
    if (!out) throw IoError("cannot write '" + path + "'");
}

// ---------------------------------------------------------------------------
// JSON

nlohmann::json chart_to_json(const Chart& g)
{
    nlohmann::json j;
    j["v"] = 1;
    j["nodes"] = g.node_names();
    j["alphabet"] = g.alphabet();
    j["initial"] = g.initial() ? nlohmann::json(g.node_name(*g.initial())) : nlohmann::json(nullptr);
    auto& ts = j["transitions"] = nlohmann::json::array();
    for (const auto& tr : g.transitions())
        ts.push_back({{"src", g.node_name(tr.src)}, {"action", g.action_name(tr.action)}, {"dst", dst_name(g, tr)}});
    return j;
}

Chart chart_from_json(const nlohmann::json& j)
{
    try {
        if (j.at("v").get<int>() != 1) throw FormatError("unsupported chart version", 0);
        ChartBuilder b;
        for (const auto& n : j.at("nodes")) b.node(n.get<std::string>());
        if (j.contains("alphabet"))
            for (const auto& a : j["alphabet"]) b.action(a.get<std::string>());
        if (j.contains("initial") && !j["initial"].is_null()) b.initial(j["initial"].get<std::string>());
        for (const auto& t : j.at("transitions"))
            b.transition(t.at("src").get<std::string>(), t.at("action").get<std::string>(),
                         t.at("dst").get<std::string>());
        return b.build();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed chart JSON: ") + e.what(), 0);
    }
}

nlohmann::json witness_to_json(const Witness& w)
{
    const Chart& g = w.chart;
    nlohmann::json j;
    j["v"] = 1;
    auto& os = j["orders"] = nlohmann::json::array();
    for (TransitionId t = 0; t < g.transition_count(); ++t) {
        const auto& tr = g.transition(t);
        if (tr.terminal()) continue;
        os.push_back({{"src", g.node_name(tr.src)},
                      {"action", g.action_name(tr.action)},
                      {"dst", g.node_name(tr.dst)},
                      {"order", w.order[t]}});
    }
    return j;
}

Witness witness_from_json(const nlohmann::json& j, const Chart& g)
{
    try {
        if (j.at("v").get<int>() != 1) throw FormatError("unsupported witness version", 0);
        std::string text = "witness v1\n";
        for (const auto& o : j.at("orders"))
            text += o.at("src").get<std::string>() + " " + o.at("action").get<std::string>() + " " +
                    o.at("dst").get<std::string>() + " " + std::to_string(o.at("order").get<Order>()) + "\n";
        return read_witness(text, g);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed witness JSON: ") + e.what(), 0);
    }
}

nlohmann::json map_to_json(const BisimMap& theta)
{
    nlohmann::json j;
    j["v"] = 1;
    auto& m = j["map"] = nlohmann::json::object();
    for (NodeId x = 0; x < theta.map().size(); ++x)
        m[theta.source().node_name(x)] = theta.target().node_name(theta(x));
    return j;
}

// ---------------------------------------------------------------------------
// DOT

std::string chart_to_dot(const Chart& g, const Witness* w, const std::vector<DotCluster>& clusters)
{
    std::ostringstream out;
    out << "digraph chart {\n  rankdir=LR;\n  node [shape=circle];\n";
    out << "  \"!\" [shape=doublecircle, label=\"\", width=0.2];\n";
    if (g.initial()) {
        out << "  __init [shape=point];\n";
        out << "  __init -> " << dot_id(g.node_name(*g.initial())) << ";\n";
    }
    std::vector<bool> clustered(g.node_count(), false);
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        out << "  subgraph cluster_" << i << " {\n    style=dotted;\n    label=" << dot_id(clusters[i].label)
            << ";\n";
        for (auto n : clusters[i].nodes) out << "    " << dot_id(g.node_name(n)) << ";\n";
        out << "  }\n";
        for (auto n : clusters[i].nodes) clustered[n] = true;
    }
    for (NodeId n = 0; n < g.node_count(); ++n)
        if (!clustered[n]) out << "  " << dot_id(g.node_name(n)) << ";\n";
    for (TransitionId t = 0; t < g.transition_count(); ++t) {
        const auto& tr = g.transition(t);
        out << "  " << dot_id(g.node_name(tr.src)) << " -> "
            << (tr.terminal() ? std::string("\"!\"") : dot_id(g.node_name(tr.dst)));
        std::string label = g.action_name(tr.action);
        Order o = w ? w->order.at(t) : 0;
        if (o) label += " [" + std::to_string(o) + "]";
        out << " [label=" << dot_id(label);
        if (o) out << ", color=red, fontcolor=red";
        out << "];\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace lleekit
