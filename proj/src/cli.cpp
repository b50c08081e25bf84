#include "lleekit/cli.hpp"

#include "lleekit/bisim.hpp"
#include "lleekit/errors.hpp"
#include "lleekit/io.hpp"
#include "lleekit/lee.hpp"
#include "lleekit/random.hpp"
#include "lleekit/reflect.hpp"
#include "lleekit/solve.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <thread>

namespace lleekit {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct Config {
    std::size_t state_cap = kDefaultStateCap;
    std::uint64_t seed = 1;
    std::string format = "text";
};

// Raised for check failures; maps to exit code 1.
struct CheckFailed {
    std::string message;
};

Chart load_chart(const std::string& path)
{
    auto text = read_file(path);
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        try {
            return chart_from_json(json::parse(text));
        } catch (const json::parse_error& e) {
            throw FormatError(std::string("invalid JSON: ") + e.what(), 0);
        }
    }
    return read_chart(text);
}

Witness load_witness(const std::string& path, const Chart& g)
{
    auto text = read_file(path);
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        try {
            return witness_from_json(json::parse(text), g);
        } catch (const json::parse_error& e) {
            throw FormatError(std::string("invalid JSON: ") + e.what(), 0);
        }
    }
    return read_witness(text, g);
}

// A chart file if the path exists, otherwise an expression.
Chart chart_or_expr(const std::string& arg, const Config& cfg)
{
    std::error_code ec;
    if (fs::is_regular_file(arg, ec)) return load_chart(arg);
    return interpret(parse(arg), cfg.state_cap);
}

std::string names_of(const Chart& g, const NodeSet& nodes)
{
    std::string out = "{";
    for (auto n : nodes) out += (out.size() > 1 ? "," : "") + g.node_name(n);
    return out + "}";
}

json names_json(const Chart& g, const NodeSet& nodes)
{
    auto j = json::array();
    for (auto n : nodes) j.push_back(g.node_name(n));
    return j;
}

void emit_chart(std::ostream& out, const Chart& g, const Config& cfg, const Witness* w = nullptr)
{
    if (cfg.format == "json") out << chart_to_json(g).dump(2) << "\n";
    else if (cfg.format == "dot") out << chart_to_dot(g, w);
    else out << write_chart(g);
}

void emit_witness(std::ostream& out, const Witness& w, const Config& cfg)
{
    if (cfg.format == "json") out << witness_to_json(w).dump(2) << "\n";
    else if (cfg.format == "dot") out << chart_to_dot(w.chart, &w);
    else out << write_witness(w);
}

Witness as_llee(const Witness& w, std::ostream& err)
{
    if (!llee_violation(w)) return w;
    err << "note: witness is LEE but not LLEE; switching loop entries\n";
    return lee_to_llee(w);
}

// ---------------------------------------------------------------------------

int cmd_parse(const std::string& text, const Config& cfg, std::ostream& out)
{
    auto e = parse(text);
    if (cfg.format == "json") out << json{{"v", 1}, {"expr", to_json(e)}}.dump(2) << "\n";
    else out << print(e) << "\n";
    return 0;
}

int cmd_chart(const std::string& text, const Config& cfg, std::ostream& out)
{
    emit_chart(out, interpret(parse(text), cfg.state_cap), cfg);
    return 0;
}

int cmd_collapse(const std::string& arg, const std::string& prefix, const Config& cfg, std::ostream& out)
{
    auto c = collapse(chart_or_expr(arg, cfg));
    if (!prefix.empty()) {
        write_file(prefix + ".chart", write_chart(c.chart));
        write_file(prefix + ".map", write_map(c.theta));
    }
    if (cfg.format == "json") {
        out << json{{"v", 1}, {"chart", chart_to_json(c.chart)}, {"map", map_to_json(c.theta)}}.dump(2) << "\n";
    } else if (cfg.format == "dot") {
        out << chart_to_dot(c.chart);
    } else {
        out << write_chart(c.chart) << write_map(c.theta);
    }
    return 0;
}

int cmd_lee(const std::string& path, const Config& cfg, std::ostream& out)
{
    auto g = load_chart(path);
    auto w = find_lee_witness(g);
    if (!w) throw CheckFailed{"no LEE witness exists"};
    emit_witness(out, *w, cfg);
    return 0;
}

int cmd_check(const std::string& path, const std::string& wpath, bool llee, const Config& cfg, std::ostream& out)
{
    auto g = load_chart(path);
    auto w = load_witness(wpath, g);
    auto rp = replay(w);
    std::optional<std::string> why;
    if (rp.valid && llee) why = llee_violation(w);
    if (cfg.format == "json") {
        json j{{"v", 1}, {"lee", rp.valid}};
        if (!rp.valid) j["error"] = rp.error;
        if (llee && rp.valid) {
            j["llee"] = !why;
            if (why) j["error"] = *why;
        }
        out << j.dump(2) << "\n";
    } else {
        out << "LEE: " << (rp.valid ? "yes" : "no (" + rp.error + ")") << "\n";
        if (llee && rp.valid) out << "LLEE: " << (why ? "no (" + *why + ")" : "yes") << "\n";
    }
    return rp.valid && !why ? 0 : 1;
}

int cmd_lee2llee(const std::string& path, const std::string& wpath, const Config& cfg, std::ostream& out)
{
    auto g = load_chart(path);
    emit_witness(out, lee_to_llee(load_witness(wpath, g)), cfg);
    return 0;
}

int cmd_reflect(const std::string& path, const std::string& wpath, const Config& cfg, std::ostream& out,
                std::ostream& err)
{
    auto g = load_chart(path);
    auto w = as_llee(load_witness(wpath, g), err);
    auto c = collapse(g);
    auto hier = images(c.theta, w);
    auto lemma = check_lemma_conditions(c.theta, hier);
    std::optional<Witness> wh;
    std::string failure;
    try {
        wh = collapse_lee_witness(c.theta, hier);
    } catch (const LemmaViolated& e) {
        failure = e.what();
    }
    const Chart& h = c.chart;

    if (cfg.format == "json") {
        json j{{"v", 1}, {"collapse", chart_to_json(h)}, {"map", map_to_json(c.theta)}};
        auto& imgs = j["images"] = json::array();
        for (const auto& r : hier.records) {
            json pre = json::array();
            for (const auto& lc : r.preimages)
                pre.push_back({{"start", g.node_name(lc.start)}, {"nodes", names_json(g, lc.nodes())}});
            imgs.push_back({{"nodes", names_json(h, r.image.nodes())},
                            {"start", h.node_name(r.start)},
                            {"preimages", pre},
                            {"well_structured",
                             {{"start", g.node_name(r.well_structured.start)},
                              {"nodes", names_json(g, r.well_structured.nodes())}}}});
        }
        j["lemma"] = {{"1", lemma.cycles_covered},
                      {"2", lemma.cycles_anchored},
                      {"3", lemma.bodies_closed},
                      {"complete", lemma.complete},
                      {"violations", lemma.violations}};
        j["witness"] = wh ? witness_to_json(*wh) : json(nullptr);
        if (!failure.empty()) j["error"] = failure;
        out << j.dump(2) << "\n";
    } else if (cfg.format == "dot") {
        std::vector<DotCluster> clusters;
        for (const auto& r : hier.records) clusters.push_back({names_of(h, r.image.nodes()), r.image.nodes()});
        // clusters must nest in DOT; keep the largest image outermost by drawing only maximal ones
        std::vector<DotCluster> maximal;
        for (std::size_t i = 0; i < hier.records.size(); ++i) {
            bool inside = false;
            for (std::size_t k = 0; k < hier.records.size(); ++k)
                if (std::find(hier.below[k].begin(), hier.below[k].end(), i) != hier.below[k].end()) inside = true;
            if (!inside) maximal.push_back(clusters[i]);
        }
        out << chart_to_dot(h, wh ? &*wh : nullptr, maximal);
    } else {
        out << "collapse: " << h.node_count() << (h.node_count() == 1 ? " node " : " nodes ") << names_of(h, [&] {
            NodeSet all(h.node_count());
            for (NodeId n = 0; n < all.size(); ++n) all[n] = n;
            return all;
        }()) << "\n";
        out << "images: " << hier.records.size() << "\n";
        for (const auto& r : hier.records) {
            out << "  image " << names_of(h, r.image.nodes()) << " start " << h.node_name(r.start) << "\n";
            for (const auto& lc : r.preimages)
                out << "    pre-image " << names_of(g, lc.nodes()) << "_" << g.node_name(lc.start) << "\n";
            out << "    well-structured " << names_of(g, r.well_structured.nodes()) << "_"
                << g.node_name(r.well_structured.start) << "\n";
        }
        out << "lemma (1) " << (lemma.cycles_covered ? "pass" : "FAIL") << "  (2) "
            << (lemma.cycles_anchored ? "pass" : "FAIL") << "  (3) " << (lemma.bodies_closed ? "pass" : "FAIL")
            << (lemma.complete ? "" : "  (cycle enumeration capped)") << "\n";
        for (const auto& v : lemma.violations) out << "  " << v << "\n";
        if (wh) out << write_witness(*wh);
        else out << "no witness: " << failure << "\n";
    }
    if (!lemma.ok() || !wh) throw CheckFailed{failure.empty() ? "lemma conditions fail" : failure};
    return 0;
}

int cmd_solve(const std::string& path, const std::string& wpath, const Config& cfg, std::ostream& out)
{
    auto g = load_chart(path);
    auto w = load_witness(wpath, g);
    auto sol = extract_solution(w);
    auto bad = solution_failures(sol, cfg.state_cap);
    if (cfg.format == "json") {
        json assign = json::object();
        for (NodeId x = 0; x < sol.assign.size(); ++x) assign[g.node_name(x)] = print(sol.assign[x]);
        out << json{{"v", 1}, {"solution", assign}, {"valid", bad.empty()}}.dump(2) << "\n";
    } else {
        out << equation_system(g).render() << write_solution(sol);
        out << "check: " << (bad.empty() ? "valid" : "INVALID") << "\n";
    }
    if (!bad.empty()) throw CheckFailed{"solution is not bisimilar at " + g.node_name(bad.front())};
    return 0;
}

void write_certificate(const std::string& dir, const EquivResult& r)
{
    fs::create_directories(dir);
    const auto& c = *r.certificate;
    auto at = [&](const char* name) { return (fs::path(dir) / name).string(); };
    write_file(at("chart1.chart"), write_chart(r.chart1));
    write_file(at("chart2.chart"), write_chart(r.chart2));
    write_file(at("collapse.chart"), write_chart(c.collapse));
    write_file(at("theta1.map"), write_map(c.theta1));
    write_file(at("theta2.map"), write_map(c.theta2));
    write_file(at("collapse.witness"), write_witness(c.witness));
    write_file(at("collapse.solution"), write_solution(c.solution));
}

int cmd_equiv(const std::string& a, const std::string& b, const std::string& cert, const Config& cfg,
              std::ostream& out)
{
    auto r = equiv(parse(a), parse(b), cfg.state_cap);
    if (r.equal && !cert.empty()) write_certificate(cert, r);
    if (cfg.format == "json") {
        json j{{"v", 1}, {"verdict", r.equal ? "EQUAL" : "NOT_EQUAL"}};
        if (r.certificate) {
            j["collapse_nodes"] = r.certificate->collapse.node_count();
            j["primary_solution"] = print(r.certificate->primary);
            j["solution_valid"] = r.certificate->solution_valid;
        } else {
            j["block1"] = r.block1;
            j["block2"] = r.block2;
        }
        out << j.dump(2) << "\n";
    } else {
        out << (r.equal ? "EQUAL" : "NOT_EQUAL") << "\n";
        if (r.certificate) {
            out << "collapse: " << r.certificate->collapse.node_count() << (r.certificate->collapse.node_count() == 1 ? " node\n" : " nodes\n");
            out << "primary solution: " << print(r.certificate->primary) << "\n";
            out << "solution check: " << (r.certificate->solution_valid ? "valid" : "INVALID") << "\n";
        } else {
            auto join = [](const std::vector<std::string>& v) {
                std::string s;
                for (const auto& x : v) s += (s.empty() ? "" : " ") + x;
                return s;
            };
            out << "class of first:  " << join(r.block1) << "\n";
            out << "class of second: " << join(r.block2) << "\n";
        }
    }
    if (r.certificate && !r.certificate->solution_valid) throw CheckFailed{"extracted solution does not validate"};
    return r.equal ? 0 : 1;
}

int cmd_gen(std::size_t count, std::size_t size, const Config& cfg, std::ostream& out)
{
    Rng rng(cfg.seed);
    for (std::size_t i = 0; i < count; ++i) out << print(random_expr(rng, size)) << "\n";
    return 0;
}

int cmd_batch(const std::string& path, unsigned jobs, const Config& cfg, std::ostream& out)
{
    std::vector<std::string> lines;
    {
        std::istringstream in(read_file(path));
        std::string l;
        while (std::getline(in, l))
            if (l.find_first_not_of(" \t\r") != std::string::npos && l[l.find_first_not_of(" \t")] != '#')
                lines.push_back(l);
    }
    std::vector<std::string> results(lines.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next++) < lines.size();) {
            const auto& l = lines[i];
            auto eq = l.find('=');
            try {
                if (eq == std::string::npos) throw FormatError("expected '<expr> = <expr>'", i + 1);
                auto r = equiv(parse(l.substr(0, eq)), parse(l.substr(eq + 1)), cfg.state_cap);
                results[i] = r.equal ? "EQUAL" : "NOT_EQUAL";
            } catch (const std::exception& e) {
                results[i] = std::string("ERROR ") + e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < std::max(1u, jobs); ++k) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    int code = 0;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        out << results[i] << "\t" << lines[i] << "\n";
        if (results[i].rfind("ERROR", 0) == 0) code = 2;
        else if (results[i] != "EQUAL" && code == 0) code = 1;
    }
    return code;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Config cfg;
    if (const char* env = std::getenv("LLEEKIT_STATE_CAP")) {
        try {
            cfg.state_cap = std::stoull(env);
        } catch (const std::exception&) {
            err << "error: LLEEKIT_STATE_CAP must be a positive integer\n";
            return 2;
        }
    }

    CLI::App app{"lleekit: bisimulation, loop elimination and image reflection for 1-free regular expressions",
                 "lleekit"};
    app.require_subcommand(1);
    app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"text", "json", "dot"}));
    app.add_option("--seed", cfg.seed, "Random seed");
    app.add_option("--state-cap", cfg.state_cap, "Maximum number of chart nodes")->check(CLI::PositiveNumber);

    std::string a1, a2, cert, prefix;
    bool llee = false;
    std::size_t count = 10, size = 12;
    unsigned jobs = 1;
    std::function<int()> action;

    auto* parse_cmd = app.add_subcommand("parse", "Parse and print an expression");
    parse_cmd->add_option("expr", a1)->required();
    parse_cmd->callback([&] { action = [&] { return cmd_parse(a1, cfg, out); }; });

    auto* chart_cmd = app.add_subcommand("chart", "Chart interpretation of an expression");
    chart_cmd->add_option("expr", a1)->required();
    chart_cmd->callback([&] { action = [&] { return cmd_chart(a1, cfg, out); }; });

    auto* collapse_cmd = app.add_subcommand("collapse", "Bisimulation collapse of a chart file or expression");
    collapse_cmd->add_option("input", a1)->required();
    collapse_cmd->add_option("-o,--output", prefix, "Write PREFIX.chart and PREFIX.map");
    collapse_cmd->callback([&] { action = [&] { return cmd_collapse(a1, prefix, cfg, out); }; });

    auto* lee_cmd = app.add_subcommand("lee", "Search an LEE witness");
    lee_cmd->add_option("chart", a1)->required();
    lee_cmd->callback([&] { action = [&] { return cmd_lee(a1, cfg, out); }; });

    auto* llee_cmd = app.add_subcommand("llee", "Check that a witness is LLEE");
    llee_cmd->add_option("chart", a1)->required();
    llee_cmd->add_option("witness", a2)->required();
    llee_cmd->callback([&] { action = [&] { return cmd_check(a1, a2, true, cfg, out); }; });

    auto* l2l_cmd = app.add_subcommand("lee2llee", "Turn an LEE witness into an LLEE witness");
    l2l_cmd->add_option("chart", a1)->required();
    l2l_cmd->add_option("witness", a2)->required();
    l2l_cmd->callback([&] { action = [&] { return cmd_lee2llee(a1, a2, cfg, out); }; });

    auto* reflect_cmd = app.add_subcommand("reflect", "Images, lemma conditions and a witness for the collapse");
    reflect_cmd->add_option("chart", a1)->required();
    reflect_cmd->add_option("witness", a2)->required();
    reflect_cmd->callback([&] { action = [&] { return cmd_reflect(a1, a2, cfg, out, err); }; });

    auto* solve_cmd = app.add_subcommand("solve", "Extract and check a solution from an LLEE witness");
    solve_cmd->add_option("chart", a1)->required();
    solve_cmd->add_option("witness", a2)->required();
    solve_cmd->callback([&] { action = [&] { return cmd_solve(a1, a2, cfg, out); }; });

    auto* equiv_cmd = app.add_subcommand("equiv", "Decide bisimilarity of two expressions");
    equiv_cmd->add_option("expr1", a1)->required();
    equiv_cmd->add_option("expr2", a2)->required();
    equiv_cmd->add_option("--certificate", cert, "Directory for certificate files");
    equiv_cmd->callback([&] { action = [&] { return cmd_equiv(a1, a2, cert, cfg, out); }; });

    auto* check_cmd = app.add_subcommand("check-witness", "Replay a witness");
    check_cmd->add_option("chart", a1)->required();
    check_cmd->add_option("witness", a2)->required();
    check_cmd->add_flag("--llee", llee, "Also require LLEE");
    check_cmd->callback([&] { action = [&] { return cmd_check(a1, a2, llee, cfg, out); }; });

    auto* gen_cmd = app.add_subcommand("gen", "Random expressions");
    gen_cmd->add_option("--count", count)->check(CLI::NonNegativeNumber);
    gen_cmd->add_option("--size", size)->check(CLI::PositiveNumber);
    gen_cmd->callback([&] { action = [&] { return cmd_gen(count, size, cfg, out); }; });

    auto* batch_cmd = app.add_subcommand("batch", "Run 'e1 = e2' lines through equiv");
    batch_cmd->add_option("file", a1)->required();
    batch_cmd->add_option("--jobs", jobs)->check(CLI::PositiveNumber);
    batch_cmd->callback([&] { action = [&] { return cmd_batch(a1, jobs, cfg, out); }; });

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }
    if (cfg.state_cap == 0) {
        err << "error: state cap must be positive\n";
        return 2;
    }

    try {
        return action();
    } catch (const CheckFailed& e) {
        err << "error: " << e.message << "\n";
        return 1;
    } catch (const SyntaxError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const FormatError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const UnknownNode& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace lleekit
