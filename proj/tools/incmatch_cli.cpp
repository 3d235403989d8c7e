#include <algorithm>
#include <chrono>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "incmatch/gadgets.hpp"
#include "incmatch/io.hpp"
#include "incmatch/oracle.hpp"
#include "incmatch/routing.hpp"

using namespace incmatch;

namespace {

enum Exit { kFeasible = 0, kError = 1, kInfeasible = 2 };

// Commas or whitespace separate list items.
std::vector<std::string> split_list(const std::string& text) {
    std::string s = text;
    std::replace(s.begin(), s.end(), ',', ' ');
    std::istringstream in(s);
    std::vector<std::string> items;
    for (std::string tok; in >> tok;) items.push_back(tok);
    return items;
}

AgentId agent_named(const Instance& inst, const std::string& name) {
    auto it = std::find(inst.names.begin(), inst.names.end(), name);
    if (it == inst.names.end()) throw ParseError("unknown agent '" + name + "'");
    return static_cast<AgentId>(it - inst.names.begin());
}

std::vector<Pair> parse_pairs(const Instance& inst, const std::string& text) {
    std::vector<Pair> pairs;
    for (const auto& item : split_list(text)) {
        auto dash = item.find('-');
        if (dash == std::string::npos) throw ParseError("expected a-b, got '" + item + "'");
        AgentId a = agent_named(inst, item.substr(0, dash));
        AgentId b = agent_named(inst, item.substr(dash + 1));
        pairs.push_back({std::min(a, b), std::max(a, b)});
    }
    return pairs;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"incremental stable matching solver"};
    app.require_subcommand(1);

    std::string input, algorithm = "auto", outliers, graph_file, out_file, pairs, matching_file;
    long limit = 0;
    bool deterministic = false;

    auto* solve_cmd = app.add_subcommand("solve", "solve an instance");
    solve_cmd->add_option("--input", input)->required();
    solve_cmd->add_option("--algorithm", algorithm)->check(CLI::IsMember(algorithm_names()));
    solve_cmd->add_option("--outliers", outliers, "agent names for --algorithm outliers");
    auto* solve_limit = solve_cmd->add_option("--limit", limit)->check(CLI::NonNegativeNumber);
    solve_cmd->add_flag("--deterministic", deterministic, "report elapsed_ms as 0");

    auto* enum_cmd = app.add_subcommand("enumerate", "all stable matchings of P2");
    enum_cmd->add_option("--input", input)->required();
    auto* enum_limit = enum_cmd->add_option("--limit", limit)->check(CLI::NonNegativeNumber);

    auto* gen_cmd = app.add_subcommand("generate", "hardness gadget instances");
    gen_cmd->require_subcommand(1);
    auto* clique_cmd = gen_cmd->add_subcommand("clique", "from a colored graph");
    clique_cmd->add_option("--graph", graph_file)->required();
    clique_cmd->add_option("--out", out_file)->required();
    auto* forced_cmd = gen_cmd->add_subcommand("forced-pairs", "replace forced pairs by chains");
    forced_cmd->add_option("--input", input)->required();
    forced_cmd->add_option("--out", out_file)->required();
    auto* forbidden_cmd = gen_cmd->add_subcommand("forbidden-pairs", "forbid pairs with gadgets");
    forbidden_cmd->add_option("--input", input)->required();
    forbidden_cmd->add_option("--pairs", pairs)->required();
    forbidden_cmd->add_option("--out", out_file)->required();

    auto* verify_cmd = app.add_subcommand("verify", "check a matching against P2 and k");
    verify_cmd->add_option("--input", input)->required();
    verify_cmd->add_option("--matching", matching_file)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // usage errors are exit 1 too, help stays 0
        int code = app.exit(e);
        return code == 0 ? kFeasible : kError;
    }

    try {
        if (*solve_cmd) {
            Instance inst = parse_instance(read_file(input));
            SolveRequest req;
            req.algorithm = algorithm;
            if (*solve_limit) req.limit = limit;
            for (const auto& name : split_list(outliers)) req.outliers.push_back(agent_named(inst, name));
            auto start = std::chrono::steady_clock::now();
            SolveResult r = solve(inst, req);
            long ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start)
                          .count();
            std::cout << result_json(inst, r.outcome, r.algorithm, deterministic ? 0 : ms);
            return feasible_within_budget(inst, r.outcome) ? kFeasible : kInfeasible;
        }
        if (*enum_cmd) {
            Instance inst = parse_instance(read_file(input));
            OracleOptions opt;
            if (*enum_limit) opt.max_agents = static_cast<int>(limit);
            std::cout << enumerate_json(inst, enumerate_stable(inst.p2, opt));
            return kFeasible;
        }
        if (*clique_cmd) {
            write_file(out_file, serialize_instance(gen_isr_from_clique(parse_graph(read_file(graph_file))).inst));
            return kFeasible;
        }
        if (*forced_cmd) {
            write_file(out_file, serialize_instance(apply_forced_pair_gadget(parse_instance(read_file(input))).inst));
            return kFeasible;
        }
        if (*forbidden_cmd) {
            Instance inst = parse_instance(read_file(input));
            write_file(out_file, serialize_instance(apply_forbidden_pairs_gadget(inst, parse_pairs(inst, pairs)).inst));
            return kFeasible;
        }
        if (*verify_cmd) {
            Instance inst = parse_instance(read_file(input));
            Matching m2 = parse_matching(read_file(matching_file), inst.names);
            std::cout << verify_json(inst, m2);
            bool ok = is_stable(inst.p2, m2) && diff_count(inst.m1, m2) <= inst.k &&
                      std::all_of(inst.forced.begin(), inst.forced.end(),
                                  [&](const Pair& q) { return m2.contains(q.first, q.second); });
            return ok ? kFeasible : kInfeasible;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kError;
    }
    return kError;
}
