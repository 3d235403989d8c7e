#include "incmatch/routing.hpp"

#include <stdexcept>

#include "incmatch/incremental.hpp"
#include "incmatch/oracle.hpp"
#include "incmatch/structured.hpp"
#include "incmatch/ties.hpp"

namespace incmatch {

namespace {

bool complete(const Profile& p) {
    for (AgentId a = 0; a < p.size(); ++a)
        if (p.list_length(a) != p.size() - 1) return false;
    return true;
}

int summed_ties(const Profile& p) {
    int s = 0;
    for (AgentId a = 0; a < p.size(); ++a) s += p.summed_tie_size(a);
    return s;
}

OracleOptions oracle_options(std::optional<long> limit) {
    OracleOptions o;
    if (limit) o.max_agents = static_cast<int>(*limit);
    return o;
}

XpOptions xp_options(std::optional<long> limit) {
    XpOptions o;
    if (limit) o.guess_limit = static_cast<double>(*limit);
    return o;
}

TiesOptions ties_options(std::optional<long> limit) {
    TiesOptions o;
    if (limit) o.max_tied_agents = o.max_summed_tie_size = static_cast<int>(*limit);
    return o;
}

// isr-xp stays within the guess limit on this instance.
bool xp_fits(const Instance& inst, std::optional<long> limit) {
    if (!inst.p1.is_strict() || !inst.p2.is_strict()) return false;
    auto pf = perfectize(inst);
    if (!pf) return true;  // answers "no stable matching" at once
    XpOptions opt = xp_options(limit);
    return XpSearch(pf->inst, opt).guess_count_estimate() <= opt.guess_limit;
}

}  // namespace

const std::vector<std::string>& algorithm_names() {
    static const std::vector<std::string> names = {"auto",          "oracle",        "isr-xp",      "ism",     "ismt-xp",
                                                   "ismt-tiebreak", "master-strict", "master-weak", "outliers"};
    return names;
}

std::string route(const Instance& inst, std::optional<long> limit) {
    const Profile& p2 = inst.p2;
    const int oracle_cap = oracle_options(limit).max_agents;
    // Only the oracle keeps forced pairs.
    if (!inst.forced.empty()) {
        if (inst.size() <= oracle_cap) return "oracle";
        throw std::invalid_argument("no applicable algorithm: forced pairs need the oracle, which is limited to " +
                                    std::to_string(oracle_cap) + " agents");
    }
    if (p2.is_strict()) {
        auto ml = detect_master_list(p2);
        if (ml && ml->strict) return "master-strict";
    }
    if (!p2.bipartite() && complete(p2) && detect_master_list(p2)) return "master-weak";
    if (p2.bipartite()) {
        if (p2.is_strict()) return "ism";
        TiesOptions t = ties_options(limit);
        if (static_cast<int>(tied_agents(p2).size()) <= t.max_tied_agents) return "ismt-xp";
        if (summed_ties(p2) <= t.max_summed_tie_size) return "ismt-tiebreak";
    } else if (xp_fits(inst, limit)) {
        return "isr-xp";
    }
    if (inst.size() <= oracle_cap) return "oracle";
    throw std::invalid_argument("no applicable algorithm");
}

SolveResult solve(const Instance& inst, const SolveRequest& req) {
    std::string alg = req.algorithm == "auto" ? route(inst, req.limit) : req.algorithm;
    if (!inst.forced.empty() && alg != "oracle")
        throw std::invalid_argument("forced pairs are only honoured by the oracle");
    SolveResult r;
    r.algorithm = alg;
    if (alg == "oracle") {
        r.outcome = brute_force_incremental(inst, oracle_options(req.limit));
    } else if (alg == "isr-xp") {
        r.outcome = solve_isr_xp(inst, xp_options(req.limit));
    } else if (alg == "ism") {
        r.outcome = solve_ism(inst);
    } else if (alg == "ismt-xp") {
        r.outcome = solve_ismt_xp(inst, ties_options(req.limit));
    } else if (alg == "ismt-tiebreak") {
        r.outcome = solve_ismt_tiebreak(inst, ties_options(req.limit));
    } else if (alg == "master-strict") {
        r.outcome = solve_strict_master_list(inst);
    } else if (alg == "master-weak") {
        r.outcome = solve_weak_master_list_complete(inst);
    } else if (alg == "outliers") {
        OutlierOptions o;
        if (req.limit) o.max_outliers = static_cast<int>(*req.limit);
        r.outcome = solve_isr_outliers(inst, req.outliers, o);
    } else {
        throw std::invalid_argument("unknown algorithm '" + alg + "'");
    }
    return r;
}

}  // namespace incmatch
