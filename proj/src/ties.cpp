#include "incmatch/ties.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "incmatch/classic.hpp"
#include "incmatch/incremental.hpp"

namespace incmatch {

namespace {

void require_bipartite(const Profile& p, const char* who) {
    if (!p.bipartite()) throw std::invalid_argument(std::string(who) + " needs a bipartite instance");
}

// Smaller diff wins, then the lexicographically smaller pair list.
void keep_better(Outcome& best, Matching m, const Matching& m1) {
    int d = diff_count(m1, m);
    if (!best || d < best->diff || (d == best->diff && m < best->matching)) best = Solution{std::move(m), d};
}

}  // namespace

std::vector<AgentId> tied_agents(const Profile& p) {
    std::vector<AgentId> out;
    for (AgentId a = 0; a < p.size(); ++a)
        if (p.has_ties(a)) out.push_back(a);
    return out;
}

Outcome solve_ismt_xp(const Instance& inst, const TiesOptions& opt) {
    const Profile& p2 = inst.p2;
    const Matching& m1 = inst.m1;
    require_bipartite(p2, "ismt-xp");
    const int n = p2.size();
    const auto tied = tied_agents(p2);
    if (static_cast<int>(tied.size()) > opt.max_tied_agents)
        throw ResourceLimit("ismt-xp limited to " + std::to_string(opt.max_tied_agents) + " tied agents, got " +
                            std::to_string(tied.size()));

    int side0 = 0;
    for (AgentId a = 0; a < n; ++a) side0 += p2.side(a) == 0;
    const bool uneven = 2 * side0 != n;

    // Partner candidates per tied agent; Unmatched only if it can occur in a
    // stable matching at all (incomplete list or unequal sides).
    std::vector<std::vector<AgentId>> domain;
    for (AgentId t : tied) {
        std::vector<AgentId> d;
        for (AgentId b : p2.flat_list(t))
            if (p2.accepts(b, t)) d.push_back(b);
        std::sort(d.begin(), d.end());
        int opposite = p2.side(t) == 0 ? n - side0 : side0;
        if (uneven || p2.list_length(t) < opposite) d.push_back(kUnmatched);
        domain.push_back(std::move(d));
    }

    Outcome best;
    Matching guess(n);
    auto finish = [&]() {
        std::vector<char> fixed(n, 0);
        for (AgentId t : tied) {
            fixed[t] = 1;
            if (guess.matched(t)) fixed[guess.partner(t)] = 1;
        }
        auto better = [&](AgentId who, AgentId x, AgentId y) { return p2.rank_raw(who, x) < p2.rank_raw(who, y); };
        // kept[b][b'] clears when b' leaves b's list.
        std::vector<std::vector<char>> kept(n, std::vector<char>(n, 0));
        for (AgentId b = 0; b < n; ++b)
            if (!fixed[b])
                for (AgentId c : p2.flat_list(b)) kept[b][c] = !fixed[c];
        for (AgentId a = 0; a < n; ++a) {
            if (!fixed[a]) continue;
            for (AgentId b : p2.flat_list(a)) {
                if (fixed[b] || !better(a, b, guess.partner(a))) continue;
                // b has to do better than a.
                for (AgentId c : p2.flat_list(b))
                    if (!fixed[c] && better(b, a, c)) kept[b][c] = kept[c][b] = 0;
            }
        }
        Profile reduced(n);
        for (AgentId b = 0; b < n; ++b) {
            Tiers t;
            if (!fixed[b])
                for (AgentId c : p2.flat_list(b))
                    if (kept[b][c] && kept[c][b]) t.push_back({c});
            reduced.set_list(b, std::move(t));
        }
        reduced.set_bipartition(p2.sides());
        Matching rest = max_weight_stable_sm(reduced, [&](AgentId x, AgentId y) -> long { return m1.contains(x, y); });
        Matching all = guess;
        for (auto [x, y] : rest.pairs()) all.add(x, y);
        if (is_stable(p2, all)) keep_better(best, std::move(all), m1);
    };
    std::function<void(size_t)> rec = [&](size_t i) {
        if (i == tied.size()) {
            finish();
            return;
        }
        AgentId t = tied[i];
        if (guess.matched(t)) {
            // Fixed earlier as the guess of another tied agent.
            rec(i + 1);
            return;
        }
        for (AgentId b : domain[i]) {
            if (b == kUnmatched) {
                rec(i + 1);
                continue;
            }
            if (guess.matched(b)) continue;
            // A tied partner must have been guessed already (it comes later
            // only if b > t, in which case its own turn is skipped).
            if (b < t && p2.has_ties(b)) continue;
            guess.add(t, b);
            rec(i + 1);
            guess.remove(t);
        }
    };
    rec(0);
    return best;
}

void for_each_linearization(const Profile& p, const std::function<void(const Profile&)>& visit,
                            const TiesOptions& opt) {
    int summed = 0;
    for (AgentId a = 0; a < p.size(); ++a) summed += p.summed_tie_size(a);
    if (summed > opt.max_summed_tie_size)
        throw ResourceLimit("tie breaking limited to summed tie size " + std::to_string(opt.max_summed_tie_size) +
                            ", got " + std::to_string(summed));
    struct Slot {
        AgentId agent;
        size_t tier;
    };
    std::vector<Slot> slots;
    std::vector<Tiers> lists;
    for (AgentId a = 0; a < p.size(); ++a) {
        lists.push_back(p.tiers(a));
        for (size_t i = 0; i < lists.back().size(); ++i)
            if (lists.back()[i].size() > 1) slots.push_back({a, i});
    }
    std::function<void(size_t)> rec = [&](size_t s) {
        if (s == slots.size()) {
            Profile q(p.size());
            for (AgentId a = 0; a < p.size(); ++a) {
                Tiers t;
                for (const auto& tier : lists[a])
                    for (AgentId b : tier) t.push_back({b});
                q.set_list(a, std::move(t));
            }
            if (p.bipartite()) q.set_bipartition(p.sides());
            visit(q);
            return;
        }
        auto& tier = lists[slots[s].agent][slots[s].tier];
        std::sort(tier.begin(), tier.end());
        do rec(s + 1);
        while (std::next_permutation(tier.begin(), tier.end()));
    };
    rec(0);
}

Outcome solve_ismt_tiebreak(const Instance& inst, const TiesOptions& opt) {
    require_bipartite(inst.p2, "ismt-tiebreak");
    Outcome best;
    Instance strict = inst;
    for_each_linearization(
        inst.p2,
        [&](const Profile& q) {
            strict.p2 = q;
            auto r = solve_ism(strict);
            if (!is_stable(inst.p2, r->matching))
                throw std::logic_error("linearized stable matching is not weakly stable in P2");
            keep_better(best, std::move(r->matching), inst.m1);
        },
        opt);
    return best;
}

}  // namespace incmatch
