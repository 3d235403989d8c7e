#pragma once

#include <functional>

#include "incmatch/model.hpp"

namespace incmatch {

struct TiesOptions {
    int max_tied_agents = 8;       // solve_ismt_xp
    int max_summed_tie_size = 12;  // solve_ismt_tiebreak
};

// Agents whose P2 list has at least one tie, ascending.
std::vector<AgentId> tied_agents(const Profile& p);

// Guess partners for the tied agents, solve the strict rest by max-weight
// stable matching, keep guesses whose union is weakly stable in P2.
Outcome solve_ismt_xp(const Instance& inst, const TiesOptions& opt = {});

// Calls visit with every strict profile obtained by ordering each tie.
// Agents go in ascending id, the first tie varies slowest, and each tie runs
// through its permutations in lexicographic order.
void for_each_linearization(const Profile& p, const std::function<void(const Profile&)>& visit,
                            const TiesOptions& opt = {});

// solve_ism on every linearization of P2; minimum diff.
Outcome solve_ismt_tiebreak(const Instance& inst, const TiesOptions& opt = {});

}  // namespace incmatch
