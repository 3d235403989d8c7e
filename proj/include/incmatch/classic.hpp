#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "incmatch/model.hpp"

namespace incmatch {

// Same lists with every tie broken by ascending id.
Profile break_ties_by_id(const Profile& p);

// Deferred acceptance with side-0 agents proposing; ties broken by ascending id.
Matching find_stable_sm(const Profile& p);

// Irving's algorithm for strict (possibly incomplete) lists. Empty when no
// stable matching exists.
std::optional<Matching> find_stable_sr(const Profile& p);

std::vector<AgentId> matched_set(const Profile& p, const Matching& m);

// Pairs contained in at least one stable matching. Empty optional when the
// profile admits no stable matching.
std::optional<std::vector<Pair>> stable_pairs(const Profile& p);

// True when some stable matching contains {a,b}.
bool is_stable_pair(const Profile& p, AgentId a, AgentId b);

using PairWeight = std::function<long(AgentId, AgentId)>;

// A stable matching of a strict two-sided profile with maximum total pair
// weight. Works on the rotation poset: walk one maximal chain of rotations
// from the side-0-optimal matching, recover precedence, then take a maximum
// weight closed set through a min cut.
Matching max_weight_stable_sm(const Profile& p, const PairWeight& weight);

}  // namespace incmatch
