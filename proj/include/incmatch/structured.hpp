#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "incmatch/model.hpp"

namespace incmatch {

// Weak order over agents; tiers are indifference classes, best first.
struct MasterList {
    std::vector<std::vector<AgentId>> tiers;
    bool strict = false;
    std::vector<AgentId> order() const;  // flattened
};

// A master list from which every listed agent's preferences derive
// (all agents when `agents` is empty). Classes are the finest possible;
// classes nobody compares are ordered by smallest id.
std::optional<MasterList> detect_master_list(const Profile& p, const std::vector<AgentId>& agents = {});

// a's list is the master list restricted to the agents a accepts.
bool derived_from(const Profile& p, AgentId a, const MasterList& ml);

// Agents with complete lists derived from the given strict order.
std::vector<AgentId> followers_of(const Profile& p, const std::vector<AgentId>& order);

// Unique stable matching when P2 derives from a strict master list.
Matching strict_master_list_matching(const Profile& p, const MasterList& ml);
Outcome solve_strict_master_list(const Instance& inst);

// Complete non-bipartite P2 derived from a weak master list.
Outcome solve_weak_master_list_complete(const Instance& inst);

// Pairs stay inside a class or cross to the next one, and a class boundary
// is crossed exactly when the agents above it are odd in number.
bool respects_class_boundaries(const MasterList& ml, const Matching& m);

struct OutlierOptions {
    int max_outliers = 10;
};

// Strict master list for the followers: the first follower's list with that
// follower inserted at the earliest slot all followers agree with.
std::vector<AgentId> follower_master_order(const Profile& p, const std::vector<AgentId>& outliers);

// One guess: pairs among outliers (S*, M*). Result is the only stable
// matching respecting it, if any.
using OutlierVisitor = std::function<void(const std::vector<Pair>& guess, const std::optional<Matching>& result)>;
void for_each_outlier_guess(const Profile& p, const std::vector<AgentId>& outliers, const OutlierVisitor& visit,
                            const OutlierOptions& opt = {});

// Every stable matching, sorted.
std::vector<Matching> enumerate_with_outliers(const Profile& p, const std::vector<AgentId>& outliers,
                                              const OutlierOptions& opt = {});
Outcome solve_isr_outliers(const Instance& inst, const std::vector<AgentId>& outliers, const OutlierOptions& opt = {});

}  // namespace incmatch
