#pragma once

#include <vector>

#include "incmatch/model.hpp"

namespace incmatch {

struct OracleOptions {
    int max_agents = 12;
};

// Every weakly stable matching, sorted by pair list.
std::vector<Matching> enumerate_stable(const Profile& p, const OracleOptions& opt = {});

// Minimum |M1 △ M2| over stable matchings of P2; lexicographically least
// pair set among optimal ones. Forced pairs, when given, must be kept.
Outcome brute_force_incremental(const Instance& inst, const OracleOptions& opt = {});

// Smallest diff to m1 over a given list; ties go to the earlier entry.
Outcome best_by_diff(const std::vector<Matching>& candidates, const Matching& m1);

}  // namespace incmatch
