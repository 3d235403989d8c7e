#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace incmatch {

using AgentId = int;
inline constexpr AgentId kUnmatched = -1;

using Pair = std::pair<AgentId, AgentId>;

// Normalized unordered pair (smaller id first).
inline Pair make_pair_sorted(AgentId a, AgentId b) { return a < b ? Pair{a, b} : Pair{b, a}; }

// Thrown when an enumeration would exceed a configured size bound.
class ResourceLimit : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

using Tiers = std::vector<std::vector<AgentId>>;

// Weak orders over accepted agents for every agent, optionally two-sided.
class Profile {
  public:
    Profile() = default;
    explicit Profile(int n);

    int size() const { return n_; }

    // Tiers are stored with each tier sorted by id.
    void set_list(AgentId a, Tiers tiers);
    const Tiers& tiers(AgentId a) const { return lists_.at(check(a)); }
    // Accepted agents in preference order; ties listed by ascending id.
    std::vector<AgentId> flat_list(AgentId a) const;

    bool accepts(AgentId a, AgentId b) const;
    // Tier index of b in a's list; Unmatched ranks after every tier.
    // Throws for agents a does not accept.
    int rank(AgentId a, AgentId b) const;
    // Unchecked variant: kNotAccepted for unaccepted agents.
    int rank_raw(AgentId a, AgentId b) const {
        return b == kUnmatched ? unmatched_rank_[a] : ranks_[static_cast<size_t>(a) * n_ + b];
    }
    static constexpr int kNotAccepted = 1 << 29;

    bool weakly_prefers(AgentId a, AgentId x, AgentId y) const { return rank(a, x) <= rank(a, y); }
    bool strictly_prefers(AgentId a, AgentId x, AgentId y) const { return rank(a, x) < rank(a, y); }

    bool is_strict() const;
    bool has_ties(AgentId a) const;
    int tie_count(AgentId a) const;
    int summed_tie_size(AgentId a) const;
    int list_length(AgentId a) const { return static_cast<int>(accept_count_[check(a)]); }

    // side(a) is 0 or 1 when a bipartition is present.
    bool bipartite() const { return !side_.empty(); }
    void set_bipartition(std::vector<int> side);
    void clear_bipartition() { side_.clear(); }
    int side(AgentId a) const { return side_.at(check(a)); }
    const std::vector<int>& sides() const { return side_; }

    bool operator==(const Profile& o) const { return n_ == o.n_ && lists_ == o.lists_ && side_ == o.side_; }

  private:
    AgentId check(AgentId a) const;

    int n_ = 0;
    std::vector<Tiers> lists_;
    std::vector<int> ranks_;
    std::vector<int> unmatched_rank_;
    std::vector<int> accept_count_;
    std::vector<int> side_;
};

class Matching {
  public:
    Matching() = default;
    explicit Matching(int n) : partner_(n, kUnmatched) {}
    Matching(int n, const std::vector<Pair>& pairs);

    int size() const { return static_cast<int>(partner_.size()); }
    AgentId partner(AgentId a) const { return partner_.at(a); }
    bool matched(AgentId a) const { return partner_.at(a) != kUnmatched; }
    bool contains(AgentId a, AgentId b) const { return a != kUnmatched && partner_.at(a) == b && b != kUnmatched; }

    // Both endpoints must be unmatched.
    void add(AgentId a, AgentId b);
    void remove(AgentId a);
    // Drop every pair touching a or b, then add {a,b}.
    void update_to_contain(AgentId a, AgentId b);

    int pair_count() const;
    std::vector<Pair> pairs() const;  // sorted, each pair (lo, hi)

    bool operator==(const Matching& o) const { return partner_ == o.partner_; }
    bool operator<(const Matching& o) const { return pairs() < o.pairs(); }

  private:
    std::vector<AgentId> partner_;
};

struct Instance {
    std::vector<std::string> names;
    Profile p1;
    Profile p2;
    Matching m1;
    int k = 0;
    std::vector<Pair> forced;

    int size() const { return static_cast<int>(names.size()); }
    bool operator==(const Instance& o) const {
        return names == o.names && p1 == o.p1 && p2 == o.p2 && m1 == o.m1 && k == o.k && forced == o.forced;
    }
};

struct Solution {
    Matching matching;
    int diff = 0;
};
// Empty when the target profile has no stable matching.
using Outcome = std::optional<Solution>;

bool is_blocking(const Profile& p, const Matching& m, AgentId a, AgentId b);
bool is_stable(const Profile& p, const Matching& m);
std::vector<Pair> blocking_pairs(const Profile& p, const Matching& m);

struct SymmetricDifference {
    std::vector<Pair> pairs;
    int count = 0;
};
SymmetricDifference symmetric_difference(const Matching& a, const Matching& b);
int diff_count(const Matching& a, const Matching& b);

// Empty optional means infinite (some acceptance set differs).
std::optional<long> agent_swap_distance(const Profile& p1, const Profile& p2, AgentId a);
std::optional<long> swap_distance(const Profile& p1, const Profile& p2);
// Agents whose lists differ between the two profiles.
std::vector<AgentId> changed_agents(const Profile& p1, const Profile& p2);

struct Violation {
    std::string message;
    std::string location;
    bool fatal = true;
};
std::vector<Violation> validate_instance(const Instance& inst);
bool has_fatal(const std::vector<Violation>& v);

// True when the matching's pairs are all mutually accepted in p.
bool valid_in(const Profile& p, const Matching& m);

}  // namespace incmatch
