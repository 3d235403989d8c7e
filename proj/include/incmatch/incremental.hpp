#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "incmatch/model.hpp"

namespace incmatch {

// Minimum-diff stable matching for strict two-sided P2 (weight 1 per M1 pair).
Outcome solve_ism(const Instance& inst);

// Instance with a perfect initial matching and a perfect stable matching in
// P2, plus what is needed to map answers back.
struct Perfectized {
    Instance inst;
    int original_agents = 0;
    int pendants = 0;           // agents unmatched in P2's stable matchings
    int pendants_charged = 0;   // |A2 \ A1|, added to k
    int dummies = 0;            // x, agents still unmatched in M1 after pendants
    std::vector<AgentId> pendant_owner;  // owner of pendant original_agents + i
    int budget_shift() const { return pendants_charged + 3 * dummies / 2; }
    // Drop agents added by the transform.
    Matching restrict(const Matching& m) const;
    // Lift a stable matching of the original P2: pendants to their owners,
    // dummies to each other.
    Matching extend(const Matching& m) const;
};

// Empty when P2 has no stable matching.
std::optional<Perfectized> perfectize(const Instance& inst);

// One guess of the search. Agents and pairs refer to the perfectized instance.
struct Guess {
    std::vector<Pair> assigned;  // (agent of B, guessed partner)
    std::vector<Pair> h;         // pairs of M2 both of whose endpoints prefer M1
    std::vector<Pair> f;         // pairs of M1 both of whose endpoints prefer M2
    // For a in X with M1(a) outside X: true when M1(a) prefers its new
    // partner to a.
    std::vector<std::pair<AgentId, bool>> orientation;
};

struct GuessState {
    Matching m;
    std::vector<AgentId> bc;  // kUnmatched plays the role of "unset"
    std::vector<AgentId> wc;
    std::vector<char> in_x;
    std::vector<Pair> f_set;
    std::vector<Pair> h_set;
};

struct XpOptions {
    double guess_limit = 5e7;  // cap on the pruned guess count
#ifdef NDEBUG
    bool check_invariants = false;
#else
    bool check_invariants = true;
#endif
};

// Shared read-only data for all guesses over one perfectized instance.
class XpSearch {
  public:
    XpSearch(const Instance& perfectized, XpOptions opt = {});

    const Instance& instance() const { return inst_; }
    int distance() const { return d_; }
    const std::vector<AgentId>& changed_closure() const { return b_; }  // the set B
    bool stable_pair(AgentId a, AgentId b) const { return stable_[idx(a, b)]; }
    // 2^{4d} n^{5d}, the worst-case number of guesses.
    double theoretical_bound() const;

    // Empty optional means the guess is rejected.
    std::optional<GuessState> initialize(const Guess& g) const;
    bool propagate(GuessState& s, AgentId a) const;
    // Stable matching of P2 reached from the guess; the budget is not applied.
    std::optional<Matching> run_guess(const Guess& g) const;
    // Same, rejecting results with |M △ M1| > k.
    std::optional<Matching> run_guess_within(const Guess& g, int k) const;

    // Calls visit for every guess in the canonical order until it returns false.
    // Returns the number of guesses visited.
    long for_each_guess(const std::function<bool(const Guess&)>& visit) const;
    // Upper estimate of the pruned guess count.
    double guess_count_estimate() const;

    // Best matching over all guesses with its diff (perfectized instance).
    // Stops early once a diff of at most good_enough is found.
    std::optional<Solution> solve(int good_enough = 0) const;

  private:
    size_t idx(AgentId a, AgentId b) const { return static_cast<size_t>(a) * n_ + b; }
    bool better(AgentId c, AgentId x, AgentId y) const;  // x ≻_c y in P2
    void check_state(const GuessState& s) const;
    void set_bc(GuessState& s, AgentId c, AgentId v) const;
    void set_wc(GuessState& s, AgentId c, AgentId v) const;

    Instance inst_;
    XpOptions opt_;
    int n_ = 0;
    int d_ = 0;
    std::vector<AgentId> b_;
    std::vector<char> stable_;
    std::vector<std::vector<AgentId>> stable_partners_;
};

// Full pipeline: perfectize, search all guesses, translate back.
Outcome solve_isr_xp(const Instance& inst, const XpOptions& opt = {});

}  // namespace incmatch
