#include "incmatch/oracle.hpp"

#include <algorithm>

namespace incmatch {

namespace {

constexpr AgentId kUndecided = -2;

class Search {
  public:
    explicit Search(const Profile& p) : p_(p), n_(p.size()), state_(n_, kUndecided), mutual_(n_) {
        for (AgentId a = 0; a < n_; ++a)
            for (AgentId b : p.flat_list(a))
                if (p.accepts(b, a)) mutual_[a].push_back(b);
    }

    std::vector<Matching> run() {
        recurse(0);
        std::sort(out_.begin(), out_.end());
        return out_;
    }

  private:
    // A pair of two decided agents blocks.
    bool blocks_with_decided(AgentId a) const {
        int ra = p_.rank_raw(a, state_[a]);
        for (AgentId b : mutual_[a]) {
            if (state_[b] == kUndecided || state_[a] == b) continue;
            if (p_.rank_raw(a, b) < ra && p_.rank_raw(b, a) < p_.rank_raw(b, state_[b])) return true;
        }
        return false;
    }

    void recurse(AgentId from) {
        AgentId a = from;
        while (a < n_ && state_[a] != kUndecided) ++a;
        if (a == n_) {
            Matching m(n_);
            for (AgentId x = 0; x < n_; ++x)
                if (state_[x] > x) m.add(x, state_[x]);
            out_.push_back(std::move(m));
            return;
        }
        for (AgentId b : mutual_[a]) {
            if (state_[b] != kUndecided) continue;
            state_[a] = b;
            state_[b] = a;
            if (!blocks_with_decided(a) && !blocks_with_decided(b)) recurse(a + 1);
            state_[a] = kUndecided;
            state_[b] = kUndecided;
        }
        state_[a] = kUnmatched;
        if (!blocks_with_decided(a)) recurse(a + 1);
        state_[a] = kUndecided;
    }

    const Profile& p_;
    int n_;
    std::vector<AgentId> state_;
    std::vector<std::vector<AgentId>> mutual_;
    std::vector<Matching> out_;
};

}  // namespace

std::vector<Matching> enumerate_stable(const Profile& p, const OracleOptions& opt) {
    if (p.size() > opt.max_agents)
        throw ResourceLimit("oracle enumeration limited to " + std::to_string(opt.max_agents) + " agents, instance has " +
                            std::to_string(p.size()));
    return Search(p).run();
}

Outcome best_by_diff(const std::vector<Matching>& candidates, const Matching& m1) {
    Outcome best;
    for (const auto& m : candidates) {
        int d = diff_count(m1, m);
        if (!best || d < best->diff || (d == best->diff && m < best->matching)) best = Solution{m, d};
    }
    return best;
}

Outcome brute_force_incremental(const Instance& inst, const OracleOptions& opt) {
    auto all = enumerate_stable(inst.p2, opt);
    if (!inst.forced.empty())
        std::erase_if(all, [&](const Matching& m) {
            return std::any_of(inst.forced.begin(), inst.forced.end(), [&](Pair e) { return !m.contains(e.first, e.second); });
        });
    return best_by_diff(all, inst.m1);
}

}  // namespace incmatch
