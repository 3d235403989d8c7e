#include "incmatch/structured.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>

#include "incmatch/oracle.hpp"

namespace incmatch {

std::vector<AgentId> MasterList::order() const {
    std::vector<AgentId> out;
    for (const auto& t : tiers) out.insert(out.end(), t.begin(), t.end());
    return out;
}

namespace {

struct UnionFind {
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    std::vector<int> parent;
};

std::vector<int> class_index(const MasterList& ml, int n) {
    std::vector<int> cls(n, -1);
    for (size_t i = 0; i < ml.tiers.size(); ++i)
        for (AgentId a : ml.tiers[i]) cls.at(a) = static_cast<int>(i);
    return cls;
}

bool complete(const Profile& p) {
    for (AgentId a = 0; a < p.size(); ++a)
        if (p.list_length(a) != p.size() - 1) return false;
    return true;
}

}  // namespace

std::optional<MasterList> detect_master_list(const Profile& p, const std::vector<AgentId>& agents) {
    const int n = p.size();
    std::vector<AgentId> who = agents;
    if (who.empty()) {
        who.resize(n);
        std::iota(who.begin(), who.end(), 0);
    }
    UnionFind uf(n);
    for (AgentId a : who)
        for (const auto& tier : p.tiers(a))
            for (AgentId b : tier) uf.unite(tier.front(), b);
    // Strict edges between consecutive tiers suffice for transitivity.
    std::vector<std::set<int>> succ(n);
    for (AgentId a : who) {
        const auto& t = p.tiers(a);
        for (size_t i = 0; i + 1 < t.size(); ++i)
            for (AgentId x : t[i])
                for (AgentId y : t[i + 1]) {
                    int cx = uf.find(x), cy = uf.find(y);
                    if (cx == cy) return std::nullopt;
                    succ[cx].insert(cy);
                }
    }
    std::vector<int> indeg(n, 0);
    for (int c = 0; c < n; ++c)
        for (int d : succ[c]) ++indeg[d];
    // Roots are the smallest ids of their classes, so a min-heap on the root
    // orders free classes by smallest member.
    std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
    for (int c = 0; c < n; ++c)
        if (uf.find(c) == c && indeg[c] == 0) ready.push(c);
    std::vector<std::vector<AgentId>> members(n);
    for (AgentId a = 0; a < n; ++a) members[uf.find(a)].push_back(a);
    MasterList ml;
    while (!ready.empty()) {
        int c = ready.top();
        ready.pop();
        ml.tiers.push_back(members[c]);
        for (int d : succ[c])
            if (--indeg[d] == 0) ready.push(d);
    }
    if (static_cast<int>(ml.order().size()) != n) return std::nullopt;  // cycle
    ml.strict = std::all_of(ml.tiers.begin(), ml.tiers.end(), [](const auto& t) { return t.size() == 1; });
    for (AgentId a : who)
        if (!derived_from(p, a, ml)) return std::nullopt;
    return ml;
}

bool derived_from(const Profile& p, AgentId a, const MasterList& ml) {
    auto cls = class_index(ml, p.size());
    int last = -1;
    for (const auto& tier : p.tiers(a)) {
        int c = cls[tier.front()];
        if (c <= last) return false;
        for (AgentId b : tier)
            if (cls[b] != c) return false;
        // The tier must hold every accepted member of the class.
        for (AgentId b : ml.tiers[c])
            if (b != a && p.accepts(a, b) && std::find(tier.begin(), tier.end(), b) == tier.end()) return false;
        last = c;
    }
    return true;
}

std::vector<AgentId> followers_of(const Profile& p, const std::vector<AgentId>& order) {
    std::vector<AgentId> out;
    for (AgentId a = 0; a < p.size(); ++a) {
        if (p.list_length(a) != p.size() - 1 || p.has_ties(a)) continue;
        std::vector<AgentId> expect;
        for (AgentId b : order)
            if (b != a) expect.push_back(b);
        if (p.flat_list(a) == expect) out.push_back(a);
    }
    return out;
}

Matching strict_master_list_matching(const Profile& p, const MasterList& ml) {
    Matching m(p.size());
    for (AgentId a : ml.order()) {
        if (m.matched(a)) continue;
        for (AgentId b : p.flat_list(a))
            if (!m.matched(b)) {
                m.add(a, b);
                break;
            }
    }
    return m;
}

Outcome solve_strict_master_list(const Instance& inst) {
    const Profile& p2 = inst.p2;
    if (!p2.is_strict()) throw std::invalid_argument("master-strict needs strict preferences in P2");
    auto ml = detect_master_list(p2);
    if (!ml || !ml->strict) throw std::invalid_argument("P2 does not derive from one strict master list");
    Matching m = strict_master_list_matching(p2, *ml);
    int d = diff_count(inst.m1, m);
    return Solution{std::move(m), d};
}

Outcome solve_weak_master_list_complete(const Instance& inst) {
    const Profile& p2 = inst.p2;
    const Matching& m1 = inst.m1;
    const int n = p2.size();
    if (p2.bipartite()) throw std::invalid_argument("master-weak handles roommates instances only");
    if (!complete(p2)) throw std::invalid_argument("master-weak needs complete preferences in P2");
    auto ml = detect_master_list(p2);
    if (!ml) throw std::invalid_argument("P2 does not derive from one weak master list");
    const auto cls = class_index(*ml, n);
    const int q = static_cast<int>(ml->tiers.size());

    Matching m2(n);
    // Keep M1 pairs inside `group`, then pair the rest by ascending id. With
    // an odd rest, the last one stays single and is returned.
    auto settle = [&](std::vector<AgentId> group, AgentId must_match) -> AgentId {
        std::sort(group.begin(), group.end());
        std::vector<char> in(n, 0);
        for (AgentId a : group) in[a] = 1;
        std::vector<AgentId> rest;
        for (AgentId a : group) {
            AgentId b = m1.partner(a);
            if (b != kUnmatched && in[b]) {
                if (a < b) m2.add(a, b);
            } else {
                rest.push_back(a);
            }
        }
        if (rest.size() % 2 == 1 && must_match != kUnmatched) {
            auto it = std::find(rest.begin(), rest.end(), must_match);
            if (it != rest.end()) {
                rest.erase(it);
                m2.add(must_match, rest.front());
                rest.erase(rest.begin());
            }
        }
        for (size_t i = 0; i + 1 < rest.size(); i += 2) m2.add(rest[i], rest[i + 1]);
        return rest.size() % 2 ? rest.back() : kUnmatched;
    };

    AgentId carry = kUnmatched;
    for (int i = 0; i < q; ++i) {
        const auto& cur = ml->tiers[i];
        std::vector<AgentId> group = cur;
        if (carry != kUnmatched) group.push_back(carry);
        if (group.size() % 2 == 0) {
            settle(group, kUnmatched);
            carry = kUnmatched;
            continue;
        }
        AgentId straddle = kUnmatched;  // b' with its M1 partner one class down
        for (AgentId b : cur) {
            AgentId pb = m1.partner(b);
            if (pb != kUnmatched && cls[pb] == i + 1) {
                straddle = b;
                break;
            }
        }
        if (straddle != kUnmatched) {
            group.erase(std::find(group.begin(), group.end(), straddle));
            settle(group, kUnmatched);
            carry = straddle;
            continue;
        }
        bool perfect_inside = std::all_of(cur.begin(), cur.end(), [&](AgentId b) {
            AgentId pb = m1.partner(b);
            return pb != kUnmatched && cls[pb] == i;
        });
        if (perfect_inside && carry != kUnmatched) {
            Pair least{n, n};
            for (AgentId b : cur) least = std::min(least, make_pair_sorted(b, m1.partner(b)));
            for (AgentId b : cur)
                if (b < m1.partner(b) && b != least.first) m2.add(b, m1.partner(b));
            m2.add(carry, least.first);
            carry = least.second;
            continue;
        }
        carry = settle(group, carry);
    }
    int d = diff_count(m1, m2);
    return Solution{std::move(m2), d};
}

bool respects_class_boundaries(const MasterList& ml, const Matching& m) {
    const int n = m.size();
    auto cls = class_index(ml, n);
    const int q = static_cast<int>(ml.tiers.size());
    std::vector<int> cross(q, 0);
    for (auto [a, b] : m.pairs()) {
        int lo = std::min(cls[a], cls[b]), hi = std::max(cls[a], cls[b]);
        if (hi - lo > 1) return false;
        if (hi == lo + 1) ++cross[lo];
    }
    int above = 0, single = 0;
    for (int i = 0; i < q; ++i) {
        above += static_cast<int>(ml.tiers[i].size());
        int expect = above % 2;
        if (i == q - 1) {
            for (AgentId a : ml.tiers[i]) single += !m.matched(a);
            if (single != expect) return false;
        } else if (cross[i] != expect) {
            return false;
        }
    }
    return m.pair_count() * 2 + single == n;
}

// ---------------------------------------------------------------------------
// Few outliers

std::vector<AgentId> follower_master_order(const Profile& p, const std::vector<AgentId>& outliers) {
    const int n = p.size();
    std::vector<char> is_out(n, 0);
    for (AgentId s : outliers) is_out.at(s) = 1;
    std::vector<AgentId> followers;
    for (AgentId a = 0; a < n; ++a)
        if (!is_out[a]) followers.push_back(a);
    std::vector<AgentId> order;
    if (followers.empty()) {
        order.resize(n);
        std::iota(order.begin(), order.end(), 0);
        return order;
    }
    const AgentId first = followers[0];
    const auto base = p.flat_list(first);
    // Any slot for the first follower that every follower agrees with; two
    // adjacent followers can be ordered only by a third.
    for (size_t pos = 0; pos <= base.size(); ++pos) {
        order = base;
        order.insert(order.begin() + static_cast<long>(pos), first);
        // An outlier may happen to follow as well; only the followers must.
        auto fol = followers_of(p, order);
        if (std::includes(fol.begin(), fol.end(), followers.begin(), followers.end())) return order;
    }
    throw std::invalid_argument("followers do not share one complete strict master list");
}

namespace {

// Greedy pass along the master list for one guess of outlier pairs.
Matching outlier_pass(const Profile& p, const std::vector<AgentId>& order, const std::vector<char>& is_out,
                      const std::vector<Pair>& guess) {
    const int n = p.size();
    Matching m(n);
    for (auto [a, b] : guess) m.add(a, b);
    std::vector<char> dead(n, 0);  // left single for good
    auto open = [&](const Matching& mm, AgentId a) { return !mm.matched(a) && !dead[a]; };
    auto favourite_follower = [&](const Matching& mm, AgentId a) -> AgentId {
        for (AgentId b : p.flat_list(a))
            if (!is_out[b] && open(mm, b)) return b;
        return kUnmatched;
    };
    for (;;) {
        int left = 0;
        size_t first = order.size();
        for (size_t i = 0; i < order.size(); ++i)
            if (open(m, order[i])) {
                ++left;
                if (first == order.size()) first = i;
            }
        if (left < 2) break;
        const AgentId a = order[first];
        if (is_out[a]) {
            AgentId b = favourite_follower(m, a);
            if (b == kUnmatched)
                dead[a] = 1;
            else
                m.add(a, b);
            continue;
        }
        AgentId next = kUnmatched;
        std::vector<AgentId> between;
        for (size_t i = first + 1; i < order.size(); ++i) {
            AgentId c = order[i];
            if (!open(m, c)) continue;
            if (!is_out[c]) {
                next = c;
                break;
            }
            between.push_back(c);
        }
        Matching temp = m;
        for (AgentId b : between) {
            if (temp.matched(b)) continue;
            AgentId best = favourite_follower(temp, b);
            if (best != kUnmatched) temp.add(b, best);
        }
        if (temp.matched(a))
            m = std::move(temp);
        else if (next != kUnmatched)
            m.add(a, next);
        else
            dead[a] = 1;
    }
    return m;
}

}  // namespace

void for_each_outlier_guess(const Profile& p, const std::vector<AgentId>& outliers, const OutlierVisitor& visit,
                            const OutlierOptions& opt) {
    const int n = p.size();
    if (p.bipartite()) throw std::invalid_argument("outlier enumeration handles roommates instances only");
    if (!p.is_strict()) throw std::invalid_argument("outlier enumeration needs strict preferences");
    if (!complete(p)) throw std::invalid_argument("outlier enumeration needs complete preferences for every agent");
    std::vector<AgentId> out = outliers;
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (static_cast<int>(out.size()) > opt.max_outliers)
        throw ResourceLimit("outlier enumeration limited to " + std::to_string(opt.max_outliers) + " outliers, got " +
                            std::to_string(out.size()));
    const auto order = follower_master_order(p, out);
    std::vector<char> is_out(n, 0);
    for (AgentId s : out) is_out[s] = 1;

    const int so = static_cast<int>(out.size());
    for (unsigned mask = 0; mask < (1u << so); ++mask) {
        if (__builtin_popcount(mask) % 2) continue;
        std::vector<AgentId> chosen;
        for (int i = 0; i < so; ++i)
            if (mask >> i & 1u) chosen.push_back(out[i]);
        std::vector<Pair> guess;
        std::vector<char> used(chosen.size(), 0);
        std::function<void()> pairings = [&]() {
            size_t i = 0;
            while (i < chosen.size() && used[i]) ++i;
            if (i == chosen.size()) {
                Matching m = outlier_pass(p, order, is_out, guess);
                std::optional<Matching> result;
                if (is_stable(p, m)) result = std::move(m);
                visit(guess, result);
                return;
            }
            used[i] = 1;
            for (size_t j = i + 1; j < chosen.size(); ++j) {
                if (used[j]) continue;
                used[j] = 1;
                guess.emplace_back(chosen[i], chosen[j]);
                pairings();
                guess.pop_back();
                used[j] = 0;
            }
            used[i] = 0;
        };
        pairings();
    }
}

std::vector<Matching> enumerate_with_outliers(const Profile& p, const std::vector<AgentId>& outliers,
                                              const OutlierOptions& opt) {
    std::vector<Matching> all;
    for_each_outlier_guess(
        p, outliers,
        [&](const std::vector<Pair>&, const std::optional<Matching>& r) {
            if (r) all.push_back(*r);
        },
        opt);
    std::sort(all.begin(), all.end());
    return all;
}

Outcome solve_isr_outliers(const Instance& inst, const std::vector<AgentId>& outliers, const OutlierOptions& opt) {
    return best_by_diff(enumerate_with_outliers(inst.p2, outliers, opt), inst.m1);
}

}  // namespace incmatch
