// Random instance generators and small helpers shared by the test binaries.
#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "incmatch/classic.hpp"
#include "incmatch/model.hpp"
#include "incmatch/oracle.hpp"

namespace testutil {

using namespace incmatch;

struct Rng {
    explicit Rng(uint64_t seed) : g(seed) {}
    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g); }
    bool coin(double p) { return std::bernoulli_distribution(p)(g); }
    template <class T>
    void shuffle(std::vector<T>& v) {
        // Fisher-Yates with our own draws so results do not depend on the
        // standard library's shuffle.
        for (size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform(0, static_cast<int>(i) - 1)]);
    }
    std::mt19937_64 g;
};

inline std::vector<std::string> default_names(int n) {
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back("a" + std::to_string(i));
    return names;
}

// Symmetric acceptance graph: complete when p == 1.
inline std::vector<std::vector<char>> random_graph(int n, double p, Rng& rng, const std::vector<int>* side = nullptr) {
    std::vector<std::vector<char>> acc(n, std::vector<char>(n, 0));
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            if (side && (*side)[a] == (*side)[b]) continue;
            if (p >= 1.0 || rng.coin(p)) acc[a][b] = acc[b][a] = 1;
        }
    return acc;
}

inline Profile strict_profile(const std::vector<std::vector<char>>& acc, Rng& rng) {
    const int n = static_cast<int>(acc.size());
    Profile p(n);
    for (int a = 0; a < n; ++a) {
        std::vector<AgentId> l;
        for (int b = 0; b < n; ++b)
            if (acc[a][b]) l.push_back(b);
        rng.shuffle(l);
        Tiers t;
        for (AgentId b : l) t.push_back({b});
        p.set_list(a, std::move(t));
    }
    return p;
}

inline Profile random_sr(int n, Rng& rng, double p = 1.0) { return strict_profile(random_graph(n, p, rng), rng); }

inline std::vector<int> halves(int nu, int nw) {
    std::vector<int> side(nu + nw, 1);
    std::fill(side.begin(), side.begin() + nu, 0);
    return side;
}

inline Profile random_sm(int nu, int nw, Rng& rng, double p = 1.0) {
    auto side = halves(nu, nw);
    Profile pr = strict_profile(random_graph(nu + nw, p, rng, &side), rng);
    pr.set_bipartition(side);
    return pr;
}

// Swap two adjacent entries of one random agent's strict list.
inline Profile adjacent_swap(const Profile& p, Rng& rng) {
    std::vector<AgentId> cand;
    for (AgentId a = 0; a < p.size(); ++a)
        if (p.tiers(a).size() >= 2) cand.push_back(a);
    Profile q = p;
    if (cand.empty()) return q;
    AgentId a = cand[rng.uniform(0, static_cast<int>(cand.size()) - 1)];
    Tiers t = p.tiers(a);
    int i = rng.uniform(0, static_cast<int>(t.size()) - 2);
    std::swap(t[i], t[i + 1]);
    q.set_list(a, std::move(t));
    return q;
}

// Random P1 with a stable matching; M1 drawn from its stable matchings.
inline Instance instance_from(const Profile& p1, const Profile& p2, Rng& rng, int k) {
    Instance inst;
    inst.names = default_names(p1.size());
    inst.p1 = p1;
    inst.p2 = p2;
    auto all = enumerate_stable(p1, OracleOptions{40});
    inst.m1 = all.empty() ? Matching(p1.size()) : all[rng.uniform(0, static_cast<int>(all.size()) - 1)];
    inst.k = k;
    return inst;
}

// Strict SR instance whose P1 admits a stable matching.
inline Instance random_isr(int n, Rng& rng, double density, bool single_swap) {
    for (;;) {
        Profile p1 = random_sr(n, rng, density);
        if (!find_stable_sr(p1)) continue;
        Profile p2 = p1;
        if (single_swap) {
            p2 = adjacent_swap(p1, rng);
        } else {
            // Same acceptance, reshuffled lists.
            for (AgentId a = 0; a < n; ++a) {
                auto l = p1.flat_list(a);
                rng.shuffle(l);
                Tiers t;
                for (AgentId b : l) t.push_back({b});
                p2.set_list(a, std::move(t));
            }
        }
        return instance_from(p1, p2, rng, rng.uniform(0, n));
    }
}

inline bool same_outcome_value(const Outcome& a, const Outcome& b) {
    if (a.has_value() != b.has_value()) return false;
    return !a || a->diff == b->diff;
}

}  // namespace testutil

namespace testutil {

// Test-local reference: every matching over mutually accepted pairs, no pruning.
inline std::vector<Matching> all_matchings(const Profile& p) {
    const int n = p.size();
    std::vector<Matching> out;
    Matching cur(n);
    std::function<void(int)> rec = [&](int a) {
        while (a < n && cur.matched(a)) ++a;
        if (a == n) {
            out.push_back(cur);
            return;
        }
        rec(a + 1);  // a stays single
        for (AgentId b = a + 1; b < n; ++b)
            if (!cur.matched(b) && p.accepts(a, b) && p.accepts(b, a)) {
                cur.add(a, b);
                rec(a + 1);
                cur.remove(a);
            }
    };
    rec(0);
    return out;
}

// Independent weak-stability check straight from tier positions.
inline bool reference_stable(const Profile& p, const Matching& m) {
    auto tier_of = [&](AgentId a, AgentId b) -> int {
        if (b == kUnmatched) return 1 << 20;
        const auto& t = p.tiers(a);
        for (size_t i = 0; i < t.size(); ++i)
            if (std::find(t[i].begin(), t[i].end(), b) != t[i].end()) return static_cast<int>(i);
        return -1;
    };
    for (AgentId a = 0; a < p.size(); ++a)
        for (AgentId b = a + 1; b < p.size(); ++b) {
            int ab = tier_of(a, b), ba = tier_of(b, a);
            if (ab < 0 || ba < 0 || m.partner(a) == b) continue;
            if (ab < tier_of(a, m.partner(a)) && ba < tier_of(b, m.partner(b))) return false;
        }
    return true;
}

inline std::vector<Matching> reference_stable_matchings(const Profile& p) {
    std::vector<Matching> out;
    for (auto& m : all_matchings(p))
        if (reference_stable(p, m)) out.push_back(m);
    std::sort(out.begin(), out.end());
    return out;
}

// Build a profile from lists of names "b>c>(d e)" with agents named by index.
inline Profile profile_from(int n, const std::vector<std::vector<std::vector<int>>>& lists) {
    Profile p(n);
    for (int a = 0; a < n; ++a) p.set_list(a, lists[a]);
    return p;
}

}  // namespace testutil
