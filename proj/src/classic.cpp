#include "incmatch/classic.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <queue>

namespace incmatch {

Profile break_ties_by_id(const Profile& p) {
    Profile out(p.size());
    for (AgentId a = 0; a < p.size(); ++a) {
        Tiers t;
        for (AgentId b : p.flat_list(a)) t.push_back({b});
        out.set_list(a, std::move(t));
    }
    if (p.bipartite()) out.set_bipartition(p.sides());
    return out;
}

Matching find_stable_sm(const Profile& profile) {
    if (!profile.bipartite()) throw std::invalid_argument("stable marriage needs a bipartite profile");
    const Profile p = break_ties_by_id(profile);
    const int n = p.size();
    std::vector<std::vector<AgentId>> lists(n);
    for (AgentId a = 0; a < n; ++a) lists[a] = p.flat_list(a);
    std::vector<size_t> next(n, 0);
    std::vector<AgentId> held(n, kUnmatched);
    std::deque<AgentId> free;
    for (AgentId a = 0; a < n; ++a)
        if (p.side(a) == 0) free.push_back(a);
    while (!free.empty()) {
        AgentId m = free.front();
        free.pop_front();
        while (next[m] < lists[m].size()) {
            AgentId w = lists[m][next[m]++];
            if (!p.accepts(w, m)) continue;
            AgentId cur = held[w];
            if (cur == kUnmatched) {
                held[w] = m;
                break;
            }
            if (p.rank_raw(w, m) < p.rank_raw(w, cur)) {
                held[w] = m;
                free.push_back(cur);
                break;
            }
        }
    }
    Matching out(n);
    for (AgentId w = 0; w < n; ++w)
        if (p.side(w) == 1 && held[w] != kUnmatched) out.add(held[w], w);
    return out;
}

namespace {

// Reduction table for Irving's algorithm: each agent's list in preference
// order with alive flags kept symmetric.
class Table {
  public:
    explicit Table(const Profile& p) : p_(p), n_(p.size()), lists_(n_), alive_(static_cast<size_t>(n_) * n_, 0) {
        for (AgentId a = 0; a < n_; ++a)
            for (AgentId b : p.flat_list(a))
                if (p.accepts(b, a)) {
                    lists_[a].push_back(b);
                    alive_[idx(a, b)] = 1;
                }
    }
    bool alive(AgentId a, AgentId b) const { return alive_[idx(a, b)]; }
    void remove(AgentId a, AgentId b) {
        alive_[idx(a, b)] = 0;
        alive_[idx(b, a)] = 0;
    }
    // k-th alive entry from the front (0-based), or kUnmatched.
    AgentId nth(AgentId a, int k) const {
        for (AgentId b : lists_[a])
            if (alive(a, b) && k-- == 0) return b;
        return kUnmatched;
    }
    AgentId last(AgentId a) const {
        for (auto it = lists_[a].rbegin(); it != lists_[a].rend(); ++it)
            if (alive(a, *it)) return *it;
        return kUnmatched;
    }
    int length(AgentId a) const {
        int c = 0;
        for (AgentId b : lists_[a]) c += alive(a, b);
        return c;
    }
    // Delete every entry of a's list strictly worse than x.
    void truncate_after(AgentId a, AgentId x) {
        int rx = p_.rank_raw(a, x);
        for (AgentId b : lists_[a])
            if (alive(a, b) && p_.rank_raw(a, b) > rx) remove(a, b);
    }
    int size() const { return n_; }

  private:
    size_t idx(AgentId a, AgentId b) const { return static_cast<size_t>(a) * n_ + b; }
    const Profile& p_;
    int n_;
    std::vector<std::vector<AgentId>> lists_;
    std::vector<char> alive_;
};

}  // namespace

std::optional<Matching> find_stable_sr(const Profile& p) {
    if (!p.is_strict()) throw std::invalid_argument("stable roommates solver needs strict preferences");
    const int n = p.size();
    Table t(p);

    // Phase 1: proposals. A proposal is withdrawn whenever its pair gets
    // deleted from either side.
    std::vector<AgentId> holds(n, kUnmatched);
    std::vector<AgentId> proposed_to(n, kUnmatched);
    std::deque<AgentId> free;
    for (AgentId a = 0; a < n; ++a) free.push_back(a);
    while (!free.empty()) {
        AgentId x = free.front();
        free.pop_front();
        if (proposed_to[x] != kUnmatched) continue;
        AgentId y = t.nth(x, 0);
        if (y == kUnmatched) continue;
        holds[y] = x;
        proposed_to[x] = y;
        t.truncate_after(y, x);
        for (AgentId u = 0; u < n; ++u) {
            AgentId v = proposed_to[u];
            if (v != kUnmatched && !t.alive(u, v)) {
                if (holds[v] == u) holds[v] = kUnmatched;
                proposed_to[u] = kUnmatched;
                free.push_back(u);
            }
        }
    }
    std::vector<char> had_list(n);
    for (AgentId a = 0; a < n; ++a) had_list[a] = t.length(a) > 0;

    // Phase 2: rotation elimination, lowest-id start.
    for (;;) {
        AgentId start = kUnmatched;
        for (AgentId a = 0; a < n; ++a)
            if (t.length(a) >= 2) {
                start = a;
                break;
            }
        if (start == kUnmatched) break;
        std::vector<AgentId> seq{start};
        std::vector<int> pos(n, -1);
        pos[start] = 0;
        int cycle_from = -1;
        for (;;) {
            AgentId q = t.nth(seq.back(), 1);
            if (q == kUnmatched) throw std::logic_error("rotation walk reached a list of length one");
            AgentId nxt = t.last(q);
            if (pos[nxt] >= 0) {
                cycle_from = pos[nxt];
                break;
            }
            pos[nxt] = static_cast<int>(seq.size());
            seq.push_back(nxt);
        }
        std::vector<std::pair<AgentId, AgentId>> moves;  // (x_i, second(x_i))
        for (size_t i = cycle_from; i < seq.size(); ++i) moves.emplace_back(seq[i], t.nth(seq[i], 1));
        for (auto [x, y] : moves) t.truncate_after(y, x);
        for (AgentId a = 0; a < n; ++a)
            if (t.length(a) == 0 && had_list[a]) return std::nullopt;
    }

    Matching m(n);
    for (AgentId a = 0; a < n; ++a) {
        AgentId b = t.nth(a, 0);
        if (b == kUnmatched) continue;
        if (t.nth(b, 0) != a) return std::nullopt;
        if (a < b) m.add(a, b);
    }
    return m;
}

std::vector<AgentId> matched_set(const Profile& p, const Matching& m) {
    std::vector<AgentId> out;
    for (AgentId a = 0; a < p.size(); ++a)
        if (m.matched(a)) out.push_back(a);
    return out;
}

bool is_stable_pair(const Profile& p, AgentId a, AgentId b) {
    if (a == b || !p.accepts(a, b) || !p.accepts(b, a)) return false;
    // Remove a and b. Any agent that one of them prefers to the other must
    // end up with someone it likes better than that one of them.
    const int n = p.size();
    Profile rest(n);
    std::vector<char> must_match(n, 0);
    std::vector<int> cut(n, Profile::kNotAccepted);
    for (AgentId x = 0; x < n; ++x) {
        if (x == a || x == b) continue;
        if (p.accepts(x, a) && p.rank_raw(a, x) < p.rank_raw(a, b)) {
            must_match[x] = 1;
            cut[x] = std::min(cut[x], p.rank_raw(x, a));
        }
        if (p.accepts(x, b) && p.rank_raw(b, x) < p.rank_raw(b, a)) {
            must_match[x] = 1;
            cut[x] = std::min(cut[x], p.rank_raw(x, b));
        }
    }
    auto keep = [&](AgentId x, AgentId y) {
        return x != a && x != b && y != a && y != b && p.rank_raw(x, y) < cut[x] && p.rank_raw(y, x) < cut[y];
    };
    for (AgentId x = 0; x < n; ++x) {
        if (x == a || x == b) continue;
        Tiers t;
        for (AgentId y : p.flat_list(x))
            if (keep(x, y)) t.push_back({y});
        rest.set_list(x, std::move(t));
    }
    auto m = find_stable_sr(rest);
    if (!m) return false;
    for (AgentId x = 0; x < n; ++x)
        if (must_match[x] && !m->matched(x)) return false;
    return true;
}

std::optional<std::vector<Pair>> stable_pairs(const Profile& p) {
    if (!find_stable_sr(p)) return std::nullopt;
    std::vector<Pair> out;
    for (AgentId a = 0; a < p.size(); ++a)
        for (AgentId b : p.flat_list(a))
            if (b > a && is_stable_pair(p, a, b)) out.emplace_back(a, b);
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

struct Rotation {
    std::vector<AgentId> men;    // m_i
    std::vector<AgentId> women;  // w_i = partner of m_i before elimination
};

// Edmonds-Karp on a small dense network; returns the source side of a min cut.
std::vector<char> min_cut_source_side(int nodes, int s, int t, const std::vector<std::tuple<int, int, long>>& arcs) {
    struct Arc {
        int to;
        long cap;
    };
    std::vector<Arc> e;
    std::vector<std::vector<int>> adj(nodes);
    for (auto [u, v, c] : arcs) {
        adj[u].push_back(static_cast<int>(e.size()));
        e.push_back({v, c});
        adj[v].push_back(static_cast<int>(e.size()));
        e.push_back({u, 0});
    }
    for (;;) {
        std::vector<int> via(nodes, -1);
        std::vector<char> seen(nodes, 0);
        std::queue<int> q;
        q.push(s);
        seen[s] = 1;
        while (!q.empty() && !seen[t]) {
            int u = q.front();
            q.pop();
            for (int id : adj[u])
                if (e[id].cap > 0 && !seen[e[id].to]) {
                    seen[e[id].to] = 1;
                    via[e[id].to] = id;
                    q.push(e[id].to);
                }
        }
        if (!seen[t]) return seen;
        long f = std::numeric_limits<long>::max();
        for (int v = t; v != s; v = e[via[v] ^ 1].to) f = std::min(f, e[via[v]].cap);
        for (int v = t; v != s; v = e[via[v] ^ 1].to) {
            e[via[v]].cap -= f;
            e[via[v] ^ 1].cap += f;
        }
    }
}

}  // namespace

Matching max_weight_stable_sm(const Profile& profile, const PairWeight& weight) {
    if (!profile.bipartite()) throw std::invalid_argument("stable marriage needs a bipartite profile");
    if (!profile.is_strict()) throw std::invalid_argument("weighted stable marriage needs strict preferences");
    const Profile& p = profile;
    const int n = p.size();
    const Matching m0 = find_stable_sm(p);
    std::vector<std::vector<AgentId>> lists(n);
    for (AgentId a = 0; a < n; ++a) lists[a] = p.flat_list(a);

    std::vector<AgentId> partner(n);
    for (AgentId a = 0; a < n; ++a) partner[a] = m0.partner(a);

    // Walk one maximal chain from the side-0-optimal matching.
    std::vector<Rotation> rotations;
    std::map<Pair, int> moved_to;  // (man, woman) -> rotation bringing man to woman
    std::map<Pair, int> passed;    // (man, woman) -> rotation giving woman someone better than man
    auto successor = [&](AgentId m) -> AgentId {
        AgentId cur = partner[m];
        if (cur == kUnmatched) return kUnmatched;
        int rc = p.rank_raw(m, cur);
        for (AgentId w : lists[m]) {
            if (p.rank_raw(m, w) <= rc) continue;
            // A single woman would take m, so m can never move past her.
            if (partner[w] == kUnmatched) return kUnmatched;
            if (p.rank_raw(w, m) < p.rank_raw(w, partner[w])) return w;
        }
        return kUnmatched;
    };
    for (;;) {
        std::vector<AgentId> succ(n, kUnmatched);
        for (AgentId m = 0; m < n; ++m)
            if (p.side(m) == 0) succ[m] = successor(m);
        std::vector<int> stamp(n, -1);
        std::vector<AgentId> cycle;
        for (AgentId start = 0; start < n && cycle.empty(); ++start) {
            if (p.side(start) != 0 || succ[start] == kUnmatched || stamp[start] >= 0) continue;
            std::vector<AgentId> path;
            AgentId m = start;
            while (m != kUnmatched && stamp[m] < 0) {
                stamp[m] = start;
                path.push_back(m);
                m = succ[m] == kUnmatched ? kUnmatched : partner[succ[m]];
            }
            if (m != kUnmatched && stamp[m] == start) {
                auto it = std::find(path.begin(), path.end(), m);
                cycle.assign(it, path.end());
            }
        }
        if (cycle.empty()) break;
        Rotation r;
        r.men = cycle;
        for (AgentId m : cycle) r.women.push_back(partner[m]);
        const int id = static_cast<int>(rotations.size());
        const size_t len = cycle.size();
        for (size_t i = 0; i < len; ++i) {
            AgentId m = r.men[i], w_next = r.women[(i + 1) % len], old = r.men[(i + 1) % len];
            moved_to[{m, w_next}] = id;
            for (AgentId x : lists[w_next])
                if (p.rank_raw(w_next, x) > p.rank_raw(w_next, m) && p.rank_raw(w_next, x) < p.rank_raw(w_next, old))
                    passed[{x, w_next}] = id;
        }
        for (size_t i = 0; i < len; ++i) {
            AgentId m = r.men[i], w_next = r.women[(i + 1) % len];
            partner[m] = w_next;
            partner[w_next] = m;
        }
        rotations.push_back(std::move(r));
    }

    const int R = static_cast<int>(rotations.size());
    // pred[r] holds rotations that must be eliminated before r.
    std::vector<std::vector<int>> pred(R);
    for (int r = 0; r < R; ++r) {
        const auto& rot = rotations[r];
        const size_t len = rot.men.size();
        for (size_t i = 0; i < len; ++i) {
            AgentId m = rot.men[i], from = rot.women[i], to = rot.women[(i + 1) % len];
            auto it = moved_to.find({m, from});
            if (it != moved_to.end()) pred[r].push_back(it->second);
            int lo = p.rank_raw(m, from), hi = p.rank_raw(m, to);
            for (AgentId w : lists[m]) {
                int rw = p.rank_raw(m, w);
                if (rw <= lo || rw >= hi) continue;
                auto jt = passed.find({m, w});
                if (jt != passed.end()) pred[r].push_back(jt->second);
            }
        }
    }

    std::vector<long> gain(R, 0);
    for (int r = 0; r < R; ++r) {
        const auto& rot = rotations[r];
        const size_t len = rot.men.size();
        for (size_t i = 0; i < len; ++i)
            gain[r] += weight(rot.men[i], rot.women[(i + 1) % len]) - weight(rot.men[i], rot.women[i]);
    }

    const int src = R, sink = R + 1;
    long big = 1;
    for (long g : gain) big += std::abs(g);
    std::vector<std::tuple<int, int, long>> arcs;
    for (int r = 0; r < R; ++r) {
        if (gain[r] > 0) arcs.emplace_back(src, r, gain[r]);
        if (gain[r] < 0) arcs.emplace_back(r, sink, -gain[r]);
        for (int q : pred[r])
            if (q != r) arcs.emplace_back(r, q, big);
    }
    auto chosen = min_cut_source_side(R + 2, src, sink, arcs);

    std::vector<AgentId> result(n);
    for (AgentId a = 0; a < n; ++a) result[a] = m0.partner(a);
    for (int r = 0; r < R; ++r) {
        if (!chosen[r]) continue;
        const auto& rot = rotations[r];
        const size_t len = rot.men.size();
        for (size_t i = 0; i < len; ++i) {
            AgentId m = rot.men[i], w = rot.women[(i + 1) % len];
            result[m] = w;
            result[w] = m;
        }
    }
    Matching out(n);
    for (AgentId a = 0; a < n; ++a)
        if (result[a] > a) out.add(a, result[a]);
    if (!is_stable(p, out)) throw std::logic_error("rotation closure produced an unstable matching");
    return out;
}

}  // namespace incmatch
