#include "incmatch/incremental.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "incmatch/classic.hpp"

namespace incmatch {

Outcome solve_ism(const Instance& inst) {
    const Profile& p2 = inst.p2;
    if (!p2.bipartite()) throw std::invalid_argument("ism needs a bipartite instance");
    if (!p2.is_strict()) throw std::invalid_argument("ism needs strict preferences in P2; use a tie-aware solver");
    const Matching& m1 = inst.m1;
    Matching m2 = max_weight_stable_sm(p2, [&](AgentId a, AgentId b) -> long { return m1.contains(a, b) ? 1 : 0; });
    int d = diff_count(m1, m2);
    return Solution{std::move(m2), d};
}

// ---------------------------------------------------------------------------
// Perfectization

Matching Perfectized::restrict(const Matching& m) const {
    Matching out(original_agents);
    for (auto [a, b] : m.pairs())
        if (b < original_agents) out.add(a, b);
    return out;
}

Matching Perfectized::extend(const Matching& m) const {
    Matching out(inst.size());
    for (auto [a, b] : m.pairs()) out.add(a, b);
    for (size_t i = 0; i < pendant_owner.size(); ++i) out.add(pendant_owner[i], original_agents + static_cast<int>(i));
    const int base = original_agents + pendants;
    for (int i = 0; i + 1 < dummies; i += 2) out.add(base + i, base + i + 1);
    return out;
}

namespace {

std::string fresh_name(const std::set<std::string>& taken, const std::string& base) {
    std::string name = base;
    for (int i = 2; taken.count(name); ++i) name = base + "_" + std::to_string(i);
    return name;
}

// Copy of p over n + extra agents, lists of existing agents unchanged.
Profile grow(const Profile& p, int extra) {
    Profile out(p.size() + extra);
    for (AgentId a = 0; a < p.size(); ++a) out.set_list(a, p.tiers(a));
    return out;
}

void append_last(Profile& p, AgentId a, AgentId b) {
    Tiers t = p.tiers(a);
    t.push_back({b});
    p.set_list(a, std::move(t));
}

}  // namespace

std::optional<Perfectized> perfectize(const Instance& inst) {
    if (!inst.p1.is_strict() || !inst.p2.is_strict()) throw std::invalid_argument("perfectize needs strict preferences");
    auto m2 = find_stable_sr(inst.p2);
    if (!m2) return std::nullopt;
    const int n = inst.size();
    std::set<std::string> taken(inst.names.begin(), inst.names.end());

    Perfectized out;
    out.original_agents = n;
    std::vector<AgentId> a2;
    for (AgentId a = 0; a < n; ++a)
        if (!m2->matched(a)) a2.push_back(a);

    // Pendants for agents unmatched in P2's stable matchings.
    const int np = static_cast<int>(a2.size());
    Profile p1 = grow(inst.p1, np), p2 = grow(inst.p2, np);
    std::vector<std::string> names = inst.names;
    Matching m1(n + np);
    for (auto [a, b] : inst.m1.pairs()) m1.add(a, b);
    int charged = 0;
    for (int i = 0; i < np; ++i) {
        AgentId a = a2[i], pend = n + i;
        names.push_back(fresh_name(taken, names[a] + "_pend"));
        taken.insert(names.back());
        p1.set_list(pend, {{a}});
        p2.set_list(pend, {{a}});
        append_last(p1, a, pend);
        append_last(p2, a, pend);
        if (!inst.m1.matched(a))
            m1.add(a, pend);
        else
            ++charged;
    }

    // Dummy pairs for agents still unmatched in M1.
    std::vector<AgentId> loose;
    for (AgentId a = 0; a < n + np; ++a)
        if (!m1.matched(a)) loose.push_back(a);
    const int x = static_cast<int>(loose.size());
    if (x % 2 != 0) throw std::logic_error("odd number of agents left unmatched by the initial matching");
    const int base = n + np;
    Profile q1 = grow(p1, x), q2 = grow(p2, x);
    Matching mm(base + x);
    for (auto [a, b] : m1.pairs()) mm.add(a, b);
    for (int i = 0; i < x; ++i) {
        AgentId a = loose[i], dummy = base + i;
        AgentId mate = base + (i % 2 == 0 ? i + 1 : i - 1);
        names.push_back(fresh_name(taken, names[a] + "_dummy"));
        taken.insert(names.back());
        q1.set_list(dummy, {{a}, {mate}});
        q2.set_list(dummy, {{a}, {mate}});
        append_last(q1, a, dummy);
        append_last(q2, a, dummy);
        mm.add(a, dummy);
    }

    out.inst.names = std::move(names);
    out.inst.p1 = std::move(q1);
    out.inst.p2 = std::move(q2);
    out.inst.m1 = std::move(mm);
    out.pendants = np;
    out.pendant_owner = a2;
    out.pendants_charged = charged;
    out.dummies = x;
    out.inst.k = inst.k + out.budget_shift();
    return out;
}

// ---------------------------------------------------------------------------
// Guess-and-propagate search

XpSearch::XpSearch(const Instance& perfectized, XpOptions opt) : inst_(perfectized), opt_(opt), n_(perfectized.size()) {
    if (!inst_.p1.is_strict() || !inst_.p2.is_strict()) throw std::invalid_argument("search needs strict preferences");
    for (AgentId a = 0; a < n_; ++a)
        if (!inst_.m1.matched(a)) throw std::invalid_argument("search needs a perfect initial matching");
    auto d = swap_distance(inst_.p1, inst_.p2);
    if (!d) throw std::invalid_argument("swap distance is infinite");
    d_ = static_cast<int>(*d);
    std::set<AgentId> b;
    for (AgentId a : changed_agents(inst_.p1, inst_.p2)) {
        b.insert(a);
        b.insert(inst_.m1.partner(a));
    }
    b_.assign(b.begin(), b.end());
    stable_.assign(static_cast<size_t>(n_) * n_, 0);
    stable_partners_.assign(n_, {});
    auto sp = stable_pairs(inst_.p2);
    if (!sp) throw std::invalid_argument("P2 admits no stable matching");
    for (auto [a, c] : *sp) stable_[idx(a, c)] = stable_[idx(c, a)] = 1;
    for (AgentId a = 0; a < n_; ++a)
        for (AgentId c : inst_.p2.flat_list(a))
            if (stable_[idx(a, c)]) stable_partners_[a].push_back(c);
}

double XpSearch::theoretical_bound() const {
    return std::pow(2.0, 4.0 * d_) * std::pow(static_cast<double>(n_), 5.0 * d_);
}

bool XpSearch::better(AgentId c, AgentId x, AgentId y) const {
    return inst_.p2.rank_raw(c, x) < inst_.p2.rank_raw(c, y);
}

void XpSearch::set_bc(GuessState& s, AgentId c, AgentId v) const {
    if (opt_.check_invariants && s.bc[c] != kUnmatched && better(c, v, s.bc[c]))
        throw std::logic_error("best case value improved for agent " + inst_.names[c]);
    s.bc[c] = v;
}

void XpSearch::set_wc(GuessState& s, AgentId c, AgentId v) const {
    if (opt_.check_invariants && s.wc[c] != kUnmatched && better(c, s.wc[c], v))
        throw std::logic_error("worst case value worsened for agent " + inst_.names[c]);
    s.wc[c] = v;
}

void XpSearch::check_state(const GuessState& s) const {
    const Matching& m1 = inst_.m1;
    for (AgentId c = 0; c < n_; ++c) {
        AgentId bc = s.bc[c], wc = s.wc[c], mc = s.m.partner(c);
        auto fail = [&](const char* what) {
            throw std::logic_error(std::string("search invariant violated (") + what + ") at agent " + inst_.names[c]);
        };
        if (mc != m1.partner(c) && bc == kUnmatched && wc == kUnmatched) fail("changed agent without bounds");
        if (!s.in_x[c]) {
            if (bc != kUnmatched && better(c, bc, m1.partner(c))) fail("best case above initial partner");
            if (wc != kUnmatched && better(c, m1.partner(c), wc)) fail("worst case below initial partner");
        }
        if (bc != kUnmatched && wc != kUnmatched && bc != wc) fail("two different bounds");
        if (mc != kUnmatched && ((bc != kUnmatched && mc != bc) || (wc != kUnmatched && mc != wc)))
            fail("matched away from its bound");
    }
}

std::optional<GuessState> XpSearch::initialize(const Guess& g) const {
    const Profile& p2 = inst_.p2;
    const Matching& m1 = inst_.m1;
    auto valid_agent = [&](AgentId a) { return a >= 0 && a < n_; };
    auto acceptable = [&](Pair e) {
        return valid_agent(e.first) && valid_agent(e.second) && e.first != e.second && p2.accepts(e.first, e.second);
    };
    if (static_cast<int>(g.h.size()) > d_ || static_cast<int>(g.f.size()) > d_)
        throw std::invalid_argument("guess holds more than d pairs in H or F");
    std::vector<char> covered(n_, 0);
    for (auto e : g.assigned) {
        if (!acceptable(e)) throw std::invalid_argument("guessed partner is not acceptable");
        if (!std::binary_search(b_.begin(), b_.end(), e.first))
            throw std::invalid_argument("guessed agent is not a changed agent or its initial partner");
        covered[e.first] = covered[e.second] = 1;
    }
    for (AgentId a : b_)
        if (!covered[a]) throw std::invalid_argument("guess misses an agent of B");
    for (auto e : g.h)
        if (!acceptable(e) || m1.contains(e.first, e.second))
            throw std::invalid_argument("H pair must be acceptable and outside M1");
    for (auto e : g.f)
        if (!valid_agent(e.first) || !valid_agent(e.second) || !m1.contains(e.first, e.second))
            throw std::invalid_argument("F pair must belong to M1");

    GuessState s;
    s.m = m1;
    s.bc.assign(n_, kUnmatched);
    s.wc.assign(n_, kUnmatched);
    s.in_x.assign(n_, 0);
    s.h_set = g.h;
    s.f_set = g.f;

    std::vector<AgentId> fixed(n_, kUnmatched);
    std::vector<Pair> guessed = g.assigned;
    guessed.insert(guessed.end(), g.h.begin(), g.h.end());
    for (auto [a, b] : guessed) {
        if ((fixed[a] != kUnmatched && fixed[a] != b) || (fixed[b] != kUnmatched && fixed[b] != a)) return std::nullopt;
        fixed[a] = b;
        fixed[b] = a;
    }
    for (auto [a, b] : guessed) s.m.update_to_contain(a, b);
    for (AgentId a = 0; a < n_; ++a)
        if (fixed[a] != kUnmatched) {
            s.in_x[a] = 1;
            s.bc[a] = s.wc[a] = s.m.partner(a);
        }

    std::vector<AgentId> needs;
    for (AgentId a = 0; a < n_; ++a)
        if (s.in_x[a] && !s.in_x[m1.partner(a)]) needs.push_back(a);
    if (g.orientation.size() != needs.size()) throw std::invalid_argument("orientation count does not match X");
    for (auto [a, prefers_new] : g.orientation) {
        if (!std::binary_search(needs.begin(), needs.end(), a))
            throw std::invalid_argument("orientation given for an agent that needs none");
        AgentId old = m1.partner(a);
        if (prefers_new)
            s.wc[old] = a;
        else
            s.bc[old] = a;
    }

    for (auto [a, b] : g.f) {
        for (AgentId e : {a, b})
            if (s.in_x[e] && better(e, m1.partner(e), s.bc[e])) return std::nullopt;
        // A pair touching X carries nothing new: the guessed partners and the
        // orientation already fix both endpoints.
        if (s.in_x[a] || s.in_x[b]) continue;
        s.wc[a] = b;
        s.wc[b] = a;
        s.m.remove(a);
    }
    return s;
}

bool XpSearch::propagate(GuessState& s, AgentId a) const {
    const Matching& m1 = inst_.m1;
    const auto& cand = stable_partners_[a];
    AgentId pick = kUnmatched;
    const bool best_branch = s.bc[a] != kUnmatched;
    if (!best_branch && s.wc[a] == kUnmatched) throw std::logic_error("propagation from an agent without bounds");
    if (best_branch) {
        for (AgentId b : cand) {
            if (!better(a, s.bc[a], b)) continue;
            if (s.wc[b] != kUnmatched && better(b, s.wc[b], a)) continue;
            if (better(b, m1.partner(b), a)) continue;
            pick = b;
            break;
        }
    } else {
        for (auto it = cand.rbegin(); it != cand.rend(); ++it) {
            AgentId b = *it;
            if (!better(a, b, s.wc[a])) continue;
            if (s.bc[b] != kUnmatched && better(b, a, s.bc[b])) continue;
            pick = b;
            break;
        }
    }
    if (pick == kUnmatched || s.in_x[a] || s.in_x[pick]) return false;
    const AgentId b = pick;
    const AgentId ma = s.m.partner(a), mb = s.m.partner(b);
    if (best_branch) {
        if (ma != kUnmatched && s.wc[ma] == kUnmatched && m1.partner(a) == ma) set_wc(s, ma, a);
        if (mb != kUnmatched && s.bc[mb] == kUnmatched && m1.partner(b) == mb) set_bc(s, mb, b);
        s.m.update_to_contain(a, b);
        set_bc(s, a, b);
        set_wc(s, b, a);
    } else {
        if (ma != kUnmatched && s.bc[ma] == kUnmatched && m1.partner(a) == ma) set_bc(s, ma, a);
        if (mb != kUnmatched && s.wc[mb] == kUnmatched && m1.partner(b) == mb) set_wc(s, mb, b);
        s.m.update_to_contain(a, b);
        set_wc(s, a, b);
        set_bc(s, b, a);
    }
    return true;
}

std::optional<Matching> XpSearch::run_guess(const Guess& g) const {
    auto st = initialize(g);
    if (!st) return std::nullopt;
    GuessState& s = *st;
    const long limit = static_cast<long>(n_) * n_;
    for (long iter = 0;; ++iter) {
        if (opt_.check_invariants) check_state(s);
        auto blocking = blocking_pairs(inst_.p2, s.m);
        if (blocking.empty()) break;
        if (iter >= limit) throw std::logic_error("propagation loop exceeded n^2 iterations");
        AgentId loose = kUnmatched;
        for (auto [a, b] : blocking)
            for (AgentId c : {a, b})
                if (!s.m.matched(c) && (loose == kUnmatched || c < loose)) loose = c;
        bool ok;
        if (loose != kUnmatched) {
            ok = propagate(s, loose);
        } else {
            auto [a, b] = blocking.front();
            if (s.bc[a] != kUnmatched && s.bc[b] != kUnmatched) return std::nullopt;
            if (s.bc[a] == kUnmatched && s.bc[b] == kUnmatched)
                throw std::logic_error("blocking pair with no best-case bound on either side");
            AgentId x = s.bc[a] == kUnmatched ? a : b;
            if (s.wc[x] == kUnmatched) set_wc(s, x, s.m.partner(x));
            ok = propagate(s, x);
        }
        if (!ok) return std::nullopt;
        for (AgentId c = 0; c < n_; ++c)
            if (s.bc[c] != kUnmatched && s.wc[c] != kUnmatched && better(c, s.wc[c], s.bc[c])) return std::nullopt;
    }
    return std::move(s.m);
}

std::optional<Matching> XpSearch::run_guess_within(const Guess& g, int k) const {
    auto m = run_guess(g);
    if (m && diff_count(inst_.m1, *m) > k) return std::nullopt;
    return m;
}

namespace {

double subsets_up_to(long items, int d) {
    double total = 0, c = 1;
    for (int i = 0; i <= d && i <= items; ++i) {
        total += c;
        c = c * static_cast<double>(items - i) / (i + 1);
    }
    return total;
}

// Disjoint subsets of candidates with at most d pairs, lexicographic.
void disjoint_subsets(const std::vector<Pair>& cand, int d, const std::function<bool(const std::vector<Pair>&)>& visit) {
    std::vector<Pair> chosen;
    std::set<AgentId> used;
    bool stop = false;
    std::function<void(size_t)> rec = [&](size_t from) {
        if (stop) return;
        if (!visit(chosen)) {
            stop = true;
            return;
        }
        if (static_cast<int>(chosen.size()) == d) return;
        for (size_t i = from; i < cand.size() && !stop; ++i) {
            auto [a, b] = cand[i];
            if (used.count(a) || used.count(b)) continue;
            chosen.push_back(cand[i]);
            used.insert(a);
            used.insert(b);
            rec(i + 1);
            used.erase(a);
            used.erase(b);
            chosen.pop_back();
        }
    };
    rec(0);
}

}  // namespace

double XpSearch::guess_count_estimate() const {
    double est = 1;
    for (AgentId a : b_) est *= std::max<size_t>(1, stable_partners_[a].size());
    long h_cand = 0, f_cand = 0;
    const Matching& m1 = inst_.m1;
    for (AgentId a = 0; a < n_; ++a) {
        if (m1.partner(a) > a) ++f_cand;
        for (AgentId b : stable_partners_[a])
            if (b > a && better(a, m1.partner(a), b) && better(b, m1.partner(b), a)) ++h_cand;
    }
    est *= subsets_up_to(h_cand, d_) * subsets_up_to(f_cand, d_);
    est *= std::pow(2.0, std::min<double>(60, 2.0 * b_.size() + 2.0 * d_));
    return est;
}

long XpSearch::for_each_guess(const std::function<bool(const Guess&)>& visit) const {
    const Matching& m1 = inst_.m1;
    long visited = 0;
    bool stop = false;
    std::vector<AgentId> fixed(n_, kUnmatched);
    Guess g;

    auto after_assignment = [&]() {
        std::vector<Pair> h_cand;
        for (AgentId a = 0; a < n_; ++a) {
            if (fixed[a] != kUnmatched) continue;
            for (AgentId b : stable_partners_[a])
                if (b > a && fixed[b] == kUnmatched && better(a, m1.partner(a), b) && better(b, m1.partner(b), a))
                    h_cand.emplace_back(a, b);
        }
        std::sort(h_cand.begin(), h_cand.end());
        disjoint_subsets(h_cand, d_, [&](const std::vector<Pair>& h) {
            std::vector<char> in_x(n_, 0);
            for (AgentId a = 0; a < n_; ++a) in_x[a] = fixed[a] != kUnmatched;
            for (auto [a, b] : h) in_x[a] = in_x[b] = 1;
            std::vector<Pair> f_cand;
            for (AgentId a = 0; a < n_; ++a) {
                AgentId b = m1.partner(a);
                if (b < a || in_x[a] || in_x[b]) continue;
                // Both endpoints need a stable partner they like more.
                auto improves = [&](AgentId c, AgentId old) {
                    return !stable_partners_[c].empty() && better(c, stable_partners_[c].front(), old);
                };
                if (improves(a, b) && improves(b, a)) f_cand.emplace_back(a, b);
            }
            std::vector<AgentId> needs;
            for (AgentId a = 0; a < n_; ++a)
                if (in_x[a] && !in_x[m1.partner(a)]) needs.push_back(a);
            if (needs.size() > 30) throw ResourceLimit("too many orientation bits in one guess");
            g.h = h;
            disjoint_subsets(f_cand, d_, [&](const std::vector<Pair>& f) {
                g.f = f;
                for (unsigned long mask = 0; mask < (1UL << needs.size()); ++mask) {
                    g.orientation.clear();
                    for (size_t i = 0; i < needs.size(); ++i) g.orientation.emplace_back(needs[i], (mask >> i) & 1UL);
                    ++visited;
                    if (!visit(g)) {
                        stop = true;
                        return false;
                    }
                }
                return true;
            });
            return !stop;
        });
    };

    std::function<void(size_t)> assign = [&](size_t i) {
        if (stop) return;
        if (i == b_.size()) {
            g.assigned.clear();
            for (AgentId a : b_) g.assigned.emplace_back(a, fixed[a]);
            after_assignment();
            return;
        }
        AgentId a = b_[i];
        if (fixed[a] != kUnmatched) {
            assign(i + 1);
            return;
        }
        for (AgentId p : stable_partners_[a]) {
            if (fixed[p] != kUnmatched) continue;
            fixed[a] = p;
            fixed[p] = a;
            assign(i + 1);
            fixed[a] = fixed[p] = kUnmatched;
            if (stop) return;
        }
    };
    assign(0);
    return visited;
}

std::optional<Solution> XpSearch::solve(int good_enough) const {
    double est = guess_count_estimate();
    if (est > opt_.guess_limit) {
        char buf[200];
        std::snprintf(buf, sizeof buf, "guess space too large: about %.3g guesses (worst case 2^{4d} n^{5d} = %.3g), limit %.3g",
                      est, theoretical_bound(), opt_.guess_limit);
        throw ResourceLimit(buf);
    }
    std::optional<Solution> best;
    for_each_guess([&](const Guess& g) {
        auto m = run_guess(g);
        if (!m) return true;
        int d = diff_count(inst_.m1, *m);
        if (!best || d < best->diff || (d == best->diff && *m < best->matching)) best = Solution{std::move(*m), d};
        return best->diff > good_enough;
    });
    return best;
}

Outcome solve_isr_xp(const Instance& inst, const XpOptions& opt) {
    if (!inst.p1.is_strict() || !inst.p2.is_strict()) throw std::invalid_argument("isr-xp needs strict preferences");
    auto pf = perfectize(inst);
    if (!pf) return std::nullopt;
    XpSearch search(pf->inst, opt);
    auto best = search.solve(pf->budget_shift());
    if (!best) return std::nullopt;
    Matching m = pf->restrict(best->matching);
    if (!is_stable(inst.p2, m)) throw std::logic_error("translated matching is not stable in P2");
    int d = diff_count(inst.m1, m);
    return Solution{std::move(m), d};
}

}  // namespace incmatch
