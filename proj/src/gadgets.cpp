#include "incmatch/gadgets.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "incmatch/structured.hpp"

namespace incmatch {

namespace {

std::string fresh_name(std::set<std::string>& taken, const std::string& base) {
    std::string name = base;
    for (int i = 2; taken.count(name); ++i) name = base + "_" + std::to_string(i);
    taken.insert(name);
    return name;
}

Tiers strict_tiers(const std::vector<AgentId>& order) {
    Tiers t;
    for (AgentId b : order) t.push_back({b});
    return t;
}

// Copy of p over n + extra agents, lists of existing agents unchanged.
Profile grow(const Profile& p, int extra) {
    Profile out(p.size() + extra);
    for (AgentId a = 0; a < p.size(); ++a) out.set_list(a, p.tiers(a));
    return out;
}

// b takes the place of old in a's list, tie position included.
void substitute(Profile& p, AgentId a, AgentId old, AgentId b) {
    Tiers t = p.tiers(a);
    for (auto& tier : t)
        for (auto& x : tier)
            if (x == old) x = b;
    p.set_list(a, std::move(t));
}

std::vector<AgentId> opposite_side(const Profile& p, AgentId a) {
    std::vector<AgentId> out;
    for (AgentId b = 0; b < p.size(); ++b)
        if (p.side(b) != p.side(a)) out.push_back(b);
    return out;
}

bool complete_two_sided(const Profile& p) {
    for (AgentId a = 0; a < p.size(); ++a)
        if (p.list_length(a) != static_cast<int>(opposite_side(p, a).size())) return false;
    return true;
}

// Missing opposite-side agents go to the end, one tier each, ascending id.
void complete_list(Profile& p, AgentId a) {
    Tiers t = p.tiers(a);
    for (AgentId b : opposite_side(p, a))
        if (!p.accepts(a, b)) t.push_back({b});
    p.set_list(a, std::move(t));
}

}  // namespace

// ---------------------------------------------------------------------------
// Multicolored clique

int validate_graph(const ColoredGraph& g) {
    if (g.classes.empty()) throw std::invalid_argument("graph has no colors");
    const int nu = g.per_color();
    if (nu == 0) throw std::invalid_argument("color classes must not be empty");
    for (const auto& cls : g.classes)
        if (static_cast<int>(cls.size()) != nu) throw std::invalid_argument("color classes differ in size");
    std::vector<std::vector<int>> degree(g.colors(), std::vector<int>(nu, 0));
    std::set<std::pair<std::pair<int, int>, std::pair<int, int>>> seen;
    for (const auto& [x, y] : g.edges) {
        for (const VertexRef& v : {x, y})
            if (v.color < 0 || v.color >= g.colors() || v.index < 0 || v.index >= nu)
                throw std::invalid_argument("edge endpoint out of range");
        if (x.color == y.color) throw std::invalid_argument("edge inside color class " + std::to_string(x.color + 1));
        std::pair<int, int> px{x.color, x.index}, py{y.color, y.index};
        if (!seen.insert({std::min(px, py), std::max(px, py)}).second) throw std::invalid_argument("repeated edge");
        ++degree[x.color][x.index];
        ++degree[y.color][y.index];
    }
    const int r = degree[0][0];
    for (const auto& row : degree)
        for (int d : row)
            if (d != r) throw std::invalid_argument("graph is not regular");
    return r;
}

CliqueGadget gen_isr_from_clique(const ColoredGraph& g) {
    CliqueGadget gd;
    gd.degree = validate_graph(g);
    gd.graph = g;
    const int colors = g.colors(), nu = g.per_color(), m = static_cast<int>(g.edges.size());
    const int n = colors * gd.block_size() + 4 * m;

    auto& names = gd.inst.names;
    names.resize(n);
    for (int c = 0; c < colors; ++c) {
        std::string cs = std::to_string(c + 1);
        names[gd.s(c)] = "s_" + cs;
        names[gd.s_bar(c)] = "sb_" + cs;
        names[gd.t(c)] = "t_" + cs;
        names[gd.t_bar(c)] = "tb_" + cs;
        names[gd.u(c)] = "u_" + cs;
        names[gd.u_bar(c)] = "ub_" + cs;
        for (int i = 0; i < nu; ++i)
            for (int j = 1; j <= 4; ++j) {
                std::string suffix = cs + "_" + std::to_string(i + 1) + "_" + std::to_string(j);
                names[gd.a(c, i, j)] = "a_" + suffix;
                names[gd.a_bar(c, i, j)] = "ab_" + suffix;
            }
    }
    for (int e = 0; e < m; ++e)
        for (int j = 1; j <= 4; ++j) names[gd.edge(e, j)] = "e_" + std::to_string(e + 1) + "_" + std::to_string(j);

    // a_{e,1} for edges at each vertex, ascending edge index
    std::vector<std::vector<std::vector<AgentId>>> incident(colors, std::vector<std::vector<AgentId>>(nu));
    for (int e = 0; e < m; ++e)
        for (const VertexRef& v : {g.edges[e].first, g.edges[e].second})
            incident[v.color][v.index].push_back(gd.edge(e, 1));

    Profile p1(n);
    for (int c = 0; c < colors; ++c) {
        std::vector<AgentId> sl{gd.t(c)};
        for (int i = 0; i < nu; ++i) {
            sl.push_back(gd.a(c, i, 1));
            sl.push_back(gd.a_bar(c, i, 1));
            sl.insert(sl.end(), incident[c][i].begin(), incident[c][i].end());
        }
        p1.set_list(gd.s(c), strict_tiers(sl));
        std::vector<AgentId> sbl{gd.t_bar(c)};
        for (int i = nu - 1; i >= 0; --i) {
            sbl.push_back(gd.a(c, i, 4));
            sbl.push_back(gd.a_bar(c, i, 4));
            sbl.insert(sbl.end(), incident[c][i].begin(), incident[c][i].end());
        }
        p1.set_list(gd.s_bar(c), strict_tiers(sbl));
        p1.set_list(gd.t(c), strict_tiers({gd.s(c), gd.u(c)}));
        p1.set_list(gd.t_bar(c), strict_tiers({gd.s_bar(c), gd.u_bar(c)}));
        p1.set_list(gd.u(c), strict_tiers({gd.t(c)}));
        p1.set_list(gd.u_bar(c), strict_tiers({gd.t_bar(c)}));
        for (int i = 0; i < nu; ++i) {
            for (bool bar : {false, true}) {
                auto x = [&](int j) { return bar ? gd.a_bar(c, i, j) : gd.a(c, i, j); };
                p1.set_list(x(1), strict_tiers({x(2), gd.s(c), x(4)}));
                p1.set_list(x(2), strict_tiers({x(3), x(1)}));
                p1.set_list(x(3), strict_tiers({x(4), x(2)}));
                p1.set_list(x(4), strict_tiers({x(1), gd.s_bar(c), x(3)}));
            }
        }
    }
    for (int e = 0; e < m; ++e) {
        int lo = std::min(g.edges[e].first.color, g.edges[e].second.color);
        int hi = std::max(g.edges[e].first.color, g.edges[e].second.color);
        auto x = [&](int j) { return gd.edge(e, j); };
        p1.set_list(x(1), strict_tiers({x(2), gd.s(lo), gd.s_bar(lo), gd.s(hi), gd.s_bar(hi), x(4)}));
        p1.set_list(x(2), strict_tiers({x(3), x(1)}));
        p1.set_list(x(3), strict_tiers({x(4), x(2)}));
        p1.set_list(x(4), strict_tiers({x(1), x(3)}));
    }

    Profile p2 = p1;
    Matching m1(n);
    for (int c = 0; c < colors; ++c) {
        p2.set_list(gd.t(c), strict_tiers({gd.u(c), gd.s(c)}));
        p2.set_list(gd.t_bar(c), strict_tiers({gd.u_bar(c), gd.s_bar(c)}));
        m1.add(gd.s(c), gd.t(c));
        m1.add(gd.s_bar(c), gd.t_bar(c));
        for (int i = 0; i < nu; ++i) {
            m1.add(gd.a(c, i, 1), gd.a(c, i, 2));
            m1.add(gd.a(c, i, 3), gd.a(c, i, 4));
            m1.add(gd.a_bar(c, i, 1), gd.a_bar(c, i, 4));
            m1.add(gd.a_bar(c, i, 3), gd.a_bar(c, i, 2));
        }
    }
    for (int e = 0; e < m; ++e) {
        m1.add(gd.edge(e, 1), gd.edge(e, 4));
        m1.add(gd.edge(e, 3), gd.edge(e, 2));
    }
    gd.inst.p1 = std::move(p1);
    gd.inst.p2 = std::move(p2);
    gd.inst.m1 = std::move(m1);
    gd.inst.k = colors * (4 * nu + 5) + 4 * (m - colors * (colors - 1) / 2);
    return gd;
}

namespace {

bool endpoints_selected(const CliqueGadget& gd, int e, const std::vector<int>& sel) {
    const auto& [x, y] = gd.graph.edges[e];
    return sel[x.color] == x.index && sel[y.color] == y.index;
}

}  // namespace

Matching certify_clique_solution(const CliqueGadget& gd, const std::vector<int>& clique) {
    const int colors = gd.graph.colors(), nu = gd.graph.per_color();
    if (static_cast<int>(clique.size()) != colors) throw std::invalid_argument("clique needs one vertex per color");
    for (int h : clique)
        if (h < 0 || h >= nu) throw std::invalid_argument("clique vertex out of range");
    const int m = static_cast<int>(gd.graph.edges.size());
    int inside = 0;
    for (int e = 0; e < m; ++e) inside += endpoints_selected(gd, e, clique);
    if (inside != colors * (colors - 1) / 2) throw std::invalid_argument("selected vertices do not form a clique");

    Matching m2(gd.inst.size());
    for (int c = 0; c < colors; ++c) {
        const int h = clique[c];
        m2.add(gd.t(c), gd.u(c));
        m2.add(gd.t_bar(c), gd.u_bar(c));
        m2.add(gd.s(c), gd.a(c, h, 1));
        m2.add(gd.s_bar(c), gd.a(c, h, 4));
        m2.add(gd.a(c, h, 2), gd.a(c, h, 3));
        // barred cycle of the selected vertex stays as in M1
        m2.add(gd.a_bar(c, h, 1), gd.a_bar(c, h, 4));
        m2.add(gd.a_bar(c, h, 3), gd.a_bar(c, h, 2));
        for (int i = 0; i < nu; ++i) {
            if (i == h) continue;
            for (bool bar : {false, true}) {
                auto x = [&](int j) { return bar ? gd.a_bar(c, i, j) : gd.a(c, i, j); };
                if (i < h) {
                    m2.add(x(1), x(2));
                    m2.add(x(3), x(4));
                } else {
                    m2.add(x(1), x(4));
                    m2.add(x(3), x(2));
                }
            }
        }
    }
    for (int e = 0; e < m; ++e) {
        if (endpoints_selected(gd, e, clique)) {
            m2.add(gd.edge(e, 1), gd.edge(e, 4));
            m2.add(gd.edge(e, 3), gd.edge(e, 2));
        } else {
            m2.add(gd.edge(e, 1), gd.edge(e, 2));
            m2.add(gd.edge(e, 3), gd.edge(e, 4));
        }
    }
    return m2;
}

CharacterizationReport check_stable_characterization(const CliqueGadget& gd, const Matching& m) {
    const int colors = gd.graph.colors(), nu = gd.graph.per_color();
    const int edges = static_cast<int>(gd.graph.edges.size());
    CharacterizationReport rep;
    rep.tu_pairs = true;
    for (int c = 0; c < colors; ++c)
        rep.tu_pairs = rep.tu_pairs && m.contains(gd.t(c), gd.u(c)) && m.contains(gd.t_bar(c), gd.u_bar(c));

    auto cycle_is = [&](bool bar, int c, int i, bool first_option) {
        auto x = [&](int j) { return bar ? gd.a_bar(c, i, j) : gd.a(c, i, j); };
        return first_option ? m.contains(x(1), x(2)) && m.contains(x(3), x(4))
                            : m.contains(x(1), x(4)) && m.contains(x(3), x(2));
    };
    rep.vertex_gadget = true;
    rep.selected.assign(colors, -1);
    for (int c = 0; c < colors; ++c) {
        for (int i = 0; i < nu && rep.selected[c] < 0; ++i) {
            bool ok = m.contains(gd.s(c), gd.a(c, i, 1)) && m.contains(gd.s_bar(c), gd.a(c, i, 4)) &&
                      m.contains(gd.a(c, i, 2), gd.a(c, i, 3)) &&
                      (cycle_is(true, c, i, true) || cycle_is(true, c, i, false));
            for (int j = 0; j < nu && ok; ++j) {
                if (j < i) ok = cycle_is(false, c, j, true) && cycle_is(true, c, j, true);
                if (j > i) ok = cycle_is(false, c, j, false) && cycle_is(true, c, j, false);
            }
            if (ok) rep.selected[c] = i;
        }
        if (rep.selected[c] < 0) rep.vertex_gadget = false;
    }

    rep.edge_gadget = true;
    rep.consistency = true;
    for (int e = 0; e < edges; ++e) {
        bool split = m.contains(gd.edge(e, 1), gd.edge(e, 2)) && m.contains(gd.edge(e, 3), gd.edge(e, 4));
        bool kept = m.contains(gd.edge(e, 1), gd.edge(e, 4)) && m.contains(gd.edge(e, 3), gd.edge(e, 2));
        if (!split && !kept) rep.edge_gadget = false;
        const auto& [x, y] = gd.graph.edges[e];
        bool both = m.contains(gd.s(x.color), gd.a(x.color, x.index, 1)) &&
                    m.contains(gd.s(y.color), gd.a(y.color, y.index, 1));
        if (!both && !split) rep.consistency = false;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Forced pairs

Matching ForcedGadget::forward(const Matching& m2) const {
    Matching out(inst.size());
    for (auto [a, b] : m2.pairs()) {
        bool forced = std::any_of(replaced.begin(), replaced.end(),
                                  [&](const Pair& q) { return make_pair_sorted(q.first, q.second) == Pair{a, b}; });
        if (!forced) out.add(a, b);
    }
    for (const Pair& q : replaced)
        if (!m2.contains(q.first, q.second)) throw std::invalid_argument("M2 misses a forced pair");
    for (auto [a, b] : chain_pairs) out.add(a, b);
    return out;
}

ForcedGadget apply_forced_pair_gadget(const Instance& inst) {
    const int n = inst.size();
    if (!inst.p2.bipartite()) throw std::invalid_argument("forced-pair gadget needs a bipartite instance");
    for (auto [v, w] : inst.forced) {
        if (!inst.m1.contains(v, w)) throw std::invalid_argument("forced pair " + inst.names.at(v) + "-" +
                                                                 inst.names.at(w) + " is not in M1");
        for (const Profile* p : {&inst.p1, &inst.p2})
            if (!p->accepts(v, w) || !p->accepts(w, v))
                throw std::invalid_argument("forced pair must be acceptable in both profiles");
    }
    if (inst.k < 0) throw std::invalid_argument("negative budget");
    const int copies = inst.k + 1;
    const int q = static_cast<int>(inst.forced.size());
    const int total = n + 6 * copies * q;

    ForcedGadget gd;
    gd.original_agents = n;
    gd.replaced = inst.forced;
    Instance& out = gd.inst;
    out.names = inst.names;
    out.names.resize(total);
    out.k = inst.k;
    std::set<std::string> taken(inst.names.begin(), inst.names.end());

    enum { kLt, kLm, kLb, kRt, kRm, kRb };
    static const char* const kRoleNames[] = {"lt", "lm", "lb", "rt", "rm", "rb"};
    auto id = [&](int e, int p, int role) { return n + (e * copies + p) * 6 + role; };

    Profile p1 = grow(inst.p1, total - n), p2 = grow(inst.p2, total - n);
    std::vector<int> side = inst.p2.sides();
    side.resize(total, 0);
    for (int e = 0; e < q; ++e) {
        auto [v, w] = inst.forced[e];
        for (int p = 0; p < copies; ++p) {
            for (int role = 0; role < 6; ++role) {
                AgentId a = id(e, p, role);
                out.names[a] = fresh_name(taken, std::string(kRoleNames[role]) + "_" + inst.names[v] + "_" +
                                                     inst.names[w] + "_" + std::to_string(p + 1));
                bool left = role == kLt || role == kRm || role == kLb;
                side[a] = left ? inst.p2.side(v) : inst.p2.side(w);
            }
            const bool last = p == copies - 1;
            std::vector<std::pair<AgentId, std::vector<AgentId>>> lists{
                {id(e, p, kLt), {id(e, p, kRt), id(e, p, kLm)}},
                {id(e, p, kLm), {id(e, p, kLt), p == 0 ? v : id(e, p - 1, kRm), id(e, p, kLb)}},
                {id(e, p, kLb), {id(e, p, kLm), id(e, p, kRb)}},
                {id(e, p, kRt), {id(e, p, kRm), id(e, p, kLt)}},
                {id(e, p, kRm), {id(e, p, kRb), last ? w : id(e, p + 1, kLm), id(e, p, kRt)}},
                {id(e, p, kRb), {id(e, p, kLb), id(e, p, kRm)}},
            };
            for (const auto& [a, l] : lists) {
                p1.set_list(a, strict_tiers(l));
                p2.set_list(a, strict_tiers(l));
            }
        }
        for (Profile* p : {&p1, &p2}) {
            substitute(*p, v, w, id(e, 0, kLm));
            substitute(*p, w, v, id(e, copies - 1, kRm));
        }
        gd.chain_pairs.emplace_back(v, id(e, 0, kLm));
        gd.chain_pairs.emplace_back(id(e, copies - 1, kRm), w);
        for (int p = 0; p < copies; ++p) {
            gd.chain_pairs.emplace_back(id(e, p, kLt), id(e, p, kRt));
            gd.chain_pairs.emplace_back(id(e, p, kLb), id(e, p, kRb));
            if (p + 1 < copies) gd.chain_pairs.emplace_back(id(e, p, kRm), id(e, p + 1, kLm));
        }
    }
    p1.set_bipartition(side);
    p2.set_bipartition(side);
    out.p1 = std::move(p1);
    out.p2 = std::move(p2);
    out.m1 = Matching(total);
    for (auto [a, b] : inst.m1.pairs()) {
        bool forced = std::any_of(inst.forced.begin(), inst.forced.end(),
                                  [&](const Pair& x) { return make_pair_sorted(x.first, x.second) == Pair{a, b}; });
        if (!forced) out.m1.add(a, b);
    }
    for (auto [a, b] : gd.chain_pairs) out.m1.add(a, b);
    return gd;
}

// ---------------------------------------------------------------------------
// Forbidden pairs

Matching ForbiddenGadget::forward(const Matching& m2) const {
    Matching out(inst.size());
    for (auto [a, b] : m2.pairs()) out.add(a, b);
    for (int i = 0; i < static_cast<int>(forbidden.size()); ++i) {
        auto [v, w] = forbidden[i];
        if (m2.contains(v, w)) throw std::invalid_argument("M2 contains a forbidden pair");
        // v_i would block with lm_{i,1} unless lm_{i,1} is matched above v_i.
        const Profile& p = original_p2;
        bool v_wants_w = p.rank_raw(v, w) < p.rank_raw(v, m2.partner(v));
        for (int j = 0; j < copies; ++j) {
            if (v_wants_w) {
                out.add(agent(kLeftTop, i, j), agent(kLeftMid, i, j));
                out.add(agent(kRightTop, i, j), agent(kRightMid, i, j));
                out.add(agent(kLeftBottom, i, j), agent(kRightBottom, i, j));
            } else {
                out.add(agent(kLeftTop, i, j), agent(kRightTop, i, j));
                out.add(agent(kRightMid, i, j), agent(kRightBottom, i, j));
                out.add(agent(kLeftBottom, i, j), agent(kLeftMid, i, j));
            }
        }
    }
    return out;
}

ForbiddenGadget apply_forbidden_pairs_gadget(const Instance& inst, const std::vector<Pair>& forbidden) {
    const int n = inst.size();
    const Profile& q2 = inst.p2;
    if (!q2.bipartite()) throw std::invalid_argument("forbidden-pairs gadget needs a bipartite instance");
    if (!complete_two_sided(inst.p1) || !complete_two_sided(q2))
        throw std::invalid_argument("forbidden-pairs gadget needs complete preferences in P1 and P2");
    ForbiddenGadget gd;
    gd.original_agents = n;
    gd.forbidden = forbidden;
    gd.original_p2 = q2;
    if (forbidden.empty()) {
        gd.inst = inst;
        return gd;
    }
    const int r = static_cast<int>(forbidden.size());
    std::vector<AgentId> vs, ws;
    for (auto [v, w] : forbidden) {
        if (v < 0 || v >= n || w < 0 || w >= n) throw std::invalid_argument("forbidden pair out of range");
        if (inst.m1.contains(v, w)) throw std::invalid_argument("forbidden pair lies in M1");
        vs.push_back(v);
        ws.push_back(w);
    }
    for (AgentId v : vs)
        if (q2.side(v) != q2.side(vs[0])) throw std::invalid_argument("left endpoints must share a side");
    for (AgentId w : ws)
        if (q2.side(w) == q2.side(vs[0])) throw std::invalid_argument("right endpoints must lie on the other side");
    for (int x = 0; x < r; ++x)
        for (int i = 0; i < r; ++i)
            for (int j = i + 1; j < r; ++j)
                if (!(q2.rank_raw(ws[x], vs[i]) < q2.rank_raw(ws[x], vs[j])) ||
                    !(q2.rank_raw(vs[x], ws[i]) < q2.rank_raw(vs[x], ws[j])))
                    throw std::invalid_argument("forbidden pairs violate the nesting order");
    if (!detect_master_list(q2, vs) || !detect_master_list(q2, ws))
        throw std::invalid_argument("forbidden pair endpoints do not derive from one master list per side");

    const int s = n + 1;
    gd.copies = s;
    const int total = n + 6 * r * s;
    Instance& out = gd.inst;
    out.names = inst.names;
    out.names.resize(total);
    std::set<std::string> taken(inst.names.begin(), inst.names.end());
    static const char* const kRoleNames[] = {"flt", "flm", "flb", "frt", "frm", "frb"};
    const int left_side = q2.side(vs[0]);
    std::vector<int> side = q2.sides();
    side.resize(total, 0);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < s; ++j)
            for (int role = 0; role < 6; ++role) {
                AgentId a = gd.agent(static_cast<ForbiddenGadget::Role>(role), i, j);
                out.names[a] = fresh_name(taken, std::string(kRoleNames[role]) + "_" + std::to_string(i + 1) + "_" +
                                                     std::to_string(j + 1));
                bool left = role == ForbiddenGadget::kLeftTop || role == ForbiddenGadget::kLeftBottom ||
                            role == ForbiddenGadget::kRightMid;
                side[a] = left ? left_side : 1 - left_side;
            }

    using R = ForbiddenGadget::Role;
    auto at = [&](R role, int i, int j) { return gd.agent(role, i, j); };
    // Per role, one list shared by every copy (apart from the two ends).
    std::vector<AgentId> lt_list, lm_first, lm_rest, lb_list, rt_list, rm_rest, rm_last, rb_list;
    for (int i = 0; i < r; ++i) {
        for (int j = 0; j < s; ++j) {
            lt_list.push_back(at(R::kRightTop, i, j));
            lt_list.push_back(at(R::kLeftMid, i, j));
            lb_list.push_back(at(R::kLeftMid, i, j));
            lb_list.push_back(at(R::kRightBottom, i, j));
            rt_list.push_back(at(R::kRightMid, i, j));
            rt_list.push_back(at(R::kLeftTop, i, j));
            rb_list.push_back(at(R::kLeftBottom, i, j));
            rb_list.push_back(at(R::kRightMid, i, j));
        }
        for (int j = 1; j < s; ++j) {
            lm_rest.push_back(at(R::kLeftTop, i, j));
            lm_rest.push_back(at(R::kRightMid, i, j - 1));
            lm_rest.push_back(at(R::kLeftBottom, i, j));
        }
        for (int j = 0; j + 1 < s; ++j) {
            rm_rest.push_back(at(R::kRightBottom, i, j));
            rm_rest.push_back(at(R::kLeftMid, i, j + 1));
            rm_rest.push_back(at(R::kRightTop, i, j));
        }
        lm_first.push_back(at(R::kLeftTop, i, 0));
        lm_first.push_back(vs[i]);
        lm_first.push_back(at(R::kLeftBottom, i, 0));
        rm_last.push_back(at(R::kRightBottom, i, s - 1));
        rm_last.push_back(ws[i]);
        rm_last.push_back(at(R::kRightTop, i, s - 1));
    }

    Profile p1 = grow(inst.p1, total - n), p2 = grow(q2, total - n);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < s; ++j) {
            p2.set_list(at(R::kLeftTop, i, j), strict_tiers(lt_list));
            p2.set_list(at(R::kLeftMid, i, j), strict_tiers(j == 0 ? lm_first : lm_rest));
            p2.set_list(at(R::kLeftBottom, i, j), strict_tiers(lb_list));
            p2.set_list(at(R::kRightTop, i, j), strict_tiers(rt_list));
            p2.set_list(at(R::kRightMid, i, j), strict_tiers(j == s - 1 ? rm_last : rm_rest));
            p2.set_list(at(R::kRightBottom, i, j), strict_tiers(rb_list));
        }
    for (Profile* p : {&p1, &p2})
        for (int i = 0; i < r; ++i) {
            substitute(*p, vs[i], ws[i], at(R::kLeftMid, i, 0));
            substitute(*p, ws[i], vs[i], at(R::kRightMid, i, s - 1));
        }
    p1.set_bipartition(side);
    p2.set_bipartition(side);
    for (AgentId a = 0; a < total; ++a) {
        complete_list(p2, a);
        if (a < n) complete_list(p1, a);
    }

    out.m1 = Matching(total);
    for (auto [a, b] : inst.m1.pairs()) out.m1.add(a, b);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < s; ++j) {
            out.m1.add(at(R::kLeftTop, i, j), at(R::kLeftMid, i, j));
            out.m1.add(at(R::kRightMid, i, j), at(R::kRightBottom, i, j));
            out.m1.add(at(R::kLeftBottom, i, j), at(R::kRightTop, i, j));
        }
    // Gadget agents in P1' rank their M1' partner first; M1' is stable there.
    for (AgentId a = n; a < total; ++a) {
        std::vector<AgentId> l = p2.flat_list(a);
        AgentId mate = out.m1.partner(a);
        l.erase(std::find(l.begin(), l.end(), mate));
        l.insert(l.begin(), mate);
        p1.set_list(a, strict_tiers(l));
    }
    out.p1 = std::move(p1);
    out.p2 = std::move(p2);
    out.k = inst.k + 4 * r * s;
    return gd;
}

}  // namespace incmatch
