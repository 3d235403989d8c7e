#include "incmatch/model.hpp"

#include <algorithm>

namespace incmatch {

Profile::Profile(int n)
    : n_(n),
      lists_(n),
      ranks_(static_cast<size_t>(n) * n, kNotAccepted),
      unmatched_rank_(n, 0),
      accept_count_(n, 0) {}

AgentId Profile::check(AgentId a) const {
    if (a < 0 || a >= n_) throw std::invalid_argument("unknown agent id " + std::to_string(a));
    return a;
}

void Profile::set_list(AgentId a, Tiers tiers) {
    check(a);
    for (int b = 0; b < n_; ++b) ranks_[static_cast<size_t>(a) * n_ + b] = kNotAccepted;
    int count = 0;
    Tiers cleaned;
    for (auto& tier : tiers) {
        if (tier.empty()) continue;
        std::sort(tier.begin(), tier.end());
        for (AgentId b : tier) {
            check(b);
            if (b == a) throw std::invalid_argument("agent lists itself");
            int& r = ranks_[static_cast<size_t>(a) * n_ + b];
            if (r != kNotAccepted) throw std::invalid_argument("agent listed twice");
            r = static_cast<int>(cleaned.size());
            ++count;
        }
        cleaned.push_back(std::move(tier));
    }
    unmatched_rank_[a] = static_cast<int>(cleaned.size());
    accept_count_[a] = count;
    lists_[a] = std::move(cleaned);
}

std::vector<AgentId> Profile::flat_list(AgentId a) const {
    std::vector<AgentId> out;
    for (const auto& tier : tiers(a)) out.insert(out.end(), tier.begin(), tier.end());
    return out;
}

bool Profile::accepts(AgentId a, AgentId b) const {
    check(a);
    if (b == kUnmatched) return false;
    check(b);
    return ranks_[static_cast<size_t>(a) * n_ + b] != kNotAccepted;
}

int Profile::rank(AgentId a, AgentId b) const {
    check(a);
    if (b == kUnmatched) return unmatched_rank_[a];
    check(b);
    int r = ranks_[static_cast<size_t>(a) * n_ + b];
    if (r == kNotAccepted) throw std::invalid_argument("agent not accepted");
    return r;
}

bool Profile::has_ties(AgentId a) const { return tie_count(a) > 0; }

int Profile::tie_count(AgentId a) const {
    int c = 0;
    for (const auto& t : tiers(a)) c += t.size() >= 2;
    return c;
}

int Profile::summed_tie_size(AgentId a) const {
    int c = 0;
    for (const auto& t : tiers(a))
        if (t.size() >= 2) c += static_cast<int>(t.size());
    return c;
}

bool Profile::is_strict() const {
    for (int a = 0; a < n_; ++a)
        if (has_ties(a)) return false;
    return true;
}

void Profile::set_bipartition(std::vector<int> side) {
    if (static_cast<int>(side.size()) != n_) throw std::invalid_argument("bipartition size mismatch");
    for (int s : side)
        if (s != 0 && s != 1) throw std::invalid_argument("bipartition side must be 0 or 1");
    side_ = std::move(side);
}

Matching::Matching(int n, const std::vector<Pair>& pairs) : partner_(n, kUnmatched) {
    for (auto [a, b] : pairs) add(a, b);
}

void Matching::add(AgentId a, AgentId b) {
    if (a == b) throw std::invalid_argument("agent matched to itself");
    if (partner_.at(a) != kUnmatched || partner_.at(b) != kUnmatched)
        throw std::invalid_argument("pairs of a matching must be disjoint");
    partner_[a] = b;
    partner_[b] = a;
}

void Matching::remove(AgentId a) {
    AgentId b = partner_.at(a);
    if (b == kUnmatched) return;
    partner_[a] = kUnmatched;
    partner_[b] = kUnmatched;
}

void Matching::update_to_contain(AgentId a, AgentId b) {
    remove(a);
    remove(b);
    add(a, b);
}

int Matching::pair_count() const {
    int c = 0;
    for (AgentId p : partner_) c += p != kUnmatched;
    return c / 2;
}

std::vector<Pair> Matching::pairs() const {
    std::vector<Pair> out;
    for (AgentId a = 0; a < size(); ++a)
        if (partner_[a] > a) out.emplace_back(a, partner_[a]);
    return out;
}

bool is_blocking(const Profile& p, const Matching& m, AgentId a, AgentId b) {
    if (a == b) throw std::invalid_argument("blocking pair needs two distinct agents");
    if (!p.accepts(a, b) || !p.accepts(b, a)) return false;
    if (m.partner(a) == b) return false;
    return p.rank_raw(a, b) < p.rank_raw(a, m.partner(a)) && p.rank_raw(b, a) < p.rank_raw(b, m.partner(b));
}

std::vector<Pair> blocking_pairs(const Profile& p, const Matching& m) {
    std::vector<Pair> out;
    for (AgentId a = 0; a < p.size(); ++a) {
        int ra = p.rank_raw(a, m.partner(a));
        for (const auto& tier : p.tiers(a)) {
            if (p.rank_raw(a, tier.front()) >= ra) break;
            for (AgentId b : tier)
                if (b > a && p.rank_raw(b, a) < p.rank_raw(b, m.partner(b))) out.emplace_back(a, b);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool is_stable(const Profile& p, const Matching& m) {
    for (AgentId a = 0; a < p.size(); ++a) {
        int ra = p.rank_raw(a, m.partner(a));
        for (const auto& tier : p.tiers(a)) {
            if (p.rank_raw(a, tier.front()) >= ra) break;
            for (AgentId b : tier)
                if (p.rank_raw(b, a) < p.rank_raw(b, m.partner(b))) return false;
        }
    }
    return true;
}

SymmetricDifference symmetric_difference(const Matching& a, const Matching& b) {
    SymmetricDifference out;
    auto pa = a.pairs(), pb = b.pairs();
    std::set_symmetric_difference(pa.begin(), pa.end(), pb.begin(), pb.end(), std::back_inserter(out.pairs));
    out.count = static_cast<int>(out.pairs.size());
    return out;
}

int diff_count(const Matching& a, const Matching& b) {
    int n = std::max(a.size(), b.size());
    int only = 0;
    for (AgentId x = 0; x < n; ++x) {
        AgentId pa = x < a.size() ? a.partner(x) : kUnmatched;
        AgentId pb = x < b.size() ? b.partner(x) : kUnmatched;
        if (pa > x && pa != pb) ++only;
        if (pb > x && pb != pa) ++only;
    }
    return only;
}

std::optional<long> agent_swap_distance(const Profile& p1, const Profile& p2, AgentId a) {
    auto l1 = p1.flat_list(a);
    if (p1.list_length(a) != p2.list_length(a)) return std::nullopt;
    for (AgentId b : l1)
        if (!p2.accepts(a, b)) return std::nullopt;
    long d = 0;
    for (size_t i = 0; i < l1.size(); ++i)
        for (size_t j = i + 1; j < l1.size(); ++j) {
            int s1 = p1.rank_raw(a, l1[i]) - p1.rank_raw(a, l1[j]);
            int s2 = p2.rank_raw(a, l1[i]) - p2.rank_raw(a, l1[j]);
            if ((s1 > 0) - (s1 < 0) != (s2 > 0) - (s2 < 0)) ++d;
        }
    return d;
}

std::optional<long> swap_distance(const Profile& p1, const Profile& p2) {
    if (p1.size() != p2.size()) throw std::invalid_argument("profiles over different agent sets");
    long total = 0;
    for (AgentId a = 0; a < p1.size(); ++a) {
        auto d = agent_swap_distance(p1, p2, a);
        if (!d) return std::nullopt;
        total += *d;
    }
    return total;
}

std::vector<AgentId> changed_agents(const Profile& p1, const Profile& p2) {
    std::vector<AgentId> out;
    for (AgentId a = 0; a < p1.size(); ++a)
        if (p1.tiers(a) != p2.tiers(a)) out.push_back(a);
    return out;
}

bool valid_in(const Profile& p, const Matching& m) {
    if (m.size() != p.size()) return false;
    for (auto [a, b] : m.pairs())
        if (!p.accepts(a, b) || !p.accepts(b, a)) return false;
    return true;
}

namespace {

std::string pair_name(const Instance& inst, Pair e) {
    auto nm = [&](AgentId a) {
        return a >= 0 && a < inst.size() ? inst.names[a] : "#" + std::to_string(a);
    };
    return nm(e.first) + "-" + nm(e.second);
}

void check_profile(const Instance& inst, const Profile& p, const std::string& label, std::vector<Violation>& out) {
    if (p.size() != inst.size()) {
        out.push_back({label + " covers a different agent set", label});
        return;
    }
    for (AgentId a = 0; a < p.size(); ++a)
        for (AgentId b : p.flat_list(a)) {
            if (!p.accepts(b, a))
                out.push_back({"acceptance not symmetric", label + " " + pair_name(inst, {a, b})});
            if (p.bipartite() && p.side(a) == p.side(b))
                out.push_back({"pair inside one side of the bipartition", label + " " + pair_name(inst, {a, b})});
        }
}

}  // namespace

std::vector<Violation> validate_instance(const Instance& inst) {
    std::vector<Violation> out;
    check_profile(inst, inst.p1, "P1", out);
    check_profile(inst, inst.p2, "P2", out);
    if (!out.empty()) return out;
    if (inst.p1.bipartite() != inst.p2.bipartite() || (inst.p1.bipartite() && inst.p1.sides() != inst.p2.sides()))
        out.push_back({"profiles disagree on the bipartition", "bipartition"});
    if (inst.m1.size() != inst.size()) {
        out.push_back({"initial matching covers a different agent set", "M1"});
        return out;
    }
    bool m1_ok = true;
    for (auto e : inst.m1.pairs())
        if (!inst.p1.accepts(e.first, e.second) || !inst.p1.accepts(e.second, e.first)) {
            out.push_back({"initial matching pair not mutually accepted", "M1 " + pair_name(inst, e)});
            m1_ok = false;
        }
    if (m1_ok) {
        auto bp = blocking_pairs(inst.p1, inst.m1);
        if (!bp.empty()) out.push_back({"initial matching unstable", "blocking pair " + pair_name(inst, bp.front())});
    }
    for (auto e : inst.forced)
        if (!inst.m1.contains(e.first, e.second))
            out.push_back({"forced pair not in initial matching", "forced " + pair_name(inst, e)});
    if (inst.k < 0) out.push_back({"negative budget", "k"});
    if (!swap_distance(inst.p1, inst.p2))
        out.push_back({"acceptance sets differ; swap distance is infinite", "P1/P2", false});
    return out;
}

bool has_fatal(const std::vector<Violation>& v) {
    return std::any_of(v.begin(), v.end(), [](const Violation& x) { return x.fatal; });
}

}  // namespace incmatch
