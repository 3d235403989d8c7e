// One PASS/FAIL line per acceptance criterion; exits 1 if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <string>

#include "generators.hpp"
#include "incmatch/incremental.hpp"
#include "incmatch/io.hpp"
#include "incmatch/routing.hpp"
#include "incmatch/structured.hpp"
#include "incmatch/ties.hpp"

using namespace incmatch;
using namespace testutil;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

int failures = 0;

void report(int id, const std::string& title, bool ok, const std::string& detail) {
    std::printf("%s %d %s: %s\n", ok ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
    std::fflush(stdout);
    failures += !ok;
}

// Runs a criterion, turning an escaping exception into a FAIL line.
void criterion(int id, const std::string& title, const std::function<std::pair<bool, std::string>()>& body) {
    try {
        auto [ok, detail] = body();
        report(id, title, ok, detail);
    } catch (const std::exception& e) {
        report(id, title, false, std::string("exception: ") + e.what());
    }
}

bool feasible(const Outcome& o, int k) { return o && o->diff <= k; }

std::string count_line(int good, int total) { return std::to_string(good) + "/" + std::to_string(total); }

// Weak master list with at most `classes` indifference classes.
Tiers master_with_classes(int n, int classes, Rng& rng) {
    auto perm = shuffled_ids(n, rng);
    std::vector<int> cuts;
    for (int i = 1; i < n; ++i) cuts.push_back(i);
    rng.shuffle(cuts);
    cuts.resize(std::min<int>(classes - 1, static_cast<int>(cuts.size())));
    std::sort(cuts.begin(), cuts.end());
    Tiers t(1);
    for (int i = 0; i < n; ++i) {
        if (std::binary_search(cuts.begin(), cuts.end(), i)) t.emplace_back();
        t.back().push_back(perm[i]);
    }
    return t;
}

bool prefers_p(const Profile& p, AgentId who, AgentId x, AgentId y) { return p.rank_raw(who, x) < p.rank_raw(who, y); }

}  // namespace

int main() {
    criterion(1, "oracle equivalence, isr-xp (200 instances, n<=8, d=1, < 60 s)", [] {
        Rng rng(1001);
        auto start = Clock::now();
        int agree = 0;
        const int total = 200;
        for (int it = 0; it < total; ++it) {
            Instance inst = random_isr(rng.uniform(2, 8), rng, 1.0, true);
            auto xp = solve_isr_xp(inst);
            auto oracle = brute_force_incremental(inst);
            agree += feasible(xp, inst.k) == feasible(oracle, inst.k) && same_outcome_value(xp, oracle);
        }
        double secs = seconds_since(start);
        char buf[120];
        std::snprintf(buf, sizeof buf, "%s agree, %.2f s", count_line(agree, total).c_str(), secs);
        return std::pair{agree == total && secs < 60.0, std::string(buf)};
    });

    criterion(2, "perfectization (100 incomplete instances, n<=8)", [] {
        Rng rng(1002);
        int good = 0;
        const int total = 100;
        for (int it = 0; it < total; ++it) {
            int n = rng.uniform(2, 8);
            Instance inst = random_isr(n, rng, 0.5, it % 2 == 0);
            auto direct = brute_force_incremental(inst);
            auto pf = perfectize(inst);
            bool ok = pf.has_value() == direct.has_value();
            if (ok && pf) {
                // A1, A2: agents single under P1's and P2's stable matchings
                auto m1_matched = matched_set(inst.p1, inst.m1);
                auto m2_matched = matched_set(inst.p2, direct->matching);
                std::vector<char> single1(n, 1), single2(n, 1);
                for (AgentId a : m1_matched) single1[a] = 0;
                for (AgentId a : m2_matched) single2[a] = 0;
                int a2_minus_a1 = 0, x = 0;
                for (AgentId a = 0; a < n; ++a) {
                    a2_minus_a1 += single2[a] && !single1[a];
                    // single after the pendant step: A1 \ A2 plus pendants of A2 \ A1
                    x += (single1[a] && !single2[a]) + (single2[a] && !single1[a]);
                }
                ok = pf->inst.k == inst.k + a2_minus_a1 + 3 * x / 2 && x % 2 == 0;
                auto lifted = brute_force_incremental(pf->inst, OracleOptions{40});
                ok = ok && lifted && lifted->diff == direct->diff + a2_minus_a1 + 3 * x / 2;
                if (ok) {
                    Matching back = pf->restrict(lifted->matching);
                    ok = is_stable(inst.p2, back) && diff_count(inst.m1, back) == direct->diff &&
                         feasible(lifted, pf->inst.k) == feasible(direct, inst.k);
                }
            }
            good += ok;
        }
        return std::pair{good == total, count_line(good, total) + " translate back with the exact budget shift"};
    });

    criterion(3, "weak master list, complete (100 instances, n<=10, <=4 classes)", [] {
        Rng rng(1003);
        int good = 0, total = 100, with_ties = 0;
        for (int it = 0; it < total; ++it) {
            int n = rng.uniform(2, 10);
            Tiers master = master_with_classes(n, rng.uniform(1, 4), rng);
            Profile p2 = derive(master, random_graph(n, 1.0, rng));
            Instance inst = with_random_m1(p2, rng);
            with_ties += !p2.is_strict();
            auto oracle = brute_force_incremental(inst);
            auto got = solve_weak_master_list_complete(inst);
            auto ml = detect_master_list(p2);
            bool ok = same_outcome_value(got, oracle) && ml.has_value();
            if (ok && got) ok = respects_class_boundaries(*ml, got->matching) && is_stable(p2, got->matching);
            good += ok;
        }
        return std::pair{good == total, count_line(good, total) + " match the oracle optimum and the class boundaries (" +
                                             std::to_string(with_ties) + " with ties)"};
    });

    criterion(4, "outlier enumeration (100 instances, n<=10, |S|<=3)", [] {
        Rng rng(1004);
        int good = 0, total = 100;
        long guesses = 0;
        for (int it = 0; it < total; ++it) {
            int n = rng.uniform(2, 10);
            int so = rng.uniform(0, std::min(3, n));
            auto ids = shuffled_ids(n, rng);
            std::vector<AgentId> outliers(ids.begin(), ids.begin() + so);
            Profile p = outlier_profile(n, outliers, rng);
            auto got = enumerate_with_outliers(p, outliers);
            bool ok = got == enumerate_stable(p);
            std::set<std::vector<Pair>> seen_guesses;
            std::set<std::vector<Pair>> seen_results;
            for_each_outlier_guess(p, outliers, [&](const std::vector<Pair>& guess, const std::optional<Matching>& m) {
                ++guesses;
                ok = ok && seen_guesses.insert(guess).second;
                if (m) ok = ok && seen_results.insert(m->pairs()).second;
            });
            ok = ok && seen_results.size() == got.size();
            good += ok;
        }
        return std::pair{good == total,
                         count_line(good, total) + " set-equal the oracle, one matching per guess over " +
                             std::to_string(guesses) + " guesses"};
    });

    criterion(5, "ism-t (100 instances, 4+4, <=2 ties of size 2)", [] {
        Rng rng(1005);
        int good = 0, total = 100, tied = 0;
        for (int it = 0; it < total; ++it) {
            Instance inst = random_ismt(4, 4, rng.uniform(0, 2), 1.0, rng);
            int ties = 0;
            for (AgentId a = 0; a < inst.size(); ++a) ties += inst.p2.tie_count(a);
            tied += ties > 0;
            auto xp = solve_ismt_xp(inst);
            auto tb = solve_ismt_tiebreak(inst);
            auto oracle = brute_force_incremental(inst);
            good += ties <= 2 && same_outcome_value(xp, oracle) && same_outcome_value(tb, oracle);
        }
        return std::pair{good == total, count_line(good, total) + " agree (" + std::to_string(tied) + " with ties)"};
    });

    criterion(6, "clique gadget on K_{2,2}", [] {
        auto gd = gen_isr_from_clique(k22());
        const Instance& inst = gd.inst;
        bool size_ok = inst.size() == 56;
        auto swaps = swap_distance(inst.p1, inst.p2);
        bool swap_ok = swaps && *swaps == 4;
        bool k_ok = inst.k == 38;
        Matching m2 = certify_clique_solution(gd, {0, 0});
        bool cert_ok = is_stable(inst.p2, m2) && diff_count(inst.m1, m2) == 38;
        Rng rng(1006);
        int agree = 0;
        for (int it = 0; it < 1000; ++it) {
            Matching base = certify_clique_solution(gd, {rng.uniform(0, 1), rng.uniform(0, 1)});
            Matching m = perturb(inst.p2, base, rng);
            agree += check_stable_characterization(gd, m).holds() == is_stable(inst.p2, m);
        }
        std::string detail = "agents " + std::to_string(inst.size()) + " (want 56" + (size_ok ? "" : ", MISMATCH") +
                             "), swap distance " + (swaps ? std::to_string(*swaps) : "inf") + ", k " +
                             std::to_string(inst.k) + ", certificate " + (cert_ok ? "stable with diff 38" : "BAD") +
                             ", characterization " + count_line(agree, 1000);
        return std::pair{size_ok && swap_ok && k_ok && cert_ok && agree == 1000, detail};
    });

    criterion(7, "forced-pair gadget (20 instances, n<=6, k<=3)", [] {
        Rng rng(1007);
        int good = 0, total = 20, feasible_seen = 0;
        for (int made = 0; made < total;) {
            Instance inst = random_forced(rng, made % 2 == 1);
            auto oracle = brute_force_incremental(inst);
            if (!oracle) continue;  // the forward construction needs an M2
            ++made;
            feasible_seen += oracle->diff <= inst.k;
            auto gd = apply_forced_pair_gadget(inst);
            Matching m2 = gd.forward(oracle->matching);
            good += inst.size() <= 6 && inst.k <= 3 && is_stable(gd.inst.p2, m2) &&
                    diff_count(gd.inst.m1, m2) == oracle->diff &&
                    tie_sizes(gd.inst.p1, gd.inst.size()) == tie_sizes(inst.p1, inst.size()) &&
                    tie_sizes(gd.inst.p2, gd.inst.size()) == tie_sizes(inst.p2, inst.size());
        }
        return std::pair{good == total, count_line(good, total) + " forward matchings stable with equal diff (" +
                                            std::to_string(feasible_seen) + " within k)"};
    });

    criterion(8, "invariant suites (500 instances, n<=8)", [] {
        Rng rng(1008);
        long rural = 0, circular = 0, bound = 0, violations = 0;
        for (int it = 0; it < 500; ++it) {
            int n = rng.uniform(2, 8);
            Instance inst = random_isr(n, rng, it % 2 ? 1.0 : 0.6, it % 3 == 0);
            auto all = enumerate_stable(inst.p2);
            for (const auto& m : all) {
                ++rural;
                violations += matched_set(inst.p2, m) != matched_set(inst.p2, all.front());
            }
            if (auto sp = stable_pairs(inst.p2))
                for (const auto& nm : all)
                    for (auto [c, d] : *sp) {
                        if (nm.contains(c, d)) continue;
                        ++circular;
                        const Profile& p = inst.p2;
                        bool first = prefers_p(p, c, nm.partner(c), d) && prefers_p(p, d, c, nm.partner(d));
                        bool second = prefers_p(p, c, d, nm.partner(c)) && prefers_p(p, d, nm.partner(d), c);
                        violations += first == second;
                    }
            auto pf = perfectize(inst);
            if (!pf) continue;
            const Instance& q = pf->inst;
            const long changed = static_cast<long>(changed_agents(q.p1, q.p2).size());
            for (const auto& m2 : enumerate_stable(q.p2, OracleOptions{40})) {
                ++bound;
                long both = 0;
                for (auto [b, c] : q.m1.pairs())
                    both += prefers_p(q.p2, b, m2.partner(b), c) && prefers_p(q.p2, c, m2.partner(c), b);
                violations += both > changed;
            }
        }
        return std::pair{violations == 0, "rural hospitals " + std::to_string(rural) + " matchings, circular " +
                                              std::to_string(circular) + " pairs, F bound " + std::to_string(bound) +
                                              " matchings, " + std::to_string(violations) + " violations"};
    });

    criterion(9, "determinism (every solver twice, byte-identical documents)", [] {
        Rng rng(1009);
        std::vector<std::pair<std::string, Instance>> cases;
        cases.push_back({"isr-xp", random_isr(7, rng, 1.0, true)});
        cases.push_back({"oracle", random_isr(6, rng, 0.7, false)});
        cases.push_back({"ism", random_ismt(4, 4, 0, 1.0, rng)});
        cases.push_back({"ismt-xp", random_ismt(4, 4, 2, 1.0, rng)});
        cases.push_back({"ismt-tiebreak", random_ismt(4, 4, 2, 1.0, rng)});
        cases.push_back({"master-strict", with_random_m1(derive(master_with_classes(7, 7, rng), random_graph(7, 1.0, rng)), rng)});
        cases.push_back({"master-weak", with_random_m1(derive(master_with_classes(8, 3, rng), random_graph(8, 1.0, rng)), rng)});
        cases.push_back({"outliers", with_random_m1(outlier_profile(7, {1, 4}, rng), rng)});
        cases.push_back({"auto", random_isr(8, rng, 1.0, true)});
        int same = 0;
        std::string mismatched;
        for (const auto& [alg, inst] : cases) {
            SolveRequest req{alg, {}, std::nullopt};
            if (alg == "outliers") req.outliers = {1, 4};
            std::string docs[2];
            for (auto& doc : docs) {
                auto r = solve(inst, req);
                doc = result_json(inst, r.outcome, r.algorithm, 0) + enumerate_json(inst, enumerate_stable(inst.p2)) +
                      serialize_instance(inst);
            }
            if (docs[0] == docs[1]) ++same;
            else mismatched += " " + alg;
        }
        auto g1 = serialize_instance(gen_isr_from_clique(k22()).inst);
        auto g2 = serialize_instance(gen_isr_from_clique(k22()).inst);
        bool gadget_same = g1 == g2;
        const int total = static_cast<int>(cases.size());
        return std::pair{same == total && gadget_same,
                         count_line(same, total) + " solvers identical, elapsed_ms pinned to 0" +
                             (gadget_same ? ", gadget output identical" : ", gadget output differs") +
                             (mismatched.empty() ? "" : "; differs:" + mismatched)};
    });

    std::printf("%d criteria failed\n", failures);
    return failures ? 1 : 0;
}
