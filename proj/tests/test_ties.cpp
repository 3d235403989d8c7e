#include "doctest.h"
#include "incmatch/incremental.hpp"
#include "incmatch/ties.hpp"
#include "generators.hpp"

using namespace incmatch;
using namespace testutil;


TEST_CASE("tied agents") {
    Profile p = profile_from(3, {{{1, 2}}, {{0}}, {{0}}});
    CHECK(tied_agents(p) == std::vector<AgentId>{0});
}

TEST_CASE("linearizations") {
    SUBCASE("order and count") {
        Profile p = profile_from(4, {{{1, 2, 3}}, {{0}}, {{0}}, {{0}}});
        std::vector<std::vector<AgentId>> seen;
        for_each_linearization(p, [&](const Profile& q) {
            CHECK(q.is_strict());
            seen.push_back(q.flat_list(0));
        });
        REQUIRE(seen.size() == 6);
        CHECK(seen.front() == std::vector<AgentId>{1, 2, 3});
        CHECK(seen.back() == std::vector<AgentId>{3, 2, 1});
        CHECK(std::is_sorted(seen.begin(), seen.end()));
    }
    SUBCASE("first tie varies slowest") {
        Profile p = profile_from(4, {{{2, 3}}, {{2, 3}}, {{0, 1}}, {{0, 1}}});
        std::vector<std::pair<AgentId, AgentId>> firsts;
        for_each_linearization(p, [&](const Profile& q) { firsts.emplace_back(q.flat_list(0)[0], q.flat_list(1)[0]); });
        REQUIRE(firsts.size() == 16);
        CHECK(firsts[0] == std::pair<AgentId, AgentId>{2, 2});
        CHECK(firsts[15] == std::pair<AgentId, AgentId>{3, 3});
        CHECK(firsts[7].first == 2);
        CHECK(firsts[8].first == 3);
    }
    SUBCASE("no ties gives the profile itself") {
        Rng rng(3);
        Profile p = random_sm(3, 3, rng);
        int calls = 0;
        for_each_linearization(p, [&](const Profile& q) {
            ++calls;
            CHECK(q == p);
        });
        CHECK(calls == 1);
    }
    SUBCASE("bound") {
        Profile p = profile_from(4, {{{1, 2, 3}}, {{0}}, {{0}}, {{0}}});
        CHECK_THROWS_AS(for_each_linearization(p, [](const Profile&) {}, TiesOptions{8, 2}), ResourceLimit);
    }
    SUBCASE("a matching is weakly stable iff stable under some linearization") {
        Rng rng(4);
        for (int it = 0; it < 60; ++it) {
            Profile p = add_ties(random_sm(3, 3, rng, 0.8), 3, rng);
            std::vector<Matching> union_of;
            for_each_linearization(p, [&](const Profile& q) {
                for (auto& m : reference_stable_matchings(q)) union_of.push_back(m);
            });
            std::sort(union_of.begin(), union_of.end());
            union_of.erase(std::unique(union_of.begin(), union_of.end()), union_of.end());
            CHECK(union_of == reference_stable_matchings(p));
        }
    }
}

TEST_CASE("ism-t solvers against the oracle") {
    SUBCASE("no ties: both equal solve_ism") {
        Rng rng(7);
        for (int it = 0; it < 50; ++it) {
            Instance inst = random_ismt(3, 3, 0, 1.0, rng);
            auto base = solve_ism(inst);
            CHECK(same_outcome_value(solve_ismt_xp(inst), base));
            CHECK(same_outcome_value(solve_ismt_tiebreak(inst), base));
        }
    }
    SUBCASE("one tied woman, 3x3 complete") {
        Rng rng(8);
        for (int it = 0; it < 80; ++it) {
            Profile p1 = random_sm(3, 3, rng);
            Profile p2 = p1;
            Tiers t = p1.tiers(4);
            t[0].push_back(t[1][0]);
            t.erase(t.begin() + 1);
            p2.set_list(4, t);
            Instance inst = instance_from(p1, p2, rng, 6);
            REQUIRE(tied_agents(inst.p2) == std::vector<AgentId>{4});
            auto oracle = brute_force_incremental(inst);
            CHECK(same_outcome_value(solve_ismt_xp(inst), oracle));
            CHECK(same_outcome_value(solve_ismt_tiebreak(inst), oracle));
        }
    }
    SUBCASE("random, complete and incomplete, even and uneven sides") {
        Rng rng(9);
        for (int it = 0; it < 400; ++it) {
            int nu = rng.uniform(1, 4), nw = it % 4 == 0 ? rng.uniform(1, 4) : nu;
            Instance inst = random_ismt(nu, nw, rng.uniform(0, 3), it % 2 ? 1.0 : 0.6, rng);
            auto oracle = brute_force_incremental(inst);
            auto xp = solve_ismt_xp(inst);
            auto tb = solve_ismt_tiebreak(inst);
            REQUIRE(same_outcome_value(xp, oracle));
            REQUIRE(same_outcome_value(tb, oracle));
            if (xp) {
                CHECK(reference_stable(inst.p2, xp->matching));
                CHECK(xp->diff == diff_count(inst.m1, xp->matching));
            }
        }
    }
    SUBCASE("4x4 with two ties of size two") {
        Rng rng(10);
        for (int it = 0; it < 100; ++it) {
            Instance inst = random_ismt(4, 4, 2, 1.0, rng);
            auto oracle = brute_force_incremental(inst);
            CHECK(same_outcome_value(solve_ismt_xp(inst), oracle));
            CHECK(same_outcome_value(solve_ismt_tiebreak(inst), oracle));
        }
    }
    SUBCASE("bounds and preconditions") {
        Rng rng(11);
        Instance inst = random_ismt(4, 4, 4, 1.0, rng);
        int tied = static_cast<int>(tied_agents(inst.p2).size());
        REQUIRE(tied > 0);
        CHECK_THROWS_AS(solve_ismt_xp(inst, TiesOptions{tied - 1, 12}), ResourceLimit);
        CHECK_THROWS_AS(solve_ismt_tiebreak(inst, TiesOptions{8, 1}), ResourceLimit);
        inst.p2.clear_bipartition();
        CHECK_THROWS_AS(solve_ismt_xp(inst), std::invalid_argument);
        CHECK_THROWS_AS(solve_ismt_tiebreak(inst), std::invalid_argument);
    }
}
