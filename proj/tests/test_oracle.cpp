#include "doctest.h"
#include "support.hpp"

using namespace incmatch;
using namespace testutil;

TEST_CASE("oracle enumeration") {
    SUBCASE("odd cycle") {
        Profile p(3);
        p.set_list(0, {{1}, {2}});
        p.set_list(1, {{2}, {0}});
        p.set_list(2, {{0}, {1}});
        CHECK(enumerate_stable(p).empty());
    }
    SUBCASE("single mutual pair") {
        Profile p(2);
        p.set_list(0, {{1}});
        p.set_list(1, {{0}});
        auto all = enumerate_stable(p);
        REQUIRE(all.size() == 1);
        CHECK(all[0].pairs() == std::vector<Pair>{{0, 1}});
    }
    SUBCASE("everyone indifferent: every perfect matching of a 3+3 market") {
        Profile p(6);
        for (int m = 0; m < 3; ++m) p.set_list(m, {{3, 4, 5}});
        for (int w = 3; w < 6; ++w) p.set_list(w, {{0, 1, 2}});
        p.set_bipartition(halves(3, 3));
        auto all = enumerate_stable(p);
        CHECK(all.size() == 6);
        for (const auto& m : all) CHECK(m.pair_count() == 3);
    }
    SUBCASE("bound is an error") {
        CHECK_THROWS_AS(enumerate_stable(Profile(13)), ResourceLimit);
        CHECK_NOTHROW(enumerate_stable(Profile(13), OracleOptions{13}));
    }
    SUBCASE("matches unpruned enumeration, with and without ties") {
        Rng rng(31);
        for (int it = 0; it < 400; ++it) {
            int n = rng.uniform(1, 6);
            Profile p = random_sr(n, rng, 0.7);
            if (it % 2) {
                for (AgentId a = 0; a < n; ++a) {
                    Tiers t = p.tiers(a);
                    if (t.size() >= 2 && rng.coin(0.5)) {
                        t[0].insert(t[0].end(), t[1].begin(), t[1].end());
                        t.erase(t.begin() + 1);
                        p.set_list(a, t);
                    }
                }
            }
            REQUIRE(enumerate_stable(p) == reference_stable_matchings(p));
        }
    }
}

TEST_CASE("brute-force incremental") {
    SUBCASE("unchanged profile returns M1") {
        Rng rng(2);
        for (int it = 0; it < 50; ++it) {
            Instance inst = random_isr(6, rng, 1.0, false);
            inst.p2 = inst.p1;
            auto r = brute_force_incremental(inst);
            REQUIRE(r.has_value());
            CHECK(r->diff == 0);
            CHECK(r->matching == inst.m1);
        }
    }
    SUBCASE("P2 without stable matching") {
        Instance inst;
        inst.names = default_names(3);
        inst.p1 = Profile(3);
        inst.p1.set_list(0, {{1}, {2}});
        inst.p1.set_list(1, {{0}, {2}});
        inst.p1.set_list(2, {{0}, {1}});
        inst.m1 = Matching(3, {{0, 1}});
        inst.p2 = inst.p1;
        inst.p2.set_list(0, {{1}, {2}});
        inst.p2.set_list(1, {{2}, {0}});
        inst.p2.set_list(2, {{0}, {1}});
        CHECK_FALSE(brute_force_incremental(inst).has_value());
    }
}

TEST_CASE("circular preferences between a stable matching and stable pairs outside it") {
    Rng rng(41);
    for (int it = 0; it < 300; ++it) {
        Profile p = random_sr(rng.uniform(2, 8), rng, it % 2 ? 1.0 : 0.7);
        auto all = enumerate_stable(p);
        auto sp = stable_pairs(p);
        if (!sp) continue;
        for (const auto& nm : all)
            for (auto [c, d] : *sp) {
                if (nm.contains(c, d)) continue;
                auto pref = [&](AgentId who, AgentId x, AgentId y) { return p.rank_raw(who, x) < p.rank_raw(who, y); };
                bool first = pref(c, nm.partner(c), d) && pref(d, c, nm.partner(d));
                bool second = pref(c, d, nm.partner(c)) && pref(d, nm.partner(d), c);
                REQUIRE(first != second);
            }
    }
}
