#include <catch2/catch_amalgamated.hpp>

#include "limvote/axioms.hpp"
#include "limvote/fixtures.hpp"
#include "limvote/generators.hpp"

using namespace limvote;

namespace {

// definition-level reference: search all voter subsets directly
bool brute_jr_holds(const ElectionFrame& f, const Committee& w) {
    for (uint32_t mask = 1; mask < (1u << f.n); ++mask) {
        CandSet common;
        bool first = true;
        int size = 0;
        bool all_unrepresented = true;
        for (Voter v = 0; v < f.n; ++v) {
            if (!(mask >> v & 1)) continue;
            ++size;
            if (first) { common = f.approvals[v]; first = false; }
            else common = set_intersect(common, f.approvals[v]);
            if (intersect_count(f.approvals[v], w.members) > 0) all_unrepresented = false;
        }
        if (static_cast<int64_t>(size) * f.k >= f.n && !common.empty() && all_unrepresented)
            return false;
    }
    return true;
}

ElectionFrame random_frame(RngStream& rng, int max_n, int max_m) {
    int n = 1 + static_cast<int>(rng.below(max_n));
    int m = 2 + static_cast<int>(rng.below(max_m - 1));
    int k = 1 + static_cast<int>(rng.below(std::min(m, 4)));
    int l = 1 + static_cast<int>(rng.below(k));
    std::vector<CandSet> A(n);
    for (Voter v = 0; v < n; ++v)
        for (Cand c = 0; c < m; ++c)
            if (rng.coin(0.5)) A[v].push_back(c);
    return make_frame(n, m, k, l, Profile::from_sets(A));
}

Committee random_committee(const ElectionFrame& f, RngStream& rng) {
    CandSet pool(f.m);
    for (Cand c = 0; c < f.m; ++c) pool[c] = c;
    for (int i = 0; i < f.k; ++i) {
        int j = i + static_cast<int>(rng.below(f.m - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(f.k);
    return Committee{normalized(std::move(pool))};
}

}  // namespace

TEST_CASE("justified representation") {
    SECTION("table 8: the a-party pair is a violating witness") {
        Election e = fixtures::table8();
        Committee w{{3, 4, 5, 6}};
        auto verdict = check_jr(e.frame, w);
        REQUIRE_FALSE(verdict.holds);
        REQUIRE(verdict.witness->group == std::vector<Voter>{0, 1});
        REQUIRE(witness_verifies(e.frame, Axiom::jr, w, *verdict.witness));
    }
    SECTION("a committee covering every voter satisfies JR") {
        Election e = fixtures::table2();
        REQUIRE(check_jr(e.frame, Committee{{1, 2, 3, 4}}).holds);
    }
    SECTION("agrees with subset enumeration on random instances") {
        RngStream rng = RngStream::from(808);
        for (int round = 0; round < 150; ++round) {
            ElectionFrame f = random_frame(rng, 8, 6);
            Committee w = random_committee(f, rng);
            REQUIRE(check_jr(f, w).holds == brute_jr_holds(f, w));
        }
    }
}

TEST_CASE("EJR and PJR") {
    SECTION("table 8: both fail through the level-1 witness") {
        Election e = fixtures::table8();
        Committee w{{3, 4, 5, 6}};
        auto ejr = check_ejr(e.frame, w);
        auto pjr = check_pjr(e.frame, w);
        REQUIRE_FALSE(ejr.holds);
        REQUIRE_FALSE(pjr.holds);
        REQUIRE(witness_verifies(e.frame, Axiom::ejr, w, *ejr.witness));
        REQUIRE(witness_verifies(e.frame, Axiom::pjr, w, *pjr.witness));
    }
    SECTION("the full candidate set satisfies everything") {
        std::vector<CandSet> A{{0, 1}, {1, 2}, {0, 2}};
        ElectionFrame f = make_frame(3, 3, 3, 1, Profile::from_sets(A));
        Committee w{{0, 1, 2}};
        REQUIRE(check_ejr(f, w).holds);
        REQUIRE(check_pjr(f, w).holds);
        REQUIRE(check_jr(f, w).holds);
    }
    SECTION("party-list fast path agrees with quota arithmetic") {
        RngStream rng = RngStream::from(31337);
        for (int round = 0; round < 60; ++round) {
            int g = 1 + static_cast<int>(rng.below(3));
            std::vector<int> sizes, counts;
            int total = 0;
            for (int i = 0; i < g; ++i) {
                sizes.push_back(1 + static_cast<int>(rng.below(3)));
                counts.push_back(1 + static_cast<int>(rng.below(4)));
                total += sizes.back();
            }
            int k = 1 + static_cast<int>(rng.below(std::min(total, 4)));
            auto pl = gen_party_list(sizes, counts, k, 1, 1);
            const ElectionFrame& f = pl.election.frame;
            Committee w = random_committee(f, rng);
            // reference: per-party levels computed directly
            bool expect_ejr = true, expect_pjr = true;
            for (const auto& party : pl.structure.parties) {
                int level = std::min<int64_t>(
                    static_cast<int64_t>(party.supporters) * f.k / f.n,
                    static_cast<int64_t>(party.candidates.size()));
                int elected = intersect_count(party.candidates, w.members);
                if (elected < level) { expect_ejr = false; expect_pjr = false; }
            }
            REQUIRE(check_ejr(f, w).holds == expect_ejr);
            REQUIRE(check_pjr(f, w).holds == expect_pjr);
        }
    }
    SECTION("budget error beyond 16 voters on non-party-list profiles") {
        std::vector<CandSet> A(17);
        for (int v = 0; v < 17; ++v) A[v] = {0, (v % 3) + 1};
        ElectionFrame f = make_frame(17, 4, 2, 1, Profile::from_sets(A));
        REQUIRE_THROWS_AS(check_ejr(f, Committee{{0, 1}}), budget_exceeded);
    }
    SECTION("implication chain EJR => PJR => JR on random instances") {
        RngStream rng = RngStream::from(606);
        for (int round = 0; round < 120; ++round) {
            ElectionFrame f = random_frame(rng, 7, 6);
            Committee w = random_committee(f, rng);
            bool ejr = check_ejr(f, w).holds;
            bool pjr = check_pjr(f, w).holds;
            bool jr = check_jr(f, w).holds;
            if (ejr) REQUIRE(pjr);
            if (pjr) REQUIRE(jr);
        }
    }
    SECTION("returned witnesses always re-verify") {
        RngStream rng = RngStream::from(909);
        for (int round = 0; round < 120; ++round) {
            ElectionFrame f = random_frame(rng, 7, 6);
            Committee w = random_committee(f, rng);
            for (auto [axiom, verdict] :
                 {std::pair{Axiom::jr, check_jr(f, w)},
                  {Axiom::pjr, check_pjr(f, w)},
                  {Axiom::ejr, check_ejr(f, w)}}) {
                if (!verdict.holds) {
                    REQUIRE(verdict.witness.has_value());
                    REQUIRE(witness_verifies(f, axiom, w, *verdict.witness));
                }
            }
        }
    }
}

TEST_CASE("lower quota") {
    SECTION("example 8 quotas 4,2,2 hold for the LQ outcome") {
        ElectionFrame f = fixtures::example8_frame();
        auto det = detect_party_structure(f);
        Committee w{{0, 1, 2, 3, 6, 7, 10, 11, 12, 13}};
        REQUIRE(check_lower_quota(*det.structure, f.n, f.k, w).holds);
    }
    SECTION("a single party always meets its quota with any full committee") {
        auto pl = gen_party_list({5}, {4}, 3, 1);
        Committee w{{0, 1, 2}};
        REQUIRE(check_lower_quota(pl.structure, pl.election.frame.n, 3, w).holds);
    }
    SECTION("an all-P1 committee fails P2's quota") {
        auto pl = gen_party_list({8, 4}, {4, 3}, 8, 3);
        // AV fills the whole committee from the largest party
        Committee w = make_resolute(av_winners(pl.election.frame), TieBreakPolicy::lex());
        auto verdict = check_lower_quota(pl.structure, pl.election.frame.n, 8, w);
        REQUIRE_FALSE(verdict.holds);
        REQUIRE(verdict.witness->level == 2);
    }
    SECTION("on party-list profiles lower quota implies JR") {
        RngStream rng = RngStream::from(2718);
        for (int round = 0; round < 80; ++round) {
            int g = 1 + static_cast<int>(rng.below(3));
            std::vector<int> sizes, counts;
            int total = 0;
            for (int i = 0; i < g; ++i) {
                sizes.push_back(1 + static_cast<int>(rng.below(3)));
                counts.push_back(1 + static_cast<int>(rng.below(4)));
                total += sizes.back();
            }
            int k = 1 + static_cast<int>(rng.below(std::min(total, 4)));
            auto pl = gen_party_list(sizes, counts, k, 1, 1);
            const ElectionFrame& f = pl.election.frame;
            Committee w = random_committee(f, rng);
            if (check_lower_quota(pl.structure, f.n, f.k, w).holds)
                REQUIRE(check_jr(f, w).holds);
        }
    }
    SECTION("non-party-list input is an error") {
        REQUIRE_THROWS_AS(check_lower_quota(fixtures::table2().frame, Committee{{0, 1, 2, 3}}),
                          precondition_error);
    }
}

TEST_CASE("laminar proportionality") {
    SECTION("table 9: every LV winner fails") {
        Election e = fixtures::table9();
        for (const auto& w : lv_winners(e).materialize()) {
            auto verdict = check_laminar_proportionality(e, w);
            REQUIRE_FALSE(verdict.holds);
        }
    }
    SECTION("table 9: a proportional committee exists") {
        Election e = fixtures::table9();
        // 3 seats to each side: {c1, two of v1/v2's others} and 3 of {c2..c5}
        Committee w{{0, 5, 8, 1, 2, 3}};
        w.members = normalized(w.members);
        REQUIRE(check_laminar_proportionality(e, w).holds);
    }
    SECTION("unanimous elections accept any committee") {
        std::vector<CandSet> A{{0, 1, 2}, {0, 1, 2}};
        ElectionFrame f = make_frame(2, 3, 2, 1, Profile::from_sets(A));
        Election e{f, Profile::from_sets({{0}, {0}})};
        REQUIRE(check_laminar_proportionality(e, Committee{{0, 2}}).holds);
        REQUIRE(check_laminar_proportionality(e, Committee{{1, 2}}).holds);
    }
    SECTION("two equal parties, k = 4: only the 2+2 split passes") {
        auto pl = gen_party_list({3, 3}, {2, 2}, 4, 2);
        REQUIRE(is_laminar(pl.election.frame));
        REQUIRE(check_laminar_proportionality(pl.election, Committee{{0, 1, 3, 4}}).holds);
        REQUIRE_FALSE(check_laminar_proportionality(pl.election, Committee{{0, 1, 2, 3}}).holds);
    }
    SECTION("non-laminar input is an error") {
        REQUIRE_THROWS_AS(check_laminar_proportionality(fixtures::table2(), Committee{{0, 1, 2, 3}}),
                          precondition_error);
    }
}
