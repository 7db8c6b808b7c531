#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "limvote/election.hpp"
#include "limvote/fixtures.hpp"
#include "limvote/generators.hpp"
#include "limvote/laminar.hpp"

using namespace limvote;

namespace {

// Direct recursive-definition laminar checker over bitmasks: tries every
// unanimously approved candidate and every voter/candidate bipartition.
// Independent of the component-based recognition it certifies.
struct BruteLaminar {
    const ElectionFrame& f;
    std::map<std::tuple<uint32_t, uint32_t, int>, bool> memo;

    CandSet restrict_approvals(Voter v, uint32_t cands) const {
        CandSet out;
        for (Cand c : f.approvals[v])
            if (cands >> c & 1) out.push_back(c);
        return out;
    }

    bool unanimous(uint32_t voters, uint32_t cands) const {
        CandSet first;
        bool have = false;
        for (Voter v = 0; v < f.n; ++v) {
            if (!(voters >> v & 1)) continue;
            if (!have) { first = restrict_approvals(v, cands); have = true; }
            else if (restrict_approvals(v, cands) != first) return false;
        }
        return true;
    }

    bool laminar(uint32_t voters, uint32_t cands, int k) {
        if (k < 0) return false;
        auto key = std::make_tuple(voters, cands, k);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        bool result = false;
        if (unanimous(voters, cands)) {
            result = __builtin_popcount(cands) >= k;
        } else {
            for (Cand c = 0; c < f.m && !result; ++c) {
                if (!(cands >> c & 1)) continue;
                bool common = true;
                for (Voter v = 0; v < f.n && common; ++v)
                    if ((voters >> v & 1) && !contains(f.approvals[v], c)) common = false;
                if (!common) continue;
                uint32_t rest = cands & ~(1u << c);
                if (!unanimous(voters, rest) && laminar(voters, rest, k - 1)) result = true;
            }
            int nv = __builtin_popcount(voters);
            for (uint32_t v1 = (voters - 1) & voters; v1 && !result; v1 = (v1 - 1) & voters) {
                uint32_t v2 = voters & ~v1;
                if (!v2) continue;
                int n1 = __builtin_popcount(v1);
                if ((static_cast<int64_t>(k) * n1) % nv != 0) continue;
                int k1 = static_cast<int>(static_cast<int64_t>(k) * n1 / nv);
                for (uint32_t c1 = cands; !result; c1 = (c1 - 1) & cands) {
                    uint32_t c2 = cands & ~c1;
                    bool fits = true;
                    for (Voter v = 0; v < f.n && fits; ++v) {
                        if (!(voters >> v & 1)) continue;
                        uint32_t side = (v1 >> v & 1) ? c1 : c2;
                        for (Cand c : f.approvals[v])
                            if ((cands >> c & 1) && !(side >> c & 1)) { fits = false; break; }
                    }
                    if (fits && laminar(v1, c1, k1) && laminar(v2, c2, k - k1)) result = true;
                    if (c1 == 0) break;
                }
            }
        }
        memo.emplace(key, result);
        return result;
    }

    bool operator()() {
        return laminar((1u << f.n) - 1, (1u << f.m) - 1, f.k);
    }
};

ElectionFrame random_frame(RngStream& rng, int max_n = 6, int max_m = 6) {
    int n = 1 + static_cast<int>(rng.below(max_n));
    int m = 1 + static_cast<int>(rng.below(max_m));
    int k = 1 + static_cast<int>(rng.below(m));
    int l = 1 + static_cast<int>(rng.below(k));
    std::vector<CandSet> A(n);
    for (Voter v = 0; v < n; ++v)
        for (Cand c = 0; c < m; ++c)
            if (rng.coin(0.5)) A[v].push_back(c);
    return make_frame(n, m, k, l, Profile::from_sets(A));
}

}  // namespace

TEST_CASE("validate_election reports consistency violations") {
    SECTION("table 1 is valid") {
        REQUIRE(validate_election(fixtures::table1()).ok());
    }
    SECTION("ballot equal to the approval set is valid") {
        Election e{make_frame(1, 3, 2, 2, Profile::from_sets({{0, 1}})),
                   Profile::from_sets({{0, 1}})};
        REQUIRE(validate_election(e).ok());
    }
    SECTION("ballot outside a large approval set is flagged") {
        Election e{make_frame(1, 4, 2, 2, Profile::from_sets({{0, 1, 2}})),
                   Profile::from_sets({{0, 3}})};
        auto rep = validate_election(e);
        REQUIRE_FALSE(rep.ok());
        REQUIRE(rep.violations[0].what == "ballot not within approvals");
    }
    SECTION("small approval set must sit inside the ballot") {
        Election e{make_frame(1, 4, 3, 3, Profile::from_sets({{0}})),
                   Profile::from_sets({{1, 2, 3}})};
        auto rep = validate_election(e);
        REQUIRE_FALSE(rep.ok());
        REQUIRE(rep.violations[0].what == "approvals not within ballot");
    }
    SECTION("wrong ballot size") {
        Election e{make_frame(1, 4, 2, 2, Profile::from_sets({{0, 1, 2}})),
                   Profile::from_sets({{0}})};
        REQUIRE_FALSE(validate_election(e).ok());
    }
}

TEST_CASE("party structure detection") {
    SECTION("example 2: three parties ordered by supporters") {
        auto pl = fixtures::example2();
        auto det = detect_party_structure(pl.election.frame);
        REQUIRE(det.is_party_list());
        REQUIRE(det.structure->parties.size() == 3);
        REQUIRE(det.structure->parties[0].supporters == 4);
        REQUIRE(det.structure->parties[1].supporters == 3);
        REQUIRE(det.structure->parties[2].supporters == 2);
        REQUIRE(det.structure->parties[0].candidates.size() == 8);
    }
    SECTION("a unanimous profile is one party") {
        auto f = make_frame(4, 3, 2, 1, Profile::from_sets({{0, 1}, {0, 1}, {0, 1}, {0, 1}}));
        auto det = detect_party_structure(f);
        REQUIRE(det.is_party_list());
        REQUIRE(det.structure->parties.size() == 1);
        REQUIRE(det.structure->parties[0].supporters == 4);
    }
    SECTION("table 2 overlap yields the first witnessing pair") {
        auto det = detect_party_structure(fixtures::table2().frame);
        REQUIRE_FALSE(det.is_party_list());
        REQUIRE(det.witness->first == 0);
        REQUIRE(det.witness->second == 1);
    }
    SECTION("supporter ties break by smallest candidate id") {
        auto f = make_frame(4, 4, 2, 1,
                            Profile::from_sets({{2, 3}, {2, 3}, {0, 1}, {0, 1}}));
        auto det = detect_party_structure(f);
        REQUIRE(det.structure->parties[0].candidates == CandSet{0, 1});
    }
    SECTION("empty-approval voters are collected separately") {
        auto f = make_frame(3, 3, 2, 1, Profile::from_sets({{0, 1}, {}, {0, 1}}));
        auto det = detect_party_structure(f);
        REQUIRE(det.is_party_list());
        REQUIRE(det.structure->unaffiliated == std::vector<Voter>{1});
        REQUIRE(det.structure->party_of_voter[1] == -1);
    }
    SECTION("round trip: rebuilding from parties restores the approval multiset") {
        RngStream rng = RngStream::from(99);
        for (int round = 0; round < 50; ++round) {
            int g = 1 + static_cast<int>(rng.below(4));
            std::vector<int> sizes, counts;
            for (int i = 0; i < g; ++i) {
                sizes.push_back(1 + static_cast<int>(rng.below(4)));
                counts.push_back(1 + static_cast<int>(rng.below(5)));
            }
            int total = 0;
            for (int s : sizes) total += s;
            int k = 1 + static_cast<int>(rng.below(total));
            auto pl = gen_party_list(sizes, counts, k, 1);
            auto det = detect_party_structure(pl.election.frame);
            REQUIRE(det.is_party_list());
            std::multiset<CandSet> original, rebuilt;
            for (Voter v = 0; v < pl.election.frame.n; ++v)
                original.insert(pl.election.frame.approvals[v]);
            for (const auto& p : det.structure->parties)
                for (int i = 0; i < p.supporters; ++i) rebuilt.insert(p.candidates);
            REQUIRE(original == rebuilt);
        }
    }
}

TEST_CASE("broadcasting-order consistency") {
    BroadcastOrder ord = identity_order(6);
    SECTION("table 3 left follows the order") {
        REQUIRE(is_consistent_with_order(fixtures::table3_left(), ord));
    }
    SECTION("table 3 right does not") {
        REQUIRE_FALSE(is_consistent_with_order(fixtures::table3_right(), ord));
    }
    SECTION("ballots covering the full approval set are always consistent") {
        Election e{make_frame(2, 4, 3, 3, Profile::from_sets({{0, 1, 2}, {1, 2, 3}})),
                   Profile::from_sets({{0, 1, 2}, {1, 2, 3}})};
        REQUIRE(is_consistent_with_order(e, identity_order(4)));
    }
}

TEST_CASE("broadcasted party-list recognition") {
    SECTION("example 2 with the index order") {
        auto pl = fixtures::example2();
        REQUIRE(is_broadcasted_party_list(pl.election, pl.order));
    }
    SECTION("table 2 is not party-list") {
        REQUIRE_FALSE(is_broadcasted_party_list(fixtures::table2(), identity_order(8)));
    }
    SECTION("generated party-list elections are broadcasted by construction") {
        RngStream rng = RngStream::from(7);
        for (int round = 0; round < 30; ++round) {
            int g = 1 + static_cast<int>(rng.below(3));
            std::vector<int> sizes, counts;
            int total = 0;
            for (int i = 0; i < g; ++i) {
                sizes.push_back(1 + static_cast<int>(rng.below(4)));
                counts.push_back(1 + static_cast<int>(rng.below(4)));
                total += sizes.back();
            }
            int k = 1 + static_cast<int>(rng.below(total));
            int l = 1 + static_cast<int>(rng.below(k));
            auto pl = gen_party_list(sizes, counts, k, l, 2);
            REQUIRE(is_broadcasted_party_list(pl.election, pl.order));
        }
    }
}

TEST_CASE("laminar recognition matches the brute-force definition checker") {
    SECTION("table 9 is laminar") {
        REQUIRE(is_laminar(fixtures::table9().frame));
    }
    SECTION("unanimous frames are laminar") {
        auto f = make_frame(3, 4, 3, 2, Profile::from_sets({{0, 1, 2, 3}, {0, 1, 2, 3}, {0, 1, 2, 3}}));
        REQUIRE(is_laminar(f));
    }
    SECTION("table 3 profile: laminar exactly at k = 5") {
        for (int k = 2; k <= 6; ++k) {
            ElectionFrame f = fixtures::table3_left(k).frame;
            BruteLaminar brute{f, {}};
            bool expected = brute();
            INFO("k = " << k);
            REQUIRE(is_laminar(f) == expected);
            REQUIRE(expected == (k == 5));
        }
    }
    SECTION("random frames, n <= 6, m <= 6") {
        RngStream rng = RngStream::from(2024);
        for (int round = 0; round < 400; ++round) {
            ElectionFrame f = random_frame(rng);
            BruteLaminar brute{f, {}};
            INFO("round " << round << " n=" << f.n << " m=" << f.m << " k=" << f.k);
            REQUIRE(is_laminar(f) == brute());
        }
    }
    SECTION("generated laminar blueprints are recognized") {
        auto bp = LaminarBlueprint::make_sum(
            LaminarBlueprint::make_extend(LaminarBlueprint::make_sum(
                LaminarBlueprint::make_leaf(2, 2, 1), LaminarBlueprint::make_leaf(2, 3, 1))),
            LaminarBlueprint::make_leaf(4, 4, 3));
        ElectionFrame f = gen_laminar(bp, 1);
        REQUIRE(f.k == 6);
        REQUIRE(is_laminar(f));
        BruteLaminar brute{f, {}};
        REQUIRE(brute());
    }
}

TEST_CASE("broadcasted laminar recognition") {
    SECTION("table 3 left at k = 5") {
        REQUIRE(is_broadcasted_laminar(fixtures::table3_left(5), identity_order(6)));
    }
    SECTION("table 7's order ignores popularity") {
        REQUIRE_FALSE(is_broadcasted_laminar(fixtures::table7(), identity_order(7)));
    }
    SECTION("a unanimous party with the popularity order") {
        Election e{make_frame(2, 3, 2, 1, Profile::from_sets({{0, 1, 2}, {0, 1, 2}})),
                   Profile::from_sets({{0}, {0}})};
        REQUIRE(is_broadcasted_laminar(e, identity_order(3)));
    }
}
