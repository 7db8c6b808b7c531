#pragma once

#include "limvote/axioms.hpp"
#include "limvote/games.hpp"
#include "limvote/generators.hpp"
#include "limvote/laminar.hpp"
#include "limvote/metrics.hpp"
#include "limvote/oracle.hpp"

// The worked examples used across the test suite and the `repro` command.
// Candidate ids are zero-based in reading order of the source tables.

namespace limvote::fixtures {

inline Election table1() {
    // 6 voters, 9 candidates, k=4, l=1: four singleton votes beat a block
    // approved by everyone
    std::vector<CandSet> A, L;
    CandSet block{4, 5, 6, 7, 8};
    for (int i = 0; i < 4; ++i) {
        CandSet a = block;
        a.push_back(i);
        A.push_back(normalized(a));
        L.push_back({i});
    }
    A.push_back(block);
    L.push_back({4});
    A.push_back(block);
    L.push_back({5});
    return {make_frame(6, 9, 4, 1, Profile::from_sets(A)), Profile::from_sets(L)};
}

inline Election table2() {
    std::vector<CandSet> A{{0, 1, 2, 3, 4}, {1, 2, 3, 4}, {2, 3, 4, 5},
                           {0, 1, 2, 3},    {0, 1, 2, 3}, {4, 5, 6, 7}};
    std::vector<CandSet> L{{0, 1, 2}, {1, 2, 3}, {2, 3, 4}, {0, 1, 2}, {0, 1, 3}, {5, 6, 7}};
    return {make_frame(6, 8, 4, 3, Profile::from_sets(A)), Profile::from_sets(L)};
}

inline Election table3_left(int k = 5) {
    std::vector<CandSet> A{{0, 1, 2}, {0, 1, 2}, {0, 3, 4, 5}, {0, 3, 4}};
    std::vector<CandSet> L{{0, 1}, {0, 1}, {0, 3}, {0, 3}};
    return {make_frame(4, 6, k, 2, Profile::from_sets(A)), Profile::from_sets(L)};
}

inline Election table3_right(int k = 5) {
    std::vector<CandSet> A{{0, 1, 2}, {0, 1, 2}, {0, 3, 4, 5}, {0, 3, 4}};
    std::vector<CandSet> L{{0, 2}, {1, 2}, {4, 5}, {0, 3}};
    return {make_frame(4, 6, k, 2, Profile::from_sets(A)), Profile::from_sets(L)};
}

inline Election table4a() {
    std::vector<CandSet> A{{0, 1, 2, 3, 4}, {1, 2, 3, 4}, {2, 3, 4, 5}, {0, 1, 2, 3}};
    std::vector<CandSet> L{{0, 1, 2}, {1, 2, 3}, {2, 3, 4}, {0, 1, 2}};
    return {make_frame(4, 6, 4, 3, Profile::from_sets(A)), Profile::from_sets(L)};
}

inline Election table4b() {
    std::vector<CandSet> A{{0, 1, 2, 3}, {0, 1, 2, 3, 5}, {0, 1, 2, 3, 4}, {4, 5}};
    std::vector<CandSet> L{{0, 1, 2}, {2, 3, 5}, {2, 3, 4}, {2, 4, 5}};
    return {make_frame(4, 6, 4, 3, Profile::from_sets(A)), Profile::from_sets(L)};
}

inline Election table5() {
    std::vector<CandSet> A{{0, 1, 5, 6, 7}, {3, 6}, {7}, {2, 3, 4, 7, 8, 9}, {2, 3, 4, 7, 8, 9}};
    std::vector<CandSet> L{{0, 1, 5}, {0, 3, 6}, {0, 1, 7}, {2, 3, 4}, {2, 3, 4}};
    return {make_frame(5, 10, 5, 3, Profile::from_sets(A)), Profile::from_sets(L)};
}

inline Election table6() {
    std::vector<CandSet> A{{0, 1, 2, 3, 4}, {0, 1, 2, 3, 4}, {2, 3, 4, 5},
                           {0, 1, 2, 3},    {1, 2, 3},       {4, 5, 6, 7}};
    std::vector<CandSet> L{{0, 1, 2}, {0, 3, 4}, {2, 3, 4}, {0, 1, 2}, {1, 2, 3}, {5, 6, 7}};
    return {make_frame(6, 8, 4, 3, Profile::from_sets(A)), Profile::from_sets(L)};
}

inline Election table7() {
    std::vector<CandSet> A{{0, 1}, {0, 1}, {2, 5, 6}, {3, 5, 6}, {4, 5, 6}};
    std::vector<CandSet> L{{0}, {0}, {2}, {3}, {4}};
    return {make_frame(5, 7, 3, 1, Profile::from_sets(A)), Profile::from_sets(L)};
}

inline Election table8() {
    std::vector<CandSet> A{{0, 1, 2}, {0, 1, 2}, {3, 4, 5}, {3, 4, 5},
                           {3, 4, 5}, {6, 7, 8}, {6, 7, 8}, {6, 7, 8}};
    return {make_frame(8, 9, 4, 3, Profile::from_sets(A)), Profile::from_sets(A)};
}

inline Election table9() {
    std::vector<CandSet> A{{0, 8, 9, 10}, {0, 5, 6, 7}, {1, 2, 3, 4}, {1, 2, 3, 4}};
    return {make_frame(4, 11, 6, 4, Profile::from_sets(A)), Profile::from_sets(A)};
}

inline Election table10() {
    std::vector<CandSet> A{{0, 1, 2}, {3, 4, 5}};
    std::vector<CandSet> L{{0, 1}, {3, 4}};
    return {make_frame(2, 6, 2, 2, Profile::from_sets(A)), Profile::from_sets(L)};
}

// party a = candidates 0..5, party b = 6..11; 6 voters each
inline ElectionFrame table11_frame() {
    std::vector<std::pair<CandSet, int>> groups{{{0, 1, 2, 3, 4, 5}, 6}, {{6, 7, 8, 9, 10, 11}, 6}};
    return make_frame(12, 12, 6, 2, Profile::from_groups(groups));
}

inline Election table11() {
    auto f = table11_frame();
    std::vector<CandSet> L{{0, 1}, {0, 1}, {0, 1},  {0, 1},  {0, 1},   {0, 1},
                           {6, 7}, {6, 7}, {8, 9},  {8, 9},  {10, 11}, {10, 11}};
    return {f, Profile::from_sets(L)};
}

// the Table 11 strategies: a broadcasts one ballot, b splits three ways
inline StrategyProfile table11_strategies() {
    return {PartyStrategy{{{{0, 1}, 6}}},
            PartyStrategy{{{{6, 7}, 2}, {{8, 9}, 2}, {{10, 11}, 2}}}};
}

inline PartyListElection example2() { return gen_party_list({8, 3, 3}, {4, 3, 2}, 8, 3); }

// Example 8: l=2, k=10; parties of 3, 2, 2 voters with 6, 4, 4 candidates
inline ElectionFrame example8_frame() {
    std::vector<std::pair<CandSet, int>> groups{
        {{0, 1, 2, 3, 4, 5}, 3}, {{6, 7, 8, 9}, 2}, {{10, 11, 12, 13}, 2}};
    return make_frame(7, 14, 10, 2, Profile::from_groups(groups));
}

// Example 10: five voters, k=3, l=2; party 1 = {0,1,2} with 4 voters,
// party 2 = {3,4} with one voter
inline PartyListElection example10() { return gen_party_list({3, 2}, {4, 1}, 3, 2); }

// Example 12: ten voters behind a 100-candidate party, one voter behind a
// 5-candidate party, k=4, l=2. Ballots follow the example's conclusion
// (votes spread pairwise over four party-1 candidates), which is the profile
// realizing its reported CC-scores.
inline Election example12() {
    CandSet p1, p2;
    for (Cand c = 0; c < 100; ++c) p1.push_back(c);
    for (Cand c = 100; c < 105; ++c) p2.push_back(c);
    std::vector<std::pair<CandSet, int>> approval_groups{{p1, 10}, {p2, 1}};
    std::vector<std::pair<CandSet, int>> ballot_groups{{{0, 1}, 5}, {{2, 3}, 5}, {{100, 101}, 1}};
    return {make_frame(11, 105, 4, 2, Profile::from_groups(approval_groups)),
            Profile::from_groups(ballot_groups)};
}

// ---------------------------------------------------------------------------
// fixture replay

struct ReproItem {
    std::string name;
    std::string expected;
    std::string got;
    bool pass = false;
};

namespace detail {

inline void check(std::vector<ReproItem>& out, const std::string& name,
                  const std::string& expected, const std::string& got) {
    out.push_back({name, expected, got, expected == got});
}

template <typename T>
inline std::string str(const T& v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

inline std::string committee_str(const Committee& w) {
    std::string s = "{";
    for (size_t i = 0; i < w.members.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(w.members[i]);
    }
    return s + "}";
}

}  // namespace detail

inline std::vector<ReproItem> run_repro() {
    using detail::check;
    using detail::str;
    std::vector<ReproItem> out;

    {  // Table 1 / Example 1
        Election e = table1();
        check(out, "table1.av_score_lv_committee", "4",
              str(av_score(e.frame, Committee{{0, 1, 2, 3}})));
        check(out, "table1.av_score_av_committee", "24",
              str(av_score(e.frame, Committee{{4, 5, 6, 7}})));
        check(out, "table1.lv_winners_contains_c1_c4", "true",
              lv_winners(e).contains(Committee{{0, 1, 2, 3}}) ? "true" : "false");
        WinnerSet av = av_winners(e.frame);
        bool av_ok = av.count() == 5;
        for (const auto& w : av.materialize())
            av_ok = av_ok && is_subset(w.members, CandSet{4, 5, 6, 7, 8});
        check(out, "table1.av_winners_are_4_subsets_of_c5_c9", "true", av_ok ? "true" : "false");
        check(out, "table1.av_lex_resolute", "{4,5,6,7}",
              detail::committee_str(make_resolute(av, TieBreakPolicy::lex())));
        check(out, "table1.av_improvement", "1/6", to_fraction(av_improvement(e).value));
    }
    {  // Table 2
        Election e = table2();
        check(out, "table2.cc_score_lv", "5", str(cc_score(e.frame, Committee{{0, 1, 2, 3}})));
        check(out, "table2.cc_score_av", "6", str(cc_score(e.frame, Committee{{1, 2, 3, 4}})));
        check(out, "table2.cc_improvement", "5/6", to_fraction(cc_improvement(e).value));
        auto det = detect_party_structure(e.frame);
        check(out, "table2.not_party_list_witness", "(0,1)",
              det.is_party_list() ? "party-list"
                                  : "(" + std::to_string(det.witness->first) + "," +
                                        std::to_string(det.witness->second) + ")");
    }
    {  // Table 3
        Election left = table3_left(), right = table3_right();
        BroadcastOrder ord = identity_order(6);
        check(out, "table3.left_consistent_with_order", "true",
              is_consistent_with_order(left, ord) ? "true" : "false");
        check(out, "table3.right_consistent_with_order", "false",
              is_consistent_with_order(right, ord) ? "true" : "false");
        check(out, "table3.left_broadcasted_laminar_k5", "true",
              is_broadcasted_laminar(left, ord) ? "true" : "false");
    }
    {  // Table 4
        Election a = table4a(), b = table4b();
        check(out, "table4a.pav_av_committee", "47/6",
              to_fraction(pav_score(a.frame, Committee{{1, 2, 3, 4}})));
        check(out, "table4a.pav_lv_committee", "15/2",
              to_fraction(pav_score(a.frame, Committee{{0, 1, 2, 3}})));
        check(out, "table4a.pav_improvement", "45/47", to_fraction(pav_improvement(a).value));
        check(out, "table4b.pav_av_committee", "25/4",
              to_fraction(pav_score(b.frame, Committee{{0, 1, 2, 3}})));
        check(out, "table4b.pav_lv_committee", "20/3",
              to_fraction(pav_score(b.frame, Committee{{2, 3, 4, 5}})));
        check(out, "table4b.pav_improvement", "16/15", to_fraction(pav_improvement(b).value));
    }
    {  // Table 5: Pareto inefficiency
        Election e = table5();
        Committee lv = make_resolute(lv_winners(e), TieBreakPolicy::lex());
        check(out, "table5.lv_committee", "{0,1,2,3,4}", detail::committee_str(lv));
        auto dom = oracle::oracle_pareto_dominator(e, lv);
        check(out, "table5.pareto_dominator_found", "true", dom ? "true" : "false");
        check(out, "table5.c6_c10_dominates", "true",
              oracle::oracle_dominates(e, Committee{{5, 6, 7, 8, 9}}, lv) ? "true" : "false");
    }
    {  // Table 6: alpha-CC maximum covers everyone
        Election e = table6();
        check(out, "table6.alpha_cc_max", "6",
              to_fraction(optimal_committees(e.frame, Objective::cc).score()));
        check(out, "table6.pav_pick", "{1,2,3,4}",
              detail::committee_str(make_resolute(optimal_committees(e.frame, Objective::pav),
                                                  TieBreakPolicy::lex())));
        check(out, "table6.lpav_pick", "{0,1,2,3}",
              detail::committee_str(make_resolute(limited_rule(e, Objective::pav),
                                                  TieBreakPolicy::lex())));
    }
    {  // Table 7: laminar profile with a popularity-ignoring order
        Election e = table7();
        BroadcastOrder ord = identity_order(7);
        auto rep = laminar_cc_check(e, ord);
        check(out, "table7.preconditions_fail", "false", rep.preconditions_ok ? "true" : "false");
        check(out, "table7.cc_improvement", "4/5", to_fraction(rep.report.value));
    }
    {  // Table 8: justified representation fails
        Election e = table8();
        Committee w{{3, 4, 5, 6}};
        auto jr = check_jr(e.frame, w);
        std::string witness = jr.holds || !jr.witness ? "none"
                              : "{" + std::to_string(jr.witness->group[0]) + "," +
                                    std::to_string(jr.witness->group[1]) + "}";
        check(out, "table8.jr_fails", "false", jr.holds ? "true" : "false");
        check(out, "table8.jr_witness", "{0,1}", witness);
        check(out, "table8.pjr_fails", "false", check_pjr(e.frame, w).holds ? "true" : "false");
        check(out, "table8.ejr_fails", "false", check_ejr(e.frame, w).holds ? "true" : "false");
    }
    {  // Table 9: laminar instance, LV outcome not laminar proportional
        Election e = table9();
        check(out, "table9.is_laminar", "true", is_laminar(e.frame) ? "true" : "false");
        Committee w{{0, 1, 2, 3, 4, 5}};
        check(out, "table9.lv_winners_contain_shown", "true",
              lv_winners(e).contains(w) ? "true" : "false");
        check(out, "table9.laminar_proportional", "false",
              is_laminar_proportional(e, w) ? "true" : "false");
    }
    {  // Table 10: non-resolute laminar election breaking the bound
        Election e = table10();
        check(out, "table10.cc_improvement", "1/2", to_fraction(cc_improvement(e).value));
    }
    {  // Table 11 / Example 5: one broadcast against a three-way split
        auto game = make_lv_game(table11_frame());
        auto outcome = game_outcome(game, table11_strategies());
        check(out, "table11.utility_a", "2", str(outcome.utilities[0]));
        check(out, "table11.utility_b", "4", str(outcome.utilities[1]));
    }
    {  // Example 2
        auto pl = example2();
        check(out, "example2.broadcasted_party_list", "true",
              is_broadcasted_party_list(pl.election, pl.order) ? "true" : "false");
        check(out, "example2.lv_lex_committee", "{0,1,2,8,9,10,11,12}",
              detail::committee_str(make_resolute(lv_winners(pl.election), TieBreakPolicy::lex())));
        auto cf = closed_form_cc_improvement_bpl(pl.structure, pl.election.frame.m, 8, 3);
        check(out, "example2.closed_form_cc", "9/4", to_fraction(cf.value));
        check(out, "example2.direct_cc", "9/4",
              to_fraction(cc_improvement(pl.election).value));
    }
    {  // Example 7: lower-quota strategies are an exact Nash equilibrium
        auto game = make_lv_game(table11_frame());
        StrategyProfile lq{lq_strategy(game, 0), lq_strategy(game, 1)};
        auto outcome = game_outcome(game, lq);
        check(out, "example7.utilities", "3,3",
              str(outcome.utilities[0]) + "," + str(outcome.utilities[1]));
        check(out, "example7.quota_gap", "0", str(quota_gap(game)));
        check(out, "example7.nash", "true",
              verify_equilibrium(game, lq, 0).holds ? "true" : "false");
    }
    {  // Example 8: 2-Nash but not 1-Nash
        auto game = make_lv_game(example8_frame());
        check(out, "example8.quotas", "4,2,2",
              str(lower_quota(game, 0)) + "," + str(lower_quota(game, 1)) + "," +
                  str(lower_quota(game, 2)));
        check(out, "example8.quota_gap", "2", str(quota_gap(game)));
        StrategyProfile lq{lq_strategy(game, 0), lq_strategy(game, 1), lq_strategy(game, 2)};
        check(out, "example8.lq_utilities", "4,2,2",
              str(game_outcome(game, lq).utilities[0]) + "," +
                  str(game_outcome(game, lq).utilities[1]) + "," +
                  str(game_outcome(game, lq).utilities[2]));
        check(out, "example8.not_nash", "false",
              verify_equilibrium(game, lq, 0).holds ? "true" : "false");
        check(out, "example8.not_1_nash", "false",
              verify_equilibrium(game, lq, 1).holds ? "true" : "false");
        check(out, "example8.2_nash", "true",
              verify_equilibrium(game, lq, 2).holds ? "true" : "false");
    }
    {  // Example 10: LPAV splits representation two plus one
        auto pl = example10();
        auto lpav = limited_rule(pl.election, Objective::pav);
        bool split_ok = true;
        for (const auto& w : lpav.materialize()) {
            split_ok = split_ok && intersect_count(w.members, CandSet{0, 1, 2}) == 2 &&
                       intersect_count(w.members, CandSet{3, 4}) == 1;
        }
        check(out, "example10.lpav_split_2_plus_1", "true", split_ok ? "true" : "false");
        Committee pav = make_resolute(optimal_committees(pl.election.frame, Objective::pav),
                                      TieBreakPolicy::lex());
        check(out, "example10.pav_all_from_p1", "{0,1,2}", detail::committee_str(pav));
    }
    {  // Example 12: LSAV recovers diversity that SAV destroys
        Election e = example12();
        EnumBudget wide;
        wide.max_subsets = 8000000;
        WinnerSet sav = optimal_committees(e.frame, Objective::sav, wide);
        Rat sav_cc = extremize_over(e.frame, sav, Objective::cc, true);
        WinnerSet lsav = limited_rule(e, Objective::sav, wide);
        Rat lsav_cc = extremize_over(e.frame, lsav, Objective::cc, false);
        check(out, "example12.sav_cc", "1", to_fraction(sav_cc));
        check(out, "example12.lsav_cc", "10", to_fraction(lsav_cc));
    }
    {  // guarantee and closed-form numeric checks
        check(out, "cc_guarantee.k4_l2", "1/2", to_fraction(cc_guarantee_bpl(4, 2)));
        check(out, "cc_guarantee.k6_l4", "1/3", to_fraction(cc_guarantee_bpl(6, 4)));
        check(out, "cc_guarantee.l1", "1", to_fraction(cc_guarantee_bpl(5, 1)));
        auto pl = gen_party_list({8, 5}, {5, 3}, 8, 5);
        Rat cf = closed_form_pav_improvement_bpl(pl.structure, pl.election.frame.m, 8, 5);
        Rat expected = (Rat(5) * harmonic(5) + Rat(3) * harmonic(3)) / (Rat(5) * harmonic(8));
        check(out, "pav_closed_form.half_plus_one_limit", to_fraction(expected), to_fraction(cf));
    }
    {  // Example 1 generalized family
        for (int n : {2, 6, 20}) {
            Election e = worst_case_family(FamilyKind::av_guarantee, n, std::min(4, n), 1);
            check(out, "family.av_guarantee_n" + std::to_string(n), "1/" + std::to_string(n),
                  to_fraction(av_improvement(e).value));
        }
    }
    return out;
}

}  // namespace limvote::fixtures
