#pragma once

#include <cstdint>
#include <map>
#include <numeric>

#include "limvote/election.hpp"
#include "limvote/rational.hpp"
#include "limvote/winners.hpp"

namespace limvote {

enum class Objective { av, lv, cc, pav, sav, lcc };

inline const char* objective_name(Objective o) {
    switch (o) {
        case Objective::av: return "av";
        case Objective::lv: return "lv";
        case Objective::cc: return "cc";
        case Objective::pav: return "pav";
        case Objective::sav: return "sav";
        case Objective::lcc: return "lcc";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// tallies and scores

inline std::vector<int64_t> approval_tally(const ElectionFrame& f) {
    std::vector<int64_t> t(f.m, 0);
    auto sizes = f.approvals.group_sizes();
    for (int g = 0; g < f.approvals.group_count(); ++g)
        for (Cand c : f.approvals.group_set(g)) t[c] += sizes[g];
    return t;
}

inline std::vector<int64_t> ballot_tally(const Election& e) {
    std::vector<int64_t> t(e.frame.m, 0);
    auto sizes = e.ballots.group_sizes();
    for (int g = 0; g < e.ballots.group_count(); ++g)
        for (Cand c : e.ballots.group_set(g)) t[c] += sizes[g];
    return t;
}

inline void require_committee(const ElectionFrame& f, const Committee& w) {
    if (static_cast<int>(w.members.size()) != f.k)
        throw std::invalid_argument("committee size != k");
    if (!w.members.empty() && (w.members.front() < 0 || w.members.back() >= f.m))
        throw std::invalid_argument("committee member out of range");
}

inline int64_t av_score(const ElectionFrame& f, const Committee& w) {
    require_committee(f, w);
    int64_t s = 0;
    auto sizes = f.approvals.group_sizes();
    for (int g = 0; g < f.approvals.group_count(); ++g)
        s += static_cast<int64_t>(sizes[g]) * intersect_count(f.approvals.group_set(g), w.members);
    return s;
}

inline int64_t lv_score(const Election& e, const Committee& w) {
    require_committee(e.frame, w);
    int64_t s = 0;
    auto sizes = e.ballots.group_sizes();
    for (int g = 0; g < e.ballots.group_count(); ++g)
        s += static_cast<int64_t>(sizes[g]) * intersect_count(e.ballots.group_set(g), w.members);
    return s;
}

inline int64_t cc_score(const ElectionFrame& f, const Committee& w) {
    require_committee(f, w);
    int64_t s = 0;
    auto sizes = f.approvals.group_sizes();
    for (int g = 0; g < f.approvals.group_count(); ++g)
        if (intersect_count(f.approvals.group_set(g), w.members) > 0) s += sizes[g];
    return s;
}

inline Rat pav_score(const ElectionFrame& f, const Committee& w) {
    require_committee(f, w);
    Rat s = 0;
    auto sizes = f.approvals.group_sizes();
    for (int g = 0; g < f.approvals.group_count(); ++g)
        s += Rat(sizes[g]) * harmonic(intersect_count(f.approvals.group_set(g), w.members));
    return s;
}

// voters with empty approval sets contribute 0
inline Rat sav_score(const ElectionFrame& f, const Committee& w) {
    require_committee(f, w);
    Rat s = 0;
    auto sizes = f.approvals.group_sizes();
    for (int g = 0; g < f.approvals.group_count(); ++g) {
        const CandSet& a = f.approvals.group_set(g);
        if (a.empty()) continue;
        s += Rat(static_cast<int64_t>(sizes[g]) * intersect_count(a, w.members),
                 static_cast<int64_t>(a.size()));
    }
    return s;
}

inline int64_t lcc_score(const ElectionFrame& f, const Committee& w, int l) {
    require_committee(f, w);
    int64_t s = 0;
    auto sizes = f.approvals.group_sizes();
    for (int g = 0; g < f.approvals.group_count(); ++g)
        s += static_cast<int64_t>(sizes[g]) *
             std::min<int>(l, intersect_count(f.approvals.group_set(g), w.members));
    return s;
}

inline Rat objective_score(const ElectionFrame& f, Objective obj, const Committee& w) {
    switch (obj) {
        case Objective::av: return av_score(f, w);
        case Objective::cc: return cc_score(f, w);
        case Objective::pav: return pav_score(f, w);
        case Objective::sav: return sav_score(f, w);
        case Objective::lcc: return lcc_score(f, w, f.l);
        case Objective::lv: throw std::invalid_argument("lv needs ballots; use lv_score");
    }
    return 0;
}

// ---------------------------------------------------------------------------
// threshold winners: sort candidates by tally, lock everything above the k-th
// value, open the boundary ties. The expansion is the complete argmax set.

inline WinnerSet threshold_winners(const std::vector<int64_t>& tally, int k) {
    const int m = static_cast<int>(tally.size());
    std::vector<Cand> by_tally(m);
    std::iota(by_tally.begin(), by_tally.end(), 0);
    std::stable_sort(by_tally.begin(), by_tally.end(),
                     [&](Cand a, Cand b) { return tally[a] > tally[b]; });
    int64_t boundary = tally[by_tally[k - 1]];
    CandSet locked, tie;
    int64_t score = 0;
    for (Cand c = 0; c < m; ++c) {
        if (tally[c] > boundary) { locked.push_back(c); score += tally[c]; }
        else if (tally[c] == boundary) tie.push_back(c);
    }
    int slots = k - static_cast<int>(locked.size());
    score += boundary * slots;
    return WinnerSet::from_threshold(Rat(score), k, std::move(locked), std::move(tie), slots);
}

inline WinnerSet av_winners(const ElectionFrame& f) {
    return threshold_winners(approval_tally(f), f.k);
}

inline WinnerSet lv_winners(const Election& e) {
    return threshold_winners(ballot_tally(e), e.frame.k);
}

// ---------------------------------------------------------------------------
// optimization rules by exhaustive enumeration (exact, budget-guarded)

struct EnumBudget {
    BigInt max_subsets = 2000000;
    size_t max_winner_committees = 100000;
};

template <typename F>
inline void for_each_committee(int m, int k, F&& f) {
    std::vector<int> pick(k);
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
        CandSet members(pick.begin(), pick.end());
        f(Committee{std::move(members)});
        int i = k - 1;
        while (i >= 0 && pick[i] == m - k + i) --i;
        if (i < 0) break;
        ++pick[i];
        for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
}

inline WinnerSet enumerate_argmax(const ElectionFrame& f, Objective obj, const EnumBudget& budget) {
    if (binomial(f.m, f.k) > budget.max_subsets)
        throw budget_exceeded("instance too large: C(m,k) exceeds enumeration budget");
    std::optional<Rat> best;
    std::vector<Committee> arg;
    for_each_committee(f.m, f.k, [&](const Committee& w) {
        Rat s = objective_score(f, obj, w);
        if (!best || s > *best) {
            best = s;
            arg.clear();
        }
        if (s == *best && arg.size() < budget.max_winner_committees) arg.push_back(w);
    });
    return WinnerSet::from_list(*best, f.k, std::move(arg));
}

// Chamberlin-Courant on party-list profiles: one candidate from each of the
// min(k,g) most popular parties, remaining seats filled arbitrarily. Only the
// score and one representative are produced (schematic winner set).
inline std::optional<WinnerSet> party_list_cc_optimum(const ElectionFrame& f) {
    auto det = detect_party_structure(f);
    if (!det.is_party_list()) return std::nullopt;
    const auto& ps = *det.structure;
    int g = static_cast<int>(ps.parties.size());
    int take = std::min(f.k, g);
    Rat score = 0;
    CandSet members;
    for (int i = 0; i < take; ++i) {
        score += ps.parties[i].supporters;
        members.push_back(ps.parties[i].candidates.front());
    }
    members = normalized(std::move(members));
    for (Cand c = 0; c < f.m && static_cast<int>(members.size()) < f.k; ++c)
        if (!contains(members, c)) members.push_back(c);
    return WinnerSet::from_schematic(std::move(score), f.k, Committee{normalized(std::move(members))});
}

inline WinnerSet optimal_committees(const ElectionFrame& f, Objective obj,
                                    const EnumBudget& budget = {}) {
    if (obj == Objective::av) return av_winners(f);
    if (obj == Objective::lv) throw std::invalid_argument("lv is not an optimization objective here");
    if (binomial(f.m, f.k) <= budget.max_subsets) return enumerate_argmax(f, obj, budget);
    if (obj == Objective::cc) {
        if (auto w = party_list_cc_optimum(f)) return *w;
    }
    throw budget_exceeded("instance too large and no closed form applies");
}

// LPAV / LSAV: the base optimization rule with ballots substituted for approvals
inline WinnerSet limited_rule(const Election& e, Objective base, const EnumBudget& budget = {}) {
    if (base != Objective::pav && base != Objective::sav)
        throw std::invalid_argument("limited_rule supports pav and sav");
    ElectionFrame substituted{e.frame.n, e.frame.m, e.frame.k, e.frame.l, e.ballots};
    return enumerate_argmax(substituted, base, budget);
}

// ---------------------------------------------------------------------------
// exact min/max of a score over a winner set. Small sets are enumerated; huge
// threshold sets are handled exactly when the boundary candidates split into
// groups with identical approver sets, pairwise disjoint across groups (party
// structure) -- then a groups x slots DP applies.

struct ExtremizeBudget {
    size_t max_enumeration = 200000;
};

namespace detail {

struct TieGroups {
    // candidate counts per group; per-group voter weight, already-elected count
    std::vector<int> avail;
    std::vector<int64_t> weight;
    std::vector<int> locked_elected;
    bool valid = false;
};

inline TieGroups analyse_tie_groups(const ElectionFrame& f, const WinnerSet& ws) {
    TieGroups tg;
    // approvers of each tie candidate, as approval-profile group index pattern:
    // require every tie candidate to be approved by exactly the voters of one
    // profile group, and those groups pairwise distinct sets
    auto sizes = f.approvals.group_sizes();
    std::map<int, int> profile_group_to_tie_group;
    std::vector<int> tie_group_of_cand;
    const CandSet& tie = ws.tie_set();
    // candidate -> set of profile groups approving it
    std::vector<std::vector<int>> approving(f.m);
    for (int g = 0; g < f.approvals.group_count(); ++g)
        for (Cand c : f.approvals.group_set(g)) approving[c].push_back(g);
    int free_avail = 0;  // tie candidates approved by nobody
    for (Cand c : tie) {
        if (approving[c].empty()) { ++free_avail; continue; }
        if (approving[c].size() != 1) return tg;  // candidate shared across groups
        int pg = approving[c].front();
        auto [it, inserted] =
            profile_group_to_tie_group.emplace(pg, static_cast<int>(tg.avail.size()));
        if (inserted) {
            tg.avail.push_back(0);
            tg.weight.push_back(sizes[pg]);
            int locked_hits = intersect_count(f.approvals.group_set(pg), ws.locked());
            tg.locked_elected.push_back(locked_hits);
        }
        tg.avail[it->second] += 1;
    }
    if (free_avail > 0) {
        tg.avail.push_back(free_avail);
        tg.weight.push_back(0);
        tg.locked_elected.push_back(0);
    }
    // groups cannot share voters: each voter sits in exactly one profile group
    tg.valid = true;
    return tg;
}

template <typename MarginalFn>
inline Rat group_dp(const TieGroups& tg, int slots, bool maximize, MarginalFn&& marginal) {
    // dp[s] = best achievable over first i groups using s slots
    const Rat kNone = Rat(-1);
    std::vector<std::optional<Rat>> dp(slots + 1), next(slots + 1);
    dp[0] = Rat(0);
    for (size_t gi = 0; gi < tg.avail.size(); ++gi) {
        for (auto& x : next) x.reset();
        for (int used = 0; used <= slots; ++used) {
            if (!dp[used]) continue;
            for (int take = 0; take <= tg.avail[gi] && used + take <= slots; ++take) {
                Rat cand = *dp[used] + marginal(static_cast<int>(gi), take);
                auto& slot = next[used + take];
                if (!slot || (maximize ? cand > *slot : cand < *slot)) slot = cand;
            }
        }
        dp.swap(next);
    }
    if (!dp[slots]) throw budget_exceeded("tie structure admits no completion");
    return *dp[slots];
}

}  // namespace detail

// min/max of cc, pav, or av over all committees in a winner set
inline Rat extremize_over(const ElectionFrame& f, const WinnerSet& ws, Objective obj,
                          bool maximize, const ExtremizeBudget& budget = {}) {
    if (ws.kind() == WinnerSet::schematic)
        throw budget_exceeded("cannot extremize over a schematic winner set");
    auto direct = [&](const Committee& w) { return objective_score(f, obj, w); };
    if (ws.kind() == WinnerSet::explicit_list || ws.count() <= BigInt(budget.max_enumeration)) {
        std::optional<Rat> best;
        ws.for_each([&](const Committee& w) {
            Rat s = direct(w);
            if (!best || (maximize ? s > *best : s < *best)) best = s;
        }, budget.max_enumeration);
        return *best;
    }
    // additive objectives: pick the slots with smallest/largest per-candidate score
    if (obj == Objective::av) {
        auto tally = approval_tally(f);
        Rat base = 0;
        for (Cand c : ws.locked()) base += tally[c];
        std::vector<int64_t> vals;
        for (Cand c : ws.tie_set()) vals.push_back(tally[c]);
        std::sort(vals.begin(), vals.end());
        if (maximize) std::reverse(vals.begin(), vals.end());
        for (int i = 0; i < ws.open_slots(); ++i) base += vals[i];
        return base;
    }
    auto tg = detail::analyse_tie_groups(f, ws);
    if (!tg.valid)
        throw budget_exceeded("winner set too large and boundary lacks party structure");
    Rat base = 0;  // contribution of voters via locked candidates
    auto sizes = f.approvals.group_sizes();
    for (int g = 0; g < f.approvals.group_count(); ++g) {
        int e = intersect_count(f.approvals.group_set(g), ws.locked());
        if (obj == Objective::cc) base += (e > 0 ? Rat(sizes[g]) : Rat(0));
        else if (obj == Objective::pav) base += Rat(sizes[g]) * harmonic(e);
        else throw budget_exceeded("objective not supported for structured extremization");
    }
    auto marginal = [&](int gi, int take) -> Rat {
        int e = tg.locked_elected[gi];
        if (obj == Objective::cc)
            return (e == 0 && take > 0) ? Rat(tg.weight[gi]) : Rat(0);
        return Rat(tg.weight[gi]) * (harmonic(e + take) - harmonic(e));
    };
    return base + detail::group_dp(tg, ws.open_slots(), maximize, marginal);
}

}  // namespace limvote
