#pragma once

#include <optional>
#include <string>

#include "limvote/election.hpp"
#include "limvote/laminar.hpp"
#include "limvote/rational.hpp"
#include "limvote/rules.hpp"
#include "limvote/winners.hpp"

namespace limvote {

struct undefined_ratio_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ImpMetric { cc, pav, av };
enum class ImpMode { irresolute, resolute };

struct ImprovementReport {
    ImpMetric metric{};
    ImpMode mode{};
    Rat value;             // lv_committee_score / reference_score
    Rat lv_committee_score;
    Rat reference_score;
    // resolute mode only
    std::optional<uint64_t> tiebreak_seed;
    std::optional<Committee> lv_pick, av_pick;
};

namespace detail {

inline Rat metric_of(const ElectionFrame& f, ImpMetric metric, const Committee& w) {
    switch (metric) {
        case ImpMetric::cc: return cc_score(f, w);
        case ImpMetric::pav: return pav_score(f, w);
        case ImpMetric::av: return av_score(f, w);
    }
    return 0;
}

inline Objective metric_objective(ImpMetric metric) {
    switch (metric) {
        case ImpMetric::cc: return Objective::cc;
        case ImpMetric::pav: return Objective::pav;
        case ImpMetric::av: return Objective::av;
    }
    return Objective::cc;
}

inline ImprovementReport improvement(const Election& e, ImpMetric metric, ImpMode mode,
                                     const TieBreakPolicy& policy,
                                     const ExtremizeBudget& budget) {
    ImprovementReport rep;
    rep.metric = metric;
    rep.mode = mode;
    WinnerSet lv = lv_winners(e);
    WinnerSet av = av_winners(e.frame);
    if (mode == ImpMode::irresolute) {
        rep.lv_committee_score = extremize_over(e.frame, lv, metric_objective(metric), false, budget);
        rep.reference_score = extremize_over(e.frame, av, metric_objective(metric), true, budget);
    } else {
        // tie-break seeds are decorrelated between the two rules
        Committee wl = make_resolute(lv, policy.mode == TieBreakPolicy::seeded_random
                                             ? TieBreakPolicy::random(policy.seed * 2 + 1)
                                             : policy);
        Committee wa = make_resolute(av, policy.mode == TieBreakPolicy::seeded_random
                                             ? TieBreakPolicy::random(policy.seed * 2 + 2)
                                             : policy);
        rep.lv_committee_score = metric_of(e.frame, metric, wl);
        rep.reference_score = metric_of(e.frame, metric, wa);
        rep.lv_pick = wl;
        rep.av_pick = wa;
        if (policy.mode == TieBreakPolicy::seeded_random) rep.tiebreak_seed = policy.seed;
    }
    if (rep.reference_score == 0)
        throw undefined_ratio_error("reference committee score is zero; improvement undefined");
    rep.value = rep.lv_committee_score / rep.reference_score;
    return rep;
}

}  // namespace detail

inline ImprovementReport cc_improvement(const Election& e, ImpMode mode = ImpMode::irresolute,
                                        const TieBreakPolicy& policy = TieBreakPolicy::lex(),
                                        const ExtremizeBudget& budget = {}) {
    return detail::improvement(e, ImpMetric::cc, mode, policy, budget);
}

inline ImprovementReport pav_improvement(const Election& e, ImpMode mode = ImpMode::irresolute,
                                         const TieBreakPolicy& policy = TieBreakPolicy::lex(),
                                         const ExtremizeBudget& budget = {}) {
    return detail::improvement(e, ImpMetric::pav, mode, policy, budget);
}

inline ImprovementReport av_improvement(const Election& e, ImpMode mode = ImpMode::irresolute,
                                        const TieBreakPolicy& policy = TieBreakPolicy::lex(),
                                        const ExtremizeBudget& budget = {}) {
    return detail::improvement(e, ImpMetric::av, mode, policy, budget);
}

// min LV CC-score over the guarantee denominator: the best committee overall
inline Rat cc_ratio_vs_optimum(const Election& e, const EnumBudget& enum_budget = {},
                               const ExtremizeBudget& ext_budget = {}) {
    Rat lv_min = extremize_over(e.frame, lv_winners(e), Objective::cc, false, ext_budget);
    Rat best = optimal_committees(e.frame, Objective::cc, enum_budget).score();
    if (best == 0) throw undefined_ratio_error("optimal CC-score is zero");
    return lv_min / best;
}

// ---------------------------------------------------------------------------
// closed forms on broadcasted party-list elections

// Preconditions shared by the closed forms. They capture the generic case the
// formulas describe: distinct supporter counts (so boundary ties never mix
// parties), enough candidates per party (no ballot padding), and enough
// unapproved filler candidates when the voted candidates cannot fill the
// committee.
inline std::optional<std::string> cc_closed_form_preconditions(const PartyStructure& p, int m_total, int k,
                                                     int l) {
    const int g = static_cast<int>(p.parties.size());
    if (g == 0) return "no parties";
    if (!p.unaffiliated.empty()) return "unaffiliated voters present";
    for (int i = 0; i + 1 < g; ++i)
        if (p.parties[i].supporters == p.parties[i + 1].supporters)
            return "tied supporter counts";
    for (int i = 0; i < g; ++i)
        if (static_cast<int>(p.parties[i].candidates.size()) < l)
            return "party " + std::to_string(i + 1) + " has fewer than l candidates";
    int64_t voted = static_cast<int64_t>(g) * l;
    if (voted < k && m_total - p.total_party_candidates() < k - voted)
        return "not enough unapproved filler candidates";
    return std::nullopt;
}

struct ClosedFormCc {
    Rat value;              // the formula as written: denominator over fully absorbed parties
    bool quarantined;       // AV actually reaches party s+1: denominators differ
    int s;                  // largest t with sum of first t party sizes <= k
    Rat numerator;
    Rat denominator;        // verbatim: n_1 + ... + n_s
    Rat corrected_denominator;  // + n_{s+1} when quarantined
    Rat corrected_value;
};

inline ClosedFormCc closed_form_cc_improvement_bpl(const PartyStructure& p, int m_total, int k,
                                                   int l) {
    if (auto why = cc_closed_form_preconditions(p, m_total, k, l))
        throw precondition_error("cc closed form preconditions: " + *why);
    const int g = static_cast<int>(p.parties.size());
    ClosedFormCc out;
    int lv_parties = std::min((k + l - 1) / l, g);
    out.numerator = 0;
    for (int i = 0; i < lv_parties; ++i) out.numerator += p.parties[i].supporters;
    int s = 0;
    int64_t size_sum = 0;
    while (s < g && size_sum + static_cast<int64_t>(p.parties[s].candidates.size()) <= k) {
        size_sum += static_cast<int64_t>(p.parties[s].candidates.size());
        ++s;
    }
    out.s = s;
    out.denominator = 0;
    for (int i = 0; i < s; ++i) out.denominator += p.parties[i].supporters;
    out.quarantined = (size_sum < k) && (s < g);
    out.corrected_denominator = out.denominator;
    if (out.quarantined) out.corrected_denominator += p.parties[s].supporters;
    out.value = out.denominator == 0 ? Rat(0) : out.numerator / out.denominator;
    out.corrected_value = out.numerator / out.corrected_denominator;
    return out;
}

inline std::optional<std::string> pav_closed_form_preconditions(const PartyStructure& p, int m_total, int k,
                                                      int l) {
    if (auto why = cc_closed_form_preconditions(p, m_total, k, l)) return why;
    if (static_cast<int>(p.parties[0].candidates.size()) < k)
        return "largest party has fewer than k candidates";
    return std::nullopt;
}

// PAV closed form. Under |P_1| >= k the AV committee sits inside P_1, so the
// denominator reduces to n_1 * H(k).
inline Rat closed_form_pav_improvement_bpl(const PartyStructure& p, int m_total, int k, int l) {
    if (auto why = pav_closed_form_preconditions(p, m_total, k, l))
        throw precondition_error("pav closed form preconditions: " + *why);
    const int g = static_cast<int>(p.parties.size());
    Rat num = 0;
    int full = std::min(k / l, g);
    for (int i = 0; i < full; ++i) num += Rat(p.parties[i].supporters) * harmonic(l);
    int ceil_kl = (k + l - 1) / l;
    if (k % l != 0 && g >= ceil_kl)
        num += Rat(p.parties[ceil_kl - 1].supporters) * harmonic(k % l);
    Rat den = Rat(p.parties[0].supporters) * harmonic(k);
    return num / den;
}

// the worst-case CC ratio over broadcasted party-list elections at ballot limit l
inline Rat cc_guarantee_bpl(int k, int l) {
    if (!(1 <= l && l <= k)) throw std::invalid_argument("cc_guarantee_bpl requires 1 <= l <= k");
    return Rat((k + l - 1) / l, k);
}

// minimized over l (attained at l = k)
inline Rat cc_guarantee_bpl_overall(int k) { return Rat(1, k); }

// ---------------------------------------------------------------------------
// worst-case families

enum class FamilyKind { av_guarantee, cc_guarantee, cc_guarantee_bpl };

// av_guarantee: the examples where a handful of coordinated singleton votes
//   beat a universally approved block. size_param = number of voters; needs
//   size_param >= k, l = 1.
// cc_guarantee: two groups, a k-sized block W held by |S| = 2k/l coordinated
//   voters (pairs of identical ballots) against a large unanimous group X with
//   one vote per candidate. size_param = |X|; needs l | k.
// cc_guarantee_bpl: k parties of l candidates, the first ceil(k/l) with
//   size_param+1 supporters, the rest with size_param.
inline Election worst_case_family(FamilyKind kind, int64_t size_param, int k, int l) {
    if (size_param < 1) throw std::invalid_argument("size_param must be >= 1");
    switch (kind) {
        case FamilyKind::av_guarantee: {
            const int n = static_cast<int>(size_param);
            if (l != 1) throw precondition_error("av-guarantee family requires l = 1");
            if (n < k) throw precondition_error("av-guarantee family requires n >= k");
            const int block = std::max(k + 1, n - k);
            const int m = k + block;
            std::vector<CandSet> A(n), L(n);
            CandSet block_set;
            for (int c = k; c < m; ++c) block_set.push_back(c);
            for (int i = 0; i < n; ++i) {
                if (i < k) {
                    A[i] = block_set;
                    A[i].push_back(i);
                    A[i] = normalized(std::move(A[i]));
                    L[i] = {i};
                } else {
                    A[i] = block_set;
                    L[i] = {k + (i - k)};
                }
            }
            return Election{make_frame(n, m, k, l, Profile::from_sets(A)),
                            Profile::from_sets(L)};
        }
        case FamilyKind::cc_guarantee: {
            if (k % l != 0) throw precondition_error("cc-guarantee family requires l | k");
            const int s = 2 * k / l;
            const int64_t x = size_param;
            const int64_t y = x * l;  // every X ballot disjoint, one vote per candidate
            const int m = static_cast<int>(k + y);
            const int n = static_cast<int>(s + x);
            CandSet w_set, y_set;
            for (int c = 0; c < k; ++c) w_set.push_back(c);
            for (int c = k; c < m; ++c) y_set.push_back(c);
            std::vector<std::pair<CandSet, int>> approval_groups{{w_set, s}, {y_set, static_cast<int>(x)}};
            Profile approvals = Profile::from_groups(approval_groups);
            std::vector<std::pair<CandSet, int>> ballot_groups;
            for (int pair = 0; pair < s / 2; ++pair) {
                CandSet b;
                for (int j = 0; j < l; ++j) b.push_back(pair * l + j);
                ballot_groups.push_back({std::move(b), 2});
            }
            for (int64_t i = 0; i < x; ++i) {
                CandSet b;
                for (int j = 0; j < l; ++j) b.push_back(static_cast<Cand>(k + i * l + j));
                ballot_groups.push_back({std::move(b), 1});
            }
            return Election{make_frame(n, m, k, l, std::move(approvals)),
                            Profile::from_groups(ballot_groups)};
        }
        case FamilyKind::cc_guarantee_bpl: {
            const int64_t x = size_param;
            const int ceil_kl = (k + l - 1) / l;
            const int m = k * l;
            std::vector<std::pair<CandSet, int>> groups;
            int64_t n = 0;
            for (int i = 0; i < k; ++i) {
                CandSet party;
                for (int j = 0; j < l; ++j) party.push_back(i * l + j);
                int64_t supporters = (i < ceil_kl) ? x + 1 : x;
                groups.push_back({std::move(party), static_cast<int>(supporters)});
                n += supporters;
            }
            Profile approvals = Profile::from_groups(groups);
            // with |P_i| = l, every voter votes the whole party block
            return Election{make_frame(static_cast<int>(n), m, k, l, approvals), approvals};
        }
    }
    throw std::invalid_argument("unknown family kind");
}

// ---------------------------------------------------------------------------
// laminar CC check: broadcasted laminar elections with resolute rules and
// full-length approvals never lose coverage (improvement >= 1)

struct LaminarCcReport {
    bool preconditions_ok = false;
    std::string reason;       // why preconditions failed
    ImprovementReport report; // irresolute improvement either way
    bool alarm = false;       // preconditions held yet value < 1
};

inline LaminarCcReport laminar_cc_check(const Election& e, const BroadcastOrder& ord,
                                        const ExtremizeBudget& budget = {}) {
    LaminarCcReport out;
    if (!is_broadcasted_laminar(e, ord)) {
        out.reason = "not a broadcasted laminar election";
    } else if (!lv_winners(e).is_singleton() || !av_winners(e.frame).is_singleton()) {
        out.reason = "LV or AV is not resolute";
    } else {
        bool full = true;
        for (Voter v = 0; v < e.frame.n; ++v)
            if (static_cast<int>(e.frame.approvals[v].size()) < e.frame.l) full = false;
        if (!full) out.reason = "a voter approves fewer than l candidates";
        else out.preconditions_ok = true;
    }
    out.report = cc_improvement(e, ImpMode::irresolute, TieBreakPolicy::lex(), budget);
    out.alarm = out.preconditions_ok && out.report.value < 1;
    return out;
}

}  // namespace limvote
