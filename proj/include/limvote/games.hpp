#pragma once

#include "limvote/election.hpp"
#include "limvote/rules.hpp"

namespace limvote {

// The strategic game on a party-list frame: players are the parties, a
// strategy distributes the party's n_i ballots (size l each) over candidate
// sets, the outcome is LV on the induced ballot profile, and utilities are
// pessimistic seat counts over tied committees.
struct LVGame {
    ElectionFrame frame;
    PartyStructure parties;

    int party_count() const { return static_cast<int>(parties.parties.size()); }
};

inline LVGame make_lv_game(const ElectionFrame& f) {
    auto det = detect_party_structure(f);
    if (!det.is_party_list()) throw precondition_error("LV-game requires a party-list frame");
    if (!det.structure->unaffiliated.empty())
        throw precondition_error("LV-game requires every voter to support a party");
    return LVGame{f, std::move(*det.structure)};
}

struct BallotCount {
    CandSet ballot;  // exactly l distinct candidates
    int count = 0;   // voters casting it
};

struct PartyStrategy {
    std::vector<BallotCount> pairs;

    int total_voters() const {
        int s = 0;
        for (const auto& bc : pairs) s += bc.count;
        return s;
    }
};

using StrategyProfile = std::vector<PartyStrategy>;

inline void validate_strategy(const LVGame& g, int party, const PartyStrategy& s) {
    if (party < 0 || party >= g.party_count()) throw std::invalid_argument("party index out of range");
    if (s.total_voters() != g.parties.parties[party].supporters)
        throw std::invalid_argument("strategy multiplicities must sum to the party's voter count");
    for (const auto& bc : s.pairs) {
        if (bc.count < 1) throw std::invalid_argument("ballot multiplicity must be positive");
        if (static_cast<int>(bc.ballot.size()) != g.frame.l)
            throw std::invalid_argument("ballot size != l");
        if (!is_sorted_unique(bc.ballot) || bc.ballot.front() < 0 || bc.ballot.back() >= g.frame.m)
            throw std::invalid_argument("ballot must list distinct candidates of the frame");
    }
}

// per-candidate vote counts a strategy profile induces
inline std::vector<int64_t> strategy_tally(const LVGame& g, const StrategyProfile& s) {
    if (static_cast<int>(s.size()) != g.party_count())
        throw std::invalid_argument("strategy profile must cover every party");
    std::vector<int64_t> tally(g.frame.m, 0);
    for (int i = 0; i < g.party_count(); ++i) {
        validate_strategy(g, i, s[i]);
        for (const auto& bc : s[i].pairs)
            for (Cand c : bc.ballot) tally[c] += bc.count;
    }
    return tally;
}

namespace detail {

// pessimistic |W cap P| over all k-committees of the tally's winner set,
// computed from the threshold structure -- no committee enumeration
inline int64_t pessimistic_seats(const std::vector<int64_t>& tally, int k, const CandSet& party) {
    WinnerSet ws = threshold_winners(tally, k);
    int64_t locked_own = intersect_count(ws.locked(), party);
    int64_t tie_other = static_cast<int64_t>(ws.tie_set().size()) -
                        intersect_count(ws.tie_set(), party);
    return locked_own + std::max<int64_t>(0, ws.open_slots() - tie_other);
}

inline int64_t optimistic_seats(const std::vector<int64_t>& tally, int k, const CandSet& party) {
    WinnerSet ws = threshold_winners(tally, k);
    int64_t locked_own = intersect_count(ws.locked(), party);
    int64_t tie_own = intersect_count(ws.tie_set(), party);
    return locked_own + std::min<int64_t>(ws.open_slots(), tie_own);
}

}  // namespace detail

struct GameOutcome {
    WinnerSet winners;
    std::vector<int64_t> utilities;   // pessimistic, one per party
    std::vector<int64_t> optimistic;  // best seat count over tied committees
};

inline GameOutcome game_outcome(const LVGame& g, const StrategyProfile& s) {
    auto tally = strategy_tally(g, s);
    GameOutcome out{threshold_winners(tally, g.frame.k), {}, {}};
    for (int i = 0; i < g.party_count(); ++i) {
        out.utilities.push_back(detail::pessimistic_seats(tally, g.frame.k,
                                                          g.parties.parties[i].candidates));
        out.optimistic.push_back(detail::optimistic_seats(tally, g.frame.k,
                                                          g.parties.parties[i].candidates));
    }
    return out;
}

// ---------------------------------------------------------------------------
// vote-count vectors and their realization as ballots

struct VoteCountVector {
    std::vector<std::pair<Cand, int64_t>> counts;  // positive entries only

    int64_t total() const {
        int64_t s = 0;
        for (auto& [c, y] : counts) s += y;
        return s;
    }
};

inline void require_realizable(const VoteCountVector& v, int voters, int l) {
    if (v.total() != static_cast<int64_t>(voters) * l)
        throw std::invalid_argument("counts must sum to voters * l");
    if (static_cast<int>(v.counts.size()) < l)
        throw std::invalid_argument("counts must touch at least l candidates");
    for (auto& [c, y] : v.counts) {
        if (y < 1 || y > voters)
            throw std::invalid_argument("per-candidate count must lie in 1..voters");
    }
}

// Greedy decomposition into voters*|ballot|=l ballots: each round takes the l
// candidates with the largest remaining counts. Under the realizability
// invariants (sum = voters*l, max <= voters, support >= l) this always
// succeeds; equal consecutive ballots are compressed into multiplicities.
inline PartyStrategy realize_counts(const VoteCountVector& v, int voters, int l) {
    require_realizable(v, voters, l);
    std::vector<std::pair<int64_t, Cand>> remaining;  // (count, cand)
    for (auto& [c, y] : v.counts) remaining.push_back({y, c});
    PartyStrategy out;
    for (int round = 0; round < voters; ++round) {
        std::sort(remaining.begin(), remaining.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        CandSet ballot;
        for (int j = 0; j < l; ++j) {
            if (remaining[j].first <= 0)
                throw std::logic_error("count decomposition ran out of candidates");
            ballot.push_back(remaining[j].second);
            --remaining[j].first;
        }
        ballot = normalized(std::move(ballot));
        if (!out.pairs.empty() && out.pairs.back().ballot == ballot)
            ++out.pairs.back().count;
        else
            out.pairs.push_back({std::move(ballot), 1});
    }
    return out;
}

// ---------------------------------------------------------------------------
// lower-quota strategies

inline int64_t lower_quota(const LVGame& g, int party) {
    return static_cast<int64_t>(g.frame.k) * g.parties.parties[party].supporters / g.frame.n;
}

inline int64_t quota_gap(const LVGame& g) {
    int64_t s = 0;
    for (int i = 0; i < g.party_count(); ++i) s += lower_quota(g, i);
    return g.frame.k - s;
}

// Spread votes*l as evenly as possible over `spread` chosen candidates
// (lowest ids first).
inline VoteCountVector balanced_counts(const CandSet& candidates, int voters, int l, int spread) {
    int64_t total = static_cast<int64_t>(voters) * l;
    int64_t base = total / spread, extra = total % spread;
    VoteCountVector v;
    for (int i = 0; i < spread; ++i) {
        int64_t y = base + (i < extra ? 1 : 0);
        if (y > 0) v.counts.push_back({candidates[i], y});
    }
    return v;
}

// the LQ strategy: quota-many lowest-id candidates, votes balanced over them
inline PartyStrategy lq_strategy(const LVGame& g, int party) {
    int64_t q = lower_quota(g, party);
    const auto& p = g.parties.parties[party];
    if (g.frame.l > q)
        throw precondition_error("lq_strategy requires l <= floor(k*n_i/n)");
    if (q > static_cast<int64_t>(p.candidates.size()))
        throw precondition_error("lq_strategy requires floor(k*n_i/n) <= |P_i|");
    auto counts = balanced_counts(p.candidates, p.supporters, g.frame.l, static_cast<int>(q));
    return realize_counts(counts, p.supporters, g.frame.l);
}

inline CandSet lq_support(const LVGame& g, int party) {
    auto q = static_cast<size_t>(lower_quota(g, party));
    const auto& p = g.parties.parties[party];
    return CandSet(p.candidates.begin(), p.candidates.begin() + std::min(q, p.candidates.size()));
}

// ---------------------------------------------------------------------------
// best response over balanced spreads within the own party

struct BestResponse {
    PartyStrategy strategy;
    int64_t utility = 0;
    int spread = 0;
};

inline BestResponse best_response(const LVGame& g, int party,
                                  const std::vector<int64_t>& opponent_tally) {
    const auto& p = g.parties.parties[party];
    const int l = g.frame.l;
    if (static_cast<int>(p.candidates.size()) < l)
        throw precondition_error("party has fewer than l candidates; no within-party strategy");
    BestResponse best;
    bool have = false;
    for (int t = l; t <= static_cast<int>(p.candidates.size()); ++t) {
        auto counts = balanced_counts(p.candidates, p.supporters, l, t);
        std::vector<int64_t> tally = opponent_tally;
        for (auto& [c, y] : counts.counts) tally[c] += y;
        int64_t u = detail::pessimistic_seats(tally, g.frame.k, p.candidates);
        if (!have || u > best.utility) {
            best.utility = u;
            best.spread = t;
            best.strategy = realize_counts(counts, p.supporters, l);
            have = true;
        }
    }
    return best;
}

inline std::vector<int64_t> tally_without(const LVGame& g, const StrategyProfile& s, int party) {
    auto tally = strategy_tally(g, s);
    for (const auto& bc : s[party].pairs)
        for (Cand c : bc.ballot) tally[c] -= bc.count;
    return tally;
}

struct EquilibriumVerdict {
    bool holds = true;
    std::vector<int64_t> gains;  // best-response utility minus current, per party
};

// eps = 0 decides exact pure Nash equilibrium (over balanced within-party
// deviations, exhaustively certified on small games by the oracle module)
inline EquilibriumVerdict verify_equilibrium(const LVGame& g, const StrategyProfile& s,
                                             int64_t eps) {
    auto outcome = game_outcome(g, s);
    EquilibriumVerdict v;
    for (int i = 0; i < g.party_count(); ++i) {
        auto opp = tally_without(g, s, i);
        int64_t br = best_response(g, i, opp).utility;
        v.gains.push_back(br - outcome.utilities[i]);
        if (br - outcome.utilities[i] > eps) v.holds = false;
    }
    return v;
}

}  // namespace limvote
