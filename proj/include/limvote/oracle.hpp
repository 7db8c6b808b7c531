#pragma once

#include <functional>
#include <optional>

#include "limvote/election.hpp"
#include "limvote/games.hpp"
#include "limvote/rational.hpp"

// Exhaustive reference implementations for tests and small-instance
// certification. Scoring here is written straight from the definitions with
// plain per-voter loops and full enumeration; it deliberately shares no code
// with the rules/metrics path it is used to check.

namespace limvote::oracle {

struct OracleBudget {
    BigInt max_subsets = 2000000;
    int64_t max_count_vectors = 2000000;
};

enum class Goal { av, lv, cc, pav, sav, lcc };

namespace detail {

inline int members_approved(const CandSet& approvals, const CandSet& committee) {
    int hits = 0;
    for (Cand a : approvals)
        for (Cand w : committee)
            if (a == w) ++hits;
    return hits;
}

inline Rat score_of(const Election& e, Goal goal, const CandSet& committee) {
    const auto& f = e.frame;
    Rat total = 0;
    for (Voter v = 0; v < f.n; ++v) {
        const CandSet& a = f.approvals[v];
        switch (goal) {
            case Goal::av: total += members_approved(a, committee); break;
            case Goal::lv: total += members_approved(e.ballots[v], committee); break;
            case Goal::cc: total += members_approved(a, committee) > 0 ? 1 : 0; break;
            case Goal::pav: {
                int x = members_approved(a, committee);
                for (int j = 1; j <= x; ++j) total += Rat(1, j);
                break;
            }
            case Goal::sav: {
                if (!a.empty())
                    total += Rat(members_approved(a, committee), static_cast<int64_t>(a.size()));
                break;
            }
            case Goal::lcc: {
                int x = members_approved(a, committee);
                total += std::min(x, f.l);
                break;
            }
        }
    }
    return total;
}

template <typename F>
inline void every_committee(int m, int k, F&& f) {
    std::vector<int> pick(k);
    for (int i = 0; i < k; ++i) pick[i] = i;
    while (true) {
        f(CandSet(pick.begin(), pick.end()));
        int i = k - 1;
        while (i >= 0 && pick[i] == m - k + i) --i;
        if (i < 0) return;
        ++pick[i];
        for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
}

inline BigInt choose(int n, int k) {
    if (k < 0 || k > n) return 0;
    BigInt r = 1;
    for (int i = 0; i < k; ++i) { r *= (n - i); r /= (i + 1); }
    return r;
}

}  // namespace detail

inline std::vector<Committee> oracle_argmax(const Election& e, Goal goal,
                                            const OracleBudget& budget = {}) {
    if (detail::choose(e.frame.m, e.frame.k) > budget.max_subsets)
        throw budget_exceeded("oracle enumeration budget exceeded");
    std::optional<Rat> best;
    std::vector<Committee> arg;
    detail::every_committee(e.frame.m, e.frame.k, [&](const CandSet& members) {
        Rat s = detail::score_of(e, goal, members);
        if (!best || s > *best) {
            best = s;
            arg.clear();
        }
        if (s == *best) arg.push_back(Committee{members});
    });
    return arg;
}

inline Rat oracle_max_score(const Election& e, Goal goal, const OracleBudget& budget = {}) {
    auto arg = oracle_argmax(e, goal, budget);
    return detail::score_of(e, goal, arg.front().members);
}

// some committee weakly better for every voter and strictly better for one
inline std::optional<Committee> oracle_pareto_dominator(const Election& e, const Committee& w,
                                                        const OracleBudget& budget = {}) {
    if (detail::choose(e.frame.m, e.frame.k) > budget.max_subsets)
        throw budget_exceeded("oracle enumeration budget exceeded");
    const auto& f = e.frame;
    std::vector<int> current(f.n);
    for (Voter v = 0; v < f.n; ++v)
        current[v] = detail::members_approved(f.approvals[v], w.members);
    std::optional<Committee> found;
    detail::every_committee(f.m, f.k, [&](const CandSet& members) {
        if (found) return;
        bool weakly = true, strictly = false;
        for (Voter v = 0; v < f.n && weakly; ++v) {
            int x = detail::members_approved(f.approvals[v], members);
            if (x < current[v]) weakly = false;
            if (x > current[v]) strictly = true;
        }
        if (weakly && strictly) found = Committee{members};
    });
    return found;
}

inline bool oracle_dominates(const Election& e, const Committee& dominator, const Committee& w) {
    bool strictly = false;
    for (Voter v = 0; v < e.frame.n; ++v) {
        int a = detail::members_approved(e.frame.approvals[v], dominator.members);
        int b = detail::members_approved(e.frame.approvals[v], w.members);
        if (a < b) return false;
        if (a > b) strictly = true;
    }
    return strictly;
}

// Pessimistic utility from the definition: enumerate all maximal committees of
// the tally and take the worst own-seat count.
inline int64_t oracle_pessimistic_utility(const std::vector<int64_t>& tally, int k,
                                          const CandSet& party, const OracleBudget& budget = {}) {
    const int m = static_cast<int>(tally.size());
    if (detail::choose(m, k) > budget.max_subsets)
        throw budget_exceeded("oracle enumeration budget exceeded");
    std::optional<int64_t> best_score;
    std::optional<int64_t> worst_own;
    detail::every_committee(m, k, [&](const CandSet& members) {
        int64_t s = 0;
        for (Cand c : members) s += tally[c];
        int64_t own = 0;
        for (Cand c : members)
            for (Cand pc : party)
                if (c == pc) ++own;
        if (!best_score || s > *best_score) {
            best_score = s;
            worst_own = own;
        } else if (s == *best_score) {
            worst_own = std::min(*worst_own, own);
        }
    });
    return *worst_own;
}

// Max pessimistic utility over every integer count vector a party could cast
// within its own candidates (sum = n_i * l, entries <= n_i, support >= l).
inline int64_t oracle_best_response(const LVGame& g, int party,
                                    const std::vector<int64_t>& opponent_tally,
                                    const OracleBudget& budget = {}) {
    const auto& p = g.parties.parties[party];
    const int64_t votes = static_cast<int64_t>(p.supporters) * g.frame.l;
    int64_t explored = 0;
    int64_t best = -1;
    std::vector<int64_t> counts(p.candidates.size(), 0);
    auto evaluate = [&]() {
        int positive = 0;
        for (int64_t y : counts)
            if (y > 0) ++positive;
        if (positive < g.frame.l) return;
        std::vector<int64_t> tally = opponent_tally;
        for (size_t i = 0; i < counts.size(); ++i) tally[p.candidates[i]] += counts[i];
        best = std::max(best, oracle_pessimistic_utility(tally, g.frame.k, p.candidates, budget));
    };
    std::function<void(size_t, int64_t)> rec = [&](size_t idx, int64_t left) {
        if (++explored > budget.max_count_vectors)
            throw budget_exceeded("oracle count-vector budget exceeded");
        if (idx + 1 == counts.size()) {
            if (left <= p.supporters) {
                counts[idx] = left;
                evaluate();
            }
            return;
        }
        for (int64_t y = 0; y <= std::min<int64_t>(left, p.supporters); ++y) {
            counts[idx] = y;
            rec(idx + 1, left - y);
        }
        counts[idx] = 0;
    };
    rec(0, votes);
    return best;
}

}  // namespace limvote::oracle
