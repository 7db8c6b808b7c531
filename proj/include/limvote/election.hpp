#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace limvote {

using Cand = int32_t;
using Voter = int32_t;
using CandSet = std::vector<Cand>;  // sorted, unique

struct budget_exceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct precondition_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline bool is_sorted_unique(const CandSet& s) {
    for (size_t i = 1; i < s.size(); ++i)
        if (s[i - 1] >= s[i]) return false;
    return true;
}

inline CandSet normalized(CandSet s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

inline bool contains(const CandSet& s, Cand c) {
    return std::binary_search(s.begin(), s.end(), c);
}

inline CandSet set_intersect(const CandSet& a, const CandSet& b) {
    CandSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline int intersect_count(const CandSet& a, const CandSet& b) {
    // both sorted
    const CandSet& small = a.size() <= b.size() ? a : b;
    const CandSet& large = a.size() <= b.size() ? b : a;
    int cnt = 0;
    for (Cand c : small)
        if (contains(large, c)) ++cnt;
    return cnt;
}

inline bool is_subset(const CandSet& a, const CandSet& b) {
    return intersect_count(a, b) == static_cast<int>(a.size());
}

// A per-voter family of candidate sets. Voters with identical sets share
// storage, so profiles where many voters approve the same large set (party
// blocks, worst-case families) stay compact.
class Profile {
public:
    Profile() = default;

    static Profile from_sets(const std::vector<CandSet>& per_voter) {
        Profile p;
        std::map<CandSet, int> seen;
        p.of_voter_.reserve(per_voter.size());
        for (const auto& raw : per_voter) {
            CandSet s = normalized(raw);
            auto [it, inserted] = seen.emplace(std::move(s), static_cast<int>(p.sets_.size()));
            if (inserted) p.sets_.push_back(it->first);
            p.of_voter_.push_back(it->second);
        }
        return p;
    }

    // groups given as (set, voter multiplicity); voter ids are assigned in order
    static Profile from_groups(const std::vector<std::pair<CandSet, int>>& groups) {
        Profile p;
        for (const auto& [s, count] : groups) {
            int gi = static_cast<int>(p.sets_.size());
            p.sets_.push_back(normalized(s));
            for (int i = 0; i < count; ++i) p.of_voter_.push_back(gi);
        }
        return p;
    }

    int voter_count() const { return static_cast<int>(of_voter_.size()); }
    const CandSet& operator[](Voter v) const { return sets_[of_voter_[v]]; }

    int group_count() const { return static_cast<int>(sets_.size()); }
    const CandSet& group_set(int g) const { return sets_[g]; }
    int group_of(Voter v) const { return of_voter_[v]; }
    std::vector<int> group_sizes() const {
        std::vector<int> n(sets_.size(), 0);
        for (int g : of_voter_) ++n[g];
        return n;
    }
    std::vector<std::vector<Voter>> group_voters() const {
        std::vector<std::vector<Voter>> out(sets_.size());
        for (Voter v = 0; v < voter_count(); ++v) out[of_voter_[v]].push_back(v);
        return out;
    }

private:
    std::vector<CandSet> sets_;
    std::vector<int> of_voter_;
};

// ---------------------------------------------------------------------------

struct ElectionFrame {
    int n = 0;  // voters
    int m = 0;  // candidates, ids 0..m-1
    int k = 0;  // committee size
    int l = 0;  // ballot limit
    Profile approvals;
};

struct Election {
    ElectionFrame frame;
    Profile ballots;
};

struct BroadcastOrder {
    CandSet order;  // most prioritized first; a permutation of 0..m-1

    std::vector<int> ranks(int m) const {
        std::vector<int> r(m, -1);
        for (int i = 0; i < static_cast<int>(order.size()); ++i) r[order[i]] = i;
        return r;
    }
};

struct Committee {
    CandSet members;  // sorted, size k

    bool operator==(const Committee& o) const { return members == o.members; }
    bool operator<(const Committee& o) const { return members < o.members; }
};

inline ElectionFrame make_frame(int n, int m, int k, int l, Profile approvals) {
    if (!(1 <= l && l <= k && k <= m))
        throw std::invalid_argument("frame requires 1 <= l <= k <= m");
    if (approvals.voter_count() != n)
        throw std::invalid_argument("approval profile size != n");
    for (int g = 0; g < approvals.group_count(); ++g) {
        const CandSet& s = approvals.group_set(g);
        if (!s.empty() && (s.front() < 0 || s.back() >= m))
            throw std::invalid_argument("approval candidate id out of range");
    }
    return ElectionFrame{n, m, k, l, std::move(approvals)};
}

inline BroadcastOrder identity_order(int m) {
    CandSet o(m);
    for (int i = 0; i < m; ++i) o[i] = i;
    return BroadcastOrder{std::move(o)};
}

// ---------------------------------------------------------------------------
// validation

struct Violation {
    Voter voter;
    std::string what;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

// Checks ballot sizes and ballot/approval consistency. Problems are reported,
// never thrown.
inline ValidationReport validate_election(const Election& e) {
    ValidationReport rep;
    const auto& f = e.frame;
    if (e.ballots.voter_count() != f.n) {
        rep.violations.push_back({-1, "ballot profile size != n"});
        return rep;
    }
    for (Voter v = 0; v < f.n; ++v) {
        const CandSet& L = e.ballots[v];
        const CandSet& A = f.approvals[v];
        if (static_cast<int>(L.size()) != f.l)
            rep.violations.push_back({v, "ballot size != l"});
        if (!L.empty() && (L.front() < 0 || L.back() >= f.m))
            rep.violations.push_back({v, "ballot candidate id out of range"});
        if (static_cast<int>(A.size()) >= f.l) {
            if (!is_subset(L, A))
                rep.violations.push_back({v, "ballot not within approvals"});
        } else {
            if (!is_subset(A, L))
                rep.violations.push_back({v, "approvals not within ballot"});
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// party structure

struct Party {
    CandSet candidates;
    int supporters = 0;
};

struct PartyStructure {
    std::vector<Party> parties;          // supporters desc, ties by min candidate id
    std::vector<Voter> unaffiliated;     // voters with empty approval sets
    std::vector<int> party_of_voter;     // -1 for unaffiliated

    int total_party_candidates() const {
        int s = 0;
        for (const auto& p : parties) s += static_cast<int>(p.candidates.size());
        return s;
    }
};

struct PartyDetection {
    std::optional<PartyStructure> structure;
    // first voter pair (earlier owner, later voter) with overlapping-but-unequal
    // approval sets, when the profile is not party-list
    std::optional<std::pair<Voter, Voter>> witness;

    bool is_party_list() const { return structure.has_value(); }
};

inline PartyDetection detect_party_structure(const ElectionFrame& f) {
    // owner[c] = first voter whose approval set claimed candidate c
    std::vector<Voter> owner(f.m, -1);
    std::vector<int> party_index_of_voter(f.n, -1);
    std::vector<CandSet> party_sets;
    std::vector<std::vector<Voter>> party_members;
    std::vector<Voter> unaffiliated;

    for (Voter v = 0; v < f.n; ++v) {
        const CandSet& A = f.approvals[v];
        if (A.empty()) {
            unaffiliated.push_back(v);
            continue;
        }
        Voter prev = -1;
        for (Cand c : A)
            if (owner[c] >= 0) { prev = owner[c]; break; }
        if (prev < 0) {
            // new party
            for (Cand c : A) owner[c] = v;
            party_index_of_voter[v] = static_cast<int>(party_sets.size());
            party_sets.push_back(A);
            party_members.push_back({v});
        } else {
            int pi = party_index_of_voter[prev];
            if (party_sets[pi] != A)
                return PartyDetection{std::nullopt, std::make_pair(prev, v)};
            party_index_of_voter[v] = pi;
            party_members[pi].push_back(v);
        }
    }

    // order: supporters desc, ties by smallest candidate id
    std::vector<int> idx(party_sets.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        size_t na = party_members[a].size(), nb = party_members[b].size();
        if (na != nb) return na > nb;
        return party_sets[a].front() < party_sets[b].front();
    });

    PartyStructure ps;
    ps.unaffiliated = unaffiliated;
    ps.party_of_voter.assign(f.n, -1);
    for (size_t rank = 0; rank < idx.size(); ++rank) {
        int i = idx[rank];
        ps.parties.push_back({party_sets[i], static_cast<int>(party_members[i].size())});
        for (Voter v : party_members[i]) ps.party_of_voter[v] = static_cast<int>(rank);
    }
    return PartyDetection{std::move(ps), std::nullopt};
}

// ---------------------------------------------------------------------------
// broadcasting-order consistency (Def. 2): within each approval set, voted
// candidates must precede unvoted ones.

inline bool is_consistent_with_order(const Election& e, const BroadcastOrder& ord) {
    auto rank = ord.ranks(e.frame.m);
    for (Voter v = 0; v < e.frame.n; ++v) {
        const CandSet& A = e.frame.approvals[v];
        const CandSet& L = e.ballots[v];
        int worst_voted = -1;   // max rank among voted approved
        int best_unvoted = e.frame.m;  // min rank among unvoted approved
        for (Cand c : A) {
            if (contains(L, c))
                worst_voted = std::max(worst_voted, rank[c]);
            else
                best_unvoted = std::min(best_unvoted, rank[c]);
        }
        if (worst_voted > best_unvoted) return false;
    }
    return true;
}

inline bool is_broadcasted_party_list(const Election& e, const BroadcastOrder& ord) {
    return detect_party_structure(e.frame).is_party_list() && is_consistent_with_order(e, ord);
}

}  // namespace limvote
