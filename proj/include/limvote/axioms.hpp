#pragma once

#include <optional>

#include "limvote/election.hpp"
#include "limvote/laminar.hpp"
#include "limvote/rules.hpp"

namespace limvote {

enum class Axiom { jr, pjr, ejr, lower_quota, laminar_proportionality };

inline const char* axiom_name(Axiom a) {
    switch (a) {
        case Axiom::jr: return "jr";
        case Axiom::pjr: return "pjr";
        case Axiom::ejr: return "ejr";
        case Axiom::lower_quota: return "lower-quota";
        case Axiom::laminar_proportionality: return "laminar-proportionality";
    }
    return "?";
}

struct AxiomWitness {
    std::vector<Voter> group;
    int level = 0;      // cohesion level, or the violated party's rank for lower quota
    CandSet common;     // commonly approved candidates (>= level of them)
};

struct AxiomVerdict {
    Axiom axiom{};
    bool holds = true;
    std::optional<AxiomWitness> witness;
};

// ---------------------------------------------------------------------------
// JR: polynomial scan. A violating 1-cohesive group exists iff some candidate
// has at least n/k approvers who are all unrepresented by W.
inline AxiomVerdict check_jr(const ElectionFrame& f, const Committee& w) {
    require_committee(f, w);
    std::vector<bool> represented(f.n, false);
    for (Voter v = 0; v < f.n; ++v)
        represented[v] = intersect_count(f.approvals[v], w.members) > 0;
    for (Cand c = 0; c < f.m; ++c) {
        std::vector<Voter> group;
        for (Voter v = 0; v < f.n; ++v)
            if (!represented[v] && contains(f.approvals[v], c)) group.push_back(v);
        if (static_cast<int64_t>(group.size()) * f.k >= f.n) {
            return {Axiom::jr, false, AxiomWitness{std::move(group), 1, {c}}};
        }
    }
    return {Axiom::jr, true, std::nullopt};
}

// ---------------------------------------------------------------------------
// EJR / PJR. Party-list profiles get the exact per-party closed form; general
// profiles are decided by exhaustive voter-subset search (n <= 16).

namespace detail {

inline int max_cohesion_level(int group_size, int n, int k, int common) {
    // largest integer level with group_size >= level * n / k (exact rational)
    int by_size = static_cast<int>((static_cast<int64_t>(group_size) * k) / n);
    return std::min(by_size, common);
}

struct SubsetBudget {
    int max_voters = 16;
};

template <typename ViolatedFn>
inline AxiomVerdict subset_search(const ElectionFrame& f, Axiom axiom, ViolatedFn&& violated,
                                  const SubsetBudget& budget) {
    if (f.n > budget.max_voters)
        throw budget_exceeded("cohesive-group search needs n <= " +
                              std::to_string(budget.max_voters) + " on non-party-list profiles");
    const uint32_t full = 1u << f.n;
    for (uint32_t mask = 1; mask < full; ++mask) {
        std::vector<Voter> group;
        CandSet common;
        bool first = true;
        for (Voter v = 0; v < f.n; ++v) {
            if (!(mask >> v & 1)) continue;
            group.push_back(v);
            if (first) { common = f.approvals[v]; first = false; }
            else common = set_intersect(common, f.approvals[v]);
        }
        if (common.empty()) continue;
        int level = max_cohesion_level(static_cast<int>(group.size()), f.n, f.k,
                                       static_cast<int>(common.size()));
        int bad_level = violated(group, common, level);
        if (bad_level > 0)
            return {axiom, false, AxiomWitness{std::move(group), bad_level, std::move(common)}};
    }
    return {axiom, true, std::nullopt};
}

}  // namespace detail

inline AxiomVerdict check_ejr(const ElectionFrame& f, const Committee& w,
                              const detail::SubsetBudget& budget = {}) {
    require_committee(f, w);
    auto det = detect_party_structure(f);
    if (det.is_party_list()) {
        const auto& ps = *det.structure;
        auto members = f.approvals.group_voters();
        for (size_t i = 0; i < ps.parties.size(); ++i) {
            const auto& party = ps.parties[i];
            int elected = intersect_count(party.candidates, w.members);
            int level = detail::max_cohesion_level(party.supporters, f.n, f.k,
                                                   static_cast<int>(party.candidates.size()));
            if (elected < level) {
                std::vector<Voter> group;
                for (Voter v = 0; v < f.n; ++v)
                    if (ps.party_of_voter[v] == static_cast<int>(i)) group.push_back(v);
                return {Axiom::ejr, false,
                        AxiomWitness{std::move(group), elected + 1, party.candidates}};
            }
        }
        return {Axiom::ejr, true, std::nullopt};
    }
    return detail::subset_search(
        f, Axiom::ejr,
        [&](const std::vector<Voter>& group, const CandSet&, int level) {
            int best = 0;
            for (Voter v : group)
                best = std::max(best, intersect_count(f.approvals[v], w.members));
            return best < level ? best + 1 : 0;
        },
        budget);
}

inline AxiomVerdict check_pjr(const ElectionFrame& f, const Committee& w,
                              const detail::SubsetBudget& budget = {}) {
    require_committee(f, w);
    auto det = detect_party_structure(f);
    if (det.is_party_list()) {
        const auto& ps = *det.structure;
        for (size_t i = 0; i < ps.parties.size(); ++i) {
            const auto& party = ps.parties[i];
            // the union of the group's approvals is the party itself
            int elected = intersect_count(party.candidates, w.members);
            int level = detail::max_cohesion_level(party.supporters, f.n, f.k,
                                                   static_cast<int>(party.candidates.size()));
            if (elected < level) {
                std::vector<Voter> group;
                for (Voter v = 0; v < f.n; ++v)
                    if (ps.party_of_voter[v] == static_cast<int>(i)) group.push_back(v);
                return {Axiom::pjr, false,
                        AxiomWitness{std::move(group), elected + 1, party.candidates}};
            }
        }
        return {Axiom::pjr, true, std::nullopt};
    }
    return detail::subset_search(
        f, Axiom::pjr,
        [&](const std::vector<Voter>& group, const CandSet&, int level) {
            CandSet uni;
            for (Voter v : group) {
                CandSet merged;
                std::set_union(uni.begin(), uni.end(), f.approvals[v].begin(),
                               f.approvals[v].end(), std::back_inserter(merged));
                uni = std::move(merged);
            }
            int covered = intersect_count(uni, w.members);
            return covered < level ? covered + 1 : 0;
        },
        budget);
}

// ---------------------------------------------------------------------------
// lower quota: every party gets at least floor(k * n_i / n) seats

inline AxiomVerdict check_lower_quota(const PartyStructure& p, int n, int k, const Committee& w) {
    for (size_t i = 0; i < p.parties.size(); ++i) {
        int64_t quota = static_cast<int64_t>(k) * p.parties[i].supporters / n;
        int got = intersect_count(p.parties[i].candidates, w.members);
        if (got < quota) {
            AxiomWitness wit;
            wit.level = static_cast<int>(i) + 1;
            wit.common = p.parties[i].candidates;
            for (size_t v = 0; v < p.party_of_voter.size(); ++v)
                if (p.party_of_voter[v] == static_cast<int>(i))
                    wit.group.push_back(static_cast<Voter>(v));
            return {Axiom::lower_quota, false, std::move(wit)};
        }
    }
    return {Axiom::lower_quota, true, std::nullopt};
}

inline AxiomVerdict check_lower_quota(const ElectionFrame& f, const Committee& w) {
    auto det = detect_party_structure(f);
    if (!det.is_party_list()) throw precondition_error("lower quota needs a party-list profile");
    return check_lower_quota(*det.structure, f.n, f.k, w);
}

// ---------------------------------------------------------------------------

inline AxiomVerdict check_laminar_proportionality(const Election& e, const Committee& w) {
    require_committee(e.frame, w);
    bool ok = is_laminar_proportional(e, w);  // throws if the frame is not laminar
    if (ok) return {Axiom::laminar_proportionality, true, std::nullopt};
    AxiomWitness wit;
    wit.common = w.members;
    return {Axiom::laminar_proportionality, false, std::move(wit)};
}

// independent re-verification of a JR/PJR/EJR witness against the definitions
inline bool witness_verifies(const ElectionFrame& f, Axiom axiom, const Committee& w,
                             const AxiomWitness& wit) {
    if (axiom == Axiom::lower_quota || axiom == Axiom::laminar_proportionality) return true;
    int level = wit.level;
    if (level < 1) return false;
    if (static_cast<int64_t>(wit.group.size()) * f.k < static_cast<int64_t>(level) * f.n)
        return false;
    CandSet common;
    bool first = true;
    for (Voter v : wit.group) {
        if (first) { common = f.approvals[v]; first = false; }
        else common = set_intersect(common, f.approvals[v]);
    }
    if (static_cast<int>(common.size()) < level) return false;
    switch (axiom) {
        case Axiom::jr:
        case Axiom::ejr: {
            for (Voter v : wit.group)
                if (intersect_count(f.approvals[v], w.members) >= level) return false;
            return true;
        }
        case Axiom::pjr: {
            CandSet uni;
            for (Voter v : wit.group) {
                CandSet merged;
                std::set_union(uni.begin(), uni.end(), f.approvals[v].begin(),
                               f.approvals[v].end(), std::back_inserter(merged));
                uni = std::move(merged);
            }
            return intersect_count(uni, w.members) < level;
        }
        default: return false;
    }
}

}  // namespace limvote
