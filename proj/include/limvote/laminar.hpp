#pragma once

#include <functional>
#include <map>
#include <tuple>

#include "limvote/election.hpp"
#include "limvote/rules.hpp"

namespace limvote {

// Recursive laminar recognition. A (sub-)election is laminar if
//   (1) it is unanimous (all approval sets equal) and |C| >= k, or
//   (2) some candidate c approved by every voter has E_{-c} (with k-1)
//       laminar and not unanimous, or
//   (3) it splits into two voter- and candidate-disjoint laminar elections
//       with |N1|*k2 = |N2|*k1.
// Splits are searched along connected components of the voter-overlap graph;
// candidates approved by nobody are interchangeable and distributed by count.

namespace detail {

struct LaminarCtx {
    const ElectionFrame& frame;
    std::map<std::tuple<std::vector<Voter>, CandSet, int>, bool> memo;
    size_t nodes = 0;
    size_t node_budget;
};

inline CandSet restricted(const CandSet& a, const CandSet& cands) {
    return set_intersect(a, cands);
}

inline bool all_equal_approvals(const LaminarCtx& ctx, const std::vector<Voter>& voters,
                                const CandSet& cands) {
    if (voters.empty()) return true;
    CandSet first = restricted(ctx.frame.approvals[voters[0]], cands);
    for (size_t i = 1; i < voters.size(); ++i)
        if (restricted(ctx.frame.approvals[voters[i]], cands) != first) return false;
    return true;
}

inline bool laminar_rec(LaminarCtx& ctx, const std::vector<Voter>& voters, const CandSet& cands,
                        int k) {
    if (k < 0) return false;
    if (++ctx.nodes > ctx.node_budget) throw budget_exceeded("laminar recognition budget exceeded");
    auto key = std::make_tuple(voters, cands, k);
    if (auto it = ctx.memo.find(key); it != ctx.memo.end()) return it->second;
    bool result = false;

    bool unanimous = all_equal_approvals(ctx, voters, cands);
    if (unanimous) {
        result = static_cast<int>(cands.size()) >= k;
    } else {
        // case 2: peel a unanimously approved candidate
        CandSet common = restricted(ctx.frame.approvals[voters[0]], cands);
        for (size_t i = 1; i < voters.size() && !common.empty(); ++i)
            common = set_intersect(common, ctx.frame.approvals[voters[i]]);
        for (Cand c : common) {
            CandSet rest;
            for (Cand x : cands)
                if (x != c) rest.push_back(x);
            if (all_equal_approvals(ctx, voters, rest)) continue;  // E_{-c} must stay non-unanimous
            if (laminar_rec(ctx, voters, rest, k - 1)) { result = true; break; }
        }
        // case 3: split along voter components
        if (!result) {
            // union-find over voters via shared approved candidates
            std::vector<int> comp_of_cand(ctx.frame.m, -1);
            std::vector<int> parent(voters.size());
            for (size_t i = 0; i < voters.size(); ++i) parent[i] = static_cast<int>(i);
            std::function<int(int)> find = [&](int x) {
                while (parent[x] != x) x = parent[x] = parent[parent[x]];
                return x;
            };
            for (size_t i = 0; i < voters.size(); ++i)
                for (Cand c : restricted(ctx.frame.approvals[voters[i]], cands)) {
                    if (comp_of_cand[c] < 0) comp_of_cand[c] = static_cast<int>(i);
                    else parent[find(static_cast<int>(i))] = find(comp_of_cand[c]);
                }
            std::map<int, int> comp_index;
            std::vector<std::vector<Voter>> comp_voters;
            for (size_t i = 0; i < voters.size(); ++i) {
                int r = find(static_cast<int>(i));
                auto [it, inserted] = comp_index.emplace(r, static_cast<int>(comp_voters.size()));
                if (inserted) comp_voters.emplace_back();
                comp_voters[it->second].push_back(voters[i]);
            }
            const int nc = static_cast<int>(comp_voters.size());
            if (nc >= 2) {
                // approved candidates follow their component; free candidates are
                // interchangeable, try every count split
                CandSet free_cands;
                std::vector<CandSet> comp_cands(nc);
                for (Cand c : cands) {
                    bool used = false;
                    for (size_t i = 0; i < voters.size(); ++i)
                        if (contains(ctx.frame.approvals[voters[i]], c)) {
                            comp_cands[comp_index[find(static_cast<int>(i))]].push_back(c);
                            used = true;
                            break;
                        }
                    if (!used) free_cands.push_back(c);
                }
                const int total_n = static_cast<int>(voters.size());
                for (uint32_t mask = 1; mask + 1 < (1u << nc) && !result; ++mask) {
                    std::vector<Voter> v1, v2;
                    CandSet c1, c2;
                    for (int i = 0; i < nc; ++i) {
                        auto& tv = (mask >> i & 1) ? v1 : v2;
                        auto& tc = (mask >> i & 1) ? c1 : c2;
                        tv.insert(tv.end(), comp_voters[i].begin(), comp_voters[i].end());
                        tc.insert(tc.end(), comp_cands[i].begin(), comp_cands[i].end());
                    }
                    if ((static_cast<int64_t>(k) * v1.size()) % total_n != 0) continue;
                    int k1 = static_cast<int>(static_cast<int64_t>(k) * v1.size() / total_n);
                    int k2 = k - k1;
                    std::sort(v1.begin(), v1.end());
                    std::sort(v2.begin(), v2.end());
                    c1 = normalized(std::move(c1));
                    c2 = normalized(std::move(c2));
                    for (size_t f1 = 0; f1 <= free_cands.size() && !result; ++f1) {
                        CandSet c1f = c1, c2f = c2;
                        c1f.insert(c1f.end(), free_cands.begin(), free_cands.begin() + f1);
                        c2f.insert(c2f.end(), free_cands.begin() + f1, free_cands.end());
                        c1f = normalized(std::move(c1f));
                        c2f = normalized(std::move(c2f));
                        result = laminar_rec(ctx, v1, c1f, k1) && laminar_rec(ctx, v2, c2f, k2);
                    }
                }
            }
        }
    }
    ctx.memo.emplace(std::move(key), result);
    return result;
}

}  // namespace detail

inline bool is_laminar(const ElectionFrame& f, size_t node_budget = 2000000) {
    detail::LaminarCtx ctx{f, {}, 0, node_budget};
    std::vector<Voter> voters(f.n);
    for (int i = 0; i < f.n; ++i) voters[i] = i;
    CandSet cands(f.m);
    for (int i = 0; i < f.m; ++i) cands[i] = i;
    return detail::laminar_rec(ctx, voters, cands, f.k);
}

// Broadcasted laminar: laminar frame, order-consistent ballots, and the order
// never puts a strictly less approved candidate ahead of a more approved one.
inline bool is_broadcasted_laminar(const Election& e, const BroadcastOrder& ord,
                                   size_t node_budget = 2000000) {
    if (!is_laminar(e.frame, node_budget)) return false;
    if (!is_consistent_with_order(e, ord)) return false;
    auto tally = approval_tally(e.frame);
    int64_t best_so_far = std::numeric_limits<int64_t>::min();
    // walking the order from the end, tallies may never strictly exceed what follows
    for (auto it = ord.order.rbegin(); it != ord.order.rend(); ++it) {
        if (tally[*it] < best_so_far) return false;
        best_so_far = std::max(best_so_far, tally[*it]);
    }
    return true;
}

// Laminar proportionality of a committee, by the matching recursion:
//   (1) unanimous: any k-subset of C;
//   (2) W = W' + {c} for a unanimously approved c with E_{-c} laminar;
//   (3) W = W1 + W2 along a laminar sum decomposition.
namespace detail {

inline bool lamprop_rec(LaminarCtx& ctx, const std::vector<Voter>& voters, const CandSet& cands,
                        int k, const CandSet& w) {
    if (k < 0 || static_cast<int>(w.size()) != k) return false;
    if (++ctx.nodes > ctx.node_budget)
        throw budget_exceeded("laminar proportionality budget exceeded");
    if (!is_subset(w, cands)) return false;
    if (all_equal_approvals(ctx, voters, cands)) return true;

    CandSet common = restricted(ctx.frame.approvals[voters[0]], cands);
    for (size_t i = 1; i < voters.size() && !common.empty(); ++i)
        common = set_intersect(common, ctx.frame.approvals[voters[i]]);
    for (Cand c : common) {
        if (!contains(w, c)) continue;
        CandSet rest, wrest;
        for (Cand x : cands)
            if (x != c) rest.push_back(x);
        for (Cand x : w)
            if (x != c) wrest.push_back(x);
        std::vector<Voter> vcopy = voters;
        detail::LaminarCtx sub{ctx.frame, {}, 0, ctx.node_budget};
        if (laminar_rec(sub, vcopy, rest, k - 1) && lamprop_rec(ctx, voters, rest, k - 1, wrest))
            return true;
    }
    // sum case along voter components (mirrors laminar_rec)
    std::vector<int> parent(voters.size());
    for (size_t i = 0; i < voters.size(); ++i) parent[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::vector<int> comp_of_cand(ctx.frame.m, -1);
    for (size_t i = 0; i < voters.size(); ++i)
        for (Cand c : restricted(ctx.frame.approvals[voters[i]], cands)) {
            if (comp_of_cand[c] < 0) comp_of_cand[c] = static_cast<int>(i);
            else parent[find(static_cast<int>(i))] = find(comp_of_cand[c]);
        }
    std::map<int, int> comp_index;
    std::vector<std::vector<Voter>> comp_voters;
    for (size_t i = 0; i < voters.size(); ++i) {
        int r = find(static_cast<int>(i));
        auto [it, inserted] = comp_index.emplace(r, static_cast<int>(comp_voters.size()));
        if (inserted) comp_voters.emplace_back();
        comp_voters[it->second].push_back(voters[i]);
    }
    const int nc = static_cast<int>(comp_voters.size());
    if (nc < 2) return false;
    std::vector<CandSet> comp_cands(nc);
    CandSet free_cands;
    for (Cand c : cands) {
        bool used = false;
        for (size_t i = 0; i < voters.size(); ++i)
            if (contains(ctx.frame.approvals[voters[i]], c)) {
                comp_cands[comp_index[find(static_cast<int>(i))]].push_back(c);
                used = true;
                break;
            }
        if (!used) free_cands.push_back(c);
    }
    const int total_n = static_cast<int>(voters.size());
    for (uint32_t mask = 1; mask + 1 < (1u << nc); ++mask) {
        std::vector<Voter> v1, v2;
        CandSet c1, c2;
        for (int i = 0; i < nc; ++i) {
            auto& tv = (mask >> i & 1) ? v1 : v2;
            auto& tc = (mask >> i & 1) ? c1 : c2;
            tv.insert(tv.end(), comp_voters[i].begin(), comp_voters[i].end());
            tc.insert(tc.end(), comp_cands[i].begin(), comp_cands[i].end());
        }
        if ((static_cast<int64_t>(k) * v1.size()) % total_n != 0) continue;
        int k1 = static_cast<int>(static_cast<int64_t>(k) * v1.size() / total_n);
        int k2 = k - k1;
        std::sort(v1.begin(), v1.end());
        std::sort(v2.begin(), v2.end());
        c1 = normalized(std::move(c1));
        c2 = normalized(std::move(c2));
        // committee members among the free candidates may sit on either side
        CandSet w_free;
        for (Cand c : w)
            if (contains(free_cands, c)) w_free.push_back(c);
        CandSet w1_base = set_intersect(w, c1), w2_base = set_intersect(w, c2);
        CandSet free_unused;
        for (Cand c : free_cands)
            if (!contains(w_free, c)) free_unused.push_back(c);
        // choose how many committee-free candidates and spare free candidates go left
        for (size_t wf1 = 0; wf1 <= w_free.size(); ++wf1) {
            for (size_t f1 = 0; f1 <= free_unused.size(); ++f1) {
                CandSet c1f = c1, c2f = c2, w1 = w1_base, w2 = w2_base;
                for (size_t i = 0; i < w_free.size(); ++i)
                    ((i < wf1) ? c1f : c2f).push_back(w_free[i]),
                        ((i < wf1) ? w1 : w2).push_back(w_free[i]);
                for (size_t i = 0; i < free_unused.size(); ++i)
                    ((i < f1) ? c1f : c2f).push_back(free_unused[i]);
                c1f = normalized(std::move(c1f));
                c2f = normalized(std::move(c2f));
                w1 = normalized(std::move(w1));
                w2 = normalized(std::move(w2));
                if (static_cast<int>(w1.size()) != k1 || static_cast<int>(w2.size()) != k2)
                    continue;
                detail::LaminarCtx s1{ctx.frame, {}, 0, ctx.node_budget};
                detail::LaminarCtx s2{ctx.frame, {}, 0, ctx.node_budget};
                if (laminar_rec(s1, v1, c1f, k1) && laminar_rec(s2, v2, c2f, k2) &&
                    lamprop_rec(ctx, v1, c1f, k1, w1) && lamprop_rec(ctx, v2, c2f, k2, w2))
                    return true;
            }
        }
    }
    return false;
}

}  // namespace detail

// requires a laminar frame; throws precondition_error otherwise
inline bool is_laminar_proportional(const Election& e, const Committee& w,
                                    size_t node_budget = 2000000) {
    if (!is_laminar(e.frame, node_budget))
        throw precondition_error("laminar proportionality requires a laminar frame");
    detail::LaminarCtx ctx{e.frame, {}, 0, node_budget};
    std::vector<Voter> voters(e.frame.n);
    for (int i = 0; i < e.frame.n; ++i) voters[i] = i;
    CandSet cands(e.frame.m);
    for (int i = 0; i < e.frame.m; ++i) cands[i] = i;
    return detail::lamprop_rec(ctx, voters, cands, e.frame.k, w.members);
}

}  // namespace limvote
