#pragma once

#include <cmath>
#include <memory>

#include "limvote/election.hpp"
#include "limvote/winners.hpp"

namespace limvote {

// Deterministic stream, identical draws for identical (seed, cell, trial)
// regardless of execution order. splitmix64 underneath; bounded draws use
// rejection so results do not depend on the platform's distribution code.
struct RngStream {
    uint64_t state;

    static RngStream from(uint64_t seed) { return RngStream{seed}; }
    static RngStream derive(uint64_t seed, uint64_t cell, uint64_t trial) {
        uint64_t s = seed;
        detail::splitmix64_step(s);
        s ^= 0x6a09e667f3bcc909ULL + cell * 0x9e3779b97f4a7c15ULL;
        detail::splitmix64_step(s);
        s ^= 0xbb67ae8584caa73bULL + trial * 0xc2b2ae3d27d4eb4fULL;
        detail::splitmix64_step(s);
        return RngStream{s};
    }

    uint64_t next() { return detail::splitmix64_step(state); }
    uint32_t below(uint32_t n) {
        return static_cast<uint32_t>(detail::bounded_draw(state, n));
    }
    // uniform in [0,1) with 53 random bits
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    bool coin(double p) { return unit() < p; }
};

// ---------------------------------------------------------------------------
// deterministic broadcasted party-list construction: candidates blocked per
// party in the given order, identity broadcasting order, ballots = top-l.

struct PartyListElection {
    Election election;
    BroadcastOrder order;
    PartyStructure structure;
};

inline Profile ballots_from_order(const Profile& approvals, int m, int l,
                                  const BroadcastOrder& ord) {
    auto rank = ord.ranks(m);
    std::vector<Cand> by_rank(m);
    for (Cand c = 0; c < m; ++c) by_rank[rank[c]] = c;
    std::vector<CandSet> ballots(approvals.voter_count());
    for (Voter v = 0; v < approvals.voter_count(); ++v) {
        const CandSet& a = approvals[v];
        std::vector<Cand> sorted_a(a.begin(), a.end());
        std::sort(sorted_a.begin(), sorted_a.end(),
                  [&](Cand x, Cand y) { return rank[x] < rank[y]; });
        CandSet b(sorted_a.begin(),
                  sorted_a.begin() + std::min<size_t>(sorted_a.size(), l));
        // pad with the highest-ranked non-approved candidates
        for (int r = 0; r < m && static_cast<int>(b.size()) < l; ++r) {
            Cand c = by_rank[r];
            if (!contains(a, c)) b.push_back(c);
        }
        ballots[v] = normalized(std::move(b));
    }
    return Profile::from_sets(ballots);
}

// gen_ballots of the experiment pipeline
inline Profile gen_ballots(const Profile& approvals, int m, int l, const BroadcastOrder& ord) {
    return ballots_from_order(approvals, m, l, ord);
}

inline PartyListElection gen_party_list(const std::vector<int>& party_sizes,
                                        const std::vector<int>& supporter_counts, int k, int l,
                                        int filler_candidates = 0) {
    if (party_sizes.size() != supporter_counts.size())
        throw std::invalid_argument("party size and supporter lists differ in length");
    int m = filler_candidates;
    for (int s : party_sizes) {
        if (s < 1) throw std::invalid_argument("party sizes must be positive");
        m += s;
    }
    int n = 0;
    std::vector<std::pair<CandSet, int>> groups;
    Cand next_cand = 0;
    for (size_t i = 0; i < party_sizes.size(); ++i) {
        if (supporter_counts[i] < 1) throw std::invalid_argument("supporter counts must be positive");
        CandSet block;
        for (int j = 0; j < party_sizes[i]; ++j) block.push_back(next_cand++);
        groups.push_back({std::move(block), supporter_counts[i]});
        n += supporter_counts[i];
    }
    Profile approvals = Profile::from_groups(groups);
    BroadcastOrder ord = identity_order(m);
    Election e{make_frame(n, m, k, l, approvals), ballots_from_order(approvals, m, l, ord)};
    auto det = detect_party_structure(e.frame);
    return PartyListElection{std::move(e), std::move(ord), std::move(*det.structure)};
}

// ---------------------------------------------------------------------------
// the disjoint model (almost party-list approval profiles)

enum class PartitionMode { uniform_party_choice, random_partition };

// Uniform random partition of C into g nonempty labeled blocks, implemented as
// random assignment with rejection of assignments leaving a block empty.
inline std::vector<int> random_surjection(int items, int g, RngStream& rng) {
    if (items < g) throw std::invalid_argument("cannot partition into more nonempty blocks than items");
    std::vector<int> assign(items);
    std::vector<int> count(g);
    while (true) {
        std::fill(count.begin(), count.end(), 0);
        for (int i = 0; i < items; ++i) {
            assign[i] = static_cast<int>(rng.below(static_cast<uint32_t>(g)));
            ++count[assign[i]];
        }
        bool ok = true;
        for (int c : count)
            if (c == 0) { ok = false; break; }
        if (ok) return assign;
    }
}

inline Profile gen_disjoint(int n, int m, int g, double p, double phi, PartitionMode mode,
                            RngStream& rng) {
    auto cand_party = random_surjection(m, g, rng);
    std::vector<CandSet> blocks(g);
    for (Cand c = 0; c < m; ++c) blocks[cand_party[c]].push_back(c);

    std::vector<int> voter_party(n);
    if (mode == PartitionMode::uniform_party_choice) {
        for (int v = 0; v < n; ++v) voter_party[v] = static_cast<int>(rng.below(g));
    } else {
        voter_party = random_surjection(n, g, rng);
    }

    std::vector<CandSet> approvals(n);
    for (Voter v = 0; v < n; ++v) {
        const CandSet& base = blocks[voter_party[v]];
        CandSet a;
        for (Cand c = 0; c < m; ++c) {
            bool approved = contains(base, c);
            if (phi > 0 && rng.coin(phi)) approved = rng.coin(p);
            if (approved) a.push_back(c);
        }
        approvals[v] = std::move(a);
    }
    return Profile::from_sets(approvals);
}

// ---------------------------------------------------------------------------
// Mallows order perturbation via the Repeated Insertion Model: the j-th item
// of the reference order is inserted at position i in {1..j} with probability
// phi^(j-i) / (1 + phi + ... + phi^(j-1)). At phi = 0 every item lands at the
// end, reproducing the reference; at phi = 1 the result is uniform.

inline BroadcastOrder gen_perturbed_order(const BroadcastOrder& base, double phi, RngStream& rng) {
    const int m = static_cast<int>(base.order.size());
    std::vector<Cand> out;
    out.reserve(m);
    std::vector<double> weights;
    for (int j = 0; j < m; ++j) {
        int pos;
        if (phi <= 0) {
            pos = j;
        } else {
            weights.resize(j + 1);
            double w = 1.0, total = 0.0;
            for (int i = j; i >= 0; --i) {  // weight phi^(j-i), walked from the tail
                weights[i] = w;
                total += w;
                w *= phi;
            }
            double x = rng.unit() * total;
            pos = j;
            for (int i = 0; i <= j; ++i) {
                if (x < weights[i]) { pos = i; break; }
                x -= weights[i];
            }
        }
        out.insert(out.begin() + pos, base.order[j]);
    }
    return BroadcastOrder{std::move(out)};
}

// ---------------------------------------------------------------------------
// laminar frames by construction

struct LaminarBlueprint {
    enum Kind { leaf, extend, sum } kind = leaf;
    // leaf: a unanimous block
    int voters = 0, cands = 0, seats = 0;
    std::unique_ptr<LaminarBlueprint> child;         // extend
    std::unique_ptr<LaminarBlueprint> left, right;   // sum

    static LaminarBlueprint make_leaf(int voters, int cands, int seats) {
        LaminarBlueprint b;
        b.kind = leaf;
        b.voters = voters;
        b.cands = cands;
        b.seats = seats;
        return b;
    }
    static LaminarBlueprint make_extend(LaminarBlueprint inner) {
        LaminarBlueprint b;
        b.kind = extend;
        b.child = std::make_unique<LaminarBlueprint>(std::move(inner));
        return b;
    }
    static LaminarBlueprint make_sum(LaminarBlueprint l, LaminarBlueprint r) {
        LaminarBlueprint b;
        b.kind = sum;
        b.left = std::make_unique<LaminarBlueprint>(std::move(l));
        b.right = std::make_unique<LaminarBlueprint>(std::move(r));
        return b;
    }
};

namespace detail {

struct LaminarBuild {
    int voters = 0, cands = 0, seats = 0;
    std::vector<CandSet> approvals;  // indexed by local voter id, local candidate ids
};

inline LaminarBuild build_laminar(const LaminarBlueprint& bp, const std::string& path) {
    switch (bp.kind) {
        case LaminarBlueprint::leaf: {
            if (bp.voters < 1 || bp.cands < bp.seats || bp.seats < 0)
                throw std::invalid_argument("invalid laminar leaf at " + path);
            LaminarBuild b;
            b.voters = bp.voters;
            b.cands = bp.cands;
            b.seats = bp.seats;
            CandSet all;
            for (int c = 0; c < bp.cands; ++c) all.push_back(c);
            b.approvals.assign(bp.voters, all);
            return b;
        }
        case LaminarBlueprint::extend: {
            LaminarBuild inner = build_laminar(*bp.child, path + ".child");
            LaminarBuild b;
            b.voters = inner.voters;
            b.cands = inner.cands + 1;
            b.seats = inner.seats + 1;
            Cand added = inner.cands;  // the new unanimous candidate takes the last id
            b.approvals = inner.approvals;
            for (auto& a : b.approvals) a.push_back(added);
            return b;
        }
        case LaminarBlueprint::sum: {
            LaminarBuild l = build_laminar(*bp.left, path + ".left");
            LaminarBuild r = build_laminar(*bp.right, path + ".right");
            if (static_cast<int64_t>(l.voters) * r.seats !=
                static_cast<int64_t>(r.voters) * l.seats)
                throw std::invalid_argument("sum node violates |N1|*k2 = |N2|*k1 at " + path);
            LaminarBuild b;
            b.voters = l.voters + r.voters;
            b.cands = l.cands + r.cands;
            b.seats = l.seats + r.seats;
            b.approvals = l.approvals;
            for (const auto& a : r.approvals) {
                CandSet shifted;
                for (Cand c : a) shifted.push_back(c + l.cands);
                b.approvals.push_back(std::move(shifted));
            }
            return b;
        }
    }
    throw std::invalid_argument("unknown blueprint node at " + path);
}

}  // namespace detail

inline ElectionFrame gen_laminar(const LaminarBlueprint& bp, int l) {
    auto b = detail::build_laminar(bp, "root");
    return make_frame(b.voters, b.cands, b.seats, l, Profile::from_sets(b.approvals));
}

}  // namespace limvote
