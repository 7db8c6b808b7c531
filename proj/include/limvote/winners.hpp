#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>

#include "limvote/election.hpp"
#include "limvote/rational.hpp"

namespace limvote {

struct TieBreakPolicy {
    enum Mode { lexicographic, seeded_random } mode = lexicographic;
    uint64_t seed = 0;

    static TieBreakPolicy lex() { return {lexicographic, 0}; }
    static TieBreakPolicy random(uint64_t s) { return {seeded_random, s}; }
};

inline BigInt binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    BigInt r = 1;
    for (int i = 0; i < k; ++i) { r *= (n - i); r /= (i + 1); }
    return r;
}

// The complete set of maximal committees of a rule. Threshold rules (AV, LV)
// produce the compact locked/tie-set form; optimization rules materialize the
// argmax list; the party-list closed form for alpha-CC yields only a score and
// one representative (schematic).
class WinnerSet {
public:
    enum Kind { threshold, explicit_list, schematic };

    static WinnerSet from_threshold(Rat score, int k, CandSet locked, CandSet tie, int slots) {
        WinnerSet w;
        w.kind_ = threshold;
        w.score_ = std::move(score);
        w.k_ = k;
        w.locked_ = std::move(locked);
        w.tie_ = std::move(tie);
        w.slots_ = slots;
        return w;
    }
    static WinnerSet from_list(Rat score, int k, std::vector<Committee> committees) {
        WinnerSet w;
        w.kind_ = explicit_list;
        w.score_ = std::move(score);
        w.k_ = k;
        w.committees_ = std::move(committees);
        return w;
    }
    static WinnerSet from_schematic(Rat score, int k, Committee representative) {
        WinnerSet w;
        w.kind_ = schematic;
        w.score_ = std::move(score);
        w.k_ = k;
        w.committees_ = {std::move(representative)};
        return w;
    }

    Kind kind() const { return kind_; }
    const Rat& score() const { return score_; }
    int committee_size() const { return k_; }
    const CandSet& locked() const { return locked_; }
    const CandSet& tie_set() const { return tie_; }
    int open_slots() const { return slots_; }

    BigInt count() const {
        switch (kind_) {
            case threshold: return binomial(static_cast<int>(tie_.size()), slots_);
            case explicit_list: return static_cast<int>(committees_.size());
            case schematic: throw budget_exceeded("schematic winner set has no materialized count");
        }
        return 0;
    }
    bool is_singleton() const { return kind_ != schematic && count() == 1; }

    bool contains(const Committee& w) const {
        if (static_cast<int>(w.members.size()) != k_) return false;
        switch (kind_) {
            case threshold: {
                int from_tie = 0;
                for (Cand c : w.members) {
                    if (limvote::contains(locked_, c)) continue;
                    if (limvote::contains(tie_, c)) { ++from_tie; continue; }
                    return false;
                }
                return from_tie == slots_ &&
                       static_cast<int>(w.members.size()) == static_cast<int>(locked_.size()) + slots_;
            }
            case explicit_list:
                return std::find(committees_.begin(), committees_.end(), w) != committees_.end();
            case schematic:
                throw budget_exceeded("schematic winner set does not support membership tests");
        }
        return false;
    }

    Committee lex_smallest() const {
        switch (kind_) {
            case threshold: {
                CandSet members = locked_;
                members.insert(members.end(), tie_.begin(), tie_.begin() + slots_);
                return Committee{normalized(std::move(members))};
            }
            case explicit_list: {
                return *std::min_element(committees_.begin(), committees_.end());
            }
            case schematic:
                throw budget_exceeded("schematic winner set has no lexicographic order");
        }
        return {};
    }

    Committee representative() const {
        if (kind_ == explicit_list || kind_ == schematic) return committees_.front();
        return lex_smallest();
    }

    std::vector<Committee> materialize(size_t cap = 100000) const {
        if (kind_ == schematic)
            throw budget_exceeded("schematic winner set cannot be materialized");
        if (kind_ == explicit_list) {
            if (committees_.size() > cap) throw budget_exceeded("winner set larger than cap");
            return committees_;
        }
        if (count() > cap) throw budget_exceeded("winner set larger than cap");
        std::vector<Committee> out;
        std::vector<int> pick(slots_);
        for (int i = 0; i < slots_; ++i) pick[i] = i;
        const int t = static_cast<int>(tie_.size());
        while (true) {
            CandSet members = locked_;
            for (int i : pick) members.push_back(tie_[i]);
            out.push_back(Committee{normalized(std::move(members))});
            // next combination
            int i = slots_ - 1;
            while (i >= 0 && pick[i] == t - slots_ + i) --i;
            if (i < 0) break;
            ++pick[i];
            for (int j = i + 1; j < slots_; ++j) pick[j] = pick[j - 1] + 1;
        }
        return out;
    }

    // visit every committee (threshold/explicit), up to cap; throws beyond
    template <typename F>
    void for_each(F&& f, size_t cap = 1000000) const {
        if (kind_ == schematic) throw budget_exceeded("schematic winner set cannot be enumerated");
        if (count() > BigInt(cap)) throw budget_exceeded("winner set larger than enumeration cap");
        if (kind_ == explicit_list) {
            for (const auto& w : committees_) f(w);
            return;
        }
        for (const auto& w : materialize(cap)) f(w);
    }

private:
    Kind kind_ = explicit_list;
    Rat score_;
    int k_ = 0;
    CandSet locked_, tie_;
    int slots_ = 0;
    std::vector<Committee> committees_;
};

namespace detail {

// Fisher-Yates prefix sample of `slots` distinct elements, uniform over subsets.
inline CandSet sample_subset(const CandSet& pool, int slots, uint64_t seed);

}  // namespace detail

inline Committee make_resolute(const WinnerSet& ws, const TieBreakPolicy& policy) {
    if (ws.kind() == WinnerSet::schematic) {
        throw precondition_error("cannot resolve a schematic winner set");
    }
    if (policy.mode == TieBreakPolicy::lexicographic) return ws.lex_smallest();
    // seeded-random: uniform over the set. For the threshold form, draw the
    // open slots uniformly from the tie set, which induces the uniform
    // distribution over member committees.
    if (ws.kind() == WinnerSet::threshold) {
        CandSet members = ws.locked();
        CandSet picked = detail::sample_subset(ws.tie_set(), ws.open_slots(), policy.seed);
        members.insert(members.end(), picked.begin(), picked.end());
        return Committee{normalized(std::move(members))};
    }
    auto all = ws.materialize();
    uint64_t x = policy.seed;
    // splitmix64 step
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return all[x % all.size()];
}

namespace detail {

inline uint64_t splitmix64_step(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline uint64_t bounded_draw(uint64_t& state, uint64_t n) {
    // rejection sampling keeps the draw unbiased and platform-stable
    uint64_t limit = std::numeric_limits<uint64_t>::max() - std::numeric_limits<uint64_t>::max() % n;
    uint64_t x;
    do { x = splitmix64_step(state); } while (x >= limit);
    return x % n;
}

inline CandSet sample_subset(const CandSet& pool, int slots, uint64_t seed) {
    std::vector<Cand> work(pool.begin(), pool.end());
    uint64_t state = seed;
    for (int i = 0; i < slots; ++i) {
        size_t j = i + static_cast<size_t>(bounded_draw(state, work.size() - i));
        std::swap(work[i], work[j]);
    }
    work.resize(slots);
    return normalized(std::move(work));
}

}  // namespace detail

}  // namespace limvote
