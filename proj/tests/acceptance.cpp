// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <cstdlib>
#include <iostream>

#include "limvote/fixtures.hpp"
#include "limvote/oracle.hpp"
#include "limvote/sweep.hpp"

using namespace limvote;

namespace {

int failures = 0;

void report(const std::string& name, bool pass, const std::string& detail = "") {
    std::cout << (pass ? "PASS " : "FAIL ") << name;
    if (!detail.empty()) std::cout << "  [" << detail << "]";
    std::cout << "\n";
    if (!pass) ++failures;
}

// --------------------------------------------------------------------------
// 1. fixture reproduction, exact

void criterion_fixtures() {
    auto items = fixtures::run_repro();
    int bad = 0;
    std::string first;
    for (const auto& item : items)
        if (!item.pass) {
            if (bad == 0) first = item.name + ": expected " + item.expected + ", got " + item.got;
            ++bad;
        }
    report("fixture-reproduction", bad == 0,
           bad == 0 ? std::to_string(items.size()) + " items exact" : first);
}

// --------------------------------------------------------------------------
// 2. closed forms vs direct metrics on generated broadcasted party-list
//    elections: 1000 instances per (k,l) in {4,6,8} x {1,2,k}

void criterion_closed_forms() {
    RngStream rng = RngStream::from(20240901);
    int64_t cc_cf_checked = 0, cc_cf_quarantined = 0, pav_cf_checked = 0;
    bool ok = true;
    std::string detail;
    for (int k : {4, 6, 8}) {
        for (int l : {1, 2, k}) {
            for (int trial = 0; trial < 1000 && ok; ++trial) {
                int g = static_cast<int>(rng.below(4));
                g = (g == 3) ? 5 : g + 1;  // {1,2,3,5}
                // distinct supporter counts, descending
                std::vector<int> counts(g), sizes(g);
                int base = 30 + static_cast<int>(rng.below(30));
                for (int i = 0; i < g; ++i) {
                    counts[i] = base - i * (1 + static_cast<int>(rng.below(3))) - i;
                    sizes[i] = l + static_cast<int>(rng.below(5));
                }
                sizes[0] = std::max(sizes[0], k + static_cast<int>(rng.below(3)));
                auto pl = gen_party_list(sizes, counts, k, l, k + 2);
                const auto& f = pl.election.frame;
                if (!cc_closed_form_preconditions(pl.structure, f.m, k, l)) {
                    auto cf = closed_form_cc_improvement_bpl(pl.structure, f.m, k, l);
                    Rat direct = cc_improvement(pl.election).value;
                    ++cc_cf_checked;
                    if (cf.quarantined) {
                        ++cc_cf_quarantined;
                        Rat delta = cf.corrected_denominator - cf.denominator;
                        if (direct != cf.corrected_value ||
                            delta != Rat(pl.structure.parties[cf.s].supporters)) {
                            ok = false;
                            detail = "quarantined instance diverges incorrectly (k=" +
                                     std::to_string(k) + ", l=" + std::to_string(l) + ")";
                        }
                    } else if (direct != cf.value) {
                        ok = false;
                        detail = "cc closed form mismatch (k=" + std::to_string(k) +
                                 ", l=" + std::to_string(l) + ")";
                    }
                }
                if (!pav_closed_form_preconditions(pl.structure, f.m, k, l)) {
                    ++pav_cf_checked;
                    Rat cf = closed_form_pav_improvement_bpl(pl.structure, f.m, k, l);
                    if (cf != pav_improvement(pl.election).value) {
                        ok = false;
                        detail = "pav closed form mismatch (k=" + std::to_string(k) +
                                 ", l=" + std::to_string(l) + ")";
                    }
                }
            }
        }
    }
    if (ok && (cc_cf_checked < 5000 || pav_cf_checked < 5000)) {
        ok = false;
        detail = "too few instances met the preconditions";
    }
    report("closed-form-vs-direct", ok,
           ok ? "cc " + std::to_string(cc_cf_checked) + " checked, " +
                    std::to_string(cc_cf_quarantined) + " quarantined; pav " +
                    std::to_string(pav_cf_checked) + " checked"
              : detail);
}

// --------------------------------------------------------------------------
// 3. guarantee asymptotics

void criterion_guarantees() {
    bool av_ok = true;
    for (int n = 2; n <= 50 && av_ok; ++n) {
        Election e = worst_case_family(FamilyKind::av_guarantee, n, std::min(4, n), 1);
        av_ok = av_improvement(e).value == Rat(1, n);
    }
    report("guarantee-asymptotics.av-family", av_ok, "1/n exact for n = 2..50");

    bool cc_ok = true;
    std::string cc_detail;
    {
        // growing sizes, then the pinned 10^4 * 2k/l point with k = l = 2
        for (int64_t x : {10, 1000}) {
            Election e = worst_case_family(FamilyKind::cc_guarantee, x, 4, 2);
            if (cc_ratio_vs_optimum(e) != Rat(4, 4 + x)) cc_ok = false;
        }
        const int k = 2, l = 2;
        const int64_t x = 10000 * (2 * k / l);
        Election e = worst_case_family(FamilyKind::cc_guarantee, x, k, l);
        Rat ratio = cc_ratio_vs_optimum(e);
        cc_detail = "ratio " + to_decimal(ratio, 6) + " at |X| = " + std::to_string(x);
        if (boost::multiprecision::abs(ratio) > Rat(1, 1000)) cc_ok = false;
    }
    report("guarantee-asymptotics.cc-family", cc_ok, cc_detail);

    bool bpl_ok = true;
    std::string bpl_detail;
    {
        const int k = 4, l = 2;
        for (int64_t x : {10, 1000}) {
            Election e = worst_case_family(FamilyKind::cc_guarantee_bpl, x, k, l);
            if (cc_ratio_vs_optimum(e) != Rat(2 * (x + 1), 2 * (x + 1) + 2 * x)) bpl_ok = false;
        }
        Election e = worst_case_family(FamilyKind::cc_guarantee_bpl, 10000, k, l);
        Rat ratio = cc_ratio_vs_optimum(e);
        Rat target = cc_guarantee_bpl(k, l);
        bpl_detail = "ratio " + to_decimal(ratio, 6) + " vs " + to_fraction(target);
        if (boost::multiprecision::abs(ratio - target) > Rat(1, 1000)) bpl_ok = false;
    }
    report("guarantee-asymptotics.cc-bpl-family", bpl_ok, bpl_detail);
}

// --------------------------------------------------------------------------
// 4. oracle equivalence

void criterion_oracle_equivalence() {
    RngStream rng = RngStream::from(7777);
    bool ok = true;
    std::string detail;
    int elections = 0;
    while (elections < 200 && ok) {
        int n = 1 + static_cast<int>(rng.below(6));
        int m = 2 + static_cast<int>(rng.below(7));
        int k = 1 + static_cast<int>(rng.below(m));
        int l = 1 + static_cast<int>(rng.below(k));
        std::vector<CandSet> A(n);
        for (Voter v = 0; v < n; ++v)
            for (Cand c = 0; c < m; ++c)
                if (rng.coin(0.5)) A[v].push_back(c);
        ElectionFrame f = make_frame(n, m, k, l, Profile::from_sets(A));
        Election e{f, gen_ballots(f.approvals, m, l, identity_order(m))};
        ++elections;
        auto check = [&](std::vector<Committee> mine, oracle::Goal goal, const char* name) {
            auto ref = oracle::oracle_argmax(e, goal);
            std::sort(mine.begin(), mine.end());
            std::sort(ref.begin(), ref.end());
            if (mine != ref) {
                ok = false;
                detail = std::string(name) + " winner set mismatch";
            }
        };
        check(av_winners(f).materialize(), oracle::Goal::av, "av");
        check(lv_winners(e).materialize(), oracle::Goal::lv, "lv");
        check(optimal_committees(f, Objective::cc).materialize(), oracle::Goal::cc, "cc");
        check(optimal_committees(f, Objective::pav).materialize(), oracle::Goal::pav, "pav");
        check(optimal_committees(f, Objective::sav).materialize(), oracle::Goal::sav, "sav");
        check(optimal_committees(f, Objective::lcc).materialize(), oracle::Goal::lcc, "lcc");
    }
    report("oracle-equivalence.rules", ok,
           ok ? std::to_string(elections) + " elections, six rules each" : detail);

    int games = 0;
    bool games_ok = true;
    while (games < 50 && games_ok) {
        int g = 1 + static_cast<int>(rng.below(2));
        std::vector<int> sizes(g), counts(g);
        int total_c = 0;
        for (int i = 0; i < g; ++i) {
            sizes[i] = 1 + static_cast<int>(rng.below(3));
            counts[i] = 1 + static_cast<int>(rng.below(3));
            total_c += sizes[i];
        }
        if (total_c > 6) continue;
        int k = 1 + static_cast<int>(rng.below(std::min(total_c, 4)));
        int l = 1 + static_cast<int>(rng.below(k));
        auto pl = gen_party_list(sizes, counts, k, l, 1);
        auto game = make_lv_game(pl.election.frame);
        int party = static_cast<int>(rng.below(g));
        if (static_cast<int>(game.parties.parties[party].candidates.size()) < l) continue;
        // random opponent tallies within the plausible range
        std::vector<int64_t> opp(game.frame.m, 0);
        for (int i = 0; i < game.party_count(); ++i) {
            if (i == party) continue;
            const auto& p = game.parties.parties[i];
            int64_t votes = static_cast<int64_t>(p.supporters) * l;
            while (votes > 0) {
                Cand c = p.candidates[rng.below(static_cast<uint32_t>(p.candidates.size()))];
                int64_t amount = 1 + static_cast<int64_t>(rng.below(
                                         static_cast<uint32_t>(std::min<int64_t>(votes, 3))));
                if (opp[c] + amount > p.supporters) { --votes; continue; }
                opp[c] += amount;
                votes -= amount;
            }
        }
        ++games;
        if (best_response(game, party, opp).utility !=
            oracle::oracle_best_response(game, party, opp))
            games_ok = false;
    }
    report("oracle-equivalence.best-response", games_ok,
           std::to_string(games) + " tiny games");
}

// --------------------------------------------------------------------------
// 5. lower-quota strategy properties over random conforming games

void criterion_lv_games() {
    RngStream rng = RngStream::from(90210);
    int games = 0, gap_zero = 0;
    bool ok = true;
    std::string detail;
    while (games < 500 && ok) {
        int g = 1 + static_cast<int>(rng.below(3));
        int l = 1 + static_cast<int>(rng.below(2));
        int gap = (g == 1) ? 0 : static_cast<int>(rng.below(3));
        // quotas q_i >= l; supporters a multiple of the quotas so that
        // floor(k*n_i/n) == q_i and every party has votes to spare for the
        // deviation that breaks equilibrium when seats are left over (n_i*l >= q_i+gap)
        int mult = 2 + static_cast<int>(rng.below(2));
        std::vector<int> quotas(g), counts(g), sizes(g);
        int qsum = 0;
        for (int i = 0; i < g; ++i) {
            quotas[i] = l + static_cast<int>(rng.below(3));
            qsum += quotas[i];
            counts[i] = quotas[i] * mult;
        }
        int k = qsum + gap;
        bool proportional = true;
        for (int i = 0; i < g; ++i) {
            if (static_cast<int64_t>(k) * counts[i] / (static_cast<int64_t>(qsum) * mult) !=
                quotas[i])
                proportional = false;
            sizes[i] = quotas[i] + gap + static_cast<int>(rng.below(2));
        }
        if (!proportional) continue;
        auto pl = gen_party_list(sizes, counts, k, l, k);
        auto game = make_lv_game(pl.election.frame);
        // sanity: the precondition l <= quota <= |P_i| holds by construction
        StrategyProfile lq;
        for (int i = 0; i < g; ++i) lq.push_back(lq_strategy(game, i));
        ++games;
        int64_t eps = quota_gap(game);
        if (eps != gap) {
            ok = false;
            detail = "quota gap construction broke";
            break;
        }
        if (eps == 0) ++gap_zero;

        auto tally = strategy_tally(game, lq);
        WinnerSet ws = threshold_winners(tally, game.frame.k);
        auto outcome = game_outcome(game, lq);
        for (int i = 0; i < g && ok; ++i) {
            // (a) some tied committee contains the whole chosen set X_i
            CandSet x = lq_support(game, i);
            int64_t in_locked = intersect_count(ws.locked(), x);
            int64_t in_tie = intersect_count(ws.tie_set(), x);
            bool all_selectable = in_locked + in_tie == static_cast<int64_t>(x.size()) &&
                                  in_tie <= ws.open_slots();
            if (!all_selectable) {
                ok = false;
                detail = "LQ support not jointly electable";
            }
            // (b) every tied committee satisfies lower quota for party i
            if (outcome.utilities[i] < lower_quota(game, i)) {
                ok = false;
                detail = "a tied committee violates lower quota";
            }
        }
        if (!ok) break;
        // (c) epsilon-Nash at the quota gap
        if (!verify_equilibrium(game, lq, eps).holds) {
            ok = false;
            detail = "all-LQ profile not epsilon-Nash at the quota gap";
            break;
        }
        // (d) exact Nash iff the quota gap vanishes
        bool nash = verify_equilibrium(game, lq, 0).holds;
        if (nash != (eps == 0)) {
            ok = false;
            detail = "exact-Nash iff quota-gap-zero failed";
            break;
        }
        // constructive deviation: with a free seat and room to spread (both
        // candidates and votes), eps-1 fails
        if (eps > 0) {
            bool some_room = false;
            for (int i = 0; i < g; ++i) {
                const auto& p = game.parties.parties[i];
                if (static_cast<int64_t>(p.candidates.size()) >= lower_quota(game, i) + eps &&
                    static_cast<int64_t>(p.supporters) * l >= lower_quota(game, i) + eps)
                    some_room = true;
            }
            if (some_room && verify_equilibrium(game, lq, eps - 1).holds) {
                ok = false;
                detail = "profile unexpectedly (eps-1)-Nash";
                break;
            }
        }
    }
    if (ok && (games < 500 || gap_zero < 50)) {
        ok = false;
        detail = "insufficient coverage";
    }
    report("lv-game-properties", ok,
           ok ? std::to_string(games) + " games, " + std::to_string(gap_zero) + " with gap 0"
              : detail);
}

// --------------------------------------------------------------------------
// 6. experiment trend at desk scale

void criterion_trend() {
    SweepConfig cfg = SweepConfig::desk_scale();
    cfg.gs = {6};
    cfg.ks = {8};
    cfg.ls = {{LimitSpec::one}, {LimitSpec::half_k}, {LimitSpec::full_k}};
    cfg.phis = {0, 0.1, 0.25, 1.0};
    cfg.seed = 1;
    SweepResult result = run_sweep(cfg);
    auto median = [&](double phi, LimitSpec::Kind kind) -> Rat {
        for (const auto& s : result.summaries)
            if (s.cell.phi == phi && s.cell.l_label == LimitSpec{kind}.label()) return s.cc[2];
        throw std::logic_error("cell missing");
    };
    Rat m0 = median(0, LimitSpec::half_k);
    Rat m01 = median(0.1, LimitSpec::half_k);
    Rat m025 = median(0.25, LimitSpec::half_k);
    Rat m1 = median(1.0, LimitSpec::half_k);
    bool decreasing = m0 > m01 && m01 > m025;
    bool near_one = m1 >= Rat(95, 100) && m1 <= Rat(105, 100);
    Rat l1 = median(0, LimitSpec::one);
    Rat lk = median(0, LimitSpec::full_k);
    bool l1_beats_lk = l1 > lk;
    report("experiment-trend.decreasing-medians", decreasing,
           to_decimal(m0, 4) + " > " + to_decimal(m01, 4) + " > " + to_decimal(m025, 4));
    report("experiment-trend.phi1-near-one", near_one, "median " + to_decimal(m1, 4));
    report("experiment-trend.l1-exceeds-lk", l1_beats_lk,
           to_decimal(l1, 4) + " vs " + to_decimal(lk, 4));
}

// --------------------------------------------------------------------------
// 7. determinism of the sweep across runs and worker counts

void criterion_determinism() {
    SweepConfig cfg = SweepConfig::desk_scale();
    cfg.gs = {2};
    cfg.ks = {8};
    cfg.ls = {{LimitSpec::half_k}};
    cfg.phis = {0, 0.5};
    cfg.trials = 20;
    cfg.seed = 31415;
    auto a = run_sweep(cfg, 1);
    auto b = run_sweep(cfg, 4);
    auto c = run_sweep(cfg, 4);
    bool same = trial_csv(a) == trial_csv(b) && trial_csv(b) == trial_csv(c) &&
                summary_csv(a) == summary_csv(b);
    report("determinism.in-process", same, "workers 1 vs 4 vs 4, byte-identical CSV");

    // the CLI end: two invocations must produce byte-identical files
    const char* bin = std::getenv("LIMVOTE_BIN");
    if (bin) {
        std::string tmp = "acceptance_sweep_";
        std::string cfg_path = tmp + "config.cfg";
        {
            std::ofstream out(cfg_path);
            out << "preset = desk\ng = 2\nk = 8\nl = k/2\nphi = 0, 0.5\ntrials = 10\nseed = 7\n";
        }
        std::string cmd1 = std::string(bin) + " sweep --config " + cfg_path + " --out " + tmp +
                           "a.csv --summary " + tmp + "as.csv";
        std::string cmd2 = std::string(bin) + " sweep --config " + cfg_path + " --out " + tmp +
                           "b.csv --summary " + tmp + "bs.csv";
        bool ran = std::system(cmd1.c_str()) == 0 && std::system(cmd2.c_str()) == 0;
        auto slurp = [](const std::string& p) {
            std::ifstream in(p, std::ios::binary);
            std::stringstream ss;
            ss << in.rdbuf();
            return ss.str();
        };
        bool identical = ran && slurp(tmp + "a.csv") == slurp(tmp + "b.csv") &&
                         slurp(tmp + "as.csv") == slurp(tmp + "bs.csv") &&
                         !slurp(tmp + "a.csv").empty();
        report("determinism.cli", identical, "two cmd_sweep runs, byte-identical CSV");
    } else {
        report("determinism.cli", false, "LIMVOTE_BIN not set");
    }
}

}  // namespace

int main() {
    criterion_fixtures();
    criterion_closed_forms();
    criterion_guarantees();
    criterion_oracle_equivalence();
    criterion_lv_games();
    criterion_trend();
    criterion_determinism();
    std::cout << (failures == 0 ? "ACCEPTANCE: all criteria passed\n"
                                : "ACCEPTANCE: " + std::to_string(failures) + " criteria failed\n");
    return failures == 0 ? 0 : 1;
}
