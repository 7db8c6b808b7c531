#include <catch2/catch_amalgamated.hpp>

#include "limvote/metrics.hpp"
#include "limvote/sweep.hpp"

using namespace limvote;

namespace {

// the trial pipeline, replayed from the documented stream derivation
Election replay_trial_election(const SweepConfig& cfg, const CellParams& cell, size_t cell_index,
                               int trial, BroadcastOrder* order_out) {
    RngStream rng = RngStream::derive(cfg.seed, cell_index, static_cast<uint64_t>(trial));
    Profile approvals = gen_disjoint(cfg.n, cfg.m, cell.g, cfg.p, cell.phi, cell.partition, rng);
    BroadcastOrder order = gen_perturbed_order(identity_order(cfg.m), cell.phi, rng);
    Profile ballots = gen_ballots(approvals, cfg.m, cell.l, order);
    if (order_out) *order_out = order;
    return Election{make_frame(cfg.n, cfg.m, cell.k, cell.l, approvals), ballots};
}

}  // namespace

TEST_CASE("sweep runs and summarizes") {
    SweepConfig cfg = SweepConfig::desk_scale();
    cfg.gs = {2};
    cfg.ks = {8};
    cfg.ls = {{LimitSpec::half_k}};
    cfg.phis = {0, 1.0};
    cfg.trials = 12;
    cfg.seed = 77;
    SweepResult r = run_sweep(cfg);
    REQUIRE(r.records.size() == 24);
    REQUIRE(r.summaries.size() == 2);
    for (const auto& s : r.summaries) {
        REQUIRE(s.trials == 12);
        REQUIRE(s.cc[0] <= s.cc[1]);
        REQUIRE(s.cc[1] <= s.cc[2]);
        REQUIRE(s.cc[2] <= s.cc[3]);
        REQUIRE(s.cc[3] <= s.cc[4]);
    }
    for (const auto& t : r.records) REQUIRE(t.av_improvement <= 1);
    SECTION("csv carries the documented headers and one row per trial") {
        std::string csv = trial_csv(r);
        REQUIRE(csv.rfind(trial_csv_header(), 0) == 0);
        REQUIRE(std::count(csv.begin(), csv.end(), '\n') == 25);
        std::string sum = summary_csv(r);
        REQUIRE(sum.rfind(summary_csv_header(), 0) == 0);
    }
}

TEST_CASE("phi = 0 trials are broadcasted party-list and match the closed form") {
    // Small g and l cells give the closed-form preconditions a real chance (a
    // random 24-candidate partition rarely leaves all of six parties with
    // l >= 4 candidates); the recognition half holds in every cell.
    SweepConfig cfg = SweepConfig::desk_scale();
    cfg.gs = {2, 3, 6};
    cfg.ks = {4, 8};
    cfg.ls = {{LimitSpec::absolute, 2}, {LimitSpec::half_k}};
    cfg.phis = {0};
    cfg.trials = 20;
    cfg.seed = 20240812;
    SweepResult r = run_sweep(cfg);
    int cross_checked = 0;
    for (size_t i = 0; i < r.records.size(); ++i) {
        const auto& rec = r.records[i];
        BroadcastOrder order;
        Election e =
            replay_trial_election(cfg, rec.cell, i / cfg.trials, rec.trial, &order);
        REQUIRE(is_broadcasted_party_list(e, order));
        auto det = detect_party_structure(e.frame);
        REQUIRE(det.is_party_list());
        if (cc_closed_form_preconditions(*det.structure, e.frame.m, rec.cell.k, rec.cell.l)) continue;
        auto cf = closed_form_cc_improvement_bpl(*det.structure, e.frame.m, rec.cell.k,
                                                 rec.cell.l);
        ++cross_checked;
        REQUIRE(rec.cc_improvement == (cf.quarantined ? cf.corrected_value : cf.value));
    }
    REQUIRE(cross_checked >= 30);
}

TEST_CASE("trial errors carry the replay triple") {
    SweepConfig cfg = SweepConfig::desk_scale();
    cfg.m = 4;
    cfg.gs = {6};  // cannot partition 4 candidates into 6 nonempty blocks
    cfg.ks = {2};
    cfg.ls = {{LimitSpec::one}};
    cfg.phis = {0};
    cfg.trials = 2;
    REQUIRE_THROWS_WITH(run_sweep(cfg, 1), Catch::Matchers::ContainsSubstring("cell 0, trial 0"));
}
