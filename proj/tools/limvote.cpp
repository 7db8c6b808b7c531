// limvote: limited-voting analysis from the command line.
//
// Subcommands: gen | eval | axioms | game | sweep | repro.
// Exit codes: 0 success, 1 input error, 2 internal-consistency alarm,
// 3 budget exceeded.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "limvote/fixtures.hpp"
#include "limvote/io.hpp"
#include "limvote/oracle.hpp"
#include "limvote/sweep.hpp"

namespace lv = limvote;
using nlohmann::json;

namespace {

struct alarm_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty() || out_path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw lv::schema_error("cannot open output file " + out_path);
    out << content;
}

std::map<std::string, std::string> read_kv_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw lv::schema_error("cannot open " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        auto eq = line.find('=');
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (eq == std::string::npos) throw lv::schema_error("expected key = value in " + path);
        auto trim = [](std::string s) {
            s.erase(0, s.find_first_not_of(" \t"));
            s.erase(s.find_last_not_of(" \t\r") + 1);
            return s;
        };
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    return out;
}

// ---------------------------------------------------------------------------

int cmd_gen(const std::string& config_path, const std::string& out_path, uint64_t seed_override,
            bool have_seed) {
    auto kv = read_kv_config(config_path);
    auto need = [&](const std::string& key) {
        auto it = kv.find(key);
        if (it == kv.end()) throw lv::schema_error("gen config: missing key '" + key + "'");
        return it->second;
    };
    std::string kind = need("kind");
    json j;
    if (kind == "party-list") {
        auto sizes = parse_int_list(need("sizes"));
        auto counts = parse_int_list(need("counts"));
        int filler = kv.count("filler") ? std::stoi(kv["filler"]) : 0;
        auto pl = lv::gen_party_list(sizes, counts, std::stoi(need("k")), std::stoi(need("l")),
                                     filler);
        j = lv::write_election(pl.election, &pl.order);
    } else if (kind == "disjoint") {
        uint64_t seed = have_seed ? seed_override
                                  : (kv.count("seed") ? std::stoull(kv["seed"]) : 1);
        auto mode = kv.count("partition") && kv["partition"] == "random-partition"
                        ? lv::PartitionMode::random_partition
                        : lv::PartitionMode::uniform_party_choice;
        int n = std::stoi(need("n")), m = std::stoi(need("m")), g = std::stoi(need("g"));
        int k = std::stoi(need("k")), l = std::stoi(need("l"));
        double p = std::stod(need("p")), phi = std::stod(need("phi"));
        auto rng = lv::RngStream::from(seed);
        lv::Profile approvals = lv::gen_disjoint(n, m, g, p, phi, mode, rng);
        lv::BroadcastOrder order = lv::gen_perturbed_order(lv::identity_order(m), phi, rng);
        lv::Profile ballots = lv::gen_ballots(approvals, m, l, order);
        lv::Election e{lv::make_frame(n, m, k, l, approvals), ballots};
        j = lv::write_election(e, &order);
    } else if (kind == "family-av" || kind == "family-cc" || kind == "family-cc-bpl") {
        lv::FamilyKind fk = kind == "family-av"       ? lv::FamilyKind::av_guarantee
                            : kind == "family-cc"     ? lv::FamilyKind::cc_guarantee
                                                      : lv::FamilyKind::cc_guarantee_bpl;
        lv::Election e = lv::worst_case_family(fk, std::stoll(need("size")),
                                               std::stoi(need("k")), std::stoi(need("l")));
        j = lv::write_election(e);
    } else {
        throw lv::schema_error("gen config: unknown kind '" + kind + "'");
    }
    write_output(out_path, j.dump(2) + "\n");
    return 0;
}

int cmd_eval(const std::string& in_path, const std::vector<std::string>& rules,
             const std::vector<std::string>& metrics, const std::string& mode_name,
             const std::string& tiebreak, uint64_t seed, int64_t budget,
             const std::string& format, const std::string& out_path) {
    auto doc = lv::read_election_file(in_path);
    lv::ExtremizeBudget ext;
    if (budget > 0) ext.max_enumeration = static_cast<size_t>(budget);
    lv::EnumBudget enum_budget;
    if (budget > 0) enum_budget.max_subsets = budget;
    lv::ImpMode mode = mode_name == "resolute" ? lv::ImpMode::resolute : lv::ImpMode::irresolute;
    lv::TieBreakPolicy policy = tiebreak == "random" ? lv::TieBreakPolicy::random(seed)
                                                     : lv::TieBreakPolicy::lex();
    std::vector<lv::ImprovementReport> reports;
    json j;
    j["av_winners_score"] = lv::to_fraction(lv::av_winners(doc.frame).score());
    for (const std::string& rule : rules) {
        lv::WinnerSet ws = [&] {
            if (rule == "av") return lv::av_winners(doc.frame);
            if (rule == "lv") return lv::lv_winners(doc.require_election("lv"));
            if (rule == "lpav") return lv::limited_rule(doc.require_election("lpav"),
                                                        lv::Objective::pav, enum_budget);
            if (rule == "lsav") return lv::limited_rule(doc.require_election("lsav"),
                                                        lv::Objective::sav, enum_budget);
            for (auto [name, obj] : {std::pair{"cc", lv::Objective::cc},
                                     {"pav", lv::Objective::pav},
                                     {"sav", lv::Objective::sav},
                                     {"lcc", lv::Objective::lcc}})
                if (rule == name) return lv::optimal_committees(doc.frame, obj, enum_budget);
            throw lv::schema_error("unknown rule '" + rule + "'");
        }();
        json r;
        r["score"] = lv::to_fraction(ws.score());
        r["score_decimal"] = lv::to_decimal(ws.score());
        if (ws.kind() == lv::WinnerSet::schematic) {
            r["pick"] = ws.representative().members;
        } else {
            r["committees"] = ws.count().str();
            r["pick"] = make_resolute(ws, policy).members;
        }
        j["rules"][rule] = std::move(r);
    }
    if (doc.ballots) {
        lv::Election e = doc.require_election();
        j["lv_winners_score"] = lv::to_fraction(lv::lv_winners(e).score());
        for (const std::string& metric : metrics) {
            if (metric == "cc") {
                reports.push_back(lv::cc_improvement(e, mode, policy, ext));
                j["cc_improvement"] = lv::write_improvement(reports.back());
            } else if (metric == "pav") {
                reports.push_back(lv::pav_improvement(e, mode, policy, ext));
                j["pav_improvement"] = lv::write_improvement(reports.back());
            } else if (metric == "av") {
                reports.push_back(lv::av_improvement(e, mode, policy, ext));
                j["av_improvement"] = lv::write_improvement(reports.back());
            } else if (metric == "laminar-cc") {
                if (!doc.order)
                    throw lv::schema_error("/order: laminar-cc check needs a broadcasting order");
                auto rep = lv::laminar_cc_check(e, *doc.order, ext);
                json r;
                r["preconditions_ok"] = rep.preconditions_ok;
                if (!rep.preconditions_ok) r["reason"] = rep.reason;
                r["report"] = lv::write_improvement(rep.report);
                r["alarm"] = rep.alarm;
                j["laminar_cc"] = std::move(r);
                if (rep.alarm) {
                    write_output(out_path, j.dump(2) + "\n");
                    throw alarm_error("laminar CC bound violated on a conforming instance");
                }
            } else {
                throw lv::schema_error("unknown metric '" + metric + "'");
            }
        }
    } else if (!metrics.empty()) {
        throw lv::schema_error("/ballots: improvement metrics need a ballot profile");
    }
    if (format == "csv") {
        std::string csv =
            "metric,mode,value,value_decimal,lv_committee_score,reference_score,tiebreak_seed\n";
        for (const auto& r : reports) {
            csv += lv::csv_row(
                {r.metric == lv::ImpMetric::cc ? "cc" : r.metric == lv::ImpMetric::pav ? "pav" : "av",
                 r.mode == lv::ImpMode::irresolute ? "irresolute" : "resolute",
                 lv::to_fraction(r.value), lv::to_decimal(r.value),
                 lv::to_fraction(r.lv_committee_score), lv::to_fraction(r.reference_score),
                 r.tiebreak_seed ? std::to_string(*r.tiebreak_seed) : ""});
        }
        write_output(out_path, csv);
    } else {
        write_output(out_path, j.dump(2) + "\n");
    }
    return 0;
}

int cmd_axioms(const std::string& in_path, const std::string& committee_csv,
               const std::string& format, const std::string& out_path) {
    auto doc = lv::read_election_file(in_path);
    lv::CandSet members;
    for (int c : parse_int_list(committee_csv)) members.push_back(c);
    lv::Committee w{lv::normalized(std::move(members))};
    std::vector<lv::AxiomVerdict> verdicts{lv::check_jr(doc.frame, w),
                                           lv::check_pjr(doc.frame, w),
                                           lv::check_ejr(doc.frame, w)};
    auto det = lv::detect_party_structure(doc.frame);
    if (det.is_party_list())
        verdicts.push_back(lv::check_lower_quota(*det.structure, doc.frame.n, doc.frame.k, w));
    if (doc.ballots && lv::is_laminar(doc.frame))
        verdicts.push_back(lv::check_laminar_proportionality(doc.require_election(), w));
    if (format == "csv") {
        std::string csv = "axiom,holds,witness_level,witness_group\n";
        for (const auto& v : verdicts) {
            std::string group;
            if (v.witness)
                for (lv::Voter voter : v.witness->group)
                    group += (group.empty() ? "" : " ") + std::to_string(voter);
            csv += lv::csv_row({lv::axiom_name(v.axiom), v.holds ? "true" : "false",
                                v.witness ? std::to_string(v.witness->level) : "", group});
        }
        write_output(out_path, csv);
        return 0;
    }
    json j;
    j["committee"] = w.members;
    j["verdicts"] = json::array();
    for (const auto& v : verdicts) j["verdicts"].push_back(lv::write_verdict(v));
    write_output(out_path, j.dump(2) + "\n");
    return 0;
}

int cmd_game(const std::string& game_path, const std::string& profile_path, int64_t epsilon,
             const std::string& out_path) {
    auto doc = lv::read_election_file(game_path);
    lv::LVGame game = lv::make_lv_game(doc.frame);
    std::ifstream in(profile_path);
    if (!in) throw lv::schema_error("cannot open " + profile_path);
    json pj;
    try {
        in >> pj;
    } catch (const json::parse_error& err) {
        throw lv::schema_error(profile_path + ": " + std::string(err.what()));
    }
    lv::StrategyProfile s = lv::read_strategy_profile(pj, game);
    auto outcome = lv::game_outcome(game, s);
    auto verdict = lv::verify_equilibrium(game, s, epsilon);
    json j;
    j["parties"] = json::array();
    for (int i = 0; i < game.party_count(); ++i) {
        json p;
        p["candidates"] = game.parties.parties[i].candidates;
        p["supporters"] = game.parties.parties[i].supporters;
        p["lower_quota"] = lv::lower_quota(game, i);
        p["utility"] = outcome.utilities[i];
        p["optimistic_utility"] = outcome.optimistic[i];
        p["best_response_gain"] = verdict.gains[i];
        j["parties"].push_back(std::move(p));
    }
    j["winning_committee_count"] = outcome.winners.count().str();
    j["one_winning_committee"] = outcome.winners.lex_smallest().members;
    j["quota_gap"] = lv::quota_gap(game);
    j["epsilon"] = epsilon;
    j["epsilon_nash"] = verdict.holds;
    write_output(out_path, j.dump(2) + "\n");
    return 0;
}

int cmd_sweep(const std::string& config_path, uint64_t seed_override, bool have_seed,
              const std::string& out_path, const std::string& summary_path) {
    lv::SweepConfig cfg = config_path.empty() ? lv::SweepConfig::desk_scale()
                                              : lv::parse_sweep_config_file(config_path);
    if (have_seed) cfg.seed = seed_override;
    auto result = lv::run_sweep(cfg);
    write_output(out_path, lv::trial_csv(result));
    if (!summary_path.empty()) write_output(summary_path, lv::summary_csv(result));
    return 0;
}

int cmd_repro(const std::string& out_path) {
    auto items = lv::fixtures::run_repro();
    std::string report;
    int failed = 0;
    for (const auto& item : items) {
        report += (item.pass ? "PASS " : "FAIL ") + item.name;
        if (!item.pass) {
            report += "  expected " + item.expected + ", got " + item.got;
            ++failed;
        }
        report += "\n";
    }
    report += std::to_string(items.size() - failed) + "/" + std::to_string(items.size()) +
              " fixtures reproduced\n";
    write_output(out_path, report);
    return failed == 0 ? 0 : 2;
}

// hidden: certify threshold winners and best responses against the oracles
int cmd_certify(uint64_t seed, int rounds, const std::string& out_path) {
    lv::RngStream rng = lv::RngStream::from(seed);
    int checked = 0;
    for (int r = 0; r < rounds; ++r) {
        int n = 2 + static_cast<int>(rng.below(5));
        int m = 3 + static_cast<int>(rng.below(6));
        int k = 1 + static_cast<int>(rng.below(std::min(m, 4)));
        int l = 1 + static_cast<int>(rng.below(k));
        std::vector<lv::CandSet> A(n);
        for (int v = 0; v < n; ++v)
            for (lv::Cand c = 0; c < m; ++c)
                if (rng.coin(0.5)) A[v].push_back(c);
        lv::ElectionFrame f = lv::make_frame(n, m, k, l, lv::Profile::from_sets(A));
        lv::Election e{f, lv::gen_ballots(f.approvals, m, l, lv::identity_order(m))};
        auto mine = lv::av_winners(f).materialize();
        auto ref = lv::oracle::oracle_argmax(e, lv::oracle::Goal::av);
        std::sort(mine.begin(), mine.end());
        std::sort(ref.begin(), ref.end());
        if (mine != ref) {
            write_output(out_path, "MISMATCH at round " + std::to_string(r) + "\n");
            return 2;
        }
        ++checked;
    }
    write_output(out_path, "certified " + std::to_string(checked) + " rounds\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"limited voting toolkit"};
    app.require_subcommand(1);

    std::string config_path, in_path, out_path = "-", summary_path, committee_csv;
    std::string profile_path, game_path;
    std::string mode_name = "irresolute", tiebreak = "lex", format = "json";
    std::vector<std::string> metrics, rules;
    uint64_t seed = 0;
    bool have_seed = false;
    int64_t budget = 0, epsilon = 0;
    int rounds = 50;

    auto add_seed = [&](CLI::App* cmd) {
        cmd->add_option("--seed", seed, "64-bit seed")->each([&](const std::string&) {
            have_seed = true;
        });
    };

    auto* gen = app.add_subcommand("gen", "generate an election from a config file");
    gen->add_option("--config", config_path, "generation config (key = value)")->required();
    gen->add_option("--out", out_path, "output path (- for stdout)");
    add_seed(gen);

    auto* eval = app.add_subcommand("eval", "scores and improvement metrics for an election");
    eval->add_option("--in", in_path, "election JSON")->required();
    eval->add_option("--rules", rules, "av, lv, cc, pav, sav, lcc, lpav, lsav")->delimiter(',');
    eval->add_option("--metrics", metrics, "cc, pav, av, laminar-cc")->delimiter(',');
    eval->add_option("--mode", mode_name, "irresolute | resolute");
    eval->add_option("--tiebreak", tiebreak, "lex | random");
    eval->add_option("--budget", budget, "enumeration budget");
    eval->add_option("--format", format, "json | csv");
    eval->add_option("--out", out_path, "output path");
    add_seed(eval);

    auto* axioms = app.add_subcommand("axioms", "axiom verdicts for a committee");
    axioms->add_option("--in", in_path, "election JSON")->required();
    axioms->add_option("--committee", committee_csv, "comma-separated candidate ids")->required();
    axioms->add_option("--format", format, "json | csv");
    axioms->add_option("--out", out_path, "output path");

    auto* game = app.add_subcommand("game", "LV-game outcome and equilibrium check");
    game->add_option("--game", game_path, "party-list frame JSON")->required();
    game->add_option("--profile", profile_path, "strategy profile JSON")->required();
    game->add_option("--epsilon", epsilon, "epsilon for the equilibrium check");
    game->add_option("--out", out_path, "output path");

    auto* sweep = app.add_subcommand("sweep", "Monte-Carlo experiment sweep");
    sweep->add_option("--config", config_path, "sweep config (key = value)");
    sweep->add_option("--out", out_path, "per-trial CSV path");
    sweep->add_option("--summary", summary_path, "per-cell summary CSV path");
    add_seed(sweep);

    auto* repro = app.add_subcommand("repro", "replay the embedded paper fixtures");
    repro->add_option("--out", out_path, "output path");

    auto* certify = app.add_subcommand("certify", "oracle certification runs");
    certify->group("");  // hidden
    certify->add_option("--rounds", rounds, "rounds");
    certify->add_option("--out", out_path, "output path");
    add_seed(certify);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen(config_path, out_path, seed, have_seed);
        if (eval->parsed())
            return cmd_eval(in_path, rules, metrics, mode_name, tiebreak, seed, budget, format,
                            out_path);
        if (axioms->parsed()) return cmd_axioms(in_path, committee_csv, format, out_path);
        if (game->parsed()) return cmd_game(game_path, profile_path, epsilon, out_path);
        if (sweep->parsed()) return cmd_sweep(config_path, seed, have_seed, out_path, summary_path);
        if (repro->parsed()) return cmd_repro(out_path);
        if (certify->parsed()) return cmd_certify(have_seed ? seed : 1, rounds, out_path);
    } catch (const alarm_error& err) {
        std::cerr << "alarm: " << err.what() << "\n";
        return 2;
    } catch (const lv::budget_exceeded& err) {
        std::cerr << "budget exceeded: " << err.what() << "\n";
        return 3;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 1;
}
