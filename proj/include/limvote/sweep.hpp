#pragma once

#include <array>
#include <atomic>
#include <cstdlib>
#include <mutex>
#include <thread>

#include "limvote/generators.hpp"
#include "limvote/io.hpp"
#include "limvote/metrics.hpp"

namespace limvote {

// One limit entry of the sweep grid: an absolute value or one of the
// standard relative choices {1, k/2, k}.
struct LimitSpec {
    enum Kind { absolute, one, half_k, full_k } kind = absolute;
    int value = 1;

    int resolve(int k) const {
        switch (kind) {
            case absolute: return value;
            case one: return 1;
            case half_k: return std::max(1, k / 2);
            case full_k: return k;
        }
        return 1;
    }
    std::string label() const {
        switch (kind) {
            case absolute: return std::to_string(value);
            case one: return "1";
            case half_k: return "k/2";
            case full_k: return "k";
        }
        return "?";
    }
};

struct SweepConfig {
    int n = 1500;
    int m = 24;
    double p = 0.5;
    std::vector<double> phis{0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.5, 0.75, 1.0};
    std::vector<int> gs{2, 6, 20};
    std::vector<int> ks{8, 16, 12};
    std::vector<LimitSpec> ls{{LimitSpec::one}, {LimitSpec::half_k}, {LimitSpec::full_k}};
    int trials = 2000;
    uint64_t seed = 1;
    PartitionMode partition = PartitionMode::uniform_party_choice;

    static SweepConfig desk_scale() {
        SweepConfig c;
        c.n = 150;
        c.trials = 50;
        return c;
    }
};

// key = value lines; '#' starts a comment. Lists are comma separated. Keys:
//   n, m, p, phi, g, k, l, trials, seed, partition (uniform-party-choice |
//   random-partition), preset (paper | desk).
inline SweepConfig parse_sweep_config(std::istream& in) {
    SweepConfig cfg;
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw schema_error("sweep config line " + std::to_string(lineno) + ": " + msg);
    };
    auto split_list = [](std::string s) {
        std::vector<std::string> out;
        std::stringstream ss(std::move(s));
        std::string item;
        while (std::getline(ss, item, ',')) {
            item.erase(0, item.find_first_not_of(" \t"));
            item.erase(item.find_last_not_of(" \t") + 1);
            if (!item.empty()) out.push_back(item);
        }
        return out;
    };
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        auto eq = line.find('=');
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (eq == std::string::npos) fail("expected key = value");
        std::string key = line.substr(0, eq), value = line.substr(eq + 1);
        key.erase(0, key.find_first_not_of(" \t"));
        key.erase(key.find_last_not_of(" \t") + 1);
        value.erase(0, value.find_first_not_of(" \t"));
        value.erase(value.find_last_not_of(" \t\r") + 1);
        try {
            if (key == "preset") {
                if (value == "desk") cfg = SweepConfig::desk_scale();
                else if (value == "paper") cfg = SweepConfig{};
                else fail("unknown preset '" + value + "'");
            } else if (key == "n") cfg.n = std::stoi(value);
            else if (key == "m") cfg.m = std::stoi(value);
            else if (key == "p") cfg.p = std::stod(value);
            else if (key == "trials") cfg.trials = std::stoi(value);
            else if (key == "seed") cfg.seed = std::stoull(value);
            else if (key == "partition") {
                if (value == "uniform-party-choice") cfg.partition = PartitionMode::uniform_party_choice;
                else if (value == "random-partition") cfg.partition = PartitionMode::random_partition;
                else fail("unknown partition mode '" + value + "'");
            } else if (key == "phi") {
                cfg.phis.clear();
                for (auto& v : split_list(value)) cfg.phis.push_back(std::stod(v));
            } else if (key == "g") {
                cfg.gs.clear();
                for (auto& v : split_list(value)) cfg.gs.push_back(std::stoi(v));
            } else if (key == "k") {
                cfg.ks.clear();
                for (auto& v : split_list(value)) cfg.ks.push_back(std::stoi(v));
            } else if (key == "l") {
                cfg.ls.clear();
                for (auto& v : split_list(value)) {
                    if (v == "1") cfg.ls.push_back({LimitSpec::one});
                    else if (v == "k/2") cfg.ls.push_back({LimitSpec::half_k});
                    else if (v == "k") cfg.ls.push_back({LimitSpec::full_k});
                    else cfg.ls.push_back({LimitSpec::absolute, std::stoi(v)});
                }
            } else fail("unknown key '" + key + "'");
        } catch (const std::invalid_argument&) {
            fail("cannot parse value '" + value + "'");
        }
    }
    if (cfg.phis.empty() || cfg.gs.empty() || cfg.ks.empty() || cfg.ls.empty() || cfg.trials < 1)
        throw schema_error("sweep config: empty grid");
    for (double phi : cfg.phis)
        if (phi < 0 || phi > 1) throw schema_error("sweep config: phi outside [0,1]");
    if (cfg.p < 0 || cfg.p > 1) throw schema_error("sweep config: p outside [0,1]");
    return cfg;
}

inline SweepConfig parse_sweep_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw schema_error("cannot open " + path);
    return parse_sweep_config(in);
}

// ---------------------------------------------------------------------------

struct CellParams {
    double phi;
    int g, k, l;
    std::string l_label;
    PartitionMode partition;
};

struct TrialRecord {
    CellParams cell;
    int trial = 0;
    uint64_t stream_seed = 0;
    Rat cc_improvement, pav_improvement, av_improvement;
    std::string party_sizes;  // detected party supporter counts at phi=0 layout, "-" otherwise
    int tie_break_events = 0;
};

struct CellSummary {
    CellParams cell;
    int trials = 0;
    // five-number summaries per metric
    std::array<Rat, 5> cc, pav, av;
};

struct SweepResult {
    std::vector<TrialRecord> records;
    std::vector<CellSummary> summaries;
};

struct trial_error : std::runtime_error {
    trial_error(size_t cell, int trial, uint64_t seed, const std::string& what)
        : std::runtime_error("trial failed (cell " + std::to_string(cell) + ", trial " +
                             std::to_string(trial) + ", seed " + std::to_string(seed) +
                             "): " + what) {}
};

namespace detail {

inline std::array<Rat, 5> five_number(std::vector<Rat> v) {
    std::sort(v.begin(), v.end());
    auto median_of = [&](size_t lo, size_t hi) -> Rat {  // [lo, hi)
        size_t len = hi - lo;
        if (len % 2 == 1) return v[lo + len / 2];
        return Rat(v[lo + len / 2 - 1] + v[lo + len / 2]) / 2;
    };
    size_t n = v.size();
    // Tukey hinges: quartiles are medians of the lower/upper halves,
    // the middle element included in both when n is odd
    size_t half = n / 2;
    Rat q1 = median_of(0, n % 2 ? half + 1 : half);
    Rat q3 = median_of(n % 2 ? half : half, n);
    return {v.front(), q1, median_of(0, n), q3, v.back()};
}

}  // namespace detail

// the full per-trial pipeline: disjoint approvals, perturbed order, ballots,
// resolute LV and AV with seeded tie-breaking, improvement ratios
inline TrialRecord run_trial(const SweepConfig& cfg, const CellParams& cell, size_t cell_index,
                             int trial) {
    RngStream rng = RngStream::derive(cfg.seed, cell_index, static_cast<uint64_t>(trial));
    TrialRecord rec;
    rec.cell = cell;
    rec.trial = trial;
    rec.stream_seed = rng.state;
    Profile approvals = gen_disjoint(cfg.n, cfg.m, cell.g, cfg.p, cell.phi, cell.partition, rng);
    BroadcastOrder order = gen_perturbed_order(identity_order(cfg.m), cell.phi, rng);
    Profile ballots = gen_ballots(approvals, cfg.m, cell.l, order);
    Election e{make_frame(cfg.n, cfg.m, cell.k, cell.l, approvals), ballots};

    WinnerSet lv = lv_winners(e);
    WinnerSet av = av_winners(e.frame);
    if (!lv.is_singleton()) ++rec.tie_break_events;
    if (!av.is_singleton()) ++rec.tie_break_events;
    Committee wl = make_resolute(lv, TieBreakPolicy::random(rng.next()));
    Committee wa = make_resolute(av, TieBreakPolicy::random(rng.next()));

    int64_t cc_lv = cc_score(e.frame, wl), cc_av = cc_score(e.frame, wa);
    Rat pav_lv = pav_score(e.frame, wl), pav_av = pav_score(e.frame, wa);
    int64_t av_lv = av_score(e.frame, wl), av_av = av_score(e.frame, wa);
    if (cc_av == 0 || pav_av == 0 || av_av == 0)
        throw undefined_ratio_error("AV committee scores zero");
    rec.cc_improvement = Rat(cc_lv, cc_av);
    rec.pav_improvement = pav_lv / pav_av;
    rec.av_improvement = Rat(av_lv, av_av);

    auto det = detect_party_structure(e.frame);
    if (det.is_party_list()) {
        std::string sizes;
        for (const auto& p : det.structure->parties) {
            if (!sizes.empty()) sizes += "+";
            sizes += std::to_string(p.supporters);
        }
        rec.party_sizes = sizes;
    } else {
        rec.party_sizes = "-";
    }
    return rec;
}

inline int worker_count_from_env() {
    if (const char* env = std::getenv("LIMVOTE_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Trials execute concurrently on per-trial derived streams; records land in
// canonical (cell, trial) order no matter the worker count.
inline SweepResult run_sweep(const SweepConfig& cfg, int workers = worker_count_from_env()) {
    std::vector<CellParams> cells;
    for (double phi : cfg.phis)
        for (int g : cfg.gs)
            for (int k : cfg.ks)
                for (const LimitSpec& ls : cfg.ls)
                    cells.push_back({phi, g, k, ls.resolve(k), ls.label(), cfg.partition});

    SweepResult out;
    out.records.resize(cells.size() * cfg.trials);
    std::atomic<size_t> next{0};
    std::atomic<bool> failed{false};
    std::string first_error;
    std::mutex error_mutex;
    const size_t total = out.records.size();

    auto work = [&]() {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= total || failed.load()) return;
            size_t cell_index = i / cfg.trials;
            int trial = static_cast<int>(i % cfg.trials);
            try {
                out.records[i] = run_trial(cfg, cells[cell_index], cell_index, trial);
            } catch (const std::exception& err) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!failed.exchange(true))
                    first_error = trial_error(cell_index, trial,
                                              RngStream::derive(cfg.seed, cell_index, trial).state,
                                              err.what())
                                      .what();
                return;
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (failed.load()) throw std::runtime_error(first_error);

    for (size_t ci = 0; ci < cells.size(); ++ci) {
        std::vector<Rat> cc, pav, av;
        for (int t = 0; t < cfg.trials; ++t) {
            const auto& r = out.records[ci * cfg.trials + t];
            cc.push_back(r.cc_improvement);
            pav.push_back(r.pav_improvement);
            av.push_back(r.av_improvement);
        }
        CellSummary s;
        s.cell = cells[ci];
        s.trials = cfg.trials;
        s.cc = detail::five_number(std::move(cc));
        s.pav = detail::five_number(std::move(pav));
        s.av = detail::five_number(std::move(av));
        out.summaries.push_back(std::move(s));
    }
    return out;
}

// ---------------------------------------------------------------------------
// CSV rendering; the header rows are part of the documented interface

inline const char* trial_csv_header() {
    return "phi,g,k,l,l_spec,partition,trial,stream_seed,"
           "cc_improvement,cc_improvement_decimal,"
           "pav_improvement,pav_improvement_decimal,"
           "av_improvement,av_improvement_decimal,"
           "party_sizes,tie_break_events\n";
}

inline std::string partition_name(PartitionMode mode) {
    return mode == PartitionMode::uniform_party_choice ? "uniform-party-choice"
                                                       : "random-partition";
}

inline std::string format_phi(double phi) {
    std::ostringstream os;
    os << phi;
    return os.str();
}

inline std::string trial_csv(const SweepResult& r) {
    std::string out = trial_csv_header();
    for (const auto& t : r.records) {
        out += csv_row({format_phi(t.cell.phi), std::to_string(t.cell.g),
                        std::to_string(t.cell.k), std::to_string(t.cell.l), t.cell.l_label,
                        partition_name(t.cell.partition), std::to_string(t.trial),
                        std::to_string(t.stream_seed), to_fraction(t.cc_improvement),
                        to_decimal(t.cc_improvement), to_fraction(t.pav_improvement),
                        to_decimal(t.pav_improvement), to_fraction(t.av_improvement),
                        to_decimal(t.av_improvement), t.party_sizes,
                        std::to_string(t.tie_break_events)});
    }
    return out;
}

inline const char* summary_csv_header() {
    return "phi,g,k,l,l_spec,partition,trials,"
           "cc_min,cc_q1,cc_median,cc_q3,cc_max,"
           "pav_min,pav_q1,pav_median,pav_q3,pav_max,"
           "av_min,av_q1,av_median,av_q3,av_max\n";
}

inline std::string summary_csv(const SweepResult& r) {
    std::string out = summary_csv_header();
    for (const auto& s : r.summaries) {
        std::vector<std::string> fields{format_phi(s.cell.phi), std::to_string(s.cell.g),
                                        std::to_string(s.cell.k), std::to_string(s.cell.l),
                                        s.cell.l_label, partition_name(s.cell.partition),
                                        std::to_string(s.trials)};
        for (const auto* arr : {&s.cc, &s.pav, &s.av})
            for (const Rat& v : *arr) fields.push_back(to_decimal(v));
        out += csv_row(fields);
    }
    return out;
}

}  // namespace limvote
