#pragma once

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "limvote/axioms.hpp"
#include "limvote/election.hpp"
#include "limvote/games.hpp"
#include "limvote/metrics.hpp"

namespace limvote {

using nlohmann::json;

struct schema_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// JSON election document:
//   { "n", "m", "k", "l", "approvals": [[ids]], "ballots": [[ids]] (optional),
//     "order": [ids] (optional) }
// Schema violations are reported with a JSON-pointer-style path.

namespace detail {

inline int require_int(const json& j, const std::string& path) {
    if (!j.is_number_integer())
        throw schema_error(path + ": expected an integer");
    return j.get<int>();
}

inline std::vector<CandSet> require_id_lists(const json& j, const std::string& path, int n,
                                             int m) {
    if (!j.is_array()) throw schema_error(path + ": expected an array");
    if (n >= 0 && static_cast<int>(j.size()) != n)
        throw schema_error(path + ": expected " + std::to_string(n) + " entries");
    std::vector<CandSet> out;
    for (size_t i = 0; i < j.size(); ++i) {
        const std::string row = path + "/" + std::to_string(i);
        if (!j[i].is_array()) throw schema_error(row + ": expected an array of candidate ids");
        CandSet s;
        for (size_t c = 0; c < j[i].size(); ++c) {
            int id = require_int(j[i][c], row + "/" + std::to_string(c));
            if (id < 0 || id >= m)
                throw schema_error(row + "/" + std::to_string(c) + ": candidate id out of range");
            s.push_back(id);
        }
        out.push_back(normalized(std::move(s)));
    }
    return out;
}

}  // namespace detail

struct ElectionDocument {
    ElectionFrame frame;
    std::optional<Profile> ballots;
    std::optional<BroadcastOrder> order;

    Election require_election(const std::string& what = "election") const {
        if (!ballots) throw schema_error("/ballots: " + what + " requires a ballot profile");
        return Election{frame, *ballots};
    }
};

inline ElectionDocument read_election(const json& j) {
    if (!j.is_object()) throw schema_error("/: expected an object");
    for (const char* key : {"n", "m", "k", "l", "approvals"})
        if (!j.contains(key)) throw schema_error(std::string("/") + key + ": missing");
    int n = detail::require_int(j["n"], "/n");
    int m = detail::require_int(j["m"], "/m");
    int k = detail::require_int(j["k"], "/k");
    int l = detail::require_int(j["l"], "/l");
    ElectionDocument doc;
    try {
        doc.frame = make_frame(n, m, k, l,
                               Profile::from_sets(detail::require_id_lists(j["approvals"],
                                                                           "/approvals", n, m)));
    } catch (const std::invalid_argument& err) {
        throw schema_error(std::string("/: ") + err.what());
    }
    if (j.contains("ballots") && !j["ballots"].is_null())
        doc.ballots = Profile::from_sets(detail::require_id_lists(j["ballots"], "/ballots", n, m));
    if (j.contains("order") && !j["order"].is_null()) {
        if (!j["order"].is_array()) throw schema_error("/order: expected an array");
        CandSet o;
        for (size_t i = 0; i < j["order"].size(); ++i) {
            int id = detail::require_int(j["order"][i], "/order/" + std::to_string(i));
            if (id < 0 || id >= m)
                throw schema_error("/order/" + std::to_string(i) + ": candidate id out of range");
            o.push_back(id);
        }
        if (static_cast<int>(o.size()) != m || static_cast<int>(normalized(o).size()) != m)
            throw schema_error("/order: expected a permutation of 0..m-1");
        doc.order = BroadcastOrder{std::move(o)};
    }
    return doc;
}

inline ElectionDocument read_election_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw schema_error("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& err) {
        throw schema_error(path + ": " + err.what());
    }
    return read_election(j);
}

inline json write_election(const Election& e, const BroadcastOrder* ord = nullptr) {
    json j;
    j["n"] = e.frame.n;
    j["m"] = e.frame.m;
    j["k"] = e.frame.k;
    j["l"] = e.frame.l;
    json approvals = json::array(), ballots = json::array();
    for (Voter v = 0; v < e.frame.n; ++v) {
        approvals.push_back(e.frame.approvals[v]);
        ballots.push_back(e.ballots[v]);
    }
    j["approvals"] = std::move(approvals);
    j["ballots"] = std::move(ballots);
    if (ord) j["order"] = ord->order;
    return j;
}

inline json write_frame(const ElectionFrame& f) {
    json j;
    j["n"] = f.n;
    j["m"] = f.m;
    j["k"] = f.k;
    j["l"] = f.l;
    json approvals = json::array();
    for (Voter v = 0; v < f.n; ++v) approvals.push_back(f.approvals[v]);
    j["approvals"] = std::move(approvals);
    return j;
}

// strategy profiles: array over parties, each an array of [ballot, multiplicity]
inline StrategyProfile read_strategy_profile(const json& j, const LVGame& g) {
    if (!j.is_array() || static_cast<int>(j.size()) != g.party_count())
        throw schema_error("/: expected one strategy per party (" +
                           std::to_string(g.party_count()) + ")");
    StrategyProfile s;
    for (size_t i = 0; i < j.size(); ++i) {
        const std::string base = "/" + std::to_string(i);
        if (!j[i].is_array()) throw schema_error(base + ": expected an array of (ballot, count)");
        PartyStrategy ps;
        for (size_t x = 0; x < j[i].size(); ++x) {
            const std::string row = base + "/" + std::to_string(x);
            const json& entry = j[i][x];
            if (!entry.is_array() || entry.size() != 2 || !entry[0].is_array() ||
                !entry[1].is_number_integer())
                throw schema_error(row + ": expected [ [candidate ids], multiplicity ]");
            CandSet ballot;
            for (size_t c = 0; c < entry[0].size(); ++c)
                ballot.push_back(detail::require_int(entry[0][c], row + "/0/" + std::to_string(c)));
            ps.pairs.push_back({normalized(std::move(ballot)), entry[1].get<int>()});
        }
        s.push_back(std::move(ps));
    }
    return s;
}

inline json write_strategy_profile(const StrategyProfile& s) {
    json j = json::array();
    for (const auto& ps : s) {
        json party = json::array();
        for (const auto& bc : ps.pairs) party.push_back(json::array({bc.ballot, bc.count}));
        j.push_back(std::move(party));
    }
    return j;
}

inline json write_verdict(const AxiomVerdict& v) {
    json j;
    j["axiom"] = axiom_name(v.axiom);
    j["holds"] = v.holds;
    if (v.witness) {
        json w;
        w["group"] = v.witness->group;
        w["level"] = v.witness->level;
        w["common"] = v.witness->common;
        j["witness"] = std::move(w);
    }
    return j;
}

inline json write_improvement(const ImprovementReport& r) {
    json j;
    j["metric"] = r.metric == ImpMetric::cc ? "cc" : r.metric == ImpMetric::pav ? "pav" : "av";
    j["mode"] = r.mode == ImpMode::irresolute ? "irresolute" : "resolute";
    j["value"] = to_fraction(r.value);
    j["value_decimal"] = to_decimal(r.value);
    j["lv_committee_score"] = to_fraction(r.lv_committee_score);
    j["reference_score"] = to_fraction(r.reference_score);
    if (r.tiebreak_seed) j["tiebreak_seed"] = *r.tiebreak_seed;
    if (r.lv_pick) j["lv_pick"] = r.lv_pick->members;
    if (r.av_pick) j["av_pick"] = r.av_pick->members;
    return j;
}

// minimal CSV quoting: fields with commas/quotes/newlines get wrapped
inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

inline std::string csv_row(const std::vector<std::string>& fields) {
    std::string out;
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ",";
        out += csv_field(fields[i]);
    }
    out += "\n";
    return out;
}

}  // namespace limvote
