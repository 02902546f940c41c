#include "aleph/sim.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

namespace aleph::sim {

using json = nlohmann::ordered_json;

namespace {

json batch_to_json(const consensus::BatchRecord& b) {
    json j;
    j["batch"] = b.index;
    j["timing_unit"] = b.timing_unit.hex();
    json units = json::array();
    for (const auto& d : b.units) units.push_back(d.hex());
    j["units"] = units;
    json payloads = json::array();
    for (const auto& d : b.payload_digests) payloads.push_back(d.hex());
    j["payloads"] = payloads;
    return j;
}

consensus::BatchRecord batch_from_json(const json& j) {
    for (const auto& [key, value] : j.items())
        if (key != "batch" && key != "timing_unit" && key != "units" && key != "payloads")
            throw std::runtime_error("unknown key '" + key + "' in log record");
    consensus::BatchRecord b;
    b.index = j.at("batch").get<uint32_t>();
    b.timing_unit = Digest::from_hex(j.at("timing_unit").get<std::string>());
    for (const auto& u : j.at("units")) b.units.push_back(Digest::from_hex(u.get<std::string>()));
    for (const auto& p : j.at("payloads"))
        b.payload_digests.push_back(Digest::from_hex(p.get<std::string>()));
    return b;
}

double mean_of(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    return std::accumulate(xs.begin(), xs.end(), 0.0) / double(xs.size());
}

double percentile_of(std::vector<double> xs, double p) {
    if (xs.empty()) return 0.0;
    std::sort(xs.begin(), xs.end());
    size_t idx = size_t(p * double(xs.size() - 1));
    return xs[idx];
}

}  // namespace

std::string RunReport::to_json_text() const {
    json j;
    j["config"] = json::parse(config.to_json_text());
    j["beyond_tolerance"] = beyond_tolerance;
    j["max_level"] = max_level;
    j["units_created"] = units_created;
    j["units_exchanged"] = units_exchanged;
    j["syncs_completed"] = syncs_completed;
    j["syncs_rejected"] = syncs_rejected;
    j["coin_consultations"] = coin_consultations;
    j["correct"] = correct;
    json trans = json::array();
    for (auto [level, size] : transversals) trans.push_back(json::array({level, size}));
    j["transversals"] = trans;
    json offs = json::array();
    for (auto [level, off] : decision_offsets) offs.push_back(json::array({level, off}));
    j["decision_offsets"] = offs;
    j["choice_offsets"] = choice_offsets;
    json logs_json = json::array();
    for (const auto& log : logs) {
        json one = json::array();
        for (const auto& b : log) one.push_back(batch_to_json(b));
        logs_json.push_back(one);
    }
    j["logs"] = logs_json;
    j["violations"] = violations;
    return j.dump(2);
}

RunReport RunReport::from_json_text(const std::string& text) {
    json j = json::parse(text);
    RunReport r;
    r.config = SimConfig::from_json_text(j.at("config").dump());
    r.beyond_tolerance = j.at("beyond_tolerance").get<bool>();
    r.max_level = j.at("max_level").get<uint32_t>();
    r.units_created = j.at("units_created").get<uint64_t>();
    r.units_exchanged = j.at("units_exchanged").get<uint64_t>();
    r.syncs_completed = j.at("syncs_completed").get<uint64_t>();
    r.syncs_rejected = j.at("syncs_rejected").get<uint64_t>();
    r.coin_consultations = j.at("coin_consultations").get<uint64_t>();
    r.correct = j.at("correct").get<std::vector<bool>>();
    for (const auto& t : j.at("transversals"))
        r.transversals.emplace_back(t.at(0).get<uint32_t>(), t.at(1).get<uint32_t>());
    for (const auto& t : j.at("decision_offsets"))
        r.decision_offsets.emplace_back(t.at(0).get<uint32_t>(), t.at(1).get<uint32_t>());
    r.choice_offsets = j.at("choice_offsets").get<std::vector<uint32_t>>();
    for (const auto& log : j.at("logs")) {
        std::vector<consensus::BatchRecord> one;
        for (const auto& b : log) one.push_back(batch_from_json(b));
        r.logs.push_back(std::move(one));
    }
    r.violations = j.at("violations").get<std::vector<std::string>>();
    return r;
}

void write_output_log(const std::filesystem::path& file,
                      const std::vector<consensus::BatchRecord>& log) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write log: " + file.string());
    for (const auto& b : log) out << batch_to_json(b).dump() << "\n";
}

std::vector<consensus::BatchRecord> read_output_log(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open log: " + file.string());
    std::vector<consensus::BatchRecord> out;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            out.push_back(batch_from_json(json::parse(line)));
        } catch (const std::exception& e) {
            throw std::runtime_error(file.string() + ":" + std::to_string(line_no) + ": " +
                                     e.what());
        }
    }
    return out;
}

void write_run_outputs(const RunReport& report, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    {
        std::ofstream out(out_dir / "report.json");
        if (!out) throw std::runtime_error("cannot write report.json");
        out << report.to_json_text() << "\n";
    }
    for (size_t i = 0; i < report.logs.size(); ++i)
        write_output_log(out_dir / ("process_" + std::to_string(i) + ".jsonl"), report.logs[i]);
}

VerifyReport verify_logs(const std::vector<std::vector<consensus::BatchRecord>>& logs,
                         const std::vector<std::string>& names) {
    VerifyReport rep;
    if (logs.size() < 2) {
        rep.consistent = false;
        rep.detail = "need at least two logs";
        return rep;
    }
    auto name = [&](size_t i) {
        return i < names.size() ? names[i] : "log" + std::to_string(i);
    };

    for (size_t i = 0; i < logs.size(); ++i) {
        std::set<Digest> seen;
        for (size_t k = 0; k < logs[i].size(); ++k) {
            const auto& b = logs[i][k];
            if (b.index != k) {
                rep.consistent = false;
                rep.detail = name(i) + ": batch indices not contiguous at position " +
                             std::to_string(k);
                return rep;
            }
            for (const auto& d : b.units) {
                if (!seen.insert(d).second) {
                    rep.consistent = false;
                    rep.detail = name(i) + ": unit repeated across batches in batch " +
                                 std::to_string(k);
                    return rep;
                }
            }
        }
    }

    for (size_t a = 0; a < logs.size(); ++a) {
        for (size_t b = a + 1; b < logs.size(); ++b) {
            size_t common = std::min(logs[a].size(), logs[b].size());
            for (size_t k = 0; k < common; ++k) {
                const auto& ra = logs[a][k];
                const auto& rb = logs[b][k];
                if (ra.timing_unit != rb.timing_unit || ra.units != rb.units ||
                    ra.payload_digests != rb.payload_digests) {
                    rep.consistent = false;
                    rep.detail = name(a) + " and " + name(b) + " diverge at batch " +
                                 std::to_string(k);
                    return rep;
                }
            }
        }
    }
    return rep;
}

std::string stats_table(const RunReport& report) {
    std::vector<double> trans;
    for (auto [level, size] : report.transversals)
        if (level >= 4) trans.push_back(double(size));
    std::vector<double> choice(report.choice_offsets.begin(), report.choice_offsets.end());
    std::vector<double> decisions;
    for (auto [level, off] : report.decision_offsets) decisions.push_back(double(off));

    std::ostringstream out;
    out << "max_level             " << report.max_level << "\n";
    out << "units_created         " << report.units_created << "\n";
    out << "units_exchanged       " << report.units_exchanged << "\n";
    out << "syncs_completed       " << report.syncs_completed << "\n";
    out << "syncs_rejected        " << report.syncs_rejected << "\n";
    out << "coin_consultations    " << report.coin_consultations << "\n";
    out << "transversal_samples   " << trans.size() << "\n";
    out << "transversal_mean      " << mean_of(trans) << "\n";
    out << "transversal_p90       " << percentile_of(trans, 0.9) << "\n";
    out << "decision_offset_mean  " << mean_of(decisions) << "\n";
    out << "choice_offset_mean    " << mean_of(choice) << "\n";
    size_t batches = 0;
    for (size_t i = 0; i < report.logs.size(); ++i)
        if (i < report.correct.size() && report.correct[i])
            batches = std::max(batches, report.logs[i].size());
    out << "batches_emitted       " << batches << "\n";
    out << "violations            " << report.violations.size() << "\n";
    return out.str();
}

}  // namespace aleph::sim
