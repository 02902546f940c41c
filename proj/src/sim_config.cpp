#include "aleph/sim.hpp"

#include <json.hpp>

#include <fstream>
#include <stdexcept>

namespace aleph::sim {

using json = nlohmann::ordered_json;

namespace {

const char* kind_name(FaultSpec::Kind k) {
    switch (k) {
        case FaultSpec::Kind::Crash: return "crash";
        case FaultSpec::Kind::Silent: return "silent";
        case FaultSpec::Kind::ForkOnce: return "fork_once";
        case FaultSpec::Kind::Branching: return "branching";
    }
    return "?";
}

FaultSpec::Kind kind_from(const std::string& s) {
    if (s == "crash") return FaultSpec::Kind::Crash;
    if (s == "silent") return FaultSpec::Kind::Silent;
    if (s == "fork_once") return FaultSpec::Kind::ForkOnce;
    if (s == "branching") return FaultSpec::Kind::Branching;
    throw std::invalid_argument("unknown fault kind: " + s);
}

void reject_unknown(const json& j, std::initializer_list<const char*> known,
                    const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* k : known)
            if (key == k) ok = true;
        if (!ok) throw std::invalid_argument("unknown key '" + key + "' in " + where);
    }
}

}  // namespace

uint32_t SimConfig::f_max() const {
    if (f_max_override) return *f_max_override;
    return (n_processes + 2) / 3 - 1;  // ceil(N/3) - 1
}

void SimConfig::validate() const {
    if (n_processes < 4) throw std::invalid_argument("n must be at least 4");
    if (n_processes > 64) throw std::invalid_argument("n must be at most 64");
    if (steps == 0) throw std::invalid_argument("steps must be positive");
    if (sync_period == 0) throw std::invalid_argument("sync_period must be positive");
    if (delay.script.empty()) {
        if (delay.min < 1 || delay.max < delay.min)
            throw std::invalid_argument("delay must satisfy 1 <= min <= max");
    }
    for (const auto& f : faults) {
        if (f.process >= n_processes) throw std::invalid_argument("fault process out of range");
        if ((f.kind == FaultSpec::Kind::ForkOnce || f.kind == FaultSpec::Kind::Branching) &&
            f.at_unit < 1)
            throw std::invalid_argument("fork trigger must come after the dealing unit");
    }
}

SimConfig SimConfig::from_json_text(const std::string& text) {
    json j = json::parse(text);
    reject_unknown(j,
                   {"n", "f_max", "sync_period", "steps", "seed", "step_jitter", "delay", "faults",
                    "payloads", "final_flush"},
                   "config");
    SimConfig c;
    c.n_processes = j.at("n").get<uint32_t>();
    if (j.contains("f_max")) c.f_max_override = j["f_max"].get<uint32_t>();
    if (j.contains("sync_period")) c.sync_period = j["sync_period"].get<uint32_t>();
    if (j.contains("steps")) c.steps = j["steps"].get<uint64_t>();
    if (j.contains("seed")) c.seed = j["seed"].get<uint64_t>();
    if (j.contains("step_jitter")) c.step_jitter = j["step_jitter"].get<uint32_t>();
    if (j.contains("final_flush")) c.final_flush = j["final_flush"].get<bool>();
    if (j.contains("delay")) {
        const json& d = j["delay"];
        reject_unknown(d, {"min", "max", "script"}, "delay");
        if (d.contains("script")) {
            c.delay.script = d["script"].get<std::vector<uint32_t>>();
        } else {
            c.delay.min = d.at("min").get<uint32_t>();
            c.delay.max = d.at("max").get<uint32_t>();
        }
    }
    if (j.contains("faults")) {
        for (const json& f : j["faults"]) {
            reject_unknown(f, {"process", "kind", "at_time", "at_unit"}, "fault");
            FaultSpec spec;
            spec.process = f.at("process").get<uint32_t>();
            spec.kind = kind_from(f.at("kind").get<std::string>());
            if (f.contains("at_time")) spec.at_time = f["at_time"].get<uint64_t>();
            if (f.contains("at_unit")) spec.at_unit = f["at_unit"].get<uint32_t>();
            c.faults.push_back(spec);
        }
    }
    if (j.contains("payloads")) {
        const json& p = j["payloads"];
        reject_unknown(p, {"per_process", "size"}, "payloads");
        if (p.contains("per_process")) c.payloads.per_process = p["per_process"].get<uint32_t>();
        if (p.contains("size")) c.payloads.size = p["size"].get<uint32_t>();
    }
    c.validate();
    return c;
}

SimConfig SimConfig::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open config: " + file.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json_text(text);
}

std::string SimConfig::to_json_text() const {
    json j;
    j["n"] = n_processes;
    if (f_max_override) j["f_max"] = *f_max_override;
    j["sync_period"] = sync_period;
    j["steps"] = steps;
    j["seed"] = seed;
    j["step_jitter"] = step_jitter;
    if (!delay.script.empty()) {
        j["delay"] = json{{"script", delay.script}};
    } else {
        j["delay"] = json{{"min", delay.min}, {"max", delay.max}};
    }
    if (!faults.empty()) {
        json arr = json::array();
        for (const auto& f : faults) {
            json fj;
            fj["process"] = f.process;
            fj["kind"] = kind_name(f.kind);
            if (f.kind == FaultSpec::Kind::Crash) fj["at_time"] = f.at_time;
            else if (f.kind != FaultSpec::Kind::Silent) fj["at_unit"] = f.at_unit;
            arr.push_back(fj);
        }
        j["faults"] = arr;
    }
    if (payloads.per_process > 0)
        j["payloads"] = json{{"per_process", payloads.per_process}, {"size", payloads.size}};
    j["final_flush"] = final_flush;
    return j.dump(2);
}

}  // namespace aleph::sim
