#pragma once

#include "aleph/checks.hpp"
#include "aleph/consensus.hpp"
#include "aleph/gossip.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace aleph::sim {

using dag::ProcessId;

struct DelayPolicy {
    uint32_t min = 1;
    uint32_t max = 1;
    std::vector<uint32_t> script;  // when nonempty, consumed cyclically instead
};

struct FaultSpec {
    enum class Kind { Crash, Silent, ForkOnce, Branching };
    Kind kind = Kind::Crash;
    ProcessId process = 0;
    uint64_t at_time = 0;  // Crash: virtual time after which the core is dead
    uint32_t at_unit = 1;  // ForkOnce / Branching: creation index that triggers
};

struct PayloadPolicy {
    uint32_t per_process = 0;
    uint32_t size = 32;
};

struct SimConfig {
    uint32_t n_processes = 4;
    std::optional<uint32_t> f_max_override;
    uint32_t sync_period = 1;  // initiate a sync every K-th step
    uint64_t steps = 1000;     // total create steps across all processes
    uint64_t seed = 1;
    uint32_t step_jitter = 3;  // next step scheduled 1..1+jitter ticks ahead
    DelayPolicy delay;
    std::vector<FaultSpec> faults;
    PayloadPolicy payloads;
    bool final_flush = true;  // models eventual delivery at run end

    uint32_t f_max() const;
    void validate() const;  // throws std::invalid_argument

    static SimConfig from_json_text(const std::string& text);
    static SimConfig load(const std::filesystem::path& file);
    std::string to_json_text() const;
};

struct RunReport {
    SimConfig config;
    bool beyond_tolerance = false;
    uint32_t max_level = 0;
    uint64_t units_created = 0;
    uint64_t units_exchanged = 0;
    uint64_t syncs_completed = 0;
    uint64_t syncs_rejected = 0;
    uint64_t coin_consultations = 0;
    std::vector<bool> correct;  // per process: no fault script
    std::vector<std::pair<uint32_t, uint32_t>> transversals;  // (carrier level, size)
    std::vector<std::pair<uint32_t, uint32_t>> decision_offsets;  // (candidate level, offset)
    std::vector<uint32_t> choice_offsets;
    std::vector<std::vector<consensus::BatchRecord>> logs;  // per process
    std::vector<std::string> violations;

    std::string to_json_text() const;  // deterministic byte-for-byte
    static RunReport from_json_text(const std::string& text);
};

RunReport run_simulation(const SimConfig& config);

// Writes report.json plus per-process ordered-output logs (process_<i>.jsonl)
// into out_dir; optionally the per-process unit logs too.
void write_run_outputs(const RunReport& report, const std::filesystem::path& out_dir);

// -- ordered-output log files ------------------------------------------------

void write_output_log(const std::filesystem::path& file,
                      const std::vector<consensus::BatchRecord>& log);
// Throws std::runtime_error naming the offending line on malformed input.
std::vector<consensus::BatchRecord> read_output_log(const std::filesystem::path& file);

struct VerifyReport {
    bool consistent = true;
    std::string detail;  // first divergence, when any
};

// Pairwise prefix consistency, per-log batch disjointness, and contiguous
// batch indices over two or more ordered-output logs.
VerifyReport verify_logs(const std::vector<std::vector<consensus::BatchRecord>>& logs,
                         const std::vector<std::string>& names);

// Human-readable summary of a report's metrics.
std::string stats_table(const RunReport& report);

}  // namespace aleph::sim
