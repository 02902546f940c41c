#pragma once

#include "aleph/view.hpp"

#include <map>
#include <set>
#include <vector>

namespace aleph::consensus {

using aleph::Digest;
using dag::ProcessId;

// Three-valued vote: Bot means "undetermined by the data", never "not yet
// computable" — availability gaps surface as EvalResult::blocked instead.
enum class Vote : uint8_t { Zero = 0, One = 1, Bot = 2 };

const char* to_string(Vote v);

struct CoinId {
    uint32_t dealer = 0;
    uint32_t nonce = 0;
    auto operator<=>(const CoinId&) const = default;
};

// A vote value, or a marker that a required coin has fewer than coin_k
// shares in the view so far. Blocked results are retried as the poset grows.
class EvalResult {
public:
    static EvalResult of(Vote v) {
        EvalResult r;
        r.vote_ = v;
        return r;
    }
    static EvalResult blocked(CoinId c) {
        EvalResult r;
        r.blocked_ = true;
        r.coin_ = c;
        return r;
    }

    bool blocked() const { return blocked_; }
    Vote vote() const { return vote_; }
    CoinId coin() const { return coin_; }

private:
    bool blocked_ = false;
    Vote vote_ = Vote::Bot;
    CoinId coin_{};
};

struct Settlement {
    enum class Kind : uint8_t { Pending, SettledZero, SettledOne };
    Kind kind = Kind::Pending;
    Digest unit;            // set for SettledOne
    uint32_t witness_level = 0;  // level at which the settlement concluded
};

struct BatchRecord {
    uint32_t index = 0;
    Digest timing_unit;
    std::vector<Digest> units;           // break_ties order
    std::vector<Digest> payload_digests; // sha256d of each nonempty payload, in order
};

// Memoized election results and ordering progress for one process.
// Values memoized here never change: every entry is a function of a unit's
// down-set (plus combined coins, which are threshold-consistent).
struct ConsensusState {
    std::map<std::pair<Digest, Digest>, Vote> pi_memo;
    std::map<std::pair<Digest, Digest>, Vote> delta_memo;
    std::map<CoinId, int> coin_cache;
    std::map<Digest, Vote> decisions;                  // candidate -> 0/1, frozen
    std::map<Digest, uint32_t> decision_witness_level; // candidate -> witness level
    std::map<std::pair<uint32_t, ProcessId>, Settlement> settled;  // frozen non-Pending
    std::vector<Digest> timing_chain;
    std::set<Digest> ordered;
    std::vector<BatchRecord> batches;

    // Instrumentation.
    uint64_t coin_consultations = 0;
    std::vector<uint32_t> choice_offsets;  // choice level minus timing-unit level
    std::vector<std::string> violations;   // runtime invariant breaches
};

// Round type of U relative to the candidate: Bot for the two preliminary
// levels, else the parity of the level difference.
Vote round_type(const dag::LocalView& view, const Digest& candidate, const Digest& u);

// Counting operators over per-creator vote sets.
Vote sup_maj(const std::vector<std::pair<ProcessId, Vote>>& votes, uint32_t supermajority);
Vote exist_pref1(const std::vector<std::pair<ProcessId, Vote>>& votes);

// The proposal and decision functions. Both require prime arguments
// (std::invalid_argument otherwise) and propagate Blocked upward.
EvalResult pi(const dag::LocalView& view, ConsensusState& state, const Digest& candidate,
              const Digest& u);
EvalResult delta(const dag::LocalView& view, ConsensusState& state, const Digest& candidate,
                 const Digest& u);

struct DecideOutcome {
    bool decided = false;
    Vote value = Vote::Bot;
    uint32_t witness_level = 0;
};

// Witness rule: decided once some prime W has a non-Bot, non-blocked delta.
DecideOutcome decide_candidate(const dag::LocalView& view, ConsensusState& state,
                               const Digest& candidate);

// Slot (level, creator): SettledOne when the unique known prime is decided 1;
// SettledZero via a level+4 witness below which every prime of that slot is
// decided 0 (vacuously when none is); Pending otherwise.
Settlement settle_slot(const dag::LocalView& view, ConsensusState& state, uint32_t level,
                       ProcessId creator);

struct ChooseOutcome {
    bool chosen = false;
    Digest unit;
};

// Walks creators in sigma_level order; the first SettledOne slot whose
// predecessors all settled zero yields the timing unit.
ChooseOutcome choose_timing(const dag::LocalView& view, ConsensusState& state, uint32_t level);

struct BatchOutcome {
    bool ready = false;
    BatchRecord batch;
};

// Emits the next batch if its timing unit is chosen: the timing unit's
// down-set minus everything already ordered, in break_ties order.
BatchOutcome next_batch(const dag::LocalView& view, ConsensusState& state);

// Total order within a batch: topological layers of minimal elements, each
// layer sorted by hash(U) XOR R with R the XOR of all unit hashes in the
// batch. Hash collisions fall back to (creator, digest).
std::vector<Digest> break_ties(const dag::LocalView& view, const std::vector<Digest>& batch);

// Extends the timing chain and emits batches as far as the view allows.
// Returns the number of batches emitted.
size_t advance_ordering(const dag::LocalView& view, ConsensusState& state);

struct ValidationStatus {
    bool validated = false;
    Digest witness;
};

// A unit is validated once some unit is high above it without being above
// any of its fork variants.
ValidationStatus validation_status(const dag::LocalView& view, const Digest& u);

}  // namespace aleph::consensus
