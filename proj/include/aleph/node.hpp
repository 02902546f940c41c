#pragma once

#include "aleph/rng.hpp"
#include "aleph/view.hpp"

#include <optional>
#include <vector>

namespace aleph::node {

using aleph::Digest;
using dag::ProcessId;

// Secret material of one process, derived deterministically from a run seed.
struct ProcessKeys {
    crypto::SigningKey sign;
    crypto::BoxSecretKey box;
    std::array<uint8_t, 32> dealer_seed{};

    static ProcessKeys derive(uint64_t run_seed, ProcessId id);
};

// Public material every process knows about every other.
struct Roster {
    std::vector<crypto::VerifyKey> verify_keys;
    std::vector<crypto::BoxPublicKey> box_keys;
};

Roster derive_roster(uint64_t run_seed, uint32_t n_processes);

// First available index: the earliest creator in sigma_k whose dealing unit
// lies below v. Requires v prime. Throws std::runtime_error when no dealing
// unit is below v (cannot happen for primes of level >= 1 in honest runs).
ProcessId fai(const dag::LocalView& view, uint32_t nonce, const Digest& v);

// One process's production half: owns the local view, keys, and the rng that
// drives parent selection. Single-writer by contract.
class ProcessCore {
public:
    ProcessCore(ProcessId id, dag::ViewConfig cfg, ProcessKeys keys, Roster roster,
                uint64_t rng_seed);

    // Builds, signs, and inserts a new unit: first parent a random maximal
    // unit above the last created one, second parent a random maximal unit,
    // coin material attached per the dealing/transversal rules.
    const dag::Unit& create_unit(Bytes payload);

    // Attaches a dealing payload (first unit) or this creator's coin shares
    // (prime of level >= 4) to a draft whose parents are already set.
    void embed_coin_material(dag::Unit& draft, const dag::LocalView::Hypothetical& hypo);

    // Inserts a received unit, tracking dealing payloads for share recovery.
    dag::InsertResult integrate(const dag::Unit& u);

    // Inserts a whole received batch, all-or-nothing: a failure part way
    // through rolls the view back to its pre-batch state.
    struct BatchApply {
        bool ok = true;
        dag::InsertResult failure = dag::InsertResult::Inserted;
    };
    BatchApply apply_batch(const std::vector<dag::Unit>& units);

    ProcessId id() const { return id_; }
    const dag::LocalView& view() const { return view_; }
    std::optional<Digest> last_created() const { return last_created_; }
    Rng& rng() { return rng_; }

    // Transversal sizes recorded at embed time, per carrying level.
    const std::vector<std::pair<uint32_t, uint32_t>>& transversal_log() const {
        return transversal_log_;
    }

    // Whether this core can produce shares for the given dealer.
    bool has_holder_secret(ProcessId dealer) const;

    // Fault-script facility: signs and inserts a payload-tweaked copy of an
    // own unit without advancing last_created, deliberately breaking the
    // self-parent chain. Returns the forking variant.
    const dag::Unit& create_fork_variant(const dag::Unit& original);

private:
    void note_dealing(const dag::Unit& u, const Digest& digest);

    enum class DealerState : uint8_t { Unknown, Faulty, Good };

    ProcessId id_;
    dag::ViewConfig cfg_;
    ProcessKeys keys_;
    Roster roster_;
    Rng rng_;
    dag::LocalView view_;
    std::optional<Digest> last_created_;
    std::vector<DealerState> dealer_state_;
    std::vector<crypto::FieldElem> holder_secret_;  // valid where dealer_state_ == Good
    std::vector<std::pair<uint32_t, uint32_t>> transversal_log_;
};

}  // namespace aleph::node
