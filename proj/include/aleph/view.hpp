#pragma once

#include "aleph/unit.hpp"

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

namespace aleph::dag {

enum class InsertResult {
    Inserted,
    Duplicate,
    MissingParent,  // downward closure would break; insert parents first
    BadSignature,
    Malformed,
};

const char* to_string(InsertResult r);

struct ViewConfig {
    uint32_t n_processes = 0;
    uint32_t supermajority = 0;  // ceil(2N/3)
    uint32_t coin_k = 0;         // floor(2N/3) + 1
};

ViewConfig make_view_config(uint32_t n_processes);

// One process's downward-closed set of units with derived structure: levels,
// prime flags, fork registry, reachability, dealing-unit registry, and the
// pool of coin shares found in inserted units.
//
// Single-writer: all mutation funnels through insert(); queries are const.
class LocalView {
public:
    LocalView(ViewConfig cfg, std::vector<crypto::VerifyKey> roster);

    InsertResult insert(const Unit& u);

    // -- basic lookups ------------------------------------------------------
    bool contains(const Digest& d) const { return index_of_.count(d) > 0; }
    const Unit& unit(const Digest& d) const { return rec(d).unit; }
    size_t size() const { return recs_.size(); }
    uint32_t max_level() const { return max_level_; }
    const Digest& genesis() const { return genesis_digest_; }
    const ViewConfig& config() const { return cfg_; }
    const std::vector<crypto::VerifyKey>& roster() const { return roster_; }
    ProcessId genesis_creator() const { return cfg_.n_processes; }
    std::vector<Digest> digests_in_insertion_order() const;

    // -- order structure ----------------------------------------------------
    // u <= v in the DAG order. Throws std::out_of_range on unknown digests.
    bool is_below(const Digest& u, const Digest& v) const;
    // Number of distinct real creators owning some W with u <= W <= v
    // (the genesis creator never counts). Throws std::invalid_argument
    // unless u <= v.
    uint32_t support_between(const Digest& u, const Digest& v) const;
    // v is high above u: u <= v with support >= supermajority.
    bool high_above(const Digest& u, const Digest& v) const;

    uint32_t level_of(const Digest& d) const { return rec(d).level; }
    bool is_prime(const Digest& d) const { return rec(d).prime; }
    std::vector<Digest> prime_units_at(uint32_t level) const;
    // Primes one level down that v is high above. Requires v prime with
    // level >= 1 (std::invalid_argument otherwise). Cached after first call.
    const std::vector<Digest>& prime_ancestors(const Digest& v) const;

    std::vector<Digest> maximal_units() const;
    std::vector<Digest> maximal_units_above(const Digest& w) const;

    // -- creators and forks -------------------------------------------------
    const std::vector<Digest>& units_by(ProcessId creator) const;
    // Same-creator units incomparable with u.
    std::vector<Digest> fork_variants_of(const Digest& u) const;
    const std::set<Digest>& fork_registry(ProcessId creator) const;
    bool is_forked(ProcessId creator) const;

    // -- dealing units and coin shares --------------------------------------
    // The registered dealing unit (first inserted) per creator.
    std::optional<Digest> dealing_unit_of(ProcessId creator) const;
    const crypto::DealingPayload* dealing_payload_of(ProcessId creator) const;
    // Structural query: creator's dealing unit within down(v), smallest
    // digest if a forker managed to plant several.
    std::optional<Digest> dealing_unit_below(ProcessId creator, const Digest& v) const;
    // Shares for (dealer, nonce) collected from all inserted units, by holder.
    const std::map<uint32_t, crypto::CoinShare>* shares_for(uint32_t dealer, uint32_t nonce) const;

    // Common permutation for a level (level 0 maps onto nonce 1); cached.
    const std::vector<uint32_t>& sigma(uint32_t level) const;

    // Level and primality a unit with these parents would get on insert.
    // Used when drafting units whose coin material depends on both.
    struct Hypothetical {
        uint32_t level = 0;
        bool prime = false;
    };
    Hypothetical hypothesize(ProcessId creator, const Digest& p1, const Digest& p2) const;

private:
    struct Rec {
        Unit unit;
        Digest digest;
        uint32_t index = 0;
        uint32_t level = 0;
        bool prime = false;
        std::vector<uint64_t> down;  // ancestor bitset over insertion indices, incl. self
        mutable std::optional<std::vector<Digest>> prime_ancestors;
    };

    const Rec& rec(const Digest& d) const;
    bool down_contains(const Rec& v, uint32_t index) const;
    uint32_t support_count(const Rec& lo, const Rec& hi, uint32_t stop_at) const;
    InsertResult check_shape(const Unit& u, const Digest& digest) const;
    uint32_t compute_level(const Rec& r) const;
    bool compute_prime(const Rec& r) const;
    void index_unit(const Rec& r);

    ViewConfig cfg_;
    std::vector<crypto::VerifyKey> roster_;
    Digest genesis_digest_;
    std::deque<Rec> recs_;  // deque keeps Rec references stable across inserts
    std::unordered_map<Digest, uint32_t, DigestHash> index_of_;
    std::vector<std::vector<Digest>> by_creator_;      // size N+1 (genesis slot last)
    std::vector<std::vector<Digest>> primes_at_;       // by level
    std::map<ProcessId, std::set<Digest>> forks_;
    std::vector<std::optional<Digest>> dealing_of_;    // registered dealing unit per creator
    std::vector<std::vector<Digest>> dealing_units_;   // all dealing-shaped units per creator
    std::map<std::pair<uint32_t, uint32_t>, std::map<uint32_t, crypto::CoinShare>> share_pool_;
    std::set<Digest> max_units_;
    uint32_t max_level_ = 0;
    mutable std::map<uint32_t, std::vector<uint32_t>> sigma_cache_;
};

}  // namespace aleph::dag
