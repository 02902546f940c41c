#pragma once

#include "aleph/coin.hpp"
#include "aleph/keys.hpp"
#include "aleph/sha256.hpp"

#include <optional>
#include <vector>

namespace aleph::dag {

using ProcessId = uint32_t;

// The DAG node: an immutable message container. Non-genesis units carry
// exactly two parent hashes (possibly equal); the genesis unit carries none
// and uses the reserved creator id N (one past the last real process).
struct Unit {
    ProcessId creator = 0;
    std::vector<Digest> parents;
    Bytes payload;
    std::optional<crypto::DealingPayload> dealing;
    std::vector<crypto::CoinShare> coin_shares;  // sorted by (dealer, holder, nonce)
    crypto::Signature signature;

    bool is_genesis_shaped() const { return parents.empty(); }
    bool operator==(const Unit&) const = default;
};

// Deterministic byte representation. With `include_signature` false the
// signature slot is written as an empty marker — that form is the signing
// preimage; the full form (marker + bytes) is what gets hashed.
Bytes canonical_encode(const Unit& u, bool include_signature = true);

// Strict inverse of canonical_encode; rejects non-canonical input
// (wrong parent count, unsorted coin shares, trailing bytes).
// Throws std::runtime_error on malformed bytes.
Unit canonical_decode(std::span<const uint8_t> bytes);

inline Digest unit_hash(std::span<const uint8_t> bytes) { return crypto::sha256d(bytes); }

Digest hash_of(const Unit& u);

// Signs the unit in place over its empty-signature encoding.
void sign_unit(Unit& u, const crypto::SigningKey& key);
bool verify_unit_signature(const Unit& u, const crypto::VerifyKey& vk);

// The protocol constant all processes share at startup for a network of
// n_processes: zero parents, empty payload, unsigned.
Unit make_genesis(uint32_t n_processes);
Digest genesis_digest(uint32_t n_processes);

}  // namespace aleph::dag
