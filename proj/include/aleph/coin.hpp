#pragma once

#include "aleph/field.hpp"
#include "aleph/keys.hpp"

#include <optional>
#include <span>
#include <vector>

namespace aleph::crypto {

// One holder's encrypted share: XOR keystream ciphertext plus a tamper tag,
// both derived from the X25519 shared secret.
struct EncryptedShare {
    std::array<uint8_t, 32> ciphertext{};
    std::array<uint8_t, 32> tag{};
    bool operator==(const EncryptedShare&) const = default;
};

// Everything a dealer publishes in its dealing unit: coefficient commitments
// binding the sharing polynomial, plus one encrypted share per holder.
struct DealingPayload {
    uint32_t dealer = 0;
    uint32_t coin_k = 0;
    std::vector<std::array<uint8_t, 32>> commitments;  // g^{a_i} mod P, coin_k entries
    std::array<uint8_t, 32> ephemeral_key{};           // dealer's X25519 ephemeral public key
    std::vector<EncryptedShare> encrypted_shares;      // one per holder, index order

    bool operator==(const DealingPayload&) const = default;
};

struct CoinShare {
    uint32_t dealer = 0;
    uint32_t holder = 0;
    uint32_t nonce = 0;
    std::array<uint8_t, 32> value{};  // f(holder + 1), 32-byte big-endian field element
    Bytes proof;                      // reserved for backends needing extra data

    bool operator==(const CoinShare&) const = default;
};

struct InsufficientShares : std::runtime_error {
    InsufficientShares() : std::runtime_error("fewer shares than the coin threshold") {}
};
struct MixedShares : std::runtime_error {
    explicit MixedShares(const char* what) : std::runtime_error(what) {}
};

// Deals a threshold coin: Shamir-shares a seed-derived master secret with a
// degree-(coin_k - 1) polynomial and encrypts f(j+1) toward each holder j.
// The payload is a pure function of (seed, holder keys, coin_k).
// Throws std::invalid_argument unless 1 <= coin_k <= N.
DealingPayload coin_deal(uint32_t dealer, uint32_t coin_k,
                         const std::vector<BoxPublicKey>& holder_keys,
                         std::span<const uint8_t> dealer_seed);

// Decrypts and checks holder's share of a dealing. Returns nullopt if the
// ciphertext is tampered or inconsistent with the commitments — the sign of
// a faulty dealer.
std::optional<FieldElem> coin_recover_secret(const DealingPayload& payload, uint32_t holder,
                                             const BoxSecretKey& holder_key);

// Packages a recovered share value for a nonce. The baseline backend reuses
// f(holder+1) for every nonce; only the combination hash varies with it.
CoinShare coin_make_share(uint32_t dealer, uint32_t holder, uint32_t nonce,
                          const FieldElem& secret);

// Full extraction path: decrypt + package, per the dealing payload.
std::optional<CoinShare> coin_extract_share(const DealingPayload& payload, uint32_t holder,
                                            const BoxSecretKey& holder_key, uint32_t nonce);

// Accepts iff the share value matches the committed polynomial at holder+1.
bool coin_verify_share(const DealingPayload& payload, const CoinShare& share);

// Interpolates the master secret from any coin_k shares (same dealer and
// nonce, distinct holders) and maps (dealer, secret, nonce) to one bit.
// Throws InsufficientShares / MixedShares.
int coin_combine(std::span<const CoinShare> shares, uint32_t coin_k, uint32_t nonce);

}  // namespace aleph::crypto
