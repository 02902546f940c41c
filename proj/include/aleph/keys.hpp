#pragma once

#include "aleph/bytes.hpp"

#include <optional>

namespace aleph::crypto {

// Ed25519 verification key (32 bytes).
struct VerifyKey {
    std::array<uint8_t, 32> bytes{};
    auto operator<=>(const VerifyKey&) const = default;
};

// Ed25519 signature (64 bytes), kept as a variable-length blob so the
// signature scheme stays swappable behind sign/verify.
struct Signature {
    Bytes bytes;
    bool operator==(const Signature&) const = default;
};

// Ed25519 signing key, derived deterministically from a 32-byte seed.
class SigningKey {
public:
    static SigningKey from_seed(std::span<const uint8_t> seed32);

    const VerifyKey& verify_key() const { return vk_; }
    Signature sign(std::span<const uint8_t> message) const;

private:
    std::array<uint8_t, 32> secret_{};
    VerifyKey vk_;
};

bool verify(const VerifyKey& vk, std::span<const uint8_t> message, const Signature& sig);

// X25519 key pair used to encrypt coin shares toward a holder.
struct BoxPublicKey {
    std::array<uint8_t, 32> bytes{};
    auto operator<=>(const BoxPublicKey&) const = default;
};

class BoxSecretKey {
public:
    static BoxSecretKey from_seed(std::span<const uint8_t> seed32);

    const BoxPublicKey& public_key() const { return pk_; }

    // Diffie-Hellman shared secret with a peer public key.
    std::array<uint8_t, 32> shared_secret(const BoxPublicKey& peer) const;

private:
    std::array<uint8_t, 32> secret_{};
    BoxPublicKey pk_;
};

std::array<uint8_t, 32> shared_secret_from_ephemeral(std::span<const uint8_t> ephemeral_secret,
                                                     const BoxPublicKey& peer);
BoxPublicKey box_public_from_secret(std::span<const uint8_t> secret32);

}  // namespace aleph::crypto
