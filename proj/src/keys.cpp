#include "aleph/keys.hpp"

#include <openssl/evp.h>

#include <memory>
#include <stdexcept>

namespace aleph::crypto {

namespace {

using PkeyPtr = std::unique_ptr<EVP_PKEY, decltype(&EVP_PKEY_free)>;
using CtxPtr = std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)>;

PkeyPtr raw_private(int type, std::span<const uint8_t> secret) {
    EVP_PKEY* p = EVP_PKEY_new_raw_private_key(type, nullptr, secret.data(), secret.size());
    if (!p) throw std::runtime_error("EVP_PKEY_new_raw_private_key failed");
    return PkeyPtr(p, EVP_PKEY_free);
}

PkeyPtr raw_public(int type, std::span<const uint8_t> pub) {
    EVP_PKEY* p = EVP_PKEY_new_raw_public_key(type, nullptr, pub.data(), pub.size());
    if (!p) throw std::runtime_error("EVP_PKEY_new_raw_public_key failed");
    return PkeyPtr(p, EVP_PKEY_free);
}

std::array<uint8_t, 32> raw_public_bytes(EVP_PKEY* key) {
    std::array<uint8_t, 32> out{};
    size_t len = out.size();
    if (EVP_PKEY_get_raw_public_key(key, out.data(), &len) != 1 || len != 32)
        throw std::runtime_error("EVP_PKEY_get_raw_public_key failed");
    return out;
}

std::array<uint8_t, 32> seed_array(std::span<const uint8_t> seed) {
    if (seed.size() != 32) throw std::invalid_argument("key seed must be 32 bytes");
    std::array<uint8_t, 32> a{};
    std::copy(seed.begin(), seed.end(), a.begin());
    return a;
}

}  // namespace

SigningKey SigningKey::from_seed(std::span<const uint8_t> seed32) {
    SigningKey k;
    k.secret_ = seed_array(seed32);
    auto pkey = raw_private(EVP_PKEY_ED25519, k.secret_);
    k.vk_.bytes = raw_public_bytes(pkey.get());
    return k;
}

Signature SigningKey::sign(std::span<const uint8_t> message) const {
    auto pkey = raw_private(EVP_PKEY_ED25519, secret_);
    CtxPtr ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (EVP_DigestSignInit(ctx.get(), nullptr, nullptr, nullptr, pkey.get()) != 1)
        throw std::runtime_error("EVP_DigestSignInit failed");
    size_t sig_len = 64;
    Signature sig;
    sig.bytes.resize(sig_len);
    if (EVP_DigestSign(ctx.get(), sig.bytes.data(), &sig_len, message.data(), message.size()) != 1)
        throw std::runtime_error("EVP_DigestSign failed");
    sig.bytes.resize(sig_len);
    return sig;
}

bool verify(const VerifyKey& vk, std::span<const uint8_t> message, const Signature& sig) {
    if (sig.bytes.size() != 64) return false;
    PkeyPtr pkey(EVP_PKEY_new_raw_public_key(EVP_PKEY_ED25519, nullptr, vk.bytes.data(),
                                             vk.bytes.size()),
                 EVP_PKEY_free);
    if (!pkey) return false;
    CtxPtr ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (EVP_DigestVerifyInit(ctx.get(), nullptr, nullptr, nullptr, pkey.get()) != 1) return false;
    return EVP_DigestVerify(ctx.get(), sig.bytes.data(), sig.bytes.size(), message.data(),
                            message.size()) == 1;
}

namespace {
std::array<uint8_t, 32> x25519_derive(std::span<const uint8_t> secret, const BoxPublicKey& peer) {
    auto sk = raw_private(EVP_PKEY_X25519, secret);
    auto pk = raw_public(EVP_PKEY_X25519, peer.bytes);
    std::unique_ptr<EVP_PKEY_CTX, decltype(&EVP_PKEY_CTX_free)> ctx(
        EVP_PKEY_CTX_new(sk.get(), nullptr), EVP_PKEY_CTX_free);
    if (!ctx || EVP_PKEY_derive_init(ctx.get()) != 1 ||
        EVP_PKEY_derive_set_peer(ctx.get(), pk.get()) != 1)
        throw std::runtime_error("X25519 derive init failed");
    std::array<uint8_t, 32> out{};
    size_t len = out.size();
    if (EVP_PKEY_derive(ctx.get(), out.data(), &len) != 1 || len != 32)
        throw std::runtime_error("X25519 derive failed");
    return out;
}
}  // namespace

BoxSecretKey BoxSecretKey::from_seed(std::span<const uint8_t> seed32) {
    BoxSecretKey k;
    k.secret_ = seed_array(seed32);
    auto pkey = raw_private(EVP_PKEY_X25519, k.secret_);
    k.pk_.bytes = raw_public_bytes(pkey.get());
    return k;
}

std::array<uint8_t, 32> BoxSecretKey::shared_secret(const BoxPublicKey& peer) const {
    return x25519_derive(secret_, peer);
}

std::array<uint8_t, 32> shared_secret_from_ephemeral(std::span<const uint8_t> ephemeral_secret,
                                                     const BoxPublicKey& peer) {
    return x25519_derive(ephemeral_secret, peer);
}

BoxPublicKey box_public_from_secret(std::span<const uint8_t> secret32) {
    auto pkey = raw_private(EVP_PKEY_X25519, seed_array(secret32));
    BoxPublicKey pk;
    pk.bytes = raw_public_bytes(pkey.get());
    return pk;
}

}  // namespace aleph::crypto
