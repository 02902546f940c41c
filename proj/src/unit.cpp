#include "aleph/unit.hpp"

#include <algorithm>
#include <stdexcept>

namespace aleph::dag {

namespace {

// Hard caps keep decoding of hostile bytes bounded.
constexpr uint32_t kMaxPayload = 1u << 24;
constexpr uint32_t kMaxHolders = 4096;
constexpr uint32_t kMaxShares = 4096;
constexpr uint32_t kMaxProof = 1u << 16;

void encode_dealing(Bytes& out, const crypto::DealingPayload& d) {
    put_u32(out, d.dealer);
    put_u32(out, d.coin_k);
    if (d.commitments.size() != d.coin_k) throw std::runtime_error("dealing commitment count");
    for (const auto& c : d.commitments) put_bytes(out, c);
    put_bytes(out, d.ephemeral_key);
    put_u32(out, uint32_t(d.encrypted_shares.size()));
    for (const auto& s : d.encrypted_shares) {
        put_bytes(out, s.ciphertext);
        put_bytes(out, s.tag);
    }
}

crypto::DealingPayload decode_dealing(ByteReader& r) {
    crypto::DealingPayload d;
    d.dealer = r.u32();
    d.coin_k = r.u32();
    if (d.coin_k == 0 || d.coin_k > kMaxHolders) throw std::runtime_error("dealing coin_k out of range");
    d.commitments.resize(d.coin_k);
    for (auto& c : d.commitments) std::ranges::copy(r.take(32), c.begin());
    std::ranges::copy(r.take(32), d.ephemeral_key.begin());
    uint32_t n = r.u32();
    if (n > kMaxHolders) throw std::runtime_error("dealing holder count out of range");
    d.encrypted_shares.resize(n);
    for (auto& s : d.encrypted_shares) {
        std::ranges::copy(r.take(32), s.ciphertext.begin());
        std::ranges::copy(r.take(32), s.tag.begin());
    }
    return d;
}

auto share_key(const crypto::CoinShare& s) { return std::tuple(s.dealer, s.holder, s.nonce); }

}  // namespace

Bytes canonical_encode(const Unit& u, bool include_signature) {
    Bytes out;
    put_u32(out, u.creator);
    put_u8(out, uint8_t(u.parents.size()));
    for (const auto& p : u.parents) put_bytes(out, p.bytes);
    put_u32(out, uint32_t(u.payload.size()));
    put_bytes(out, u.payload);
    put_u8(out, u.dealing ? 1 : 0);
    if (u.dealing) encode_dealing(out, *u.dealing);
    put_u32(out, uint32_t(u.coin_shares.size()));
    for (const auto& s : u.coin_shares) {
        put_u32(out, s.dealer);
        put_u32(out, s.holder);
        put_u32(out, s.nonce);
        put_bytes(out, s.value);
        put_u32(out, uint32_t(s.proof.size()));
        put_bytes(out, s.proof);
    }
    if (include_signature && !u.signature.bytes.empty()) {
        put_u8(out, 1);
        put_u16(out, uint16_t(u.signature.bytes.size()));
        put_bytes(out, u.signature.bytes);
    } else {
        put_u8(out, 0);
    }
    return out;
}

Unit canonical_decode(std::span<const uint8_t> bytes) {
    ByteReader r(bytes);
    Unit u;
    u.creator = r.u32();
    uint8_t parent_count = r.u8();
    if (parent_count != 0 && parent_count != 2)
        throw std::runtime_error("unit must have 0 or 2 parents");
    u.parents.resize(parent_count);
    for (auto& p : u.parents) std::ranges::copy(r.take(32), p.bytes.begin());
    uint32_t payload_len = r.u32();
    if (payload_len > kMaxPayload) throw std::runtime_error("unit payload too large");
    u.payload = r.bytes(payload_len);
    if (r.u8()) u.dealing = decode_dealing(r);
    uint32_t n_shares = r.u32();
    if (n_shares > kMaxShares) throw std::runtime_error("too many coin shares");
    u.coin_shares.resize(n_shares);
    for (auto& s : u.coin_shares) {
        s.dealer = r.u32();
        s.holder = r.u32();
        s.nonce = r.u32();
        std::ranges::copy(r.take(32), s.value.begin());
        uint32_t proof_len = r.u32();
        if (proof_len > kMaxProof) throw std::runtime_error("share proof too large");
        s.proof = r.bytes(proof_len);
    }
    for (size_t i = 1; i < u.coin_shares.size(); ++i)
        if (share_key(u.coin_shares[i - 1]) >= share_key(u.coin_shares[i]))
            throw std::runtime_error("coin shares not in canonical order");
    if (r.u8()) {
        uint16_t sig_len = r.u16();
        u.signature.bytes = r.bytes(sig_len);
        if (u.signature.bytes.empty()) throw std::runtime_error("empty signature with marker set");
    }
    if (!r.done()) throw std::runtime_error("trailing bytes after unit");
    return u;
}

Digest hash_of(const Unit& u) { return unit_hash(canonical_encode(u)); }

void sign_unit(Unit& u, const crypto::SigningKey& key) {
    std::sort(u.coin_shares.begin(), u.coin_shares.end(),
              [](const auto& a, const auto& b) { return share_key(a) < share_key(b); });
    u.signature = key.sign(canonical_encode(u, /*include_signature=*/false));
}

bool verify_unit_signature(const Unit& u, const crypto::VerifyKey& vk) {
    if (u.signature.bytes.empty()) return false;
    return crypto::verify(vk, canonical_encode(u, /*include_signature=*/false), u.signature);
}

Unit make_genesis(uint32_t n_processes) {
    Unit g;
    g.creator = n_processes;  // reserved id, not a real process
    return g;
}

Digest genesis_digest(uint32_t n_processes) { return hash_of(make_genesis(n_processes)); }

}  // namespace aleph::dag
