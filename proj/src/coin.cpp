#include "aleph/coin.hpp"

#include "aleph/sha256.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace aleph::crypto {

namespace {

FieldElem derive_field_elem(std::span<const uint8_t> seed, const char* label, uint32_t index) {
    Bytes buf(seed.begin(), seed.end());
    put_bytes(buf, std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(label), 4));
    put_u32(buf, index);
    Digest d = sha256d(buf);
    return FieldElem::from_bytes(d.bytes);
}

std::array<uint8_t, 32> derive_keystream(std::span<const uint8_t> shared, const char* label,
                                         uint32_t holder) {
    Bytes buf(shared.begin(), shared.end());
    put_bytes(buf, std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(label), 4));
    put_u32(buf, holder);
    return sha256(buf).bytes;
}

std::array<uint8_t, 32> share_tag(std::span<const uint8_t> shared, uint32_t holder,
                                  std::span<const uint8_t> plaintext) {
    Bytes buf(shared.begin(), shared.end());
    put_bytes(buf, std::span<const uint8_t>(reinterpret_cast<const uint8_t*>("mact"), 4));
    put_u32(buf, holder);
    put_bytes(buf, plaintext);
    return sha256(buf).bytes;
}

// Horner evaluation of the sharing polynomial at x.
FieldElem poly_eval(const std::vector<FieldElem>& coeffs, const FieldElem& x) {
    FieldElem acc;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
}

}  // namespace

DealingPayload coin_deal(uint32_t dealer, uint32_t coin_k,
                         const std::vector<BoxPublicKey>& holder_keys,
                         std::span<const uint8_t> dealer_seed) {
    const uint32_t n = uint32_t(holder_keys.size());
    if (coin_k < 1 || coin_k > n)
        throw std::invalid_argument("coin threshold must satisfy 1 <= coin_k <= N");

    std::vector<FieldElem> coeffs;
    coeffs.reserve(coin_k);
    for (uint32_t i = 0; i < coin_k; ++i) coeffs.push_back(derive_field_elem(dealer_seed, "coef", i));

    DealingPayload out;
    out.dealer = dealer;
    out.coin_k = coin_k;
    out.commitments.reserve(coin_k);
    for (const auto& a : coeffs) out.commitments.push_back(Group::to_bytes(Group::pow_g(a)));

    // Ephemeral encryption key, fixed by the dealer seed so dealing is replayable.
    Digest eph_seed;
    {
        Bytes buf(dealer_seed.begin(), dealer_seed.end());
        put_bytes(buf, std::span<const uint8_t>(reinterpret_cast<const uint8_t*>("ephm"), 4));
        eph_seed = sha256d(buf);
    }
    out.ephemeral_key = box_public_from_secret(eph_seed.bytes).bytes;

    out.encrypted_shares.resize(n);
    for (uint32_t j = 0; j < n; ++j) {
        FieldElem share = poly_eval(coeffs, FieldElem(j + 1));
        auto pt = share.to_bytes();
        auto shared = shared_secret_from_ephemeral(eph_seed.bytes, holder_keys[j]);
        auto ks = derive_keystream(shared, "keys", j);
        EncryptedShare& enc = out.encrypted_shares[j];
        for (size_t b = 0; b < 32; ++b) enc.ciphertext[b] = pt[b] ^ ks[b];
        enc.tag = share_tag(shared, j, pt);
    }
    return out;
}

std::optional<FieldElem> coin_recover_secret(const DealingPayload& payload, uint32_t holder,
                                             const BoxSecretKey& holder_key) {
    if (holder >= payload.encrypted_shares.size()) return std::nullopt;
    BoxPublicKey eph{payload.ephemeral_key};
    auto shared = holder_key.shared_secret(eph);
    auto ks = derive_keystream(shared, "keys", holder);
    const EncryptedShare& enc = payload.encrypted_shares[holder];
    std::array<uint8_t, 32> pt{};
    for (size_t b = 0; b < 32; ++b) pt[b] = enc.ciphertext[b] ^ ks[b];
    if (share_tag(shared, holder, pt) != enc.tag) return std::nullopt;
    FieldElem value = FieldElem::from_bytes(pt);
    CoinShare probe = coin_make_share(payload.dealer, holder, 0, value);
    if (!coin_verify_share(payload, probe)) return std::nullopt;
    return value;
}

CoinShare coin_make_share(uint32_t dealer, uint32_t holder, uint32_t nonce,
                          const FieldElem& secret) {
    CoinShare s;
    s.dealer = dealer;
    s.holder = holder;
    s.nonce = nonce;
    s.value = secret.to_bytes();
    return s;
}

std::optional<CoinShare> coin_extract_share(const DealingPayload& payload, uint32_t holder,
                                            const BoxSecretKey& holder_key, uint32_t nonce) {
    auto secret = coin_recover_secret(payload, holder, holder_key);
    if (!secret) return std::nullopt;
    return coin_make_share(payload.dealer, holder, nonce, *secret);
}

bool coin_verify_share(const DealingPayload& payload, const CoinShare& share) {
    if (share.dealer != payload.dealer) return false;
    if (share.holder >= payload.encrypted_shares.size()) return false;
    FieldElem value = FieldElem::from_bytes(share.value);
    // g^value must equal prod_i C_i^(x^i) with x = holder + 1.
    mpz_class lhs = Group::pow_g(value);
    FieldElem x(share.holder + 1);
    FieldElem x_pow(1ul);
    mpz_class rhs = 1;
    for (const auto& c : payload.commitments) {
        rhs = Group::mul(rhs, Group::pow(Group::from_bytes(c), x_pow));
        x_pow = x_pow * x;
    }
    return lhs == rhs;
}

int coin_combine(std::span<const CoinShare> shares, uint32_t coin_k, uint32_t nonce) {
    std::map<uint32_t, const CoinShare*> by_holder;
    std::optional<uint32_t> dealer;
    for (const auto& s : shares) {
        if (s.nonce != nonce) throw MixedShares("coin shares carry mixed nonces");
        if (dealer && *dealer != s.dealer) throw MixedShares("coin shares carry mixed dealers");
        dealer = s.dealer;
        by_holder.emplace(s.holder, &s);  // duplicates from one holder collapse
    }
    if (by_holder.size() < coin_k) throw InsufficientShares();

    // Lagrange interpolation at 0 over the first coin_k holders.
    std::vector<std::pair<FieldElem, FieldElem>> pts;  // (x, f(x))
    for (const auto& [holder, share] : by_holder) {
        pts.emplace_back(FieldElem(holder + 1), FieldElem::from_bytes(share->value));
        if (pts.size() == coin_k) break;
    }
    FieldElem secret;
    for (size_t i = 0; i < pts.size(); ++i) {
        FieldElem num(1ul), den(1ul);
        for (size_t j = 0; j < pts.size(); ++j) {
            if (i == j) continue;
            num = num * pts[j].first;
            den = den * (pts[j].first - pts[i].first);
        }
        secret = secret + pts[i].second * num * den.inverse();
    }

    Bytes buf;
    put_u32(buf, *dealer);
    auto sb = secret.to_bytes();
    put_bytes(buf, sb);
    put_u32(buf, nonce);
    return sha256d(buf).bytes[31] & 1;
}

}  // namespace aleph::crypto
